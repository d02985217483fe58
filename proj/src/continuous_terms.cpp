#include "tvckit/euler.hpp"

namespace tvckit {

ContinuousTerms::ContinuousTerms(const ContinuousObjective& obj, const StochasticPath& path, int comp)
    : order_(obj.order()) {
    if (!path.domain().is_continuous()) {
        throw UnsupportedError("continuous terms need a continuous path");
    }
    if (path.dim() != obj.dim()) {
        throw InputError("path dimension does not match the objective");
    }
    if (comp < 0 || comp >= obj.dim()) {
        throw InputError("component index out of range");
    }
    obj.check_states(path.states());
    jets_.push_back(path);
    for (int r = 1; r <= order_; ++r) {
        jets_.push_back(time_derivative(path, r));
    }
    const TimeDomain& dom = path.domain();
    series_.resize(static_cast<std::size_t>(order_) + 1);
    for (int k = 0; k <= order_; ++k) {
        StochasticPath base = StochasticPath::generate(dom, path.states(), 1, [&](int idx, double t, int w, int) {
            return partial_slot(obj, k, comp, jet_at(idx, w), t, w);
        });
        auto& row = series_[static_cast<std::size_t>(k)];
        row.push_back(base);
        for (int m = 1; m <= k; ++m) {
            row.push_back(time_derivative(base, m));
        }
    }
}

Slots ContinuousTerms::jet_at(int index, int omega) const {
    const int dim = jets_.front().dim();
    Slots s(order_, dim);
    for (int r = 0; r <= order_; ++r) {
        for (int i = 0; i < dim; ++i) {
            s(r, i) = jets_[static_cast<std::size_t>(r)](index, omega, i);
        }
    }
    return s;
}

const StochasticPath& ContinuousTerms::slot_derivative(int k, int m) const {
    if (k < 0 || k > order_ || m < 0 || m > k) {
        throw InputError("slot derivative index out of range");
    }
    return series_[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
}

double ContinuousTerms::euler_at(int index, int omega) const {
    double acc = 0.0;
    for (int k = 0; k <= order_; ++k) {
        const double term = series_[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)](index, omega);
        acc += (k % 2 == 0 ? term : -term);
    }
    if (std::isnan(acc)) {
        throw NumericalError("derivative stencil produced NaN at grid index " + std::to_string(index));
    }
    return acc;
}

}  // namespace tvckit
