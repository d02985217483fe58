#include "tvckit/finite_diff.hpp"

#include <algorithm>
#include <stdexcept>

namespace tvckit {

std::vector<double> fd_weights(int deriv, std::span<const double> offsets) {
    const int n = static_cast<int>(offsets.size());
    if (deriv < 0 || n <= deriv) {
        throw std::invalid_argument("fd_weights: need more points than the derivative order");
    }
    // c[i][k]: weight of point i for the k-th derivative.
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(deriv) + 1, 0.0));
    double c1 = 1.0;
    double c4 = offsets[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, deriv);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = offsets[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const double c3 = offsets[static_cast<std::size_t>(i)] - offsets[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = c[i][deriv];
    }
    return out;
}

std::vector<int> stencil_offsets(int deriv, int index, int points) {
    const int half = (deriv + 1) / 2;
    std::vector<int> offsets;
    if (index - half >= 0 && index + half < points) {
        for (int o = -half; o <= half; ++o) {
            offsets.push_back(o);
        }
        return offsets;
    }
    // deriv + 2 points keeps second-order accuracy on a one-sided stencil.
    const int width = deriv + 2;
    const int start = index - half < 0 ? 0 : points - width;
    for (int p = start; p < start + width; ++p) {
        offsets.push_back(p - index);
    }
    return offsets;
}

}  // namespace tvckit
