#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "tvckit/solver.hpp"

namespace tvckit {

namespace {

struct Block {
    const DiscreteObjective& obj;
    TimeDomain domain;
    int first;    // first unknown index
    int horizon;  // last unknown index
    std::vector<double> y;  // full scalar path for one state

    int unknowns() const { return horizon - first + 1; }

    // Rows t = first..horizon evaluated on a single-state path. The caller's
    // omega is passed through to the objective.
    double row(int t, int omega) const {
        const int n = obj.order();
        double acc = 0.0;
        for (int j = std::max(0, t - n); j <= std::min(t, domain.t_max() - n); ++j) {
            Slots s(n, 1);
            for (int k = 0; k <= n; ++k) {
                s(k) = y[static_cast<std::size_t>(j + k)];
            }
            acc += partial_slot(obj, t - j, 0, s, j, omega);
        }
        return acc;
    }

    Eigen::VectorXd residual(int omega) const {
        Eigen::VectorXd f(unknowns());
        for (int t = first; t <= horizon; ++t) {
            f(t - first) = row(t, omega);
        }
        return f;
    }
};

std::string curvature(const Eigen::MatrixXd& jac) {
    const Eigen::MatrixXd sym = 0.5 * (jac + jac.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double scale = std::max(1e-300, ev.cwiseAbs().maxCoeff());
    const double cut = 1e-10 * scale;
    const bool any_pos = (ev.array() > cut).any();
    const bool any_neg = (ev.array() < -cut).any();
    const bool any_zero = (ev.array().abs() <= cut).any();
    if (any_zero) {
        return "degenerate";
    }
    if (any_pos && any_neg) {
        return "saddle";
    }
    return any_neg ? "max" : "min";
}

Eigen::MatrixXd jacobian(Block& b, const Eigen::VectorXd& f0, int omega) {
    const int m = b.unknowns();
    const int n = b.obj.order();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
    for (int u = b.first; u <= b.horizon; ++u) {
        const double x = b.y[static_cast<std::size_t>(u)];
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        const int lo = std::max(b.first, u - n);
        const int hi = std::min(b.horizon, u + n);
        std::vector<double> up;
        std::vector<double> down;
        b.y[static_cast<std::size_t>(u)] = x + h;
        bool up_ok = true;
        try {
            for (int t = lo; t <= hi; ++t) {
                up.push_back(b.row(t, omega));
            }
        } catch (const DomainError&) {
            up_ok = false;
        }
        b.y[static_cast<std::size_t>(u)] = x - h;
        bool down_ok = true;
        try {
            for (int t = lo; t <= hi; ++t) {
                down.push_back(b.row(t, omega));
            }
        } catch (const DomainError&) {
            down_ok = false;
        }
        b.y[static_cast<std::size_t>(u)] = x;
        for (int t = lo; t <= hi; ++t) {
            const auto i = static_cast<std::size_t>(t - lo);
            double d = 0.0;
            if (up_ok && down_ok) {
                d = (up[i] - down[i]) / (2.0 * h);
            } else if (up_ok) {
                d = (up[i] - f0(t - b.first)) / h;
            } else if (down_ok) {
                d = (f0(t - b.first) - down[i]) / h;
            } else {
                throw NumericalError("Jacobian column at index " + std::to_string(u) + " leaves the domain");
            }
            jac(t - b.first, u - b.first) = d;
        }
    }
    return jac;
}

}  // namespace

SolveResult newton_euler_solve(const DiscreteObjective& obj, const SolveSpec& spec, const SampleSpace& space) {
    if (obj.dim() != 1) {
        throw UnsupportedError("the Newton solver handles scalar states");
    }
    const int n = obj.order();
    const int states = space.states();
    obj.check_states(states);
    if (spec.horizon < 0) {
        throw InputError("solve horizon must be >= 0");
    }
    if (spec.tolerance <= 0.0 || spec.max_iterations < 1) {
        throw InputError("solve tolerance must be positive and max_iterations >= 1");
    }
    const TimeDomain domain = TimeDomain::discrete(spec.horizon + n);
    const bool fixed = spec.mode.kind == BoundaryMode::Kind::fixed_initial;
    const int first = spec.mode.first_row();
    if (first > spec.horizon) {
        throw InputError("fixed head covers the whole horizon");
    }
    auto check_rows = [&](const std::vector<std::vector<double>>& rows, int len, const char* what) {
        if (static_cast<int>(rows.size()) != states) {
            throw InputError(std::string(what) + " needs one row per state");
        }
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != len) {
                throw InputError(std::string(what) + " needs " + std::to_string(len) + " values per state");
            }
            for (double v : r) {
                if (!std::isfinite(v)) {
                    throw InputError(std::string(what) + " values must be finite");
                }
            }
        }
    };
    if (fixed) {
        check_rows(spec.head, first, "fixed head");
        check_rows(spec.tail, n, "fixed tail");
    } else if (!spec.tail.empty()) {
        check_rows(spec.tail, n, "fixed tail");
    }
    if (spec.guess) {
        if (!(spec.guess->domain() == domain) || spec.guess->states() != states || spec.guess->dim() != 1) {
            throw InputError("guess must be a scalar path on indices 0.." + std::to_string(spec.horizon + n));
        }
    }

    SolveResult result{StochasticPath(domain, states, 1), 0, 0.0, {}, {}};
    std::vector<double> out(static_cast<std::size_t>(domain.points() * states));
    std::vector<std::vector<double>> histories(static_cast<std::size_t>(states));
    for (int w = 0; w < states; ++w) {
        const auto wi = static_cast<std::size_t>(w);
        std::vector<double> y(static_cast<std::size_t>(domain.points()), 0.0);
        if (spec.guess) {
            for (int t = 0; t < domain.points(); ++t) {
                y[static_cast<std::size_t>(t)] = (*spec.guess)(t, w);
            }
        } else if (fixed) {
            const double a = first > 0 ? spec.head[wi].back() : spec.tail[wi].front();
            const double b = spec.tail[wi].front();
            for (int t = first; t <= spec.horizon; ++t) {
                const double s = static_cast<double>(t - first + 1) / (spec.horizon - first + 2);
                y[static_cast<std::size_t>(t)] = a + s * (b - a);
            }
        }
        if (fixed) {
            for (int t = 0; t < first; ++t) {
                y[static_cast<std::size_t>(t)] = spec.head[wi][static_cast<std::size_t>(t)];
            }
        }
        if (!spec.tail.empty()) {
            for (int k = 1; k <= n; ++k) {
                y[static_cast<std::size_t>(spec.horizon + k)] = spec.tail[wi][static_cast<std::size_t>(k - 1)];
            }
        }

        Block block{obj, domain, first, spec.horizon, std::move(y)};
        Eigen::VectorXd f;
        try {
            f = block.residual(w);
        } catch (const DomainError& e) {
            throw InputError(std::string("initial guess lies outside the objective's domain: ") + e.what());
        }
        int iter = 0;
        Eigen::MatrixXd jac;
        while (true) {
            const double norm_inf = f.cwiseAbs().maxCoeff();
            histories[wi].push_back(norm_inf);
            if (norm_inf <= spec.tolerance) {
                break;
            }
            if (iter >= spec.max_iterations) {
                throw NumericalError("Newton did not converge in " + std::to_string(spec.max_iterations) +
                                     " iterations (state " + std::to_string(w) + ", residual " +
                                     std::to_string(norm_inf) + ")");
            }
            ++iter;
            jac = jacobian(block, f, w);
            const Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
            if (!lu.isInvertible()) {
                throw NumericalError("singular Jacobian in state " + std::to_string(w));
            }
            const Eigen::VectorXd step = lu.solve(-f);
            const double norm = f.norm();
            const std::vector<double> start = block.y;
            bool accepted = false;
            double lambda = 1.0;
            for (int halving = 0; halving < 40 && !accepted; ++halving, lambda *= 0.5) {
                for (int u = first; u <= spec.horizon; ++u) {
                    block.y[static_cast<std::size_t>(u)] =
                        start[static_cast<std::size_t>(u)] + lambda * step(u - first);
                }
                try {
                    const Eigen::VectorXd trial = block.residual(w);
                    if (trial.allFinite() && (trial.norm() < norm || trial.cwiseAbs().maxCoeff() <= spec.tolerance)) {
                        f = trial;
                        accepted = true;
                    }
                } catch (const DomainError&) {
                }
            }
            if (!accepted) {
                block.y = start;
                throw NumericalError("line search found no valid step in state " + std::to_string(w));
            }
        }
        jac = jacobian(block, f, w);
        result.stationarity.push_back(curvature(jac));
        result.iterations = std::max(result.iterations, iter);
        result.max_residual = std::max(result.max_residual, f.cwiseAbs().maxCoeff());
        for (int t = 0; t < domain.points(); ++t) {
            out[static_cast<std::size_t>(t * states + w)] = block.y[static_cast<std::size_t>(t)];
        }
    }
    std::size_t longest = 0;
    for (const auto& h : histories) {
        longest = std::max(longest, h.size());
    }
    for (std::size_t i = 0; i < longest; ++i) {
        double worst = 0.0;
        for (const auto& h : histories) {
            worst = std::max(worst, h[std::min(i, h.size() - 1)]);
        }
        result.residual_history.push_back(worst);
    }
    result.path = StochasticPath(domain, states, 1, std::move(out));
    return result;
}

double truncated_value(const DiscreteObjective& obj, const SampleSpace& space, const StochasticPath& path,
                       int horizon) {
    double total = 0.0;
    for (int j = 0; j <= horizon; ++j) {
        std::vector<double> vals;
        for (int w = 0; w < path.states(); ++w) {
            vals.push_back(obj.eval(window_at(path, j, obj.order(), w), j, w));
        }
        const double e = expectation(space, RandomScalar(std::move(vals)));
        if (e == kNegInf) {
            return kNegInf;
        }
        total += e;
    }
    return total;
}

BruteForceResult brute_force_solve(const DiscreteObjective& obj, const SampleSpace& space, const BruteForceSpec& spec) {
    const StochasticPath& base = spec.base;
    if (!base.domain().is_discrete() || base.dim() != 1) {
        throw UnsupportedError("brute force handles scalar discrete paths");
    }
    if (base.states() != space.states()) {
        throw InputError("base path and sample space disagree on the number of states");
    }
    const std::size_t vars = spec.free_times.size();
    if (vars == 0 || vars > 6) {
        throw InputError("brute force needs between 1 and 6 free variables per state");
    }
    if (spec.grid.size() != vars) {
        throw InputError("brute force needs one value list per free variable");
    }
    double combos = 1.0;
    for (const auto& g : spec.grid) {
        if (g.empty()) {
            throw InputError("brute force value lists must not be empty");
        }
        combos *= static_cast<double>(g.size());
    }
    if (combos > 1e7) {
        throw InputError("brute force budget exceeded: " + std::to_string(static_cast<long long>(combos)) +
                         " combinations per state (limit 1e7)");
    }
    const int n = obj.order();
    if (spec.objective_horizon < 0 || spec.objective_horizon + n > base.domain().t_max()) {
        throw HorizonError("objective horizon does not fit the base path");
    }
    for (int t : spec.free_times) {
        if (t < 0 || t > base.domain().t_max()) {
            throw InputError("free index " + std::to_string(t) + " outside the path");
        }
    }

    BruteForceResult result{base, 0.0, 0, 0};
    std::vector<double> values = base.values();
    const int states = base.states();
    for (int w = 0; w < states; ++w) {
        std::vector<double> y;
        for (int t = 0; t < base.points(); ++t) {
            y.push_back(base(t, w));
        }
        auto state_value = [&]() {
            double total = 0.0;
            for (int j = 0; j <= spec.objective_horizon; ++j) {
                Slots s(n, 1);
                for (int k = 0; k <= n; ++k) {
                    s(k) = y[static_cast<std::size_t>(j + k)];
                }
                const double v = obj.eval(s, j, w);
                if (v == kNegInf) {
                    return kNegInf;
                }
                total += v;
            }
            return total;
        };
        std::vector<std::size_t> pick(vars, 0);
        std::vector<std::size_t> best_pick;
        double best = kNegInf;
        while (true) {
            for (std::size_t v = 0; v < vars; ++v) {
                y[static_cast<std::size_t>(spec.free_times[v])] = spec.grid[v][pick[v]];
            }
            const double val = state_value();
            ++result.evaluated;
            if (val == kNegInf) {
                ++result.skipped;
            } else if (best_pick.empty() || val > best) {
                best = val;
                best_pick = pick;
            }
            std::size_t v = vars;
            while (v-- > 0) {
                if (++pick[v] < spec.grid[v].size()) {
                    break;
                }
                pick[v] = 0;
            }
            if (v == static_cast<std::size_t>(-1)) {
                break;
            }
        }
        if (best_pick.empty()) {
            throw DomainError("every grid combination is -inf in state " + std::to_string(w));
        }
        for (std::size_t v = 0; v < vars; ++v) {
            values[static_cast<std::size_t>(spec.free_times[v] * states + w)] = spec.grid[v][best_pick[v]];
        }
    }
    result.path = StochasticPath(base.domain(), states, 1, std::move(values));
    result.value = truncated_value(obj, space, result.path, spec.objective_horizon);
    return result;
}

}  // namespace tvckit
