#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "tvckit/curves.hpp"
#include "tvckit/diagnostics.hpp"
#include "tvckit/scenario.hpp"
#include "tvckit/tvc.hpp"

namespace tvckit {

namespace {

// Typed access to one JSON object; remembers which keys were read so that
// finish() can reject the rest.
class Reader {
public:
    Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) {
            throw ScenarioError(where(), "expected an object");
        }
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key)) {
            throw ScenarioError(at(key), "missing required key");
        }
        return j_.at(key);
    }

    double number(const std::string& key, std::optional<double> fallback = {}) {
        if (!has(key) && fallback) {
            used_.insert(key);
            return *fallback;
        }
        const Json& v = raw(key);
        if (!v.is_number()) {
            throw ScenarioError(at(key), "expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ScenarioError(at(key), "expected a finite number");
        }
        return d;
    }

    int integer(const std::string& key, std::optional<int> fallback = {}) {
        if (!has(key) && fallback) {
            used_.insert(key);
            return *fallback;
        }
        const Json& v = raw(key);
        if (!v.is_number_integer()) {
            throw ScenarioError(at(key), "expected an integer");
        }
        return v.get<int>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) {
            used_.insert(key);
            return fallback;
        }
        const Json& v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ScenarioError(at(key), "expected a nonnegative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string& key, std::optional<std::string> fallback = {}) {
        if (!has(key) && fallback) {
            used_.insert(key);
            return *fallback;
        }
        const Json& v = raw(key);
        if (!v.is_string()) {
            throw ScenarioError(at(key), "expected a string");
        }
        return v.get<std::string>();
    }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) {
            used_.insert(key);
            return fallback;
        }
        const Json& v = raw(key);
        if (!v.is_boolean()) {
            throw ScenarioError(at(key), "expected true or false");
        }
        return v.get<bool>();
    }

    std::vector<double> numbers(const std::string& key) {
        const Json& v = raw(key);
        return to_numbers(v, at(key));
    }

    std::vector<int> integers(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_array()) {
            throw ScenarioError(at(key), "expected a list of integers");
        }
        std::vector<int> out;
        for (const auto& e : v) {
            if (!e.is_number_integer()) {
                throw ScenarioError(at(key), "expected a list of integers");
            }
            out.push_back(e.get<int>());
        }
        return out;
    }

    std::vector<std::vector<double>> matrix(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_array()) {
            throw ScenarioError(at(key), "expected a list of lists");
        }
        std::vector<std::vector<double>> out;
        for (const auto& row : v) {
            out.push_back(to_numbers(row, at(key)));
        }
        return out;
    }

    Reader object(const std::string& key) { return Reader(raw(key), at(key)); }

    const Json& json() const { return j_; }
    void mark(const std::string& key) { used_.insert(key); }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!used_.count(key)) {
                throw ScenarioError(at(key), "unknown key");
            }
        }
    }

private:
    std::string where() const { return path_.empty() ? "<root>" : path_; }

    static std::vector<double> to_numbers(const Json& v, const std::string& path) {
        if (!v.is_array()) {
            throw ScenarioError(path, "expected a list of numbers");
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                throw ScenarioError(path, "expected a list of finite numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

void require_len(const std::vector<double>& v, int states, const std::string& path) {
    if (static_cast<int>(v.size()) != states) {
        throw ScenarioError(path, "expected " + std::to_string(states) + " values (one per state), got " +
                                      std::to_string(v.size()));
    }
}

int objective_order(const ObjectiveSpec& o, std::optional<int> declared) {
    if (o.builtin == "quadlin-discrete" || o.builtin == "quadlin-continuous") {
        return 2;
    }
    if (o.builtin == "household-log") {
        return o.lags;
    }
    if (!declared) {
        throw ScenarioError("order", "DSL objectives need an explicit order");
    }
    return *declared;
}

// Time at which the perturbation reaches its tail, used for default grids.
double curve_settles(const PerturbationSpec& p, int order) {
    if (p.kind == "eventually-constant") return p.onset;
    if (p.kind == "compact-support") return p.last + 1;
    if (p.kind == "ramp" || p.kind == "kamihigashi") return p.end;
    if (p.kind == "compact-ramp") return p.support_end;
    return order;
}

ObjectiveSpec read_objective(Reader r, int states, const TimeDomain& time) {
    ObjectiveSpec o;
    if (r.has("builtin") == r.has("expr")) {
        throw ScenarioError(r.at("builtin"), "objective needs exactly one of 'builtin' or 'expr'");
    }
    if (r.has("builtin")) {
        o.builtin = r.text("builtin");
        Reader params = r.object("params");
        if (o.builtin == "quadlin-discrete" || o.builtin == "quadlin-continuous") {
            o.quadlin.alpha = params.numbers("alpha");
            o.quadlin.beta = params.numbers("beta");
            o.quadlin.gamma = params.numbers("gamma");
            require_len(o.quadlin.alpha, states, params.at("alpha"));
            require_len(o.quadlin.beta, states, params.at("beta"));
            require_len(o.quadlin.gamma, states, params.at("gamma"));
            try {
                o.quadlin.validate();
            } catch (const InputError& e) {
                throw ScenarioError(r.at("params"), e.what());
            }
            const bool wants_continuous = o.builtin == "quadlin-continuous";
            if (wants_continuous != time.is_continuous()) {
                throw ScenarioError(r.at("builtin"), "'" + o.builtin + "' does not match time.kind");
            }
        } else if (o.builtin == "household-log") {
            o.discount = params.number("discount", 0.9);
            o.lags = params.integer("n", 2);
            if (!(o.discount > 0.0 && o.discount < 1.0)) {
                throw ScenarioError(params.at("discount"), "discount must lie strictly inside (0, 1)");
            }
            if (o.lags < 1) {
                throw ScenarioError(params.at("n"), "lag order must be >= 1");
            }
            if (!time.is_discrete()) {
                throw ScenarioError(r.at("builtin"), "'household-log' needs a discrete time domain");
            }
        } else {
            throw ScenarioError(r.at("builtin"), "unknown built-in '" + o.builtin +
                                                     "' (quadlin-discrete, quadlin-continuous, household-log)");
        }
        params.finish();
    } else {
        o.expr = r.text("expr");
        if (r.has("constants")) {
            Reader c = r.object("constants");
            for (const auto& [name, value] : c.json().items()) {
                std::vector<double> vals = c.numbers(name);
                require_len(vals, states, c.at(name));
                o.constants[name] = std::move(vals);
            }
            c.finish();
        }
    }
    r.finish();
    return o;
}

PerturbationSpec read_perturbation(Reader r, int states, const TimeDomain& time, int order) {
    PerturbationSpec p;
    p.kind = r.text("kind", std::string("zero"));
    const std::vector<double> ones(static_cast<std::size_t>(states), 1.0);
    auto value = [&] {
        if (!r.has("value")) {
            r.mark("value");
            return ones;
        }
        std::vector<double> v = r.numbers("value");
        require_len(v, states, r.at("value"));
        return v;
    };
    const bool discrete = time.is_discrete();
    auto need = [&](bool ok) {
        if (!ok) {
            throw ScenarioError(r.at("kind"), "perturbation kind '" + p.kind + "' does not fit a " +
                                                  (discrete ? "discrete" : "continuous") + " time domain");
        }
    };
    if (p.kind == "zero") {
    } else if (p.kind == "eventually-constant") {
        need(discrete);
        p.value = value();
        p.onset = r.integer("onset", 1);
    } else if (p.kind == "compact-support") {
        need(discrete);
        p.value = value();
        p.start = r.integer("start", 1);
        p.last = r.integer("last", 10);
    } else if (p.kind == "ramp") {
        need(!discrete);
        p.value = value();
        p.end = r.number("end", 1.0);
        p.vanishing_head = r.integer("vanishing_head", std::min(order, 3));
    } else if (p.kind == "compact-ramp") {
        need(!discrete);
        p.value = value();
        p.end = r.number("end", 1.0);
        p.down_start = r.number("down_start");
        p.support_end = r.number("support_end");
        p.vanishing_head = r.integer("vanishing_head", std::min(order, 3));
    } else if (p.kind == "kamihigashi") {
        need(!discrete);
        p.level = r.number("level", 0.5);
        p.end = r.number("end", 1.0);
        p.vanishing_head = r.integer("vanishing_head", std::min(order, 3));
    } else if (p.kind == "values") {
        p.values = r.matrix("values");
        p.vanishing_head = r.integer("vanishing_head", 0);
    } else {
        throw ScenarioError(r.at("kind"), "unknown perturbation kind '" + p.kind + "'");
    }
    r.finish();
    return p;
}

std::vector<std::vector<double>> read_rows(Reader& r, const std::string& key, int states, int len) {
    if (!r.has(key)) {
        r.mark(key);
        return {};
    }
    auto rows = r.matrix(key);
    if (static_cast<int>(rows.size()) != states) {
        throw ScenarioError(r.at(key), "expected one row per state");
    }
    for (const auto& row : rows) {
        if (len >= 0 && static_cast<int>(row.size()) != len) {
            throw ScenarioError(r.at(key), "expected " + std::to_string(len) + " values per state");
        }
    }
    return rows;
}

SolveSettings read_solve(Reader r, int states, int order, int horizon) {
    SolveSettings s;
    try {
        s.mode = BoundaryMode::parse(r.text("boundary", std::string("truncated")));
    } catch (const InputError& e) {
        throw ScenarioError(r.at("boundary"), e.what());
    }
    const bool fixed = s.mode.kind == BoundaryMode::Kind::fixed_initial;
    s.head = read_rows(r, "head", states, s.mode.first_row());
    s.tail = read_rows(r, "tail", states, order);
    if (fixed && (s.head.empty() && s.mode.first_row() > 0)) {
        throw ScenarioError(r.at("head"), "fixed boundary needs head values");
    }
    if (fixed && s.tail.empty()) {
        throw ScenarioError(r.at("tail"), "fixed boundary needs tail values");
    }
    if (fixed && s.head.empty()) {
        s.head.assign(static_cast<std::size_t>(states), {});
    }
    s.guess = r.text("guess", std::string(fixed ? "interpolate" : "zero"));
    if (s.guess != "zero" && s.guess != "interpolate") {
        throw ScenarioError(r.at("guess"), "guess must be 'zero' or 'interpolate'");
    }
    if (s.guess == "interpolate" && !fixed) {
        throw ScenarioError(r.at("guess"), "interpolation needs a fixed boundary");
    }
    s.tolerance = r.number("tolerance", 1e-10);
    s.max_iterations = r.integer("max_iterations", 100);
    if (!(s.tolerance > 0.0) || s.max_iterations < 1) {
        throw ScenarioError(r.at("tolerance"), "tolerance must be positive and max_iterations >= 1");
    }
    if (r.has("brute_force")) {
        Reader b = r.object("brute_force");
        BruteForceSettings bf;
        bf.free = b.integers("free");
        bf.min = b.number("min");
        bf.max = b.number("max");
        bf.points = b.integer("points", 21);
        if (bf.free.empty() || bf.free.size() > 6) {
            throw ScenarioError(b.at("free"), "brute force needs 1 to 6 free indices");
        }
        for (int t : bf.free) {
            if (t < s.mode.first_row() || t > horizon) {
                throw ScenarioError(b.at("free"), "free index " + std::to_string(t) + " is not an unknown");
            }
        }
        if (!(bf.max > bf.min) || bf.points < 2) {
            throw ScenarioError(b.at("points"), "brute force grid needs max > min and at least 2 points");
        }
        b.finish();
        s.brute_force = bf;
    }
    r.finish();
    return s;
}

std::vector<PointSample<int>> discrete_samples(const Scenario& s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> val(0.5, 2.0);
    std::uniform_int_distribution<int> tdist(s.order, s.order + 10);
    std::uniform_int_distribution<int> wdist(0, s.omega.states() - 1);
    std::vector<PointSample<int>> out;
    for (int i = 0; i < 100; ++i) {
        Slots slots(s.order, 1);
        for (int k = 0; k <= s.order; ++k) {
            slots(k) = val(rng);
        }
        const int t = tdist(rng);
        out.push_back({slots, t, wdist(rng)});
    }
    return out;
}

std::vector<PointSample<double>> continuous_samples(const Scenario& s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> val(0.5, 2.0);
    std::uniform_real_distribution<double> tdist(0.0, s.time.t_end());
    std::uniform_int_distribution<int> wdist(0, s.omega.states() - 1);
    std::vector<PointSample<double>> out;
    for (int i = 0; i < 100; ++i) {
        Slots slots(s.order, 1);
        for (int k = 0; k <= s.order; ++k) {
            slots(k) = val(rng);
        }
        const double t = tdist(rng);
        out.push_back({slots, t, wdist(rng)});
    }
    return out;
}

void load_time_gradient_check(Scenario& s) {
    std::mt19937_64 rng(s.seed);
    GradientCheckReport rep;
    try {
        rep = s.discrete() ? gradient_check(build_discrete(s), discrete_samples(s, rng), s.tolerances.gradient)
                           : gradient_check(build_continuous(s), continuous_samples(s, rng), s.tolerances.gradient);
    } catch (const NumericalError& e) {
        s.warnings.push_back(std::string("gradient check could not run: ") + e.what());
        return;
    }
    if (rep.inconclusive) {
        s.warnings.push_back("gradient check inconclusive: every sample point was at -inf");
    } else if (!rep.pass) {
        std::ostringstream msg;
        msg << "gradient check failed: max relative gap " << rep.max_gap << " exceeds " << rep.tolerance
            << " (slot " << rep.worst_slot << ")";
        s.warnings.push_back(msg.str());
    }
}

}  // namespace

Scenario scenario_from_json(const Json& j) {
    Reader root(j, "");
    static const std::set<std::string> kRootKeys{"name",   "time",         "omega",       "order",
                                                 "objective", "path",      "perturbation", "boundary",
                                                 "diagnostics", "tolerances", "solve",     "correspondence",
                                                 "seed"};
    for (const auto& [key, value] : j.items()) {
        if (!kRootKeys.count(key)) {
            throw ScenarioError(key, "unknown key");
        }
    }
    Scenario s;
    s.name = root.text("name", std::string("unnamed"));

    {
        Reader t = root.object("time");
        const std::string kind = t.text("kind");
        try {
            if (kind == "discrete") {
                s.time = TimeDomain::discrete(t.integer("t_max"));
            } else if (kind == "continuous") {
                const double t_end = t.number("t_end");
                const double h = t.number("h");
                s.time = TimeDomain::continuous(t_end, h);
            } else {
                throw ScenarioError(t.at("kind"), "expected 'discrete' or 'continuous'");
            }
        } catch (const ScenarioError&) {
            throw;
        } catch (const InputError& e) {
            throw ScenarioError("time", e.what());
        }
        t.finish();
    }
    {
        Reader o = root.object("omega");
        try {
            s.omega = SampleSpace(o.numbers("probs"));
        } catch (const ScenarioError&) {
            throw;
        } catch (const InputError& e) {
            throw ScenarioError(o.at("probs"), e.what());
        }
        o.finish();
    }
    const int states = s.omega.states();

    std::optional<int> declared;
    if (root.has("order")) {
        declared = root.integer("order");
    } else {
        root.mark("order");
    }
    s.objective = read_objective(root.object("objective"), states, s.time);
    s.order = objective_order(s.objective, declared);
    if (declared && *declared != s.order) {
        throw ScenarioError("order", "declared order " + std::to_string(*declared) + " does not match the objective's " +
                                         std::to_string(s.order));
    }
    if (s.order < 0) {
        throw ScenarioError("order", "order must be >= 0");
    }
    if (s.time.is_discrete() && s.time.t_max() < s.order) {
        throw ScenarioError("time.t_max", "T_max must be at least the order");
    }
    if (!s.objective.expr.empty()) {
        try {
            (void)DslModel(s.objective.expr, s.order, s.objective.constants);
        } catch (const InputError& e) {
            throw ScenarioError("objective.expr", e.what());
        }
    }

    if (root.has("boundary")) {
        try {
            s.boundary = BoundaryMode::parse(root.text("boundary"));
        } catch (const ScenarioError&) {
            throw;
        } catch (const InputError& e) {
            throw ScenarioError("boundary", e.what());
        }
    } else {
        root.mark("boundary");
    }

    const int horizon = s.time.is_discrete() ? s.time.t_max() - s.order : 0;
    if (root.has("solve")) {
        if (!s.time.is_discrete()) {
            throw ScenarioError("solve", "solving is available for discrete scenarios only");
        }
        s.solve = read_solve(root.object("solve"), states, s.order, horizon);
    } else {
        root.mark("solve");
    }

    {
        const bool has = root.has("path");
        const Json empty = Json::object();
        Reader p = has ? root.object("path") : Reader(empty, "path");
        root.mark("path");
        PathSpec& path = s.path;
        path.kind = p.text("kind", std::string("closed-form"));
        if (path.kind == "closed-form") {
            path.name = p.text("name");
            const bool ok = (path.name == "quadlin-discrete-euler" && s.objective.builtin == "quadlin-discrete") ||
                            (path.name == "constant-alpha" && s.objective.builtin.rfind("quadlin", 0) == 0);
            if (!ok) {
                throw ScenarioError(p.at("name"), "closed form '" + path.name + "' does not fit the objective");
            }
        } else if (path.kind == "constant") {
            path.value = p.numbers("value");
            require_len(path.value, states, p.at("value"));
        } else if (path.kind == "values") {
            path.values = p.matrix("values");
            if (static_cast<int>(path.values.size()) != s.time.points()) {
                throw ScenarioError(p.at("values"), "expected one row per grid point");
            }
            for (const auto& row : path.values) {
                require_len(row, states, p.at("values"));
            }
        } else if (path.kind == "solve") {
            if (!s.time.is_discrete()) {
                throw ScenarioError(p.at("kind"), "solved paths need a discrete time domain");
            }
            if (!s.solve) {
                s.solve = SolveSettings{};
            }
        } else {
            throw ScenarioError(p.at("kind"), "unknown path kind '" + path.kind + "'");
        }
        p.finish();
    }

    if (root.has("perturbation")) {
        s.perturbation = read_perturbation(root.object("perturbation"), states, s.time, s.order);
    } else {
        root.mark("perturbation");
    }

    {
        const bool has = root.has("diagnostics");
        const Json empty = Json::object();
        Reader d = has ? root.object("diagnostics") : Reader(empty, "diagnostics");
        if (!has) {
            root.mark("diagnostics");
        }
        DiagnosticsSpec& g = s.diagnostics;
        g.eps_grid = d.has("eps_grid") ? d.numbers("eps_grid") : geometric_grid(1e-1, 1e-6, 6);
        const double settle = curve_settles(s.perturbation, s.order);
        if (d.has("tprime_grid")) {
            g.tprime_grid = d.numbers("tprime_grid");
        } else if (s.time.is_discrete()) {
            const int first = static_cast<int>(std::ceil(settle)) + 2;
            const int last = s.time.t_max() - s.order;
            if (first < last) {
                g.tprime_grid = geometric_horizons(first, last, 8);
            } else {
                for (int t = std::max(0, s.order - 1); t <= last; ++t) {
                    g.tprime_grid.push_back(t);
                }
            }
        } else {
            const int first = static_cast<int>(std::ceil(settle)) + 2;
            const int last = static_cast<int>(std::floor(s.time.t_end() + 1e-9));
            if (first < last) {
                g.tprime_grid = geometric_horizons(first, last, 8);
            } else {
                for (int t = 1; t <= last; ++t) {
                    g.tprime_grid.push_back(t);
                }
            }
        }
        g.eps_bar = d.number("eps_bar", 0.1);
        if (d.has("sample_times")) {
            g.sample_times = d.numbers("sample_times");
        } else if (s.time.is_discrete()) {
            for (int t : {0, 1, 2, 5, 10}) {
                if (t <= s.time.t_max() - s.order) {
                    g.sample_times.push_back(t);
                }
            }
        } else {
            for (double t : {0.5, 1.0, 2.0, 5.0}) {
                if (t <= s.time.t_end()) {
                    g.sample_times.push_back(t);
                }
            }
        }
        g.levels = d.integer("levels", 12);
        g.assert_uniform = d.flag("assert_uniform", false);
        if (!(g.eps_bar > 0.0) || g.levels < 1) {
            throw ScenarioError(d.at("eps_bar"), "eps_bar must be positive and levels >= 1");
        }
        for (std::size_t i = 0; i < g.eps_grid.size(); ++i) {
            if (!(g.eps_grid[i] > 0.0) || (i > 0 && !(g.eps_grid[i] < g.eps_grid[i - 1]))) {
                throw ScenarioError(d.at("eps_grid"), "must be positive and strictly decreasing");
            }
        }
        for (std::size_t i = 0; i < g.tprime_grid.size(); ++i) {
            if (!(g.tprime_grid[i] >= 0.0) || (i > 0 && !(g.tprime_grid[i] > g.tprime_grid[i - 1]))) {
                throw ScenarioError(d.at("tprime_grid"), "must be nonnegative and strictly increasing");
            }
        }
        d.finish();
    }

    {
        const bool has = root.has("tolerances");
        const Json empty = Json::object();
        Reader t = has ? root.object("tolerances") : Reader(empty, "tolerances");
        if (!has) {
            root.mark("tolerances");
        }
        const double engine_default = s.time.is_discrete() ? 1e-8 : 1e-4;
        s.tolerances.euler = t.number("euler", engine_default);
        s.tolerances.tvc = t.number("tvc", engine_default);
        s.tolerances.gradient = t.number("gradient", 1e-6);
        s.tolerances.uniformity = t.number("uniformity", 1e-6);
        s.tolerances.correspondence = t.number("correspondence", 1e-10);
        for (double v : {s.tolerances.euler, s.tolerances.tvc, s.tolerances.gradient, s.tolerances.uniformity,
                         s.tolerances.correspondence}) {
            if (!(v > 0.0)) {
                throw ScenarioError("tolerances", "tolerances must be positive");
            }
        }
        t.finish();
    }

    {
        const bool has = root.has("correspondence");
        const Json empty = Json::object();
        Reader c = has ? root.object("correspondence") : Reader(empty, "correspondence");
        if (!has) {
            root.mark("correspondence");
        }
        s.correspondence.samples = c.integer("samples", 100);
        s.correspondence.min = c.number("min", 0.5);
        s.correspondence.max = c.number("max", 2.0);
        if (s.correspondence.samples < 1 || !(s.correspondence.max > s.correspondence.min)) {
            throw ScenarioError("correspondence", "need samples >= 1 and max > min");
        }
        c.finish();
    }

    s.seed = root.unsigned_integer("seed", 12345);
    root.finish();

    // Curve construction validates kind-specific parameters against the grid.
    try {
        const StochasticPath probe(s.time, states, 1);
        if (s.perturbation.kind != "kamihigashi") {
            build_curve(s, probe);
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const InputError& e) {
        throw ScenarioError("perturbation", e.what());
    }
    load_time_gradient_check(s);
    return s;
}

Json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw InputError("cannot open scenario file '" + file.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("'" + file.string() + "' is not valid JSON: " + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& file) { return scenario_from_json(read_json_file(file)); }

Json scenario_to_json(const Scenario& s) {
    Json j;
    j["name"] = s.name;
    if (s.time.is_discrete()) {
        j["time"] = {{"kind", "discrete"}, {"t_max", s.time.t_max()}};
    } else {
        j["time"] = {{"kind", "continuous"}, {"t_end", s.time.t_end()}, {"h", s.time.step()}};
    }
    j["omega"] = {{"probs", s.omega.probs()}};
    j["order"] = s.order;
    Json obj;
    if (!s.objective.builtin.empty()) {
        obj["builtin"] = s.objective.builtin;
        if (s.objective.builtin == "household-log") {
            obj["params"] = {{"discount", s.objective.discount}, {"n", s.objective.lags}};
        } else {
            obj["params"] = {{"alpha", s.objective.quadlin.alpha},
                             {"beta", s.objective.quadlin.beta},
                             {"gamma", s.objective.quadlin.gamma}};
        }
    } else {
        obj["expr"] = s.objective.expr;
        Json c = Json::object();
        for (const auto& [name, vals] : s.objective.constants) {
            c[name] = vals;
        }
        obj["constants"] = c;
    }
    j["objective"] = obj;

    Json path{{"kind", s.path.kind}};
    if (s.path.kind == "closed-form") {
        path["name"] = s.path.name;
    } else if (s.path.kind == "constant") {
        path["value"] = s.path.value;
    } else if (s.path.kind == "values") {
        path["values"] = s.path.values;
    }
    j["path"] = path;

    const PerturbationSpec& p = s.perturbation;
    Json pert{{"kind", p.kind}};
    if (p.kind == "eventually-constant") {
        pert["value"] = p.value;
        pert["onset"] = p.onset;
    } else if (p.kind == "compact-support") {
        pert["value"] = p.value;
        pert["start"] = p.start;
        pert["last"] = p.last;
    } else if (p.kind == "ramp") {
        pert["value"] = p.value;
        pert["end"] = p.end;
        pert["vanishing_head"] = p.vanishing_head;
    } else if (p.kind == "compact-ramp") {
        pert["value"] = p.value;
        pert["end"] = p.end;
        pert["down_start"] = p.down_start;
        pert["support_end"] = p.support_end;
        pert["vanishing_head"] = p.vanishing_head;
    } else if (p.kind == "kamihigashi") {
        pert["level"] = p.level;
        pert["end"] = p.end;
        pert["vanishing_head"] = p.vanishing_head;
    } else if (p.kind == "values") {
        pert["values"] = p.values;
        pert["vanishing_head"] = p.vanishing_head;
    }
    j["perturbation"] = pert;
    j["boundary"] = s.boundary.to_string();
    j["diagnostics"] = {{"eps_grid", s.diagnostics.eps_grid},
                        {"tprime_grid", s.diagnostics.tprime_grid},
                        {"eps_bar", s.diagnostics.eps_bar},
                        {"sample_times", s.diagnostics.sample_times},
                        {"levels", s.diagnostics.levels},
                        {"assert_uniform", s.diagnostics.assert_uniform}};
    j["tolerances"] = {{"euler", s.tolerances.euler},
                       {"tvc", s.tolerances.tvc},
                       {"gradient", s.tolerances.gradient},
                       {"uniformity", s.tolerances.uniformity},
                       {"correspondence", s.tolerances.correspondence}};
    if (s.solve) {
        const SolveSettings& v = *s.solve;
        Json solve{{"boundary", v.mode.to_string()}};
        if (v.mode.kind == BoundaryMode::Kind::fixed_initial && v.mode.first_row() > 0) {
            solve["head"] = v.head;
        }
        if (!v.tail.empty()) {
            solve["tail"] = v.tail;
        }
        solve["guess"] = v.guess;
        solve["tolerance"] = v.tolerance;
        solve["max_iterations"] = v.max_iterations;
        if (v.brute_force) {
            solve["brute_force"] = {{"free", v.brute_force->free},
                                    {"min", v.brute_force->min},
                                    {"max", v.brute_force->max},
                                    {"points", v.brute_force->points}};
        }
        j["solve"] = solve;
    }
    j["correspondence"] = {{"samples", s.correspondence.samples},
                           {"min", s.correspondence.min},
                           {"max", s.correspondence.max}};
    j["seed"] = s.seed;
    return j;
}

std::optional<DslModel> build_dsl(const Scenario& s) {
    if (s.objective.expr.empty()) {
        return std::nullopt;
    }
    return DslModel(s.objective.expr, s.order, s.objective.constants);
}

DiscreteObjective build_discrete(const Scenario& s) {
    if (!s.time.is_discrete()) {
        throw UnsupportedError("scenario '" + s.name + "' is continuous");
    }
    if (s.objective.builtin == "quadlin-discrete") {
        return quadlin_discrete(s.objective.quadlin);
    }
    if (s.objective.builtin == "household-log") {
        return household_log(s.objective.discount, s.objective.lags);
    }
    return build_dsl(s)->discrete();
}

ContinuousObjective build_continuous(const Scenario& s) {
    if (!s.time.is_continuous()) {
        throw UnsupportedError("scenario '" + s.name + "' is discrete");
    }
    if (s.objective.builtin == "quadlin-continuous") {
        return quadlin_continuous(s.objective.quadlin);
    }
    return build_dsl(s)->continuous();
}

SolveSpec build_solve_spec(const Scenario& s) {
    if (!s.solve) {
        throw InputError("scenario '" + s.name + "' has no solve section");
    }
    const SolveSettings& v = *s.solve;
    SolveSpec spec;
    spec.horizon = s.time.t_max() - s.order;
    spec.mode = v.mode;
    spec.head = v.head;
    spec.tail = v.tail;
    spec.tolerance = v.tolerance;
    spec.max_iterations = v.max_iterations;
    if (v.guess == "zero") {
        spec.guess = StochasticPath(s.time, s.omega.states(), 1);
    }
    return spec;
}

StochasticPath build_path(const Scenario& s) {
    const int states = s.omega.states();
    const PathSpec& p = s.path;
    if (p.kind == "closed-form" && p.name == "quadlin-discrete-euler") {
        const QuadLinParams& q = s.objective.quadlin;
        return StochasticPath::scalar(s.time, states, [&](double t, int w) {
            const auto i = static_cast<std::size_t>(w);
            if (t == 0.0) return q.alpha[i];
            if (t == 1.0) return q.alpha[i] - q.beta[i] / 2.0;
            return q.alpha[i] - (q.beta[i] + q.gamma[i]) / 2.0;
        });
    }
    if (p.kind == "closed-form") {
        return StochasticPath::scalar(s.time, states,
                                      [&](double, int w) { return s.objective.quadlin.alpha[static_cast<std::size_t>(w)]; });
    }
    if (p.kind == "constant") {
        return StochasticPath::scalar(s.time, states, [&](double, int w) { return p.value[static_cast<std::size_t>(w)]; });
    }
    if (p.kind == "values") {
        return StochasticPath::generate(s.time, states, 1, [&](int idx, double, int w, int) {
            return p.values[static_cast<std::size_t>(idx)][static_cast<std::size_t>(w)];
        });
    }
    return newton_euler_solve(build_discrete(s), build_solve_spec(s), s.omega).path;
}

PerturbationCurve build_curve(const Scenario& s, const StochasticPath& path) {
    const PerturbationSpec& p = s.perturbation;
    const int states = s.omega.states();
    if (p.kind == "zero") {
        const int head = s.time.is_discrete() ? std::min(s.order, s.time.t_max()) : 0;
        return PerturbationCurve(StochasticPath(s.time, states, 1), head, {TailSpec::Kind::compact_support, 0.0, {}});
    }
    if (p.kind == "eventually-constant") {
        return step_curve(s.time, p.value, p.onset);
    }
    if (p.kind == "compact-support") {
        return window_curve(s.time, p.value, p.start, p.last);
    }
    if (p.kind == "ramp") {
        return ramp_curve(s.time, p.value, {p.end, p.vanishing_head});
    }
    if (p.kind == "compact-ramp") {
        return compact_ramp_curve(s.time, p.value, p.down_start, p.support_end, {p.end, p.vanishing_head});
    }
    if (p.kind == "kamihigashi") {
        return kamihigashi_curve(path, p.level, {p.end, p.vanishing_head});
    }
    if (static_cast<int>(p.values.size()) != s.time.points()) {
        throw ScenarioError("perturbation.values", "expected one row per grid point");
    }
    auto values = StochasticPath::generate(s.time, states, 1, [&](int idx, double, int w, int) {
        const auto& row = p.values[static_cast<std::size_t>(idx)];
        if (static_cast<int>(row.size()) != states) {
            throw ScenarioError("perturbation.values", "expected one value per state in every row");
        }
        return row[static_cast<std::size_t>(w)];
    });
    return PerturbationCurve(std::move(values), p.vanishing_head);
}

}  // namespace tvckit
