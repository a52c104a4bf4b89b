#include "fbplab/problem.hpp"

#include "fbplab/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace fbp {

namespace {

constexpr double slope_threshold = 1e-6;
constexpr int k_search_samples = 20000;
constexpr int lipschitz_samples = 2000;

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

// Lagrange/Cauchy bound on the positive roots of the polynomial.
double root_bound(const std::vector<double>& c) {
    std::size_t n = c.size();
    while (n > 0 && c[n - 1] == 0.0) --n;
    if (n <= 1) return 1.0;
    const double lead = std::abs(c[n - 1]);
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) m = std::max(m, std::abs(c[i]) / lead);
    return 1.0 + m;
}

} // namespace

ReactionSpec ReactionSpec::fisher_kpp(double a, double b) {
    ReactionSpec r;
    r.family = Family::fisher_kpp;
    r.a = a;
    r.b = b;
    return r;
}

ReactionSpec ReactionSpec::polynomial(std::vector<double> coefficients) {
    ReactionSpec r;
    r.family = Family::custom_polynomial;
    r.coefficients = std::move(coefficients);
    return r;
}

double ReactionSpec::eval_unchecked(double u) const noexcept {
    switch (family) {
    case Family::zero: return 0.0;
    case Family::fisher_kpp: return u * (a - b * u);
    case Family::custom_polynomial: {
        double acc = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * u + *it;
        return acc;
    }
    }
    return 0.0;
}

double ReactionSpec::eval(double /*t*/, double /*x*/, double u) const {
    if (u < 0.0) throw Error(ErrorCode::NegativeDensity, "reaction evaluated at negative density");
    return eval_unchecked(u);
}

InitialDataSpec InitialDataSpec::quadratic_bump(double V, double h0) {
    InitialDataSpec s;
    s.family = Family::quadratic_bump;
    s.V = V;
    s.h0 = h0;
    return s;
}

InitialDataSpec InitialDataSpec::cosine_bump(double V, double h0) {
    InitialDataSpec s;
    s.family = Family::cosine_bump;
    s.V = V;
    s.h0 = h0;
    return s;
}

InitialDataSpec InitialDataSpec::table(std::vector<double> x, std::vector<double> v) {
    if (x.size() != v.size() || x.size() < 3)
        throw Error(ErrorCode::InvalidConfig, "initial table needs >= 3 (x, v) pairs");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw Error(ErrorCode::InvalidConfig, "initial table abscissae must be strictly ascending");
    InitialDataSpec s;
    s.family = Family::custom_table;
    s.h0 = 0.5 * (x.back() - x.front());
    s.V = *std::max_element(v.begin(), v.end());
    s.table_x = std::move(x);
    s.table_v = std::move(v);
    return s;
}

double InitialDataSpec::eval(double x) const noexcept {
    switch (family) {
    case Family::quadratic_bump: {
        if (std::abs(x) >= h0) return 0.0;
        const double r = x / h0;
        return V * (1.0 - r * r);
    }
    case Family::cosine_bump:
        if (std::abs(x) >= h0) return 0.0;
        return V * std::cos(0.5 * std::numbers::pi * x / h0);
    case Family::custom_table: {
        if (x <= table_x.front() || x >= table_x.back()) return 0.0;
        auto it = std::upper_bound(table_x.begin(), table_x.end(), x);
        const auto i = static_cast<std::size_t>(it - table_x.begin());
        const double theta = (x - table_x[i - 1]) / (table_x[i] - table_x[i - 1]);
        return (1.0 - theta) * table_v[i - 1] + theta * table_v[i];
    }
    }
    return 0.0;
}

std::pair<double, double> InitialDataSpec::boundary_slopes() const {
    switch (family) {
    case Family::quadratic_bump: return {2.0 * V / h0, -2.0 * V / h0};
    case Family::cosine_bump: {
        const double s = 0.5 * std::numbers::pi * V / h0;
        return {s, -s};
    }
    case Family::custom_table: {
        const std::size_t n = table_x.size();
        return {(table_v[1] - table_v[0]) / (table_x[1] - table_x[0]),
                (table_v[n - 1] - table_v[n - 2]) / (table_x[n - 1] - table_x[n - 2])};
    }
    }
    return {0.0, 0.0};
}

double InitialDataSpec::sup() const {
    if (family == Family::custom_table) return *std::max_element(table_v.begin(), table_v.end());
    return V;
}

ValidationResult validate(const ProblemConfig& config) {
    ValidationResult result;
    auto fail = [&](std::string hypothesis, std::string message) {
        result.violations.push_back({std::move(hypothesis), std::move(message)});
    };

    if (!(config.d > 0.0)) fail("parameters", "diffusion coefficient d must be positive");
    if (!(config.mu > 0.0)) fail("parameters", "boundary response mu must be positive");
    if (!(config.h0 > 0.0)) fail("parameters", "initial half-width h0 must be positive");
    if (!(config.T > 0.0)) fail("parameters", "horizon T must be positive");

    // Initial profile: pinned to zero at +-h0, positive inside, nonzero boundary slope.
    const InitialDataSpec& init = config.initial;
    if (std::abs(init.h0 - config.h0) > 1e-12 * std::max(1.0, config.h0))
        fail("initial_profile", "initial profile half-width differs from h0");
    if (init.family == InitialDataSpec::Family::custom_table) {
        const auto& x = init.table_x;
        const auto& v = init.table_v;
        if (x.size() < 3 || x.size() != v.size()) {
            fail("initial_profile", "initial table needs >= 3 (x, v) pairs");
        } else {
            if (v.front() != 0.0 || v.back() != 0.0)
                fail("initial_profile", "v0 must vanish at -h0 and h0");
            bool positive = true;
            for (std::size_t i = 1; i + 1 < v.size(); ++i) positive = positive && v[i] > 0.0;
            if (!positive) fail("initial_profile", "v0 not positive on (-h0,h0)");
            const auto [left, right] = init.boundary_slopes();
            if (!(std::abs(left) > slope_threshold) || !(std::abs(right) > slope_threshold))
                fail("initial_profile", "v0 has vanishing slope at a boundary point");
        }
    } else if (!(init.V > 0.0)) {
        fail("initial_profile", "v0 not positive on (-h0,h0)");
    }

    // Reaction: f(0) = 0 and f <= 0 beyond some K.
    const ReactionSpec& reaction = config.reaction;
    double K = 0.0;
    switch (reaction.family) {
    case ReactionSpec::Family::zero: break;
    case ReactionSpec::Family::fisher_kpp:
        if (!(reaction.b > 0.0)) fail("reaction_bounded", "fisher_kpp requires b > 0");
        else K = reaction.a > 0.0 ? reaction.a / reaction.b : 0.0;
        break;
    case ReactionSpec::Family::custom_polynomial: {
        const auto& c = reaction.coefficients;
        if (!c.empty() && c[0] != 0.0) fail("reaction_vanishes_at_zero", "f(t,x,0) != 0");
        const double top = 10.0 * root_bound(c);
        bool positive_at_top = false;
        for (int i = 1; i <= k_search_samples; ++i) {
            const double u = top * i / k_search_samples;
            const double f = reaction.eval_unchecked(u);
            if (f > 0.0) K = u;
            if (i == k_search_samples) positive_at_top = f > 0.0;
        }
        if (positive_at_top)
            fail("reaction_bounded", "no K with f(u) <= 0 for all u > K was found");
        break;
    }
    }

    if (!result.ok()) return result;

    ValidatedConfig validated;
    validated.config_ = config;
    validated.K_ = K;
    validated.sup_v0_ = init.sup();
    const double upper = std::max(validated.sup_v0_, K);
    if (reaction.lipschitz_bound_hint) {
        validated.L0_ = *reaction.lipschitz_bound_hint;
    } else if (reaction.family == ReactionSpec::Family::fisher_kpp) {
        validated.L0_ = std::max(std::abs(reaction.a), std::abs(reaction.a - 2.0 * reaction.b * upper));
    } else {
        double L = 0.0;
        double prev = reaction.eval_unchecked(0.0);
        for (int i = 1; i <= lipschitz_samples; ++i) {
            const double u = upper * i / lipschitz_samples;
            const double f = reaction.eval_unchecked(u);
            L = std::max(L, std::abs(f - prev) / (upper / lipschitz_samples));
            prev = f;
        }
        validated.L0_ = L;
    }
    result.value = std::move(validated);
    return result;
}

ValidatedConfig validate_or_throw(const ProblemConfig& config) {
    ValidationResult r = validate(config);
    if (!r.ok()) {
        std::string message = "config violates:";
        for (const auto& v : r.violations) message += " [" + v.hypothesis + "] " + v.message + ";";
        throw Error(ErrorCode::InvalidConfig, message);
    }
    return std::move(*r.value);
}

std::string to_string(ReactionSpec::Family family) {
    switch (family) {
    case ReactionSpec::Family::zero: return "zero";
    case ReactionSpec::Family::fisher_kpp: return "fisher_kpp";
    case ReactionSpec::Family::custom_polynomial: return "custom_polynomial";
    }
    return "unknown";
}

std::string to_string(InitialDataSpec::Family family) {
    switch (family) {
    case InitialDataSpec::Family::quadratic_bump: return "quadratic_bump";
    case InitialDataSpec::Family::cosine_bump: return "cosine_bump";
    case InitialDataSpec::Family::custom_table: return "custom_table";
    }
    return "unknown";
}

ProblemConfig problem_from_json(const nlohmann::json& j) {
    try {
        ProblemConfig c;
        c.d = j.at("d").get<double>();
        c.mu = j.at("mu").get<double>();
        c.h0 = j.at("h0").get<double>();
        c.T = j.at("T").get<double>();
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();

        const auto& r = j.at("reaction");
        const auto rf = r.at("family").get<std::string>();
        if (rf == "zero") {
            c.reaction = ReactionSpec::zero();
        } else if (rf == "fisher_kpp") {
            c.reaction = ReactionSpec::fisher_kpp(get_or(r, "a", 1.0), get_or(r, "b", 1.0));
        } else if (rf == "custom_polynomial") {
            c.reaction = ReactionSpec::polynomial(r.at("coefficients").get<std::vector<double>>());
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown reaction.family '" + rf + "'");
        }
        if (r.contains("lipschitz_bound_hint"))
            c.reaction.lipschitz_bound_hint = r.at("lipschitz_bound_hint").get<double>();

        const auto& i = j.at("initial");
        const auto inf = i.at("family").get<std::string>();
        if (inf == "quadratic_bump") {
            c.initial = InitialDataSpec::quadratic_bump(i.at("V").get<double>(), c.h0);
        } else if (inf == "cosine_bump") {
            c.initial = InitialDataSpec::cosine_bump(i.at("V").get<double>(), c.h0);
        } else if (inf == "custom_table") {
            std::vector<double> x, v;
            for (const auto& row : i.at("table")) {
                x.push_back(row.at(0).get<double>());
                v.push_back(row.at(1).get<double>());
            }
            c.initial = InitialDataSpec::table(std::move(x), std::move(v));
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown initial.family '" + inf + "'");
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed config: ") + e.what());
    }
}

nlohmann::json problem_to_json(const ProblemConfig& c) {
    nlohmann::json j;
    j["d"] = c.d;
    j["mu"] = c.mu;
    j["h0"] = c.h0;
    j["T"] = c.T;
    if (c.alpha) j["alpha"] = *c.alpha;

    nlohmann::json r;
    r["family"] = to_string(c.reaction.family);
    if (c.reaction.family == ReactionSpec::Family::fisher_kpp) {
        r["a"] = c.reaction.a;
        r["b"] = c.reaction.b;
    } else if (c.reaction.family == ReactionSpec::Family::custom_polynomial) {
        r["coefficients"] = c.reaction.coefficients;
    }
    if (c.reaction.lipschitz_bound_hint) r["lipschitz_bound_hint"] = *c.reaction.lipschitz_bound_hint;
    j["reaction"] = r;

    nlohmann::json i;
    i["family"] = to_string(c.initial.family);
    if (c.initial.family == InitialDataSpec::Family::custom_table) {
        nlohmann::json table = nlohmann::json::array();
        for (std::size_t k = 0; k < c.initial.table_x.size(); ++k)
            table.push_back({c.initial.table_x[k], c.initial.table_v[k]});
        i["table"] = table;
    } else {
        i["V"] = c.initial.V;
    }
    j["initial"] = i;
    return j;
}

ProblemConfig load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    return problem_from_json(j);
}

} // namespace fbp
