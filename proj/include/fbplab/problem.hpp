#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fbp {

/// Reaction term f(u). Built-ins are autonomous; f(0) = 0 is structural for them.
struct ReactionSpec {
    enum class Family { zero, fisher_kpp, custom_polynomial };

    Family family = Family::zero;
    double a = 0.0; ///< fisher_kpp: f(u) = u (a - b u)
    double b = 1.0;
    /// custom_polynomial: coefficients[i] multiplies u^i; coefficients[0] must be 0.
    std::vector<double> coefficients;
    std::optional<double> lipschitz_bound_hint;

    static ReactionSpec zero() { return {}; }
    static ReactionSpec fisher_kpp(double a, double b);
    static ReactionSpec polynomial(std::vector<double> coefficients);

    /// f(t, x, u); throws NegativeDensity for u < 0.
    double eval(double t, double x, double u) const;
    /// Same without the sign check, for hypothesis sampling.
    double eval_unchecked(double u) const noexcept;
};

struct InitialDataSpec {
    enum class Family { quadratic_bump, cosine_bump, custom_table };

    Family family = Family::quadratic_bump;
    double V = 1.0;
    double h0 = 1.0;
    /// custom_table: ascending nodes spanning [-h0, h0], linear interpolation.
    std::vector<double> table_x;
    std::vector<double> table_v;

    static InitialDataSpec quadratic_bump(double V, double h0);
    static InitialDataSpec cosine_bump(double V, double h0);
    static InitialDataSpec table(std::vector<double> x, std::vector<double> v);

    /// v0(x) with zero extension outside [-h0, h0].
    double eval(double x) const noexcept;
    /// One-sided slopes v0'(-h0), v0'(h0).
    std::pair<double, double> boundary_slopes() const;
    double sup() const;
};

struct ProblemConfig {
    double d = 1.0;
    double mu = 1.0;
    double h0 = 1.0;
    double T = 1.0;
    ReactionSpec reaction;
    InitialDataSpec initial;
    /// Declared Hoelder exponent of the data; recorded, never verified.
    std::optional<double> alpha;
};

/// One failed hypothesis: `hypothesis` is a stable identifier, `message` is prose.
struct Violation {
    std::string hypothesis;
    std::string message;
};

struct ValidationResult;
ValidationResult validate(const ProblemConfig& config);

/// A config that passed every admissibility check, with derived bounds.
class ValidatedConfig {
public:
    const ProblemConfig& config() const noexcept { return config_; }
    const ProblemConfig* operator->() const noexcept { return &config_; }
    /// f(u) <= 0 for u > K.
    double K() const noexcept { return K_; }
    /// Lipschitz estimate of f on [0, max(sup v0, K)].
    double L0() const noexcept { return L0_; }
    double sup_v0() const noexcept { return sup_v0_; }
    /// A priori bound on the solution, max(sup v0, K).
    double density_bound() const noexcept { return std::max(sup_v0_, K_); }

private:
    friend ValidationResult validate(const ProblemConfig&);
    ValidatedConfig() = default;
    ProblemConfig config_;
    double K_ = 0.0;
    double L0_ = 0.0;
    double sup_v0_ = 0.0;
};

struct ValidationResult {
    std::optional<ValidatedConfig> value;
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

ValidationResult validate(const ProblemConfig& config);
/// Throws InvalidConfig listing the violations.
ValidatedConfig validate_or_throw(const ProblemConfig& config);

ProblemConfig problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const ProblemConfig& config);
ProblemConfig load_problem(const std::filesystem::path& path);

std::string to_string(ReactionSpec::Family family);
std::string to_string(InitialDataSpec::Family family);

} // namespace fbp
