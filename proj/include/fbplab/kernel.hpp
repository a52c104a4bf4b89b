#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fbp {

/// Compactly supported, even, unit-mass dispersal kernel J with support in [-1, 1].
///
/// Only the half-line z >= 0 is stored, so J(z) == J(-z) holds exactly. All
/// derived constants (half-moments, C*, C0) are computed once at construction
/// and the object is immutable afterwards.
class Kernel {
public:
    enum class Family { epanechnikov, triangle, quartic, custom };

    static constexpr int default_panels = 256;
    static constexpr int max_moment = 4;

    /// J(z) = 3/4 (1 - z^2)
    static Kernel epanechnikov(int quadrature_panels = default_panels);
    /// J(z) = 1 - |z|
    static Kernel triangle(int quadrature_panels = default_panels);
    /// J(z) = 15/16 (1 - z^2)^2
    static Kernel quartic(int quadrature_panels = default_panels);

    /// Tabulated kernel on [0, 1], linearly interpolated and zero beyond the
    /// last node. The table is rescaled to unit mass; the applied factor is
    /// available through renormalization_factor().
    static Kernel from_table(std::vector<double> z, std::vector<double> values,
                             int quadrature_panels = default_panels);

    /// Two-column text file "z J(z)" (whitespace or comma separated, '#' comments).
    static Kernel from_file(const std::filesystem::path& path,
                            int quadrature_panels = default_panels);

    /// Built-in family by name ("epanechnikov", "triangle", "quartic"), or a table
    /// file path for anything else.
    static Kernel by_name(const std::string& name_or_path);

    Family family() const noexcept { return family_; }
    const std::string& name() const noexcept { return name_; }
    int quadrature_panels() const noexcept { return panels_; }
    double renormalization_factor() const noexcept { return renormalization_; }

    double operator()(double z) const noexcept { return eval(z); }
    /// J(|z|), zero for |z| >= 1.
    double eval(double z) const noexcept;

    /// Half-moment \int_0^1 J(z) z^k dz for k in [0, 4].
    double moment(int k) const;

    /// 1 / moment(2); throws DegenerateKernel when moment(2) <= 1e-12.
    double c_star() const;
    /// 1 / moment(1); throws DegenerateKernel when moment(1) <= 1e-12.
    double c_zero() const;

    /// J_eps(x) = J(x / eps) / eps.
    double scaled_eval(double eps, double x) const;

    /// W(w) = \int_w^1 J(z) dz for w in [0, 1]; W(0) = 1/2, W(1) = 0.
    double boundary_weight(double w) const;

private:
    Kernel(Family family, std::string name, int panels);
    void finalize();
    double integrate(double a, double b, int power) const;

    Family family_;
    std::string name_;
    int panels_;
    std::vector<double> table_z_;
    std::vector<double> table_v_;
    double renormalization_ = 1.0;
    std::array<double, max_moment + 1> moments_{};
};

} // namespace fbp
