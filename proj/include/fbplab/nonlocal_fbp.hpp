#pragma once

#include "fbplab/kernel.hpp"
#include "fbplab/problem.hpp"
#include "fbplab/trajectory.hpp"

#include <string>
#include <vector>

namespace fbp {

/// Boundary flux law of the nonlocal problem.
///  - modified:   coefficient mu C0 eps^-beta, flux sampled across g + eps^beta, h - eps^beta
///  - unmodified: coefficient mu c1 eps^-1, flux sampled across g, h
struct NonlocalVariant {
    enum class Kind { modified, unmodified };

    Kind kind = Kind::modified;
    double beta = 0.5;
    double c1 = 0.0;

    static NonlocalVariant modified(double beta = 0.5) { return {Kind::modified, beta, 0.0}; }
    static NonlocalVariant unmodified(double c1) { return {Kind::unmodified, 0.5, c1}; }

    double offset(double eps) const;
    double coefficient(const Kernel& kernel, double eps) const;
    void check() const;
    std::string describe() const;
};

/// Density on the global grid x_i = i dx. values[k] sits at (first_index + k) dx;
/// it is zero at every node outside (g, h).
struct EulerianState {
    double t = 0.0;
    double g = 0.0;
    double h = 0.0;
    double dx = 0.0;
    long first_index = 0;
    std::vector<double> values;

    double x(std::size_t k) const noexcept { return static_cast<double>(first_index + static_cast<long>(k)) * dx; }
    double x_min() const noexcept { return x(0); }
    double x_max() const noexcept { return x(values.size() - 1); }
    /// Linear interpolation with u(g) = u(h) = 0 pinned at the exact boundary abscissas.
    double interpolate(double at) const noexcept;
    /// Active nodes between pinned zeros at g and h.
    Profile to_profile(double reaction_integral = 0.0) const;
    /// Copy restricted to the active nodes plus one zero node on each side.
    EulerianState trimmed() const;
};

enum class Side { left, right };

/// Precomputed discretization for one (kernel, eps, dx): the convolution
/// stencil and the boundary-flux quadrature weights.
class NonlocalStencil {
public:
    /// Both quadratures are moment-matched: the stencil reproduces unit mass and
    /// the second moment 2 eps^2 / C*, and the flux weights reproduce
    /// \int_0^1 W = 1 / C0. Throws ResolutionTooCoarse for dx > eps / 8.
    NonlocalStencil(const Kernel& kernel, double eps, double dx);

    double eps() const noexcept { return eps_; }
    double dx() const noexcept { return dx_; }
    int half_width() const noexcept { return static_cast<int>(weights_.size()) - 1; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double c_star() const noexcept { return c_star_; }
    double c_zero() const noexcept { return c_zero_; }

    /// (d C* / eps^2) [ \int J_eps(x - y) u(y) dy - u(x) ] at every active node, zero elsewhere.
    std::vector<double> apply(const EulerianState& state, double d) const;
    void apply(const EulerianState& state, double d, std::vector<double>& out) const;

    /// Signed boundary speed (g' for left, h' for right).
    double boundary_flux(const EulerianState& state, double mu, const NonlocalVariant& variant,
                         Side side) const;

private:
    double eps_;
    double dx_;
    double c_star_;
    double c_zero_;
    std::vector<double> weights_;      // w_0 .. w_K, symmetric stencil
    std::vector<double> flux_weights_; // W((m + 1/2) / M) / M, m = 0 .. M-1, rescaled
};

std::vector<double> apply_nonlocal_operator(const EulerianState& state, const Kernel& kernel, double eps,
                                            double d);

double boundary_flux(const EulerianState& state, const Kernel& kernel, double eps, double mu,
                     const NonlocalVariant& variant, Side side);

/// Explicit Euler step of the coupled system: boundaries from the flux law,
/// then u += dt (L u + f). Newly covered nodes start at zero.
EulerianState step(const EulerianState& state, double dt, const ValidatedConfig& config,
                   const NonlocalStencil& stencil, const NonlocalVariant& variant);

EulerianState step(const EulerianState& state, double dt, const ValidatedConfig& config, const Kernel& kernel,
                   double eps, const NonlocalVariant& variant);

struct NonlocalResolution {
    double dx = 0.0;
    double dt = 0.0;
    double eps = 0.0;
    double cfl_sigma = 0.0; ///< dt d C* / eps^2 actually used
    NonlocalVariant variant;
    std::string kernel;
};

class NonlocalSolution : public Trajectory {
public:
    const std::vector<EulerianState>& snapshots() const noexcept { return snapshots_; }
    const NonlocalResolution& resolution() const noexcept { return resolution_; }

private:
    friend NonlocalSolution solve_nonlocal(const ValidatedConfig&, const Kernel&, double, const NonlocalVariant&,
                                           double, double, OutputSchedule);
    NonlocalSolution() = default;

    std::vector<EulerianState> snapshots_;
    NonlocalResolution resolution_;
};

inline constexpr double default_cfl_sigma = 0.5;
inline constexpr int default_nodes_per_eps = 8;

/// Default step 0.5 eps^2 / (d C*).
double default_nonlocal_dt(const ValidatedConfig& config, const Kernel& kernel, double eps);

/// Initial state on a symmetric grid sized from the a priori speed bound.
EulerianState initial_nonlocal_state(const ValidatedConfig& config, const Kernel& kernel, double eps,
                                     const NonlocalVariant& variant, double dx);

/// Integrates to T. dx <= eps / 8; dt is an upper bound (dt <= 0 selects the
/// default), shortened to divide every output interval evenly.
NonlocalSolution solve_nonlocal(const ValidatedConfig& config, const Kernel& kernel, double eps,
                                const NonlocalVariant& variant, double dx, double dt,
                                OutputSchedule schedule = {});

} // namespace fbp
