#include "fbplab/kernel.hpp"

#include "fbplab/errors.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fbp {

namespace {

constexpr double degenerate_moment = 1e-12;
constexpr double builtin_mass_tolerance = 1e-10;

} // namespace

Kernel::Kernel(Family family, std::string name, int panels)
    : family_(family), name_(std::move(name)), panels_(panels) {
    if (panels_ < 1)
        throw Error(ErrorCode::InvalidArgument, "kernel quadrature needs at least one panel");
}

Kernel Kernel::epanechnikov(int quadrature_panels) {
    Kernel k(Family::epanechnikov, "epanechnikov", quadrature_panels);
    k.finalize();
    return k;
}

Kernel Kernel::triangle(int quadrature_panels) {
    Kernel k(Family::triangle, "triangle", quadrature_panels);
    k.finalize();
    return k;
}

Kernel Kernel::quartic(int quadrature_panels) {
    Kernel k(Family::quartic, "quartic", quadrature_panels);
    k.finalize();
    return k;
}

Kernel Kernel::from_table(std::vector<double> z, std::vector<double> values, int quadrature_panels) {
    if (z.size() != values.size() || z.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "kernel table needs >= 2 (z, J) pairs");
    if (z.front() != 0.0)
        throw Error(ErrorCode::InvalidArgument, "kernel table must start at z = 0");
    for (std::size_t i = 1; i < z.size(); ++i)
        if (!(z[i] > z[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "kernel table abscissae must be strictly ascending");
    if (z.back() > 1.0)
        throw Error(ErrorCode::InvalidArgument, "kernel support must lie in [-1, 1]");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw Error(ErrorCode::InvalidArgument, "kernel values must be finite and nonnegative");
    if (!(values.front() > 0.0))
        throw Error(ErrorCode::DegenerateKernel, "kernel must satisfy J(0) > 0");

    // Trapezoid is exact for the piecewise-linear interpolant.
    double half_mass = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i)
        half_mass += 0.5 * (values[i] + values[i - 1]) * (z[i] - z[i - 1]);
    if (!(half_mass > 0.0))
        throw Error(ErrorCode::DegenerateKernel, "kernel table has zero mass");

    Kernel k(Family::custom, "custom", quadrature_panels);
    k.renormalization_ = 1.0 / (2.0 * half_mass);
    for (double& v : values) v *= k.renormalization_;
    k.table_z_ = std::move(z);
    k.table_v_ = std::move(values);
    k.finalize();
    return k;
}

Kernel Kernel::from_file(const std::filesystem::path& path, int quadrature_panels) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open kernel table " + path.string());
    std::vector<double> z, values;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0.0, b = 0.0;
        if (!(row >> a)) continue;
        if (!(row >> b))
            throw Error(ErrorCode::IoError, "kernel table row needs two columns: " + line);
        z.push_back(a);
        values.push_back(b);
    }
    Kernel k = from_table(std::move(z), std::move(values), quadrature_panels);
    k.name_ = path.filename().string();
    return k;
}

Kernel Kernel::by_name(const std::string& name_or_path) {
    if (name_or_path == "epanechnikov") return epanechnikov();
    if (name_or_path == "triangle") return triangle();
    if (name_or_path == "quartic") return quartic();
    return from_file(name_or_path);
}

double Kernel::eval(double z) const noexcept {
    const double a = std::abs(z);
    if (a >= 1.0) return 0.0;
    switch (family_) {
    case Family::epanechnikov: return 0.75 * (1.0 - a * a);
    case Family::triangle: return 1.0 - a;
    case Family::quartic: {
        const double s = 1.0 - a * a;
        return 15.0 / 16.0 * s * s;
    }
    case Family::custom: {
        if (a > table_z_.back()) return 0.0;
        auto it = std::upper_bound(table_z_.begin(), table_z_.end(), a);
        if (it == table_z_.end()) return table_v_.back();
        const auto i = static_cast<std::size_t>(it - table_z_.begin());
        const double theta = (a - table_z_[i - 1]) / (table_z_[i] - table_z_[i - 1]);
        return (1.0 - theta) * table_v_[i - 1] + theta * table_v_[i];
    }
    }
    return 0.0;
}

double Kernel::integrate(double a, double b, int power) const {
    auto integrand = [&](double z) { return eval(z) * std::pow(z, power); };
    auto pieces = [&](double lo, double hi) {
        const int n = std::max(1, static_cast<int>(std::ceil(panels_ * (hi - lo) - 1e-9)));
        return detail::gauss_legendre(integrand, lo, hi, n);
    };
    if (family_ != Family::custom) return pieces(a, b);

    // Split at table nodes so every panel sees a single linear piece.
    double sum = 0.0;
    double lo = a;
    for (double node : table_z_) {
        if (node <= lo) continue;
        if (node >= b) break;
        sum += pieces(lo, node);
        lo = node;
    }
    return sum + pieces(lo, b);
}

void Kernel::finalize() {
    for (int k = 0; k <= max_moment; ++k) moments_[static_cast<std::size_t>(k)] = integrate(0.0, 1.0, k);
    if (family_ != Family::custom && std::abs(2.0 * moments_[0] - 1.0) > builtin_mass_tolerance)
        throw Error(ErrorCode::DegenerateKernel, "built-in kernel failed unit-mass check");
}

double Kernel::moment(int k) const {
    if (k < 0 || k > max_moment)
        throw Error(ErrorCode::InvalidArgument, "kernel moments are available for k in [0, 4]");
    return moments_[static_cast<std::size_t>(k)];
}

double Kernel::c_star() const {
    const double m2 = moments_[2];
    if (m2 <= degenerate_moment)
        throw Error(ErrorCode::DegenerateKernel, "second half-moment vanishes; kernel concentrated at 0");
    return 1.0 / m2;
}

double Kernel::c_zero() const {
    const double m1 = moments_[1];
    if (m1 <= degenerate_moment)
        throw Error(ErrorCode::DegenerateKernel, "first half-moment vanishes; kernel concentrated at 0");
    const double c0 = 1.0 / m1;
    // z^2 < z on (0, 1) forces m2 < m1 for any admissible kernel.
    if (!(c0 < c_star()))
        throw Error(ErrorCode::DegenerateKernel, "C0 < C* violated");
    return c0;
}

double Kernel::scaled_eval(double eps, double x) const {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel scale eps must be positive");
    return eval(x / eps) / eps;
}

double Kernel::boundary_weight(double w) const {
    if (!(w >= 0.0 && w <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "boundary weight argument must lie in [0, 1]");
    if (w == 1.0) return 0.0;
    if (w == 0.0) return moments_[0];
    return integrate(w, 1.0, 0);
}

} // namespace fbp
