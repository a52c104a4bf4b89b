#pragma once

// Independent reference computations used by the unit tests. Nothing here
// calls into the library.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// \int_0^1 sum_i c_i z^i dz, exact.
inline double poly_integral01(const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] / static_cast<double>(i + 1);
    return s;
}

/// Coefficients of p(z) * z^k.
inline std::vector<double> shift(std::vector<double> c, int k) {
    c.insert(c.begin(), static_cast<std::size_t>(k), 0.0);
    return c;
}

/// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Least-squares slope and r^2 of (log x, log y).
struct Fit {
    double slope;
    double r2;
};

inline Fit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
        syy += b * b;
    }
    const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
    const double slope = cxy / cxx;
    return {slope, cyy > 0 ? (slope * cxy) / cyy : 1.0};
}

} // namespace oracle
