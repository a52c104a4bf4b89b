#pragma once

#include <array>
#include <cmath>

namespace fbp::detail {

// 5-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 9.
inline constexpr std::array<double, 5> gl5_nodes{
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
inline constexpr std::array<double, 5> gl5_weights{
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

/// Composite 5-point Gauss-Legendre over [a, b] split into `panels` equal pieces.
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
    if (!(b > a) || panels < 1) return 0.0;
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double panel = 0.0;
        for (std::size_t q = 0; q < gl5_nodes.size(); ++q)
            panel += gl5_weights[q] * f(mid + 0.5 * h * gl5_nodes[q]);
        sum += 0.5 * h * panel;
    }
    return sum;
}

} // namespace fbp::detail
