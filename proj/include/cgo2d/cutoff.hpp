#pragma once
// The C-infinity step gamma and the two-factor cutoff h = gamma_S * gamma_B:
//   g(x)     = e^{-1/x} for x > 0, 0 otherwise
//   gamma(x) = g(2 - x) / (g(2 - x) + g(x - 1)):   1 for x <= 1, 0 for x >= 2
//   gamma_S  = 1 - gamma((2/delta) |z - z0|)        (interior hole around z0)
//   gamma_B  = gamma((2/delta)(|z| - (1 - delta)) + 1)   (boundary collar)
// The product h vanishes near z0, vanishes in a collar at the rim, equals 1
// outside {|z - z0| < delta} union {|z| > 1 - delta}, and obeys
// |h / (z - z0)| <= 2 / delta everywhere.

#include <cmath>
#include <stdexcept>

#include "cgo2d/grid.hpp"

namespace cgo2d {

inline double mollifier_g(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

/// Smooth step gamma: identically 1 on (-inf, 1], identically 0 on [2, inf).
inline double smooth_step(double x) {
    const double a = mollifier_g(2.0 - x);
    const double b = mollifier_g(x - 1.0);
    if (a == 0.0) return 0.0;
    if (b == 0.0) return 1.0;
    return a / (a + b);
}

struct CutoffParams {
    Complex z0;
    double delta;
};

inline double cutoff_value(const CutoffParams& p, Complex z) {
    const double gs = 1.0 - smooth_step((2.0 / p.delta) * std::abs(z - p.z0));
    const double gb = smooth_step((2.0 / p.delta) * (std::abs(z) - (1.0 - p.delta)) + 1.0);
    return gs * gb;
}

/// Sampled cutoff field h = gamma_S * gamma_B over the padded grid.
inline Field cutoff(const CutoffParams& p, const Grid& g) {
    if (!(p.delta > 0.0 && p.delta < 1.0))
        throw std::invalid_argument("cutoff: delta must lie in (0, 1)");
    if (!(std::abs(p.z0) < 1.0)) throw std::invalid_argument("cutoff: z0 must lie inside Omega");
    return g.sample([&p](Complex z) { return Complex(cutoff_value(p, z), 0.0); });
}

}  // namespace cgo2d
