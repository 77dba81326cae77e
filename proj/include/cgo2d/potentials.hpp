#pragma once
// Potential catalog: the smooth reference bumps and the mollified half-disc
// indicator used as fixtures, addressable by name, plus BKGRID1 file loading.
// Analytic entries expose pointwise evaluation (for reference values at
// arbitrary z0); sampled-only entries fall back to nearest-node lookup.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "cgo2d/cutoff.hpp"
#include "cgo2d/field_io.hpp"
#include "cgo2d/grid.hpp"

namespace cgo2d {

/// C-infinity bump supported on |z - center| < radius with peak `height`.
inline double bump_value(Complex z, Complex center = Complex(0.0, 0.0), double radius = 0.8,
                         double height = 1.0) {
    const double s2 = std::norm(z - center) / (radius * radius);
    if (s2 >= 1.0) return 0.0;
    return height * std::exp(1.0 - 1.0 / (1.0 - s2));
}

/// Indicator of the left half disc {Re z < 0}, mollified across the diameter at
/// scale 2 * `scale` with the smooth-step profile (the rim jump is handled by
/// the disc mask, as for any sampled field).
inline double halfdisc_value(Complex z, double scale) {
    return smooth_step(z.real() / (2.0 * scale) + 1.5);
}

struct Potential {
    std::string name;
    Field values;                                   // sampled on the grid, zero outside Omega
    std::function<Complex(Complex)> reference;      // pointwise evaluator (may be nearest-node)
};

/// Build a catalog potential ("bump", "offset", "halfdisc", "zero") or load a
/// BKGRID1 field file whose grid must match.  Mollification scale for
/// "halfdisc" is 2h, so the sampled fixture is grid-dependent by design.
inline Potential make_potential(const Grid& g, const std::string& name_or_file) {
    Potential out;
    out.name = name_or_file;
    if (name_or_file == "bump") {
        out.values = g.sample_disc([](Complex z) { return Complex(bump_value(z), 0.0); });
        out.reference = [](Complex z) { return Complex(bump_value(z), 0.0); };
        return out;
    }
    if (name_or_file == "offset") {
        const Complex c(0.3, 0.2);
        out.values =
            g.sample_disc([c](Complex z) { return Complex(bump_value(z, c, 0.5), 0.0); });
        out.reference = [c](Complex z) { return Complex(bump_value(z, c, 0.5), 0.0); };
        return out;
    }
    if (name_or_file == "halfdisc") {
        const double scale = g.h();
        out.values =
            g.sample_disc([scale](Complex z) { return Complex(halfdisc_value(z, scale), 0.0); });
        out.reference = [scale](Complex z) { return Complex(halfdisc_value(z, scale), 0.0); };
        return out;
    }
    if (name_or_file == "zero") {
        out.values = g.zero_field();
        out.reference = [](Complex) { return Complex(0.0, 0.0); };
        return out;
    }
    // Otherwise interpret as a BKGRID1 file path.
    auto [spec, field] = read_bkgrid1(name_or_file);
    if (!(spec == g.spec()))
        throw std::invalid_argument("potential file grid mismatch: " + name_or_file);
    // Enforce Omega support.
    for (std::size_t k = 0; k < field.size(); ++k)
        if (!g.inside(k)) field[k] = Complex(0.0, 0.0);
    out.values = std::move(field);
    Field copy = out.values;
    Grid grid_copy = g;
    out.reference = [grid_copy, copy](Complex z) {
        auto [i, j] = grid_copy.nearest(z);
        return copy[grid_copy.index(i, j)];
    };
    return out;
}

}  // namespace cgo2d
