#pragma once
// The oscillatory averaging operator T_n built on the Gaussian kernel kappa_n,
// its convergence table, and the remainder functional: the L^2-in-z0 size of
//     z0 |-> (2n/pi) Int_Omega e^{i n R(z, z0)} q(z) g_{z0}(z) dm(z),
// with the real phase R(z, z0) = (z - z0)^2 + conj(z - z0)^2 = 2 Re (z - z0)^2.
// T_n f equals kappa_n * f, so one padded convolution evaluates the functional
// for g == 1 at every z0 simultaneously; general g families fall back to direct
// quadrature per z0 sample point.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cgo2d/grid.hpp"
#include "cgo2d/operators.hpp"

namespace cgo2d {

/// R(z, z0) = (z - z0)^2 + conj(z - z0)^2, always real.
inline double phase_r(Complex z, Complex z0) {
    const Complex d = z - z0;
    return 2.0 * (d.real() * d.real() - d.imag() * d.imag());
}

/// Sampled e^{sign * i * n * R(z, z0)} over the padded grid; unit modulus everywhere.
inline Field phase_field(double n, Complex z0, const Grid& g, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("phase_field: sign must be +-1");
    return g.sample([&](Complex z) {
        const double ph = sign * n * phase_r(z, z0);
        return Complex(std::cos(ph), std::sin(ph));
    });
}

/// T_n f on the full padded grid (values at every node interpreted as z0).
inline Field apply_tn(OperatorWorkspace& ws, const Field& f, double n) {
    return ws.tn_apply(f, n);
}

/// Rows (n, ||T_n f - f||_{L2(Omega)}) for an increasing list of frequencies.
inline std::vector<std::pair<double, double>> convergence_table(OperatorWorkspace& ws,
                                                                const Field& f,
                                                                const std::vector<double>& n_list) {
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (!(n_list[k] > n_list[k - 1]))
            throw std::invalid_argument("convergence_table: n_list must be increasing");
    const Grid& g = ws.grid();
    std::vector<std::pair<double, double>> rows;
    rows.reserve(n_list.size());
    for (double n : n_list) {
        Field tf = ws.tn_apply(f, n);
        for (std::size_t k = 0; k < tf.size(); ++k) tf[k] -= f[k];
        rows.emplace_back(n, lp_norm(g, tf, 2.0));
    }
    return rows;
}

/// Deterministic z0 sample: the masked sub-lattice of a coarsened grid, with the
/// stride chosen as the largest power of two keeping at least `min_count`
/// masked samples.  Each sample carries quadrature weight (stride * h)^2.
struct Z0Sample {
    std::vector<std::size_t> indices;  // node indices into the full grid
    int stride = 1;
    double weight = 0.0;  // (stride * h)^2
};

inline Z0Sample make_z0_sample(const Grid& g, int min_count = 200) {
    Z0Sample out;
    for (int stride = g.n(); stride >= 1; stride /= 2) {
        out.indices.clear();
        for (int i = 0; i < g.n(); i += stride)
            for (int j = 0; j < g.n(); j += stride)
                if (g.inside(i, j)) out.indices.push_back(g.index(i, j));
        out.stride = stride;
        out.weight = (stride * g.h()) * (stride * g.h());
        if (static_cast<int>(out.indices.size()) >= min_count) return out;
    }
    return out;
}

/// Remainder functional for g == 1: the discrete L^2 norm over the z0 sample of
/// (2n/pi) Int e^{inR} q dm = (T_n q)(z0).
inline double remainder_functional(OperatorWorkspace& ws, const Field& q, double n,
                                   const Z0Sample& sample) {
    Field tq = ws.tn_apply(q, n);
    double acc = 0.0;
    for (std::size_t k : sample.indices) acc += std::norm(tq[k]);
    return std::sqrt(acc * sample.weight);
}

/// Remainder functional for a general weight family g_{z0} (direct quadrature).
/// `g_family` receives the z0 node value and must return the sampled field g_{z0}.
inline double remainder_functional(OperatorWorkspace& ws, const Field& q, double n,
                                   const Z0Sample& sample,
                                   const std::function<Field(Complex)>& g_family) {
    const Grid& g = ws.grid();
    double acc = 0.0;
    for (std::size_t kz : sample.indices) {
        const int i0 = static_cast<int>(kz) / g.n();
        const int j0 = static_cast<int>(kz) % g.n();
        const Complex z0 = g.node(i0, j0);
        Field gz = g_family(z0);
        Complex integral(0.0, 0.0);
        for (std::size_t k : g.masked_indices()) {
            const int i = static_cast<int>(k) / g.n();
            const int j = static_cast<int>(k) % g.n();
            const double ph = n * phase_r(g.node(i, j), z0);
            integral += Complex(std::cos(ph), std::sin(ph)) * q[k] * gz[k];
        }
        integral *= g.h() * g.h() * (2.0 * n / kPi);
        acc += std::norm(integral);
    }
    return std::sqrt(acc * sample.weight);
}

}  // namespace cgo2d
