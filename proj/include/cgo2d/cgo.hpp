#pragma once
// Oscillating-solution construction by contraction fixed point.
//
// First kind:  u = e^{in psi}(1 + r),  psi = (z - z0)^2,  with
//     r = S f,  S f = -(1/4) C( e^{-inR} Cbar( e^{inR} q f ) ),  f = 1 + S f.
// Second kind: u = e^{in conj(psi)}(1 + s), same shape with C and Cbar swapped.
// R = psi + conj(psi) is real, so every phase factor has unit modulus.
//
// Also houses the measurement helpers built on these solutions: remainder-decay
// tables, PDE residuals (5-point stencil and first-order factored form), the
// oscillatory integration-by-parts identity, and the mollified-potential fixture.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgo2d/cutoff.hpp"
#include "cgo2d/field_io.hpp"
#include "cgo2d/grid.hpp"
#include "cgo2d/operators.hpp"
#include "cgo2d/stationary_phase.hpp"

namespace cgo2d {

enum class SolutionKind { first, second };

struct CGOParams {
    double n = 8.0;        // oscillation frequency, |n| > 1
    Complex z0{0.0, 0.0};  // phase center, |z0| < 1
    double p = 4.0;        // integrability exponent, p > 2
    SolutionKind kind = SolutionKind::first;

    double alpha() const { return 1.0 - 2.0 / p; }

    void validate() const {
        if (!(std::abs(n) > 1.0)) throw std::invalid_argument("cgo: |n| must exceed 1");
        if (!(std::abs(z0) < 1.0)) throw std::invalid_argument("cgo: z0 must lie inside the disc");
        if (!(p > 2.0)) throw std::invalid_argument("cgo: p must exceed 2");
    }
};

/// Iteration diverged: the measured step-ratio stayed at or above 1.
class NonContractiveError : public std::runtime_error {
  public:
    explicit NonContractiveError(double measured)
        : std::runtime_error("fixed-point iteration is not contracting (measured ratio " +
                             std::to_string(measured) + "); increase n or shrink q"),
          measured_(measured) {}
    double measured() const { return measured_; }

  private:
    double measured_;
};

/// Iteration cap reached before the step size fell under the tolerance.
class NoConvergenceError : public std::runtime_error {
  public:
    NoConvergenceError(int iterations, double last_diff)
        : std::runtime_error("fixed-point iteration did not converge in " +
                             std::to_string(iterations) + " steps (last step " +
                             std::to_string(last_diff) + ")"),
          iterations_(iterations),
          last_diff_(last_diff) {}
    int iterations() const { return iterations_; }
    double last_diff() const { return last_diff_; }

  private:
    int iterations_;
    double last_diff_;
};

/// One application of the fixed-point operator S to f for potential q.
inline Field apply_s(OperatorWorkspace& ws, const Field& f, const Field& q,
                     const CGOParams& params) {
    const Grid& g = ws.grid();
    if (f.size() != g.size() || q.size() != g.size())
        throw std::invalid_argument("apply_s: field size mismatch");
    const Field phase = phase_field(params.n, params.z0, g, +1);  // e^{inR}
    Field inner = g.zero_field();
    for (std::size_t k : g.masked_indices()) inner[k] = phase[k] * q[k] * f[k];
    Field w = (params.kind == SolutionKind::first) ? ws.conj_cauchy(inner) : ws.cauchy(inner);
    Field mid = g.zero_field();
    for (std::size_t k : g.masked_indices()) mid[k] = std::conj(phase[k]) * w[k];
    Field out = (params.kind == SolutionKind::first) ? ws.cauchy(mid) : ws.conj_cauchy(mid);
    for (Complex& v : out) v *= -0.25;
    return out;
}

struct CGOSolution {
    CGOParams params;
    Field f;          // fixed point of f = 1 + S f on the padded grid
    Field remainder;  // f - 1, stored explicitly
    int iterations = 0;
    double empirical_contraction = 0.0;  // largest observed step ratio
    double fixed_point_residual = 0.0;   // sup_Omega |f - 1 - S f|, recomputed at the end
    std::vector<double> step_diffs;      // sup_Omega |f^{k+1} - f^k| per iteration
};

/// Fixed-point solve f^0 = 1 (or a caller-given start), f^{k+1} = 1 + S f^k,
/// stopping when the sup-norm step over Omega falls to tol.  Throws
/// NonContractiveError when the measured step ratio stays >= 1 past a short
/// probe budget (or the step overflows), NoConvergenceError at the cap.
inline CGOSolution solve_cgo(OperatorWorkspace& ws, const Field& q, const CGOParams& params,
                             double tol = 1e-10, int max_iterations = 200,
                             const Field* initial = nullptr) {
    params.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("solve_cgo: tol must be positive");
    const Grid& g = ws.grid();
    constexpr int kProbeBudget = 5;  // ratio observations before declaring divergence

    CGOSolution sol;
    sol.params = params;
    Field f = initial ? *initial : Field(g.size(), Complex(1.0, 0.0));
    if (f.size() != g.size()) throw std::invalid_argument("solve_cgo: initial guess size mismatch");

    double prev_diff = -1.0;
    bool converged = false;
    int steps = 0;
    for (int it = 0; it < max_iterations; ++it) {
        Field sf = apply_s(ws, f, q, params);
        double diff = 0.0;
        for (std::size_t k : g.masked_indices())
            diff = std::max(diff, std::abs(Complex(1.0, 0.0) + sf[k] - f[k]));
        if (!std::isfinite(diff)) throw NonContractiveError(diff);
        sol.step_diffs.push_back(diff);
        if (prev_diff > 0.0) {
            const double ratio = diff / prev_diff;
            sol.empirical_contraction =
                (it == 1) ? ratio : std::max(sol.empirical_contraction, ratio);
            if (it >= kProbeBudget && ratio >= 1.0 && diff > tol)
                throw NonContractiveError(ratio);
        }
        prev_diff = diff;
        for (std::size_t k = 0; k < f.size(); ++k) f[k] = Complex(1.0, 0.0) + sf[k];
        steps = it + 1;
        if (diff <= tol) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NoConvergenceError(max_iterations, prev_diff);

    Field sf = apply_s(ws, f, q, params);
    double resid = 0.0;
    for (std::size_t k : g.masked_indices())
        resid = std::max(resid, std::abs(f[k] - Complex(1.0, 0.0) - sf[k]));
    sol.f = std::move(f);
    sol.remainder = sol.f;
    for (Complex& v : sol.remainder) v -= Complex(1.0, 0.0);
    sol.iterations = steps;
    sol.fixed_point_residual = resid;
    return sol;
}

/// Largest sup norm of S f over `probes` random smooth fields normalized to
/// unit sup norm on Omega: an empirical operator-norm lower bound.
inline double s_operator_norm_probe(OperatorWorkspace& ws, const Field& q,
                                    const CGOParams& params, int probes = 10, int band = 6,
                                    std::uint64_t seed = 99) {
    const Grid& g = ws.grid();
    std::mt19937_64 rng(seed);
    double best = 0.0;
    for (int t = 0; t < probes; ++t) {
        Field f = random_smooth_field(g, band, rng);
        const double sup = lp_norm(g, f, std::numeric_limits<double>::infinity());
        if (sup <= 0.0) continue;
        for (Complex& v : f) v /= sup;
        Field sf = apply_s(ws, f, q, params);
        best = std::max(best, lp_norm(g, sf, std::numeric_limits<double>::infinity()));
    }
    return best;
}

/// u = e^{in psi} f (first kind) or e^{in conj(psi)} f (second kind) on the grid.
inline Field assemble_solution(const Grid& g, const CGOSolution& sol) {
    const double n = sol.params.n;
    const Complex z0 = sol.params.z0;
    Field u(g.size());
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            const std::size_t k = g.index(i, j);
            Complex psi = (g.node(i, j) - z0) * (g.node(i, j) - z0);
            if (sol.params.kind == SolutionKind::second) psi = std::conj(psi);
            u[k] = std::exp(Complex(0.0, n) * psi) * sol.f[k];
        }
    }
    return u;
}

// ---------------------------------------------------------------------------
// Centered differences (second-order one-sided at the array edges, matching
// the usual gradient stencil) and Wirtinger derivatives of sampled fields.

inline Field gradient_x(const Grid& g, const Field& f) {
    const int n = g.n();
    const double h = g.h();
    Field out(f.size());
    for (int j = 0; j < n; ++j) {
        out[g.index(0, j)] =
            (-3.0 * f[g.index(0, j)] + 4.0 * f[g.index(1, j)] - f[g.index(2, j)]) / (2.0 * h);
        out[g.index(n - 1, j)] = (3.0 * f[g.index(n - 1, j)] - 4.0 * f[g.index(n - 2, j)] +
                                  f[g.index(n - 3, j)]) /
                                 (2.0 * h);
        for (int i = 1; i < n - 1; ++i)
            out[g.index(i, j)] = (f[g.index(i + 1, j)] - f[g.index(i - 1, j)]) / (2.0 * h);
    }
    return out;
}

inline Field gradient_y(const Grid& g, const Field& f) {
    const int n = g.n();
    const double h = g.h();
    Field out(f.size());
    for (int i = 0; i < n; ++i) {
        out[g.index(i, 0)] =
            (-3.0 * f[g.index(i, 0)] + 4.0 * f[g.index(i, 1)] - f[g.index(i, 2)]) / (2.0 * h);
        out[g.index(i, n - 1)] = (3.0 * f[g.index(i, n - 1)] - 4.0 * f[g.index(i, n - 2)] +
                                  f[g.index(i, n - 3)]) /
                                 (2.0 * h);
        for (int j = 1; j < n - 1; ++j)
            out[g.index(i, j)] = (f[g.index(i, j + 1)] - f[g.index(i, j - 1)]) / (2.0 * h);
    }
    return out;
}

inline Field wirtinger_d(const Grid& g, const Field& f) {
    Field dx = gradient_x(g, f), dy = gradient_y(g, f);
    Field out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k)
        out[k] = 0.5 * (dx[k] - Complex(0.0, 1.0) * dy[k]);
    return out;
}

inline Field wirtinger_dbar(const Grid& g, const Field& f) {
    Field dx = gradient_x(g, f), dy = gradient_y(g, f);
    Field out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k)
        out[k] = 0.5 * (dx[k] + Complex(0.0, 1.0) * dy[k]);
    return out;
}

/// Masked nodes at distance > margin_cells * h from the disc boundary.
inline std::vector<std::size_t> interior_indices(const Grid& g, int margin_cells) {
    std::vector<std::size_t> out;
    const double rmax = 1.0 - margin_cells * g.h();
    for (std::size_t k : g.masked_indices()) {
        const int i = static_cast<int>(k) / g.n();
        const int j = static_cast<int>(k) % g.n();
        if (std::abs(g.node(i, j)) < rmax) out.push_back(k);
    }
    return out;
}

/// Sup-plus-seminorm Holder-alpha estimate of a masked field over Omega.
inline double holder_norm_estimate(const Grid& g, const Field& f, double alpha,
                                   int n_random = 1500, std::uint64_t seed = 12345) {
    return lp_norm(g, f, std::numeric_limits<double>::infinity()) +
           holder_seminorm_estimate(g, f, alpha, n_random, seed);
}

// ---------------------------------------------------------------------------
// Remainder-decay table.

struct DecayRow {
    double n = 0.0;
    double sup_holder = 0.0;    // Holder-alpha estimate of the remainder
    double sup_dbar_inf = 0.0;  // sup norm of the dbar-derivative
    double sup_d_p = 0.0;       // L^p norm of the d-derivative
};

/// For each n: solve at every z0 sample and record the largest remainder norms.
/// Norms of derivatives exclude nodes within one cell of the disc boundary.
inline std::vector<DecayRow> remainder_decay(OperatorWorkspace& ws, const Field& q,
                                             const std::vector<double>& n_list,
                                             const std::vector<Complex>& z0_samples, double p,
                                             double tol = 1e-11) {
    const Grid& g = ws.grid();
    const double alpha = 1.0 - 2.0 / p;
    const std::vector<std::size_t> interior = interior_indices(g, 1);
    std::vector<DecayRow> rows;
    rows.reserve(n_list.size());
    for (double n : n_list) {
        DecayRow row;
        row.n = n;
        for (Complex z0 : z0_samples) {
            CGOParams params;
            params.n = n;
            params.z0 = z0;
            params.p = p;
            CGOSolution sol = solve_cgo(ws, q, params, tol);
            Field r_masked = g.zero_field();
            for (std::size_t k : g.masked_indices()) r_masked[k] = sol.remainder[k];
            row.sup_holder =
                std::max(row.sup_holder, holder_norm_estimate(g, r_masked, alpha, 1500));
            Field dd = wirtinger_d(g, sol.remainder);
            Field db = wirtinger_dbar(g, sol.remainder);
            double acc = 0.0, dbi = 0.0;
            for (std::size_t k : interior) {
                acc += std::pow(std::abs(dd[k]), p);
                dbi = std::max(dbi, std::abs(db[k]));
            }
            row.sup_d_p = std::max(row.sup_d_p, std::pow(acc * g.h() * g.h(), 1.0 / p));
            row.sup_dbar_inf = std::max(row.sup_dbar_inf, dbi);
        }
        rows.push_back(row);
    }
    return rows;
}

/// Serialize a remainder-decay table with the canonical column set.
inline void write_decay_csv(const std::string& path, const std::vector<DecayRow>& rows,
                            const std::vector<std::pair<std::string, std::string>>& metadata = {}) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const DecayRow& r : rows)
        cells.push_back({format_double(r.n), format_double(r.sup_holder),
                         format_double(r.sup_dbar_inf), format_double(r.sup_d_p)});
    write_csv(path, "n,sup_holder,sup_dbar_inf,sup_d_p", cells, metadata);
}

// ---------------------------------------------------------------------------
// PDE residual checks.

/// || Lap5 u + q u ||_2 / || q u ||_2 over nodes > margin cells inside the disc,
/// with the centered 5-point Laplacian at spacing h.
inline double pde_stencil_residual(const Grid& g, const Field& q, const Field& u,
                                   int margin_cells = 3) {
    const double h2 = g.h() * g.h();
    double num = 0.0, den = 0.0;
    for (std::size_t k : interior_indices(g, margin_cells)) {
        const int i = static_cast<int>(k) / g.n();
        const int j = static_cast<int>(k) % g.n();
        const Complex lap = (u[g.index(i + 1, j)] + u[g.index(i - 1, j)] + u[g.index(i, j + 1)] +
                             u[g.index(i, j - 1)] - 4.0 * u[k]) /
                            h2;
        num += std::norm(lap + q[k] * u[k]);
        den += std::norm(q[k] * u[k]);
    }
    if (den <= 0.0) throw std::invalid_argument("pde_stencil_residual: q u vanishes on the region");
    return std::sqrt(num / den);
}

/// L^2 norm over the 3-cell interior of the first-order factored operator
///     first kind:  4 d dbar f + 8in (z - z0) dbar f + q f
///     second kind: 4 d dbar f + 8in conj(z - z0) d f + q f
/// applied to a sampled f.  The solved kind annihilates this; the swapped kind
/// does not, which disambiguates the operator ordering at runtime.
inline double factored_pde_residual(const Grid& g, const Field& q, const Field& f, double n,
                                    Complex z0, SolutionKind kind) {
    Field db = wirtinger_dbar(g, f);
    Field dd = wirtinger_d(g, f);
    Field ddb = wirtinger_d(g, db);  // d dbar f
    double acc = 0.0;
    for (std::size_t k : interior_indices(g, 3)) {
        const int i = static_cast<int>(k) / g.n();
        const int j = static_cast<int>(k) % g.n();
        const Complex z = g.node(i, j);
        Complex first_order;
        if (kind == SolutionKind::first)
            first_order = Complex(0.0, 8.0 * n) * (z - z0) * db[k];
        else
            first_order = Complex(0.0, 8.0 * n) * std::conj(z - z0) * dd[k];
        acc += std::norm(4.0 * ddb[k] + first_order + q[k] * f[k]);
    }
    return std::sqrt(acc * g.h() * g.h());
}

// ---------------------------------------------------------------------------
// Oscillatory integration by parts:
//   C(e^{s inR} g) = s/(2in) ( e^{s inR} g/(conj(z) - conj(z0))
//                              - C(e^{s inR} dbar[g/(conj(z) - conj(z0))]) ),
// valid when g vanishes near z0.  Returns the relative L^2(Omega) discrepancy.
inline double integration_by_parts_check(OperatorWorkspace& ws, const Field& gfield, double n,
                                         Complex z0, int sign = +1) {
    const Grid& g = ws.grid();
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("integration_by_parts_check: sign must be +-1");
    if (gfield.size() != g.size())
        throw std::invalid_argument("integration_by_parts_check: field size mismatch");
    for (std::size_t k : g.masked_indices()) {
        if (std::abs(gfield[k]) > 0.0) {
            const int i = static_cast<int>(k) / g.n();
            const int j = static_cast<int>(k) % g.n();
            if (std::abs(g.node(i, j) - z0) < 2.0 * g.h())
                throw std::invalid_argument(
                    "integration_by_parts_check: support of g touches z0 (needs 2-cell gap)");
        }
    }
    const Field phase = phase_field(n, z0, g, sign);
    Field eg = g.zero_field();
    for (std::size_t k : g.masked_indices()) eg[k] = phase[k] * gfield[k];
    Field lhs = ws.cauchy(eg);

    Field gv(g.size(), Complex(0.0, 0.0));
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            const std::size_t k = g.index(i, j);
            const Complex den = std::conj(g.node(i, j)) - std::conj(z0);
            if (std::abs(den) > 0.0) gv[k] = gfield[k] / den;
        }
    }
    Field dbar_gv = wirtinger_dbar(g, gv);
    Field e_dbar = g.zero_field();
    for (std::size_t k : g.masked_indices()) e_dbar[k] = phase[k] * dbar_gv[k];
    Field tail = ws.cauchy(e_dbar);

    const Complex factor = Complex(static_cast<double>(sign), 0.0) / Complex(0.0, 2.0 * n);
    double num = 0.0, den_acc = 0.0;
    for (std::size_t k : g.masked_indices()) {
        const Complex rhs = factor * (phase[k] * gv[k] - tail[k]);
        num += std::norm(lhs[k] - rhs);
        den_acc += std::norm(lhs[k]);
    }
    return std::sqrt(num / den_acc);
}

// ---------------------------------------------------------------------------
// Mollified-potential fixture: q times a cutoff that vanishes near z0 and near
// the disc boundary, with the cutoff width chosen from the target L^p distance.

struct MollifiedPotential {
    Field values;
    double delta = 0.0;
};

inline MollifiedPotential mollified_potential(const Grid& g, const Field& q, Complex z0,
                                              double epsilon, double p) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("mollified_potential: epsilon must be > 0");
    const double sup_q = lp_norm(g, q, std::numeric_limits<double>::infinity());
    if (!(sup_q > 0.0)) throw std::invalid_argument("mollified_potential: q vanishes");
    double delta = std::pow(epsilon / (2.0 * std::pow(kPi, 1.0 / p) * sup_q), p / 2.0);
    delta = std::min(std::max(delta, 1e-6), 0.999);
    Field h = cutoff(CutoffParams{z0, delta}, g);
    MollifiedPotential out;
    out.delta = delta;
    out.values = g.zero_field();
    for (std::size_t k : g.masked_indices()) out.values[k] = q[k] * h[k];
    return out;
}

/// Largest node gap of the discrete identity
///     conj(second-kind solution at +n) == first-kind solution at -n
/// for a real potential; both solves share the workspace.
inline double variant_symmetry_gap(OperatorWorkspace& ws, const Field& q, double n, Complex z0,
                                   double p, double tol = 1e-11) {
    CGOParams second;
    second.n = n;
    second.z0 = z0;
    second.p = p;
    second.kind = SolutionKind::second;
    CGOParams first_flipped = second;
    first_flipped.n = -n;
    first_flipped.kind = SolutionKind::first;
    CGOSolution g2 = solve_cgo(ws, q, second, tol);
    CGOSolution f1 = solve_cgo(ws, q, first_flipped, tol);
    const Grid& g = ws.grid();
    double gap = 0.0;
    for (std::size_t k : g.masked_indices())
        gap = std::max(gap, std::abs(std::conj(g2.f[k]) - f1.f[k]));
    return gap;
}

}  // namespace cgo2d
