// Acceptance gate: eight end-to-end behavior checks, one summary line each.
// Exit code is nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "cgo2d/cgo.hpp"
#include "cgo2d/cutoff.hpp"
#include "cgo2d/forward.hpp"
#include "cgo2d/grid.hpp"
#include "cgo2d/operators.hpp"
#include "cgo2d/potentials.hpp"
#include "cgo2d/reconstruct.hpp"
#include "cgo2d/stationary_phase.hpp"

using namespace cgo2d;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct SubCheck {
    double measured = 0.0;
    double bound = 0.0;
    bool pass() const { return measured <= bound; }
    double severity() const {
        if (bound > 0.0) return measured / bound;
        return measured == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
};

/// Prints one line; the displayed pair is the sub-check closest to (or past)
/// its bound, so a reader sees the binding quantity.
void report(int num, const std::string& text, const std::vector<SubCheck>& checks) {
    bool pass = true;
    const SubCheck* binding = &checks.front();
    for (const SubCheck& c : checks) {
        pass = pass && c.pass();
        if (c.severity() > binding->severity()) binding = &c;
    }
    if (!pass) ++g_failures;
    std::printf("[%s] criterion %d: %s (measured %.6g, bound %.6g)\n", pass ? "PASS" : "FAIL",
                num, text.c_str(), binding->measured, binding->bound);
    std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. Discrete spectrum of the sampled oscillatory kernel versus the
//    closed-form transform at frequencies up to n/2, on the 512-wide padded
//    lattice, within 0.5% relative error and ten seconds of runtime.
void criterion1() {
    const auto t0 = Clock::now();
    Grid g = make_grid(256, 2);
    const int N = g.n();
    double worst = 0.0;
    for (double n : {4.0, 16.0}) {
        Field dft = OperatorWorkspace::sampled_kernel_dft(g, n);
        for (int a = 0; a < N; ++a) {
            for (int b = 0; b < N; ++b) {
                const double x1 = dft_frequency(a, N, g.h());
                const double x2 = dft_frequency(b, N, g.h());
                if (x1 * x1 + x2 * x2 > n * n / 4.0) continue;
                const Complex ref = 2.0 * kPi * gaussian_kernel_hat(n, Complex(x1, x2));
                worst = std::max(worst,
                                 std::abs(dft[static_cast<std::size_t>(a) * N + b] - ref) /
                                     std::abs(ref));
            }
        }
    }
    const double secs = seconds_since(t0);
    report(1, "sampled kernel spectrum matches the closed form at low frequency",
           {{worst, 0.005}, {secs, 10.0}});
}

// 2. The smoothing operator preserves L2 norms of all three potential
//    fixtures within 2% at grid 256 pad 2, and the defect shrinks at pad 3.
void criterion2() {
    const char* names[3] = {"bump", "offset", "halfdisc"};
    double defect[2][3][2];
    for (int pi = 0; pi < 2; ++pi) {
        Grid g = make_grid(256, pi + 2);
        OperatorWorkspace ws(g);
        for (int fi = 0; fi < 3; ++fi) {
            Potential pot = make_potential(g, names[fi]);
            int ni = 0;
            for (double n : {8.0, 32.0}) {
                Field tf = ws.tn_apply(pot.values, n);
                defect[pi][fi][ni++] =
                    std::abs(l2_norm_padded(g, tf) / lp_norm(g, pot.values, 2.0) - 1.0);
            }
        }
    }
    std::vector<SubCheck> checks;
    double worst = 0.0;
    bool tightens = true;
    for (int fi = 0; fi < 3; ++fi)
        for (int ni = 0; ni < 2; ++ni) {
            worst = std::max(worst, defect[0][fi][ni]);
            tightens = tightens && defect[1][fi][ni] < defect[0][fi][ni];
        }
    checks.push_back({worst, 0.02});
    checks.push_back({tightens ? 0.0 : 1.0, 0.5});  // padding must tighten every defect
    report(2, "oscillatory smoothing is an L2 isometry on all fixtures", checks);
}

// 3. Smoothing error strictly decreasing over four octaves with at least the
//    recorded final-to-first ratio.  The 0.17 threshold was fixed from the
//    recorded convergence study of this operator at the same resolution.
void criterion3() {
    Grid g = make_grid(256, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");
    auto rows = convergence_table(ws, bump.values, {8.0, 16.0, 32.0, 64.0});
    bool decreasing = true;
    for (std::size_t t = 1; t < rows.size(); ++t)
        decreasing = decreasing && rows[t].second < rows[t - 1].second;
    const double ratio = rows.back().second / rows.front().second;
    report(3, "smoothing error falls strictly over four octaves",
           {{ratio, 0.17}, {decreasing ? 0.0 : 1.0, 0.5}});
}

// 4. The pointwise inequality suite: mollifier slope, cutoff support measure
//    and quotient, oscillatory-phase smoothness bound, and singular moments.
void criterion4() {
    Grid g = make_grid(128, 2);
    std::vector<SubCheck> checks;

    double maxd = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const double x = -1.0 + 5.0 * t / 9999.0;
        maxd = std::max(maxd,
                        std::abs((smooth_step(x + 1e-5) - smooth_step(x - 1e-5)) / 2e-5));
    }
    checks.push_back({maxd, 8.0 * std::exp(1.0)});

    CutoffParams cp{Complex(0.2, 0.1), 0.3};
    Field h = cutoff(cp, g);
    double measure = 0.0, max_ratio = 0.0, hole = 0.0;
    for (std::size_t k : g.masked_indices()) {
        const int i = static_cast<int>(k) / g.n(), j = static_cast<int>(k) % g.n();
        const Complex z = g.node(i, j);
        if (std::abs(h[k].real() - 1.0) > 1e-14) measure += g.h() * g.h();
        if (std::abs(z - cp.z0) < cp.delta / 2) hole = std::max(hole, std::abs(h[k]));
        if (std::abs(z - cp.z0) > 0)
            max_ratio = std::max(max_ratio, std::abs(h[k]) / std::abs(z - cp.z0));
    }
    checks.push_back({measure, 2.0 * kPi * cp.delta + g.h() * g.h()});
    checks.push_back({hole, 1e-14});
    checks.push_back({max_ratio, 2.0 / cp.delta});

    for (double n : {2.0, 4.0, 8.0}) {
        for (double alpha : {1.0 / 3.0, 0.5}) {
            Field full = phase_field(n, Complex(0.3, -0.2), g, +1);
            Field masked = g.zero_field();
            for (std::size_t k : g.masked_indices()) masked[k] = full[k];
            const double est = holder_norm_estimate(g, masked, alpha, 4000, 7);
            checks.push_back({est, 11.0 * std::pow(n, alpha)});
        }
    }

    const Complex z0s[5] = {Complex(0, 0), Complex(0.3, 0.1), Complex(-0.5, 0.0),
                            Complex(0.2, -0.6), Complex(0.0, 0.7)};
    for (double beta : {0.5, 1.0, 1.5}) {
        for (Complex z0 : z0s) {
            Field w = singular_weight_field(g, z0, beta);
            checks.push_back(
                {integrate_disc(g, w).real(), 2.0 * kPi / (2.0 - beta) * 1.01});
        }
    }
    report(4, "every sampled inequality of the estimate suite holds", checks);
}

// 5. Fixed-point construction of the oscillating solutions: contraction,
//    residual, three-column decay over four octaves, and a second-order PDE
//    stencil residual under grid refinement at fixed frequency.
void criterion5() {
    Grid g = make_grid(128, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");

    double worst_contraction = 0.0, worst_residual = 0.0;
    for (double n : {8.0, 16.0, 32.0, 64.0}) {
        CGOParams params;
        params.n = n;
        params.p = 4.0;
        CGOSolution sol = solve_cgo(ws, bump.values, params, 1e-11);
        worst_contraction = std::max(worst_contraction, sol.empirical_contraction);
        worst_residual = std::max(worst_residual, sol.fixed_point_residual);
    }

    auto rows = remainder_decay(ws, bump.values, {8.0, 16.0, 32.0, 64.0},
                                default_z0_lattice(), 4.0, 1e-11);
    bool decreasing = true;
    for (std::size_t t = 1; t < rows.size(); ++t)
        decreasing = decreasing && rows[t].sup_holder < rows[t - 1].sup_holder &&
                     rows[t].sup_dbar_inf < rows[t - 1].sup_dbar_inf &&
                     rows[t].sup_d_p < rows[t - 1].sup_d_p;

    double eps[2];
    int t = 0;
    for (int n_side : {128, 256}) {
        Grid gr = make_grid(n_side, 2);
        OperatorWorkspace wr(gr);
        Potential pot = make_potential(gr, "bump");
        CGOParams params;
        params.n = 4.0;
        CGOSolution sol = solve_cgo(wr, pot.values, params, 1e-11);
        eps[t++] = pde_stencil_residual(gr, pot.values, assemble_solution(gr, sol));
    }
    const double pde_ratio = eps[0] / eps[1];

    // Refinement must improve the stencil residual by at least 3x; expressed
    // as required-over-achieved so that <= 1 means pass.
    report(5, "oscillating-solution construction contracts, converges, and decays",
           {{worst_contraction, 0.5},
            {worst_residual, 1e-10},
            {decreasing ? 0.0 : 1.0, 0.5},
            {3.0 / pde_ratio, 1.0}});
}

// 6. Volume and boundary sides of the pairing identity agree within 0.5% of
//    scale for the constant-potential manufactured fixture and the bump, and
//    the two-data reciprocity gap of a shared potential is below 0.5%.
void criterion6() {
    Grid g = make_grid(128, 2);
    BoundaryGrid bg{256};
    CauchyPair p2;
    p2.trace.resize(bg.m_nodes);
    p2.normal_deriv.resize(bg.m_nodes);
    for (int k = 0; k < bg.m_nodes; ++k) {
        p2.trace[k] = Complex(std::cos(bg.angle(k)), 0.0);
        p2.normal_deriv[k] = Complex(std::cos(bg.angle(k)), 0.0);
    }
    Field u2c = g.sample([](Complex z) { return Complex(z.real(), 0.0); });
    Field zero = g.zero_field();
    auto dirichlet = [](double th) { return Complex(std::exp(std::cos(th)), 0.0); };

    PolarSolution um = solve_dirichlet(
        [](double, double) { return Complex(-1.0, 0.0); }, dirichlet, 128, 256);
    Field qm = g.sample_disc([](Complex) { return Complex(-1.0, 0.0); });
    OrthogonalityGap gm = orthogonality_gap(g, qm, zero, resample_to_grid(um, g), u2c,
                                            cauchy_pair(um), p2, bg);
    const double rel_m = std::abs(gm.volume - gm.boundary) /
                         std::max(std::abs(gm.volume), lp_norm(g, qm, 2.0));

    Potential qb = make_potential(g, "bump");
    auto qb_fn = [](double r, double th) {
        return Complex(bump_value(std::polar(r, th)), 0.0);
    };
    PolarSolution ub = solve_dirichlet(qb_fn, dirichlet, 128, 256);
    OrthogonalityGap gb = orthogonality_gap(g, qb.values, zero, resample_to_grid(ub, g), u2c,
                                            cauchy_pair(ub), p2, bg);
    const double rel_b = std::abs(gb.volume - gb.boundary) /
                         std::max(std::abs(gb.volume), lp_norm(g, qb.values, 2.0));

    PolarSolution ub2 = solve_dirichlet(
        qb_fn, [](double th) { return Complex(std::cos(th), 0.0); }, 128, 256);
    const double recip = reciprocity_gap(cauchy_pair(ub), cauchy_pair(ub2), ub.boundary());

    report(6, "volume and boundary integrals of the pairing identity agree",
           {{rel_m, 0.005}, {rel_b, 0.005}, {recip, 0.005}});
}

// 7. Full pipeline: bump potential, 3x3 interior lattice, four octaves of
//    frequency; sup error at least halves from first to last octave, the
//    volume/boundary bridge holds within 1% at every point, five-minute cap.
void criterion7() {
    Grid g = make_grid(128, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");
    ReconstructionReport rep =
        reconstruct_grid(ws, bump, {8.0, 16.0, 32.0, 64.0}, default_z0_lattice());

    bool all_ok = true;
    double worst_bridge = 0.0;
    for (const ReconstructionPoint& pt : rep.points) {
        all_ok = all_ok && pt.ok;
        worst_bridge = std::max(worst_bridge, pt.bridge_rel);
    }
    const double sup_ratio = rep.sup_error.back() / rep.sup_error.front();
    report(7, "boundary data recover the potential across the interior lattice",
           {{sup_ratio, 0.5},
            {worst_bridge, 0.01},
            {all_ok ? 0.0 : 1.0, 0.5},
            {rep.runtime_seconds, 300.0}});
}

// 8. The zero potential is exact end to end: the fixed-point remainder is
//    identically zero and every reconstructed value is below 1e-6.
void criterion8() {
    Grid g = make_grid(128, 2);
    OperatorWorkspace ws(g);
    Potential zero = make_potential(g, "zero");

    CGOParams params;
    params.n = 8.0;
    CGOSolution sol = solve_cgo(ws, zero.values, params, 1e-10);
    double max_rem = 0.0;
    for (const Complex& v : sol.remainder) max_rem = std::max(max_rem, std::abs(v));

    ReconstructionReport rep =
        reconstruct_grid(ws, zero, {8.0, 16.0}, default_z0_lattice());
    double worst_qhat = 0.0;
    bool all_ok = true;
    for (const ReconstructionPoint& pt : rep.points) {
        worst_qhat = std::max(worst_qhat, std::abs(pt.qhat));
        all_ok = all_ok && pt.ok;
    }
    report(8, "the zero potential is recovered exactly",
           {{max_rem, 0.0}, {worst_qhat, 1e-6}, {all_ok ? 0.0 : 1.0, 0.5}});
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    return g_failures == 0 ? 0 : 1;
}
