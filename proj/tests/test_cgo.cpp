// Fixed-point construction of the oscillating solutions and its diagnostics.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "cgo2d/cgo.hpp"
#include "cgo2d/field_io.hpp"
#include "cgo2d/operators.hpp"
#include "cgo2d/potentials.hpp"
#include "cgo2d/reconstruct.hpp"
#include "helpers.hpp"

using namespace cgo2d;
using test_util::max_abs_masked;

namespace {

OperatorWorkspace& shared_ws_128() {
    static Grid g = make_grid(128, 2);
    static OperatorWorkspace ws(g);
    return ws;
}

}  // namespace

TEST_CASE("solver parameters enforce their ranges") {
    CGOParams p;
    p.n = 8.0;
    p.z0 = Complex(0.2, 0.1);
    p.p = 4.0;
    REQUIRE_NOTHROW(p.validate());
    REQUIRE(p.alpha() == Catch::Approx(0.5));

    CGOParams bad_n = p;
    bad_n.n = 1.0;
    REQUIRE_THROWS_AS(bad_n.validate(), std::invalid_argument);
    bad_n.n = -8.0;  // negative frequencies are the conjugate family and are legal
    REQUIRE_NOTHROW(bad_n.validate());

    CGOParams bad_z0 = p;
    bad_z0.z0 = Complex(1.0, 0.0);
    REQUIRE_THROWS_AS(bad_z0.validate(), std::invalid_argument);

    CGOParams bad_p = p;
    bad_p.p = 2.0;
    REQUIRE_THROWS_AS(bad_p.validate(), std::invalid_argument);
}

TEST_CASE("fixed-point operator is linear and annihilates the zero potential") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Potential bump = make_potential(g, "bump");
    CGOParams params;
    params.n = 8.0;

    std::mt19937_64 rng(3);
    Field a = random_smooth_field(g, 5, rng), b = random_smooth_field(g, 5, rng);
    Field ab(g.size());
    for (std::size_t k = 0; k < ab.size(); ++k) ab[k] = 2.0 * a[k] + Complex(0, 1) * b[k];
    Field sa = apply_s(ws, a, bump.values, params);
    Field sb = apply_s(ws, b, bump.values, params);
    Field sab = apply_s(ws, ab, bump.values, params);
    double gap = 0.0;
    for (std::size_t k = 0; k < ab.size(); ++k)
        gap = std::max(gap, std::abs(2.0 * sa[k] + Complex(0, 1) * sb[k] - sab[k]));
    REQUIRE(gap < 1e-13);

    Field zeroq = g.zero_field();
    Field s0 = apply_s(ws, a, zeroq, params);
    for (const Complex& v : s0) REQUIRE(v == Complex(0.0, 0.0));
}

TEST_CASE("probed operator norm certifies the contraction") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential bump = make_potential(ws.grid(), "bump");
    CGOParams params;
    params.n = 8.0;
    double norm = s_operator_norm_probe(ws, bump.values, params);
    REQUIRE(norm < 0.5);
    REQUIRE(norm == Catch::Approx(0.00732).margin(0.002));  // recorded probe level
}

TEST_CASE("bump solve matches the recorded contraction, residual, and remainder size") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Potential bump = make_potential(g, "bump");

    const double expected_sup[4] = {0.020915, 0.011327, 0.005850, 0.002944};
    const double expected_contraction[4] = {0.006255, 0.003278, 0.001960, 0.001039};
    int t = 0;
    double prev_sup = std::numeric_limits<double>::infinity();
    for (double n : {8.0, 16.0, 32.0, 64.0}) {
        CGOParams params;
        params.n = n;
        CGOSolution sol = solve_cgo(ws, bump.values, params, 1e-11);
        REQUIRE(sol.empirical_contraction ==
                Catch::Approx(expected_contraction[t]).margin(1e-4));
        REQUIRE(sol.fixed_point_residual <= 1e-12);
        double sup = max_abs_masked(g, sol.remainder);
        REQUIRE(sup == Catch::Approx(expected_sup[t]).margin(2e-4));
        REQUIRE(sup < prev_sup);
        prev_sup = sup;
        // The remainder field is exactly the iterate minus one.
        for (std::size_t k : g.masked_indices())
            REQUIRE(sol.remainder[k] == sol.f[k] - Complex(1.0, 0.0));
        ++t;
    }
}

TEST_CASE("zero potential converges in one step to the constant solution") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Field zeroq = g.zero_field();
    CGOParams params;
    params.n = 8.0;
    CGOSolution sol = solve_cgo(ws, zeroq, params, 1e-11);
    REQUIRE(sol.iterations == 1);
    REQUIRE(sol.fixed_point_residual == 0.0);
    REQUIRE(max_abs_masked(g, sol.remainder) == 0.0);
}

TEST_CASE("fixed point is independent of the starting guess") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Potential bump = make_potential(g, "bump");
    CGOParams params;
    params.n = 8.0;
    const double tol = 1e-11;
    CGOSolution from_one = solve_cgo(ws, bump.values, params, tol);
    Field zero_start = g.zero_field();
    CGOSolution from_zero = solve_cgo(ws, bump.values, params, tol, 200, &zero_start);
    double gap = 0.0;
    for (std::size_t k : g.masked_indices())
        gap = std::max(gap, std::abs(from_one.f[k] - from_zero.f[k]));
    REQUIRE(gap <= 10.0 * tol);
}

TEST_CASE("iteration steps contract geometrically at the certified rate") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential bump = make_potential(ws.grid(), "bump");
    CGOParams params;
    params.n = 8.0;
    CGOSolution sol = solve_cgo(ws, bump.values, params, 1e-11);
    REQUIRE(sol.step_diffs.size() >= 3);
    for (std::size_t t = 1; t < sol.step_diffs.size(); ++t)
        REQUIRE(sol.step_diffs[t] / sol.step_diffs[t - 1] <=
                sol.empirical_contraction + 0.05);
}

TEST_CASE("solution iterate stays inside the Holder ball of radius 2") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Potential bump = make_potential(g, "bump");
    for (double n : {8.0, 32.0}) {
        CGOParams params;
        params.n = n;
        CGOSolution sol = solve_cgo(ws, bump.values, params, 1e-11);
        Field masked = g.zero_field();
        for (std::size_t k : g.masked_indices()) masked[k] = sol.f[k];
        REQUIRE(holder_norm_estimate(g, masked, 0.5) <= 2.05);
    }
}

TEST_CASE("overdriven potential raises the non-contractive error") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential bump = make_potential(ws.grid(), "bump");
    Field big = bump.values;
    for (Complex& v : big) v *= 400.0;
    CGOParams params;
    params.n = 2.0;
    try {
        solve_cgo(ws, big, params, 1e-11, 60);
        FAIL("expected NonContractiveError");
    } catch (const NonContractiveError& e) {
        REQUIRE(e.measured() >= 1.0);
    }
}

TEST_CASE("exhausting the iteration budget raises the no-convergence error") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential bump = make_potential(ws.grid(), "bump");
    CGOParams params;
    params.n = 8.0;
    REQUIRE_THROWS_AS(solve_cgo(ws, bump.values, params, 1e-15, 2), NoConvergenceError);
}

TEST_CASE("remainder decay table matches the recorded norms and decreases everywhere") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential bump = make_potential(ws.grid(), "bump");
    auto rows = remainder_decay(ws, bump.values, {8.0, 16.0, 32.0, 64.0}, default_z0_lattice(),
                                4.0, 1e-11);
    REQUIRE(rows.size() == 4);
    const double expected_holder[4] = {0.07704, 0.04053, 0.02070, 0.01372};
    const double expected_dbar[4] = {0.08738, 0.06419, 0.04595, 0.03216};
    const double expected_dp[4] = {0.05439, 0.03247, 0.01899, 0.01091};
    for (int t = 0; t < 4; ++t) {
        REQUIRE(rows[t].sup_holder == Catch::Approx(expected_holder[t]).margin(1e-3));
        REQUIRE(rows[t].sup_dbar_inf == Catch::Approx(expected_dbar[t]).margin(2e-4));
        REQUIRE(rows[t].sup_d_p == Catch::Approx(expected_dp[t]).margin(2e-4));
        if (t > 0) {
            REQUIRE(rows[t].sup_holder < rows[t - 1].sup_holder);
            REQUIRE(rows[t].sup_dbar_inf < rows[t - 1].sup_dbar_inf);
            REQUIRE(rows[t].sup_d_p < rows[t - 1].sup_d_p);
        }
    }
    // Envelope with the power law calibrated on the first row: exponent
    // -2/(p(2p+1)) with p = 4.
    const double expo = -2.0 / (4.0 * 9.0);
    const double c = rows[0].sup_holder / std::pow(rows[0].n, expo);
    for (const DecayRow& r : rows) REQUIRE(r.sup_holder <= c * std::pow(r.n, expo) * 1.001);

    std::string dir = test_util::scratch_dir("decay");
    write_decay_csv(dir + "/decay.csv", rows, {{"grid", "128"}});
    std::string text = test_util::read_file(dir + "/decay.csv");
    REQUIRE(text.rfind("# grid = 128\nn,sup_holder,sup_dbar_inf,sup_d_p\n8,", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("assembled solution satisfies the PDE under grid refinement") {
    double eps[2];
    int t = 0;
    for (int n_side : {128, 256}) {
        Grid g = make_grid(n_side, 2);
        OperatorWorkspace ws(g);
        Potential bump = make_potential(g, "bump");
        CGOParams params;
        params.n = 4.0;
        CGOSolution sol = solve_cgo(ws, bump.values, params, 1e-11);
        Field u = assemble_solution(g, sol);
        eps[t++] = pde_stencil_residual(g, bump.values, u);
    }
    REQUIRE(eps[1] <= 0.5 * eps[0]);
    REQUIRE(eps[0] / eps[1] == Catch::Approx(3.134).margin(0.15));
}

TEST_CASE("stencil residual rejects an identically vanishing product") {
    Grid g = make_grid(32, 2);
    Field zero = g.zero_field();
    Field u(g.size(), Complex(1.0, 0.0));
    REQUIRE_THROWS_AS(pde_stencil_residual(g, zero, u), std::invalid_argument);
}

TEST_CASE("factored first-order residual identifies the phase pairing") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Potential bump = make_potential(g, "bump");
    for (double n : {8.0, 16.0}) {
        CGOParams params;
        params.n = n;
        CGOSolution sol = solve_cgo(ws, bump.values, params, 1e-11);
        double matched =
            factored_pde_residual(g, bump.values, sol.f, n, params.z0, SolutionKind::first);
        double swapped =
            factored_pde_residual(g, bump.values, sol.f, n, params.z0, SolutionKind::second);
        REQUIRE(swapped / matched >= 10.0);
    }
}

TEST_CASE("oscillatory integration by parts holds away from the center") {
    double vals[2];
    int t = 0;
    for (int n_side : {128, 256}) {
        Grid g = make_grid(n_side, 2);
        OperatorWorkspace ws(g);
        Field gg = g.sample_disc(
            [](Complex z) { return Complex(bump_value(z, Complex(0.45, 0.0), 0.3), 0.0); });
        vals[t] = integration_by_parts_check(ws, gg, 8.0, Complex(-0.4, 0.0), +1);
        REQUIRE(vals[t] ==
                Catch::Approx(integration_by_parts_check(ws, gg, 8.0, Complex(-0.4, 0.0), -1))
                    .epsilon(1e-10));
        ++t;
    }
    REQUIRE(vals[0] < 0.05);
    REQUIRE(vals[1] < 0.6 * vals[0]);  // shrinks as the grid refines
}

TEST_CASE("integration by parts rejects data supported at the center") {
    Grid g = make_grid(64, 2);
    OperatorWorkspace ws(g);
    Field gg = g.sample_disc([](Complex z) { return Complex(bump_value(z), 0.0); });
    REQUIRE_THROWS_AS(integration_by_parts_check(ws, gg, 8.0, Complex(0.0, 0.0), +1),
                      std::invalid_argument);
}

TEST_CASE("second-kind solve at n is the conjugate of the first kind at -n") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential bump = make_potential(ws.grid(), "bump");
    REQUIRE(variant_symmetry_gap(ws, bump.values, 8.0, Complex(0.0, 0.0), 4.0) < 1e-12);
}

TEST_CASE("assembled ansatz equals phase times iterate") {
    Grid g = make_grid(64, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");
    CGOParams params;
    params.n = 8.0;
    params.z0 = Complex(0.2, -0.1);
    CGOSolution sol = solve_cgo(ws, bump.values, params, 1e-11);
    Field u = assemble_solution(g, sol);
    for (std::size_t k : {g.index(80, 70), g.index(64, 64), g.index(50, 58)}) {
        const int i = static_cast<int>(k) / g.n(), j = static_cast<int>(k) % g.n();
        const Complex psi = (g.node(i, j) - params.z0) * (g.node(i, j) - params.z0);
        const Complex expected = std::exp(Complex(0.0, params.n) * psi) * sol.f[k];
        REQUIRE(std::abs(u[k] - expected) < 1e-13 * std::abs(expected));
    }
}

TEST_CASE("mollified potential fixture vanishes near its center and stays eps-close") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Potential bump = make_potential(g, "bump");
    const Complex z0(0.3, 0.0);
    const double sup_q = max_abs_masked(g, bump.values);
    for (double eps : {0.5, 0.8}) {
        MollifiedPotential mp = mollified_potential(g, bump.values, z0, eps, 4.0);
        const double expected_delta =
            std::pow(eps / (2.0 * std::pow(kPi, 0.25) * sup_q), 2.0);
        REQUIRE(mp.delta == Catch::Approx(expected_delta).epsilon(1e-9));
        int hole_nodes = 0;
        for (std::size_t k : g.masked_indices()) {
            const int i = static_cast<int>(k) / g.n(), j = static_cast<int>(k) % g.n();
            if (std::abs(g.node(i, j) - z0) < mp.delta / 2) {
                ++hole_nodes;
                REQUIRE(mp.values[k] == Complex(0.0, 0.0));
            }
        }
        REQUIRE(hole_nodes > 0);
        Field diff = bump.values;
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= mp.values[k];
        REQUIRE(lp_norm(g, diff, 4.0) <= eps);
    }
}
