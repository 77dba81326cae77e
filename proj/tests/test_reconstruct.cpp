// Boundary-data reconstruction of the potential at interior points, including
// the difference-of-potentials variant and the volume/boundary bridge check.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cgo2d/cgo.hpp"
#include "cgo2d/grid.hpp"
#include "cgo2d/operators.hpp"
#include "cgo2d/potentials.hpp"
#include "cgo2d/reconstruct.hpp"
#include "helpers.hpp"

using namespace cgo2d;

namespace {

OperatorWorkspace& shared_ws_128() {
    static Grid g = make_grid(128, 2);
    static OperatorWorkspace ws(g);
    return ws;
}

const ReconstructionPoint& point_at(const ReconstructionReport& rep, double n, Complex z0) {
    for (const ReconstructionPoint& pt : rep.points)
        if (pt.n == n && std::abs(pt.z0 - z0) < 1e-12) return pt;
    FAIL("requested point missing from report");
    return rep.points.front();
}

}  // namespace

TEST_CASE("reconstruction rejects centers on or outside the unit circle") {
    CauchyPair dummy;
    BoundaryGrid bg{8};
    dummy.trace.assign(8, Complex(0.0, 0.0));
    dummy.normal_deriv.assign(8, Complex(0.0, 0.0));
    REQUIRE_THROWS_AS(reconstruct_point(dummy, bg, 8.0, Complex(1.0, 0.0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(reconstruct_point(dummy, dummy, bg, 8.0, Complex(0.0, -1.2)),
                      std::invalid_argument);
}

TEST_CASE("boundary resolution tracks the oscillation frequency") {
    REQUIRE(reconstruction_boundary(8.0).m_nodes == 256);
    REQUIRE(reconstruction_boundary(16.0).m_nodes == 256);
    REQUIRE(reconstruction_boundary(32.0).m_nodes == 512);
    REQUIRE(reconstruction_boundary(64.0).m_nodes == 1024);
}

TEST_CASE("default center lattice is the interior 3x3 grid") {
    auto lattice = default_z0_lattice();
    REQUIRE(lattice.size() == 9);
    for (Complex z0 : lattice) {
        REQUIRE(std::abs(z0.real()) <= 0.3 + 1e-15);
        REQUIRE(std::abs(z0.imag()) <= 0.3 + 1e-15);
    }
}

TEST_CASE("zero potential reconstructs to zero") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential q = make_potential(ws.grid(), "zero");
    ReconstructionReport rep =
        reconstruct_grid(ws, q, {8.0, 16.0}, {Complex(0.0, 0.0), Complex(0.2, 0.1)});
    for (const ReconstructionPoint& pt : rep.points) {
        REQUIRE(pt.ok);
        REQUIRE(std::abs(pt.qhat) < 1e-6);
        REQUIRE(std::abs(pt.qref) == 0.0);
    }
}

TEST_CASE("bump lattice errors shrink in n with a tight volume/boundary bridge") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential q = make_potential(ws.grid(), "bump");
    ReconstructionReport rep =
        reconstruct_grid(ws, q, {8.0, 16.0, 32.0, 64.0}, default_z0_lattice());

    const double sup_expect[4] = {0.05411, 0.01324, 0.00427, 0.00195};
    const double l2_expect[4] = {0.04920, 0.01014, 0.00285, 0.00130};
    for (int t = 0; t < 4; ++t) {
        INFO("octave " << t);
        REQUIRE(rep.sup_error[t] == Catch::Approx(sup_expect[t]).margin(2e-4));
        REQUIRE(rep.l2_error[t] == Catch::Approx(l2_expect[t]).margin(2e-4));
    }
    for (int t = 1; t < 4; ++t) REQUIRE(rep.sup_error[t] < rep.sup_error[t - 1]);
    REQUIRE(rep.sup_error[3] <= 0.5 * rep.sup_error[0]);

    for (const ReconstructionPoint& pt : rep.points) {
        REQUIRE(pt.ok);
        REQUIRE(pt.bridge_rel < 1e-6);
    }
    REQUIRE(rep.points.size() == 36);
    REQUIRE(rep.runtime_seconds > 0.0);
}

TEST_CASE("reconstruction is linear in the potential amplitude") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Potential q = make_potential(g, "bump");
    Potential qs;
    qs.name = "bump-scaled";
    qs.values = q.values;
    for (Complex& v : qs.values) v *= 0.3;
    auto ref = q.reference;
    qs.reference = [ref](Complex z) { return 0.3 * ref(z); };

    const std::vector<Complex> z0s{Complex(0.0, 0.0), Complex(0.3, 0.0), Complex(-0.3, 0.3)};
    ReconstructionReport full = reconstruct_grid(ws, q, {16.0}, z0s);
    ReconstructionReport scaled = reconstruct_grid(ws, qs, {16.0}, z0s);
    for (std::size_t k = 0; k < z0s.size(); ++k) {
        const Complex a = 0.3 * full.points[k].qhat;
        const Complex b = scaled.points[k].qhat;
        REQUIRE(std::abs(a - b) / std::abs(a) < 0.01);
    }
}

TEST_CASE("closed-form reference solution is harmonic to stencil accuracy") {
    const double n = 4.0;
    const Complex z0(0.1, 0.2);
    auto u2 = [&](Complex z) {
        return std::exp(Complex(0.0, n) * std::conj((z - z0) * (z - z0)));
    };
    double errs[2];
    int t = 0;
    for (int n_side : {128, 256}) {
        Grid g = make_grid(n_side, 2);
        const double h = g.h();
        double worst = 0.0;
        for (int i = 1; i < g.n() - 1; ++i)
            for (int j = 1; j < g.n() - 1; ++j) {
                const Complex z = g.node(i, j);
                if (std::abs(z) >= 0.5) continue;
                const Complex lap = (u2(z + h) + u2(z - h) + u2(z + Complex(0.0, h)) +
                                     u2(z - Complex(0.0, h)) - 4.0 * u2(z)) /
                                    (h * h);
                worst = std::max(worst, std::abs(lap));
            }
        errs[t++] = worst;
    }
    REQUIRE(errs[0] == Catch::Approx(0.843026).margin(5e-3));
    REQUIRE(errs[0] / errs[1] > 3.5);
}

TEST_CASE("rough half-disc reconstructs more slowly than the smooth bump") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential q = make_potential(ws.grid(), "halfdisc");
    // Centers kept away from the discontinuity line Re z = 0.
    std::vector<Complex> z0s;
    for (double a : {-0.3, 0.3})
        for (double b : {-0.3, 0.0, 0.3}) z0s.emplace_back(a, b);
    ReconstructionReport rep = reconstruct_grid(ws, q, {8.0, 16.0, 32.0}, z0s);

    const double sup_expect[3] = {0.35958, 0.28275, 0.17487};
    const double bump_sup[3] = {0.05411, 0.01324, 0.00427};
    for (int t = 0; t < 3; ++t) {
        INFO("octave " << t);
        REQUIRE(rep.sup_error[t] == Catch::Approx(sup_expect[t]).margin(3e-4));
        REQUIRE(rep.sup_error[t] > bump_sup[t]);
    }
    for (int t = 1; t < 3; ++t) REQUIRE(rep.sup_error[t] < rep.sup_error[t - 1]);
    for (const ReconstructionPoint& pt : rep.points) REQUIRE(pt.ok);
}

TEST_CASE("difference mode with identical potentials recovers zero") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential q1 = make_potential(ws.grid(), "bump");
    Potential q2 = make_potential(ws.grid(), "bump");
    ReconstructionReport rep =
        reconstruct_grid(ws, q1, {16.0}, {Complex(0.0, 0.0)}, 4.0, 1e-10, &q2);
    const ReconstructionPoint& pt = rep.points.front();
    REQUIRE(pt.ok);
    REQUIRE(std::abs(pt.qref) == 0.0);
    REQUIRE(std::abs(pt.qhat) < 1e-4);
}

TEST_CASE("two-pair functional matches the closed form when one potential vanishes") {
    OperatorWorkspace& ws = shared_ws_128();
    const Grid& g = ws.grid();
    Potential q = make_potential(g, "bump");
    const double n = 16.0;
    const Complex z0(0.2, 0.1);

    CGOParams params;
    params.n = n;
    params.z0 = z0;
    CGOSolution sol = solve_cgo(ws, q.values, params, 1e-10);
    CGOBoundaryData data1 = cgo_cauchy_pair(ws, q.values, sol.f, n, z0);
    const Complex closed = reconstruct_point(data1.pair, data1.bgrid, n, z0);

    // Second-kind solution of the zero potential: remainder vanishes, f = 1.
    Field zeroq = g.zero_field();
    Field one(g.size(), Complex(1.0, 0.0));
    CGOBoundaryData data2 =
        cgo_cauchy_pair(ws, zeroq, one, n, z0, SolutionKind::second);
    const Complex general = reconstruct_point(data1.pair, data2.pair, data1.bgrid, n, z0);
    REQUIRE(std::abs(general - closed) < 1e-12);
}

TEST_CASE("difference of two bumps is recovered pointwise") {
    OperatorWorkspace& ws = shared_ws_128();
    Potential q1 = make_potential(ws.grid(), "bump");
    Potential q2 = make_potential(ws.grid(), "offset");
    const Complex a(0.0, 0.0), b(0.2, 0.2);
    ReconstructionReport rep =
        reconstruct_grid(ws, q1, {16.0, 32.0}, {a, b}, 4.0, 1e-10, &q2);

    for (Complex z0 : {a, b}) {
        const ReconstructionPoint& lo = point_at(rep, 16.0, z0);
        const ReconstructionPoint& hi = point_at(rep, 32.0, z0);
        REQUIRE(lo.ok);
        REQUIRE(hi.ok);
        REQUIRE(std::abs(lo.qref - (q1.reference(z0) - q2.reference(z0))) < 1e-14);
        REQUIRE(hi.abs_err < lo.abs_err);
        REQUIRE(lo.bridge_rel < 1e-4);
        REQUIRE(hi.bridge_rel < 1e-4);
    }
    REQUIRE(point_at(rep, 32.0, b).abs_err <= 0.01);
}

TEST_CASE("a non-contractive point is recorded, not thrown") {
    Grid g = make_grid(64, 2);
    OperatorWorkspace ws(g);
    Potential q = make_potential(g, "bump");
    for (Complex& v : q.values) v *= 400.0;
    ReconstructionReport rep = reconstruct_grid(ws, q, {8.0}, {Complex(0.0, 0.0)});
    REQUIRE(rep.points.size() == 1);
    REQUIRE_FALSE(rep.points.front().ok);
    REQUIRE_FALSE(rep.points.front().error.empty());
    REQUIRE(rep.sup_error.front() == 0.0);
}
