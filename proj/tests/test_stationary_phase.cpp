// Oscillatory smoothing operator: isometry, pointwise concentration, and the
// sampled functional over evaluation-point lattices.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "cgo2d/field_io.hpp"
#include "cgo2d/operators.hpp"
#include "cgo2d/potentials.hpp"
#include "cgo2d/stationary_phase.hpp"
#include "helpers.hpp"

using namespace cgo2d;

TEST_CASE("phase field is unimodular and equals 1 at its center") {
    Grid g = make_grid(64, 2);
    const Complex z0 = g.node(70, 61);  // an interior node, so the center is exact
    Field ph = phase_field(8.0, z0, g, +1);
    auto [i0, j0] = g.nearest(z0);
    REQUIRE(ph[g.index(i0, j0)] == Complex(1.0, 0.0));
    for (std::size_t k : g.masked_indices())
        REQUIRE(std::abs(ph[k]) == Catch::Approx(1.0).epsilon(1e-12));
    Field mh = phase_field(8.0, z0, g, -1);
    for (std::size_t k : g.masked_indices())
        REQUIRE(std::abs(mh[k] - std::conj(ph[k])) < 1e-15);
    REQUIRE_THROWS_AS(phase_field(8.0, z0, g, 2), std::invalid_argument);
}

TEST_CASE("oscillatory smoothing rejects nonpositive frequencies") {
    Grid g = make_grid(32, 2);
    OperatorWorkspace ws(g);
    Field f = g.zero_field();
    REQUIRE_THROWS_AS(ws.tn_apply(f, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ws.tn_apply(f, -4.0), std::invalid_argument);
}

TEST_CASE("oscillatory smoothing is linear to machine precision") {
    Grid g = make_grid(64, 2);
    OperatorWorkspace ws(g);
    std::mt19937_64 rng(7);
    Field a = random_smooth_field(g, 5, rng), b = random_smooth_field(g, 5, rng);
    Field ab(g.size());
    for (std::size_t k = 0; k < ab.size(); ++k) ab[k] = 2.0 * a[k] + Complex(0, 1) * b[k];
    Field ta = ws.tn_apply(a, 8.0), tb = ws.tn_apply(b, 8.0), tab = ws.tn_apply(ab, 8.0);
    double gap = 0.0;
    for (std::size_t k = 0; k < ab.size(); ++k)
        gap = std::max(gap, std::abs(2.0 * ta[k] + Complex(0, 1) * tb[k] - tab[k]));
    REQUIRE(gap < 1e-12);
}

TEST_CASE("L2 isometry holds within 2% for all three fixtures and tightens with padding") {
    double pad2[3][2], pad3[3][2];
    const char* names[3] = {"bump", "offset", "halfdisc"};
    for (int pad : {2, 3}) {
        Grid g = make_grid(256, pad);
        OperatorWorkspace ws(g);
        for (int fi = 0; fi < 3; ++fi) {
            Potential pot = make_potential(g, names[fi]);
            int ni = 0;
            for (double n : {8.0, 32.0}) {
                Field tf = ws.tn_apply(pot.values, n);
                double defect =
                    std::abs(l2_norm_padded(g, tf) / lp_norm(g, pot.values, 2.0) - 1.0);
                REQUIRE(defect <= 0.02);
                (pad == 2 ? pad2 : pad3)[fi][ni++] = defect;
            }
        }
    }
    for (int fi = 0; fi < 3; ++fi)
        for (int ni = 0; ni < 2; ++ni) REQUIRE(pad3[fi][ni] < pad2[fi][ni]);
}

TEST_CASE("isometry defect falls as the grid refines at fixed frequency") {
    double prev = std::numeric_limits<double>::infinity();
    for (int n_side : {64, 128, 256}) {
        Grid g = make_grid(n_side, 2);
        OperatorWorkspace ws(g);
        Potential pot = make_potential(g, "bump");
        Field tf = ws.tn_apply(pot.values, 32.0);
        double defect = std::abs(l2_norm_padded(g, tf) / lp_norm(g, pot.values, 2.0) - 1.0);
        REQUIRE(defect < prev);
        prev = defect;
    }
}

TEST_CASE("convergence table reproduces the recorded error columns") {
    Grid g = make_grid(256, 2);
    OperatorWorkspace ws(g);

    Potential bump = make_potential(g, "bump");
    auto rows = convergence_table(ws, bump.values, {8.0, 16.0, 32.0, 64.0});
    const double expected_bump[4] = {0.145685, 0.084097, 0.046186, 0.024413};
    for (int t = 0; t < 4; ++t)
        REQUIRE(rows[t].second == Catch::Approx(expected_bump[t]).margin(5e-4));
    for (int t = 1; t < 4; ++t) REQUIRE(rows[t].second < rows[t - 1].second);

    Potential half = make_potential(g, "halfdisc");
    auto hrows = convergence_table(ws, half.values, {8.0, 16.0, 32.0, 64.0});
    const double expected_half[4] = {0.499705, 0.434613, 0.373375, 0.319537};
    for (int t = 0; t < 4; ++t)
        REQUIRE(hrows[t].second == Catch::Approx(expected_half[t]).margin(5e-4));
    for (int t = 1; t < 4; ++t) REQUIRE(hrows[t].second < hrows[t - 1].second);
}

TEST_CASE("convergence table demands an increasing frequency list and zeroes on zero input") {
    Grid g = make_grid(64, 2);
    OperatorWorkspace ws(g);
    Field zero = g.zero_field();
    REQUIRE_THROWS_AS(convergence_table(ws, zero, {16.0, 8.0}), std::invalid_argument);
    auto rows = convergence_table(ws, zero, {8.0, 16.0});
    REQUIRE(rows[0].second == 0.0);
    REQUIRE(rows[1].second == 0.0);
}

TEST_CASE("smoothing concentrates toward the point value as frequency grows") {
    Grid g = make_grid(256, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");
    auto [i0, j0] = g.nearest(Complex(0.0, 0.0));
    double err16 = 0.0, err64 = 0.0;
    for (double n : {16.0, 64.0}) {
        Field tf = ws.tn_apply(bump.values, n);
        double e = std::abs(tf[g.index(i0, j0)] - bump.reference(Complex(0.0, 0.0)));
        (n == 16.0 ? err16 : err64) = e;
    }
    REQUIRE(err64 < err16);
    REQUIRE(err64 < 1e-4);
}

TEST_CASE("evaluation-point lattice meets its sample-count floor") {
    Grid g = make_grid(128, 2);
    Z0Sample dense = make_z0_sample(g);  // default floor of 200
    REQUIRE(dense.indices.size() >= 200);
    REQUIRE(dense.stride == 4);
    REQUIRE(dense.indices.size() == 805);
    REQUIRE(dense.weight == Catch::Approx(std::pow(dense.stride * g.h(), 2.0)));
    for (std::size_t k : dense.indices) {
        const int i = static_cast<int>(k) / g.n(), j = static_cast<int>(k) % g.n();
        REQUIRE(g.inside(i, j));
    }
    Z0Sample coarse = make_z0_sample(g, 150);
    REQUIRE(coarse.stride == 8);
    REQUIRE(coarse.indices.size() == 199);
}

TEST_CASE("sampled functional matches the recorded level, flat in frequency") {
    Grid g = make_grid(128, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");
    Z0Sample sample = make_z0_sample(g);
    const double q_l2 = lp_norm(g, bump.values, 2.0);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double n : {8.0, 16.0, 32.0, 64.0}) {
        double v = remainder_functional(ws, bump.values, n, sample);
        REQUIRE(v <= q_l2 * 1.01);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    REQUIRE((hi - lo) / lo < 0.02);  // no growth trend in n

    Field zero = g.zero_field();
    REQUIRE(remainder_functional(ws, zero, 8.0, sample) == 0.0);
}

TEST_CASE("sampled functional is translation invariant for interior bumps") {
    Grid g = make_grid(128, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");
    Field shifted =
        g.sample_disc([](Complex z) { return Complex(bump_value(z, Complex(0.2, 0.1)), 0.0); });
    Z0Sample sample = make_z0_sample(g);
    for (double n : {8.0, 32.0}) {
        double a = remainder_functional(ws, bump.values, n, sample);
        double b = remainder_functional(ws, shifted, n, sample);
        REQUIRE(std::abs(a - b) / a < 0.02);
    }
}

TEST_CASE("direct-quadrature weight family matches the convolution route for unit weights") {
    Grid g = make_grid(128, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");
    Z0Sample sample = make_z0_sample(g, 150);
    sample.indices.resize(12);  // direct route is quadratic in sample size
    double direct = remainder_functional(
        ws, bump.values, 8.0, sample,
        [&](Complex) { return Field(g.size(), Complex(1.0, 0.0)); });
    double conv = remainder_functional(ws, bump.values, 8.0, sample);
    REQUIRE(std::abs(direct - conv) / conv < 1e-12);

    double zero_family = remainder_functional(
        ws, bump.values, 8.0, sample, [&](Complex) { return g.zero_field(); });
    REQUIRE(zero_family == 0.0);
}

TEST_CASE("convergence study CSV contract") {
    Grid g = make_grid(64, 2);
    OperatorWorkspace ws(g);
    Potential bump = make_potential(g, "bump");
    auto rows = convergence_table(ws, bump.values, {8.0, 16.0});
    std::string dir = test_util::scratch_dir("convcsv");
    std::vector<std::vector<std::string>> cells;
    for (auto& [n, err] : rows) cells.push_back({format_double(n), format_double(err)});
    write_csv(dir + "/c.csv", "n,l2_error", cells, {{"grid", "64"}, {"pad", "2"}});
    std::string text = test_util::read_file(dir + "/c.csv");
    REQUIRE(text.rfind("# grid = 64\n# pad = 2\nn,l2_error\n8,", 0) == 0);
    std::filesystem::remove_all(dir);
}
