#pragma once
// Forward Dirichlet solver for  Lap u + q u = 0  on the unit disc.
//
// Discretization: second-order finite differences on a polar grid with N_r
// radial intervals and N_theta angles.  Unknowns are the center value u0 plus
// the rings i = 1..N_r-1; the boundary ring carries the Dirichlet datum exactly
// and is eliminated into the right-hand side.  The center equation averages the
// first ring: 4 (mean(ring 1) - u0) / dr^2 + q(0) u0 = 0.
//
// Boundary integrals use the uniform trapezoid rule on the circle, which is
// spectrally accurate for smooth periodic integrands.  A bilinear resampler
// bridges polar solutions onto the Cartesian grid for volume integrals.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "cgo2d/grid.hpp"

namespace cgo2d {

struct BoundaryGrid {
    int m_nodes = 0;

    double angle(int k) const { return 2.0 * kPi * k / m_nodes; }
    double weight() const { return 2.0 * kPi / m_nodes; }
    Complex point(int k) const {
        const double th = angle(k);
        return {std::cos(th), std::sin(th)};
    }
};

struct CauchyPair {
    std::vector<Complex> trace;
    std::vector<Complex> normal_deriv;
};

/// The discrete operator Lap + q is numerically singular (q sits at or near a
/// Dirichlet eigenvalue); the caller must perturb q or reject the request.
class SingularSystem : public std::runtime_error {
  public:
    explicit SingularSystem(double ratio)
        : std::runtime_error("discrete operator is numerically singular "
                             "(sigma_min / max|A| = " +
                             std::to_string(ratio) + ")"),
          ratio_(ratio) {}
    double ratio() const { return ratio_; }

  private:
    double ratio_;
};

using RadialFn = std::function<Complex(double r, double theta)>;
using BoundaryFn = std::function<Complex(double theta)>;

struct PolarSolution {
    int n_r = 0;      // radial intervals; rings 0 (center) .. n_r (boundary)
    int n_theta = 0;  // angular nodes
    double dr = 0.0;
    double dtheta = 0.0;
    std::vector<Complex> values;          // (n_r + 1) * n_theta, ring-major
    std::vector<Complex> q_values;        // potential sampled on the same layout
    std::vector<Complex> boundary_datum;  // n_theta entries, equals ring n_r

    Complex value(int i, int j) const {
        return values[static_cast<std::size_t>(i) * n_theta + ((j % n_theta + n_theta) % n_theta)];
    }

    Complex ring_mean(int i) const {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < n_theta; ++j) acc += values[static_cast<std::size_t>(i) * n_theta + j];
        return acc / static_cast<double>(n_theta);
    }

    BoundaryGrid boundary() const { return BoundaryGrid{n_theta}; }
};

namespace detail {

/// Smallest-singular-value estimate by a few inverse-power steps on the
/// factorization, from a seeded random start.
inline double sigma_min_estimate(
    const Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>>& lu,
    Eigen::Index dim) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd x(dim);
    for (Eigen::Index k = 0; k < dim; ++k) x[k] = Complex(gauss(rng), gauss(rng));
    x /= x.norm();
    double growth = 1.0;
    for (int t = 0; t < 3; ++t) {
        x = lu.solve(x);
        growth = x.norm();
        x /= growth;
    }
    return 1.0 / growth;
}

}  // namespace detail

/// Solve  Lap u + q u = 0,  u|_{r=1} = f.  Throws SingularSystem when the
/// estimated smallest singular value falls under 1e-12 of the largest entry.
inline PolarSolution solve_dirichlet(const RadialFn& q, const BoundaryFn& f, int n_r,
                                     int n_theta) {
    if (n_r < 3 || n_theta < 4)
        throw std::invalid_argument("solve_dirichlet: need n_r >= 3 and n_theta >= 4");
    const double dr = 1.0 / n_r;
    const double dt = 2.0 * kPi / n_theta;
    const int n_unknown = 1 + (n_r - 1) * n_theta;
    auto idx = [n_theta](int i, int j) {
        return 1 + (i - 1) * n_theta + ((j % n_theta + n_theta) % n_theta);
    };

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<std::size_t>(n_unknown) * 5);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_unknown);

    trip.emplace_back(0, 0, Complex(-4.0 / (dr * dr), 0.0) + q(0.0, 0.0));
    for (int j = 0; j < n_theta; ++j)
        trip.emplace_back(0, idx(1, j), Complex(4.0 / (dr * dr * n_theta), 0.0));

    std::vector<Complex> fvals(n_theta);
    for (int j = 0; j < n_theta; ++j) fvals[j] = f(j * dt);

    for (int i = 1; i < n_r; ++i) {
        const double r = i * dr;
        const double cth = 1.0 / (r * r * dt * dt);
        const double cp = 1.0 / (dr * dr) + 1.0 / (2.0 * r * dr);
        const double cm = 1.0 / (dr * dr) - 1.0 / (2.0 * r * dr);
        for (int j = 0; j < n_theta; ++j) {
            const int k = idx(i, j);
            trip.emplace_back(k, k,
                              Complex(-2.0 / (dr * dr) - 2.0 * cth, 0.0) + q(r, j * dt));
            if (i + 1 <= n_r - 1)
                trip.emplace_back(k, idx(i + 1, j), Complex(cp, 0.0));
            else
                rhs[k] -= cp * fvals[j];
            if (i - 1 >= 1)
                trip.emplace_back(k, idx(i - 1, j), Complex(cm, 0.0));
            else
                trip.emplace_back(k, 0, Complex(cm, 0.0));
            trip.emplace_back(k, idx(i, j + 1), Complex(cth, 0.0));
            trip.emplace_back(k, idx(i, j - 1), Complex(cth, 0.0));
        }
    }

    Eigen::SparseMatrix<Complex> A(n_unknown, n_unknown);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    double max_entry = 0.0;
    for (int c = 0; c < A.outerSize(); ++c)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(A, c); it; ++it)
            max_entry = std::max(max_entry, std::abs(it.value()));

    Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) throw SingularSystem(0.0);
    const double ratio = detail::sigma_min_estimate(lu, n_unknown) / max_entry;
    if (ratio < 1e-12) throw SingularSystem(ratio);

    Eigen::VectorXcd u = lu.solve(rhs);

    PolarSolution sol;
    sol.n_r = n_r;
    sol.n_theta = n_theta;
    sol.dr = dr;
    sol.dtheta = dt;
    sol.boundary_datum = fvals;
    sol.values.assign(static_cast<std::size_t>(n_r + 1) * n_theta, Complex(0.0, 0.0));
    sol.q_values.assign(sol.values.size(), Complex(0.0, 0.0));
    for (int j = 0; j < n_theta; ++j) {
        sol.values[j] = u[0];
        sol.q_values[j] = q(0.0, 0.0);
    }
    for (int i = 1; i < n_r; ++i)
        for (int j = 0; j < n_theta; ++j) {
            sol.values[static_cast<std::size_t>(i) * n_theta + j] = u[idx(i, j)];
            sol.q_values[static_cast<std::size_t>(i) * n_theta + j] = q(i * dr, j * dt);
        }
    for (int j = 0; j < n_theta; ++j) {
        sol.values[static_cast<std::size_t>(n_r) * n_theta + j] = fvals[j];
        sol.q_values[static_cast<std::size_t>(n_r) * n_theta + j] = q(1.0, j * dt);
    }
    return sol;
}

/// One-sided second-order radial derivative at r = 1, per boundary node.
inline std::vector<Complex> normal_derivative(const PolarSolution& u) {
    if (u.n_r < 3) throw std::invalid_argument("normal_derivative: need at least 3 rings");
    std::vector<Complex> dn(u.n_theta);
    for (int j = 0; j < u.n_theta; ++j)
        dn[j] = (3.0 * u.value(u.n_r, j) - 4.0 * u.value(u.n_r - 1, j) + u.value(u.n_r - 2, j)) /
                (2.0 * u.dr);
    return dn;
}

inline CauchyPair cauchy_pair(const PolarSolution& u) {
    CauchyPair pair;
    pair.trace = u.boundary_datum;
    pair.normal_deriv = normal_derivative(u);
    return pair;
}

/// Bilinear (r, theta) interpolation of a polar solution onto the Cartesian
/// grid; zero outside the disc mask.
inline Field resample_to_grid(const PolarSolution& u, const Grid& g) {
    Field out = g.zero_field();
    for (std::size_t k : g.masked_indices()) {
        const int i = static_cast<int>(k) / g.n();
        const int j = static_cast<int>(k) % g.n();
        const Complex z = g.node(i, j);
        const double r = std::abs(z);
        double th = std::atan2(z.imag(), z.real());
        if (th < 0.0) th += 2.0 * kPi;
        const double fi = r / u.dr;
        const double fj = th / u.dtheta;
        int i0 = static_cast<int>(std::floor(fi));
        i0 = std::min(std::max(i0, 0), u.n_r - 1);
        const double ai = fi - std::floor(fi);
        const int j0 = static_cast<int>(std::floor(fj)) % u.n_theta;
        const double aj = fj - std::floor(fj);
        out[k] = u.value(i0, j0) * (1.0 - ai) * (1.0 - aj) +
                 u.value(i0 + 1, j0) * ai * (1.0 - aj) + u.value(i0, j0 + 1) * (1.0 - ai) * aj +
                 u.value(i0 + 1, j0 + 1) * ai * aj;
    }
    return out;
}

/// Discrete L^2 distance between a polar solution and a reference callable,
/// with polar area weights r dr dtheta (center cell dr^2 dtheta / 8).
inline double polar_l2_diff(const PolarSolution& u,
                            const std::function<Complex(double r, double theta)>& ref) {
    double acc = 0.0;
    for (int i = 0; i <= u.n_r; ++i) {
        const double w =
            (i == 0) ? u.dr * u.dr * u.dtheta / 8.0 : i * u.dr * u.dr * u.dtheta;
        for (int j = 0; j < u.n_theta; ++j)
            acc += w * std::norm(u.value(i, j) - ref(i * u.dr, j * u.dtheta));
    }
    return std::sqrt(acc);
}

struct OrthogonalityGap {
    Complex volume{0.0, 0.0};    // integral of (q1 - q2) u1 u2 over the disc
    Complex boundary{0.0, 0.0};  // integral of u1 dn(u2) - u2 dn(u1) over the circle
};

/// Both sides of the volume/boundary identity; the caller asserts closeness.
inline OrthogonalityGap orthogonality_gap(const Grid& g, const Field& q1, const Field& q2,
                                          const Field& u1, const Field& u2,
                                          const CauchyPair& p1, const CauchyPair& p2,
                                          const BoundaryGrid& bg) {
    OrthogonalityGap gap;
    for (std::size_t k : g.masked_indices())
        gap.volume += (q1[k] - q2[k]) * u1[k] * u2[k];
    gap.volume *= g.h() * g.h();
    for (int k = 0; k < bg.m_nodes; ++k)
        gap.boundary += p1.trace[k] * p2.normal_deriv[k] - p2.trace[k] * p1.normal_deriv[k];
    gap.boundary *= bg.weight();
    return gap;
}

/// Relative gap between the two boundary pairings of a shared potential:
/// integral of u dn(v) versus integral of v dn(u).
inline double reciprocity_gap(const CauchyPair& p1, const CauchyPair& p2,
                              const BoundaryGrid& bg) {
    Complex lhs(0.0, 0.0), rhs(0.0, 0.0);
    for (int k = 0; k < bg.m_nodes; ++k) {
        lhs += p1.trace[k] * p2.normal_deriv[k];
        rhs += p2.trace[k] * p1.normal_deriv[k];
    }
    lhs *= bg.weight();
    rhs *= bg.weight();
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale <= 0.0) return 0.0;
    return std::abs(lhs - rhs) / scale;
}

/// Dirichlet basis used for Cauchy-data generation: index 0 -> 1,
/// 2k-1 -> cos(k theta), 2k -> sin(k theta).
inline BoundaryFn boundary_basis_function(int index) {
    if (index < 0) throw std::invalid_argument("boundary_basis_function: index must be >= 0");
    if (index == 0) return [](double) { return Complex(1.0, 0.0); };
    const int k = (index + 1) / 2;
    if (index % 2 == 1)
        return [k](double th) { return Complex(std::cos(k * th), 0.0); };
    return [k](double th) { return Complex(std::sin(k * th), 0.0); };
}

}  // namespace cgo2d
