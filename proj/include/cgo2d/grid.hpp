#pragma once
// Cell-centered Cartesian grid over the padded square [-L, L]^2 with a unit-disc
// mask, plus quadrature and norm helpers for complex fields sampled on it.
//
// Layout: the padded square carries N = n_side * pad_factor nodes per side with
// spacing h = 2 / n_side, node coordinates x_i = -L + (i + 1/2) h.  No node lies
// exactly on the unit circle, and the origin is the corner point of the four
// central cells (every cell center sits at half-integer multiples of h).
// Fields are stored row-major: index(i, j) = i * N + j with i the x index.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgo2d {

using Complex = std::complex<double>;
using Field = std::vector<Complex>;

constexpr double kPi = 3.14159265358979323846;

struct GridSpec {
    int n_side = 0;      // nodes per side across the diameter of Omega
    int pad_factor = 0;  // padded square is [-pad, pad]^2

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.n_side == b.n_side && a.pad_factor == b.pad_factor;
    }
};

class Grid {
  public:
    explicit Grid(GridSpec spec)
        : spec_(spec),
          n_(spec.n_side * spec.pad_factor),
          h_(2.0 / spec.n_side),
          half_side_(static_cast<double>(spec.pad_factor)) {
        if (spec.n_side < 4) throw std::invalid_argument("grid: n_side must be >= 4");
        if (spec.pad_factor < 1) throw std::invalid_argument("grid: pad_factor must be >= 1");
        mask_.assign(static_cast<std::size_t>(n_) * n_, 0);
        masked_.clear();
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                const Complex z = node(i, j);
                if (std::abs(z) < 1.0) {
                    mask_[index(i, j)] = 1;
                    masked_.push_back(index(i, j));
                }
            }
        }
    }

    const GridSpec& spec() const { return spec_; }
    int n() const { return n_; }                    // nodes per side of the padded square
    double h() const { return h_; }                 // node spacing
    double half_side() const { return half_side_; } // L
    std::size_t size() const { return mask_.size(); }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
    double coord(int i) const { return -half_side_ + (i + 0.5) * h_; }
    Complex node(int i, int j) const { return {coord(i), coord(j)}; }

    bool inside(std::size_t k) const { return mask_[k] != 0; }
    bool inside(int i, int j) const { return mask_[index(i, j)] != 0; }
    const std::vector<std::size_t>& masked_indices() const { return masked_; }

    /// Nearest node index pair to a point of the padded square.
    std::pair<int, int> nearest(Complex z) const {
        auto clampi = [this](double t) {
            int i = static_cast<int>(std::lround((t + half_side_) / h_ - 0.5));
            return std::min(std::max(i, 0), n_ - 1);
        };
        return {clampi(z.real()), clampi(z.imag())};
    }

    Field zero_field() const { return Field(size(), Complex(0.0, 0.0)); }

    /// Sample a callable z -> Complex over the whole padded square.
    template <typename F>
    Field sample(F&& f) const {
        Field out(size());
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) out[index(i, j)] = f(node(i, j));
        return out;
    }

    /// Sample a callable over Omega only; zero outside the disc mask.
    template <typename F>
    Field sample_disc(F&& f) const {
        Field out(size(), Complex(0.0, 0.0));
        for (std::size_t k : masked_) {
            const int i = static_cast<int>(k) / n_;
            const int j = static_cast<int>(k) % n_;
            out[k] = f(node(i, j));
        }
        return out;
    }

  private:
    GridSpec spec_;
    int n_;
    double h_;
    double half_side_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::size_t> masked_;
};

inline Grid make_grid(int n_side, int pad_factor) { return Grid(GridSpec{n_side, pad_factor}); }

/// Midpoint quadrature of f over the unit disc: h^2 * sum of masked node values.
inline Complex integrate_disc(const Grid& g, const Field& f) {
    if (f.size() != g.size()) throw std::invalid_argument("integrate_disc: field size mismatch");
    Complex acc(0.0, 0.0);
    for (std::size_t k : g.masked_indices()) acc += f[k];
    return acc * (g.h() * g.h());
}

/// Discrete L^p(Omega) norm over masked nodes; p = infinity gives the max modulus.
inline double lp_norm(const Grid& g, const Field& f, double p) {
    if (f.size() != g.size()) throw std::invalid_argument("lp_norm: field size mismatch");
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t k : g.masked_indices()) m = std::max(m, std::abs(f[k]));
        return m;
    }
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1 or infinity");
    double acc = 0.0;
    for (std::size_t k : g.masked_indices()) acc += std::pow(std::abs(f[k]), p);
    return std::pow(acc * g.h() * g.h(), 1.0 / p);
}

/// L^2 norm over the whole padded square (used where the ambient-plane norm is wanted).
inline double l2_norm_padded(const Grid& g, const Field& f) {
    double acc = 0.0;
    for (const Complex& v : f) acc += std::norm(v);
    return std::sqrt(acc * g.h() * g.h());
}

/// Sampled |z - z0|^{-beta} weight over Omega, beta in (0, 2).  The cell containing
/// the singularity carries the cell average of the exact integral over the
/// equal-area disc of radius h / sqrt(pi), so that midpoint quadrature of the
/// returned field reproduces the moment integral to about a percent.
inline Field singular_weight_field(const Grid& g, Complex z0, double beta) {
    if (!(beta > 0.0 && beta < 2.0))
        throw std::invalid_argument("singular_weight_field: beta must lie in (0, 2)");
    auto [i0, j0] = g.nearest(z0);
    Field out = g.zero_field();
    const double rho = g.h() / std::sqrt(kPi);
    const double cell_integral = 2.0 * kPi * std::pow(rho, 2.0 - beta) / (2.0 - beta);
    for (std::size_t k : g.masked_indices()) {
        const int i = static_cast<int>(k) / g.n();
        const int j = static_cast<int>(k) % g.n();
        if (i == i0 && j == j0) {
            out[k] = cell_integral / (g.h() * g.h());
        } else {
            out[k] = std::pow(std::abs(g.node(i, j) - z0), -beta);
        }
    }
    return out;
}

/// Sampled lower estimate of the Holder-alpha seminorm
///     sup_{z0 != z1} |f(z0) - f(z1)| / |z0 - z1|^alpha
/// over Omega.  Pair scheme: all pairs within a 2-node neighborhood of every
/// masked node, plus `n_random` seeded long-range pairs of masked nodes.  The
/// estimate is monotone in the pair set and never exceeds the true seminorm.
inline double holder_seminorm_estimate(const Grid& g, const Field& f, double alpha,
                                       int n_random = 4000, std::uint64_t seed = 12345) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("holder_seminorm_estimate: alpha must lie in (0, 1]");
    if (f.size() != g.size()) throw std::invalid_argument("holder_seminorm_estimate: size mismatch");
    double best = 0.0;
    auto quotient = [&](std::size_t a, std::size_t b) {
        const int ia = static_cast<int>(a) / g.n(), ja = static_cast<int>(a) % g.n();
        const int ib = static_cast<int>(b) / g.n(), jb = static_cast<int>(b) % g.n();
        const double dist = std::abs(g.node(ia, ja) - g.node(ib, jb));
        if (dist <= 0.0) return 0.0;
        return std::abs(f[a] - f[b]) / std::pow(dist, alpha);
    };
    const int n = g.n();
    for (std::size_t k : g.masked_indices()) {
        const int i = static_cast<int>(k) / n, j = static_cast<int>(k) % n;
        for (int di = 0; di <= 2; ++di) {
            for (int dj = -2; dj <= 2; ++dj) {
                if (di == 0 && dj <= 0) continue;  // each unordered pair once
                const int i2 = i + di, j2 = j + dj;
                if (i2 < 0 || i2 >= n || j2 < 0 || j2 >= n) continue;
                if (!g.inside(i2, j2)) continue;
                best = std::max(best, quotient(k, g.index(i2, j2)));
            }
        }
    }
    std::mt19937_64 rng(seed);
    const auto& idx = g.masked_indices();
    if (!idx.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
        for (int t = 0; t < n_random; ++t) {
            const std::size_t a = idx[pick(rng)];
            const std::size_t b = idx[pick(rng)];
            if (a == b) continue;
            best = std::max(best, quotient(a, b));
        }
    }
    return best;
}

}  // namespace cgo2d
