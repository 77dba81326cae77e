#pragma once
// Solid Cauchy and Beurling operators on the unit disc, and the oscillatory
// Gaussian kernel kappa_n, all realized as linear convolutions on the padded
// grid via FFT on a doubled transform.
//
//   cauchy        Cf(z)      = (1/pi)      Int_Omega f(xi) / (z - xi)      dm(xi)
//   conj_cauchy   Cbar f(z)  = (1/pi)      Int_Omega f(xi) / conj(z - xi)  dm(xi)
//   beurling      Pi f(z)    = -(1/pi) pv Int_Omega f(xi) / (z - xi)^2    dm(xi)
//   conj_beurling Pibar f(z) = -(1/pi) pv Int_Omega f(xi) / conj(z-xi)^2  dm(xi)
//   tn_apply      T_n f(z0)  = Int_Omega (2n/pi) e^{i n ((z-z0)^2 + conj(z-z0)^2)} f(z) dm(z)
//
// Discretization: kernels are sampled on the integer displacement lattice
// d = m h (the differences of cell centers), with the singular self cell set to
// zero -- the exact value of the principal-value integral of 1/z and 1/z^2 over
// a centered square cell by odd symmetry.  Embedding the N^2 padded grid into a
// (2N)^2 transform makes the circular convolution equal to the linear one, so
// results on the padded square carry no wrap-around error for Omega-supported
// inputs.

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "cgo2d/fft.hpp"
#include "cgo2d/grid.hpp"

namespace cgo2d {

enum class BeurlingVariant { plain, conjugate };

/// Closed-form Fourier transform of kappa_n under the (1/2pi) convention:
/// kappahat_n(xi) = (sgn n / 2 pi) e^{-i (xi^2 + conj(xi)^2) / (16 n)}.
inline Complex gaussian_kernel_hat(double n, Complex xi) {
    if (n == 0.0) throw std::invalid_argument("gaussian_kernel_hat: n must be nonzero");
    const double sgn = (n > 0.0) ? 1.0 : -1.0;
    // xi^2 + conj(xi)^2 = 2 (xi1^2 - xi2^2) is real.
    const double phase = -2.0 * (xi.real() * xi.real() - xi.imag() * xi.imag()) / (16.0 * n);
    return (sgn / (2.0 * kPi)) * Complex(std::cos(phase), std::sin(phase));
}

/// Sampled kappa_n(z) = (2n/pi) e^{i n (z^2 + conj(z)^2)}; z^2 + conj(z)^2 = 2(x^2 - y^2).
inline Complex gaussian_kernel_value(double n, Complex z) {
    const double phase = 2.0 * n * (z.real() * z.real() - z.imag() * z.imag());
    return (2.0 * n / kPi) * Complex(std::cos(phase), std::sin(phase));
}

class OperatorWorkspace {
  public:
    explicit OperatorWorkspace(const Grid& grid) : grid_(grid), m_(2 * grid.n()), fft_(m_) {
        if (grid.spec().pad_factor < 2)
            throw std::invalid_argument("OperatorWorkspace: pad_factor >= 2 required (aliasing)");
        cauchy_hat_ = kernel_spectrum([](Complex d) { return Complex(1.0, 0.0) / (kPi * d); });
        conj_cauchy_hat_ =
            kernel_spectrum([](Complex d) { return Complex(1.0, 0.0) / (kPi * std::conj(d)); });
        beurling_hat_ = kernel_spectrum([](Complex d) { return -Complex(1.0, 0.0) / (kPi * d * d); });
        conj_beurling_hat_ = kernel_spectrum(
            [](Complex d) { return -Complex(1.0, 0.0) / (kPi * std::conj(d) * std::conj(d)); });
    }

    const Grid& grid() const { return grid_; }
    int transform_size() const { return m_; }

    Field cauchy(const Field& f) { return convolve(cauchy_hat_, f); }
    Field conj_cauchy(const Field& f) { return convolve(conj_cauchy_hat_, f); }
    Field beurling(const Field& f, BeurlingVariant variant = BeurlingVariant::plain) {
        return convolve(variant == BeurlingVariant::plain ? beurling_hat_ : conj_beurling_hat_, f);
    }

    /// T_n f via convolution with the sampled kernel kappa_n (kernel spectra cached per n).
    Field tn_apply(const Field& f, double n) {
        if (!(n > 0.0)) throw std::invalid_argument("tn_apply: n must be positive");
        auto it = tn_hat_cache_.find(n);
        if (it == tn_hat_cache_.end()) {
            auto spec = kernel_spectrum([n](Complex d) { return gaussian_kernel_value(n, d); },
                                        /*zero_self_cell=*/false);
            it = tn_hat_cache_.emplace(n, std::move(spec)).first;
        }
        return convolve(it->second, f);
    }

    /// T_n f via the exact Fourier multiplier e^{-i(xi^2+conj(xi)^2)/(16 n)} applied on
    /// the doubled transform (2 pi * kappahat_n under the transform convention).
    Field tn_apply_multiplier(const Field& f, double n) {
        if (!(n > 0.0)) throw std::invalid_argument("tn_apply_multiplier: n must be positive");
        embed(f);
        fft_.forward();
        Complex* b = fft_.data();
        for (int a = 0; a < m_; ++a) {
            const double xa = dft_frequency(a, m_, grid_.h());
            for (int bq = 0; bq < m_; ++bq) {
                const double xb = dft_frequency(bq, m_, grid_.h());
                b[static_cast<std::size_t>(a) * m_ + bq] *=
                    2.0 * kPi * gaussian_kernel_hat(n, Complex(xa, xb));
            }
        }
        fft_.backward();
        return extract(1.0 / (static_cast<double>(m_) * m_));
    }

    /// Raw DFT of the sampled kernel kappa_n on the displacement lattice of an
    /// N-point-per-side padded grid (no doubling), scaled by h^2 so that values
    /// approximate 2 pi * kappahat_n.  Used by the closed-form comparison check.
    static Field sampled_kernel_dft(const Grid& g, double n) {
        const int N = g.n();
        Fft2d fft(N);
        Complex* b = fft.data();
        for (int a = 0; a < N; ++a) {
            const double dx = ((a < N / 2) ? a : a - N) * g.h();
            for (int c = 0; c < N; ++c) {
                const double dy = ((c < N / 2) ? c : c - N) * g.h();
                b[static_cast<std::size_t>(a) * N + c] = gaussian_kernel_value(n, Complex(dx, dy));
            }
        }
        fft.forward();
        Field out = fft.unload();
        const double s = g.h() * g.h();
        for (Complex& v : out) v *= s;
        return out;
    }

  private:
    template <typename K>
    Field kernel_spectrum(K&& kernel, bool zero_self_cell = true) {
        Complex* b = fft_.data();
        const int n = grid_.n();
        for (int a = 0; a < m_; ++a) {
            const double dx = ((a < n) ? a : a - m_) * grid_.h();
            for (int c = 0; c < m_; ++c) {
                const double dy = ((c < n) ? c : c - m_) * grid_.h();
                const std::size_t k = static_cast<std::size_t>(a) * m_ + c;
                if (zero_self_cell && a == 0 && c == 0)
                    b[k] = Complex(0.0, 0.0);
                else
                    b[k] = kernel(Complex(dx, dy)) * (grid_.h() * grid_.h());
            }
        }
        fft_.forward();
        return fft_.unload();
    }

    void embed(const Field& f) {
        if (f.size() != grid_.size()) throw std::invalid_argument("operator: field size mismatch");
        fft_.load_zero();
        Complex* b = fft_.data();
        const int n = grid_.n();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                b[static_cast<std::size_t>(i) * m_ + j] = f[grid_.index(i, j)];
    }

    Field extract(double scale) {
        Field out(grid_.size());
        const Complex* b = fft_.data();
        const int n = grid_.n();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out[grid_.index(i, j)] = b[static_cast<std::size_t>(i) * m_ + j] * scale;
        return out;
    }

    Field convolve(const Field& kernel_hat, const Field& f) {
        embed(f);
        fft_.forward();
        Complex* b = fft_.data();
        for (std::size_t k = 0; k < kernel_hat.size(); ++k) b[k] *= kernel_hat[k];
        fft_.backward();
        return extract(1.0 / (static_cast<double>(m_) * m_));
    }

    Grid grid_;
    int m_;
    Fft2d fft_;
    Field cauchy_hat_, conj_cauchy_hat_, beurling_hat_, conj_beurling_hat_;
    std::map<double, Field> tn_hat_cache_;
};

/// Deterministic band-limited random field on the padded grid, masked to Omega:
/// sum of plane waves e^{i pi (a x + b y)}, |a|,|b| <= band, with standard
/// normal complex coefficients drawn from the seeded generator.  The coefficient
/// sequence depends only on (band, seed), so the same probe function is sampled
/// consistently across grid resolutions.
inline Field random_smooth_field(const Grid& g, int band, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int w = 2 * band + 1;
    std::vector<Complex> coeff(static_cast<std::size_t>(w) * w);
    for (auto& c : coeff) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        c = Complex(re, im);
    }
    Field out = g.zero_field();
    for (std::size_t k : g.masked_indices()) {
        const int i = static_cast<int>(k) / g.n();
        const int j = static_cast<int>(k) % g.n();
        const double x = g.coord(i), y = g.coord(j);
        Complex acc(0.0, 0.0);
        for (int a = -band; a <= band; ++a) {
            for (int b = -band; b <= band; ++b) {
                const double ph = kPi * (a * x + b * y);
                acc += coeff[static_cast<std::size_t>(a + band) * w + (b + band)] *
                       Complex(std::cos(ph), std::sin(ph));
            }
        }
        out[k] = acc;
    }
    return out;
}

/// Empirical operator norms over seeded smooth probes; returns max ||Op f||_p / ||f||_p.
/// These estimates stand in for the unevaluated analytic constants and feed
/// diagnostics only, never correctness decisions.
struct EmpiricalNorms {
    double cauchy_p;     // C_p
    double beurling_p;   // B_p
    double cauchy_alpha; // C_alpha: (sup + Holder-alpha estimate of Cf) / ||f||_p
};

inline EmpiricalNorms estimate_operator_norms(OperatorWorkspace& ws, double p, int probes = 12,
                                              int band = 6, std::uint64_t seed = 11) {
    const Grid& g = ws.grid();
    const double alpha = 1.0 - 2.0 / p;
    std::mt19937_64 rng(seed);
    EmpiricalNorms out{0.0, 0.0, 0.0};
    for (int t = 0; t < probes; ++t) {
        Field f = random_smooth_field(g, band, rng);
        const double np = lp_norm(g, f, p);
        if (np <= 0.0) continue;
        Field cf = ws.cauchy(f);
        Field bf = ws.beurling(f);
        out.cauchy_p = std::max(out.cauchy_p, lp_norm(g, cf, p) / np);
        out.beurling_p = std::max(out.beurling_p, lp_norm(g, bf, p) / np);
        const double ca =
            (lp_norm(g, cf, std::numeric_limits<double>::infinity()) +
             holder_seminorm_estimate(g, cf, alpha, 1500)) /
            np;
        out.cauchy_alpha = std::max(out.cauchy_alpha, ca);
    }
    return out;
}

}  // namespace cgo2d
