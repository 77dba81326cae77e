#pragma once
// Thin RAII wrapper around FFTW complex-to-complex 2-D transforms, plus the
// continuum Fourier-transform convention used throughout:
//     fhat(xi) = (1/(2 pi)) Int e^{-i xi . z} f(z) dm(z),
// realized on the grid as a phase-corrected DFT (the cell-centered node offset
// enters as an explicit linear phase).  Plans use FFTW_ESTIMATE so results are
// bit-reproducible across runs and machines with the same FFTW build.

#include <fftw3.h>

#include <complex>
#include <stdexcept>
#include <vector>

#include "cgo2d/grid.hpp"

namespace cgo2d {

/// In-place 2-D complex DFT of fixed size m x m on an aligned internal buffer.
class Fft2d {
  public:
    explicit Fft2d(int m) : m_(m) {
        if (m < 2) throw std::invalid_argument("Fft2d: size must be >= 2");
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m * m));
        if (!buf_) throw std::bad_alloc();
        fwd_ = fftw_plan_dft_2d(m, m, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(m, m, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("Fft2d: plan creation failed");
    }
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;
    ~Fft2d() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }

    int size() const { return m_; }
    std::size_t count() const { return static_cast<std::size_t>(m_) * m_; }
    Complex* data() { return reinterpret_cast<Complex*>(buf_); }
    const Complex* data() const { return reinterpret_cast<const Complex*>(buf_); }

    /// Unnormalized forward DFT of the internal buffer: X_k = sum_j x_j e^{-2 pi i kj/m}.
    void forward() { fftw_execute(fwd_); }
    /// Unnormalized backward DFT (inverse up to a factor m^2).
    void backward() { fftw_execute(bwd_); }

    void load(const Field& f) {
        if (f.size() != count()) throw std::invalid_argument("Fft2d::load: size mismatch");
        Complex* b = data();
        for (std::size_t k = 0; k < f.size(); ++k) b[k] = f[k];
    }
    void load_zero() {
        Complex* b = data();
        for (std::size_t k = 0; k < count(); ++k) b[k] = Complex(0.0, 0.0);
    }
    Field unload() const {
        const Complex* b = data();
        return Field(b, b + count());
    }

  private:
    int m_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

/// In-place 1-D complex DFT of fixed size m (boundary-circle spectra).
class Fft1d {
  public:
    explicit Fft1d(int m) : m_(m) {
        if (m < 2) throw std::invalid_argument("Fft1d: size must be >= 2");
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
        if (!buf_) throw std::bad_alloc();
        fwd_ = fftw_plan_dft_1d(m, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(m, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("Fft1d: plan creation failed");
    }
    Fft1d(const Fft1d&) = delete;
    Fft1d& operator=(const Fft1d&) = delete;
    ~Fft1d() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }

    int size() const { return m_; }
    Complex* data() { return reinterpret_cast<Complex*>(buf_); }
    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }

  private:
    int m_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

/// Signed DFT frequency of bin k for period m and spacing h: 2 pi k' / (m h)
/// with k' the wrapped integer in [-m/2, m/2).
inline double dft_frequency(int k, int m, double h) {
    const int kw = (k < (m + 1) / 2) ? k : k - m;
    return 2.0 * kPi * kw / (m * h);
}

/// Continuum-convention forward transform of a field sampled on the padded grid:
/// returns spectrum values fhat(xi_k) on the DFT frequency lattice of the grid
/// (no zero padding; callers needing finer xi resolution should embed first).
inline Field fourier_forward(const Grid& g, const Field& f) {
    const int n = g.n();
    Fft2d fft(n);
    fft.load(f);
    fft.forward();
    Field out = fft.unload();
    const double scale = g.h() * g.h() / (2.0 * kPi);
    // Nodes sit at x_i = -L + (i + 1/2) h, so the DFT (which assumes samples at
    // i * h) is corrected by the phase e^{-i xi . (-L + h/2)} per axis.
    const double off = -g.half_side() + 0.5 * g.h();
    for (int a = 0; a < n; ++a) {
        const double xa = dft_frequency(a, n, g.h());
        for (int b = 0; b < n; ++b) {
            const double xb = dft_frequency(b, n, g.h());
            const double phase = -(xa + xb) * off;
            out[static_cast<std::size_t>(a) * n + b] *=
                scale * Complex(std::cos(phase), std::sin(phase));
        }
    }
    return out;
}

/// Inverse of fourier_forward on the same grid (exact round trip in exact
/// arithmetic; in floating point accurate to ~1e-15 relative).
inline Field fourier_inverse(const Grid& g, const Field& spectrum) {
    const int n = g.n();
    Field tmp(spectrum.size());
    const double scale = g.h() * g.h() / (2.0 * kPi);
    const double off = -g.half_side() + 0.5 * g.h();
    for (int a = 0; a < n; ++a) {
        const double xa = dft_frequency(a, n, g.h());
        for (int b = 0; b < n; ++b) {
            const double xb = dft_frequency(b, n, g.h());
            const double phase = (xa + xb) * off;
            tmp[static_cast<std::size_t>(a) * n + b] =
                spectrum[static_cast<std::size_t>(a) * n + b] *
                Complex(std::cos(phase), std::sin(phase)) / scale;
        }
    }
    Fft2d fft(n);
    fft.load(tmp);
    fft.backward();
    Field out = fft.unload();
    const double inv = 1.0 / (static_cast<double>(n) * n);
    for (Complex& v : out) v *= inv;
    return out;
}

}  // namespace cgo2d
