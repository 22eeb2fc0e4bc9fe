#ifndef CKDV_GRID_HPP
#define CKDV_GRID_HPP

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ckdv/error.hpp"

namespace ckdv {

using Samples = std::vector<double>;
/// Half spectrum in FFTW r2c layout: n/2+1 coefficients, unnormalized.
using Spectrum = std::vector<std::complex<double>>;

namespace detail {

// Owns the FFTW plans of one grid size and its 3/2 padded size. Plans are
// executed through the new-array interface, which is thread-safe; only the
// planning in the constructor touches global FFTW state.
class FftPlans {
 public:
  explicit FftPlans(std::size_t n) : n_(n), padded_(3 * n / 2) {
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::vector<double> real(padded_);
    std::vector<std::complex<double>> cplx(padded_ / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    r2c_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), real.data(), c, flags);
    c2r_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), c, real.data(), flags);
    r2c_pad_ =
        fftw_plan_dft_r2c_1d(static_cast<int>(padded_), real.data(), c, flags);
    c2r_pad_ =
        fftw_plan_dft_c2r_1d(static_cast<int>(padded_), c, real.data(), flags);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
  ~FftPlans() {
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
    fftw_destroy_plan(r2c_pad_);
    fftw_destroy_plan(c2r_pad_);
  }

  void r2c(const double* in, std::complex<double>* out, bool padded) const {
    fftw_execute_dft_r2c(padded ? r2c_pad_ : r2c_, const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
  }
  // Destroys `in`.
  void c2r(std::complex<double>* in, double* out, bool padded) const {
    fftw_execute_dft_c2r(padded ? c2r_pad_ : c2r_,
                         reinterpret_cast<fftw_complex*>(in), out);
  }

  std::size_t n() const { return n_; }
  std::size_t padded() const { return padded_; }

 private:
  std::size_t n_;
  std::size_t padded_;
  fftw_plan r2c_{};
  fftw_plan c2r_{};
  fftw_plan r2c_pad_{};
  fftw_plan c2r_pad_{};
};

}  // namespace detail

/// Uniform periodic grid on [0, L) with n points (n a power of two, >= 16).
///
/// Wavenumbers are 2*pi*m/L for m = -n/2 .. n/2-1. In the half-spectrum
/// layout index m in [0, n/2) carries +m and index n/2 carries the Nyquist
/// mode -n/2. Copies share the FFT plans.
class Grid {
 public:
  Grid(double length, std::size_t n_points) : length_(length), n_(n_points) {
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw ContractViolation("grid length must be finite and > 0");
    }
    if (n_points < 16 || (n_points & (n_points - 1)) != 0) {
      throw ContractViolation("grid point count must be a power of two >= 16, got " +
                              std::to_string(n_points));
    }
    plans_ = std::make_shared<const detail::FftPlans>(n_points);
  }

  double length() const { return length_; }
  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }
  std::size_t padded_size() const { return plans_->padded(); }
  double dx() const { return length_ / static_cast<double>(n_); }
  double x(std::size_t j) const { return static_cast<double>(j) * dx(); }

  Samples coordinates() const {
    Samples xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
  }

  /// Wavenumber of half-spectrum index m (0 <= m <= n/2).
  double wavenumber(std::size_t m) const {
    const double base = 2.0 * std::numbers::pi / length_;
    return m == n_ / 2 ? -base * static_cast<double>(m)
                       : base * static_cast<double>(m);
  }

  /// Largest wavenumber kept by odd derivatives (the Nyquist mode is not).
  double max_retained_wavenumber() const {
    return 2.0 * std::numbers::pi / length_ * static_cast<double>(n_ / 2 - 1);
  }

  void check_size(std::span<const double> f) const {
    if (f.size() != n_) {
      throw ContractViolation("expected " + std::to_string(n_) +
                              " samples, got " + std::to_string(f.size()));
    }
  }

  Spectrum forward(std::span<const double> f) const {
    check_size(f);
    Spectrum out(spectrum_size());
    plans_->r2c(f.data(), out.data(), false);
    return out;
  }

  /// Inverse of forward(), including the 1/n normalization.
  Samples inverse(std::span<const std::complex<double>> c) const {
    check_spectrum(c);
    Spectrum scratch(c.begin(), c.end());
    Samples out(n_);
    plans_->c2r(scratch.data(), out.data(), false);
    const double scale = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= scale;
    return out;
  }

  /// Evaluates the band-limited interpolant of `c` on the 3n/2 padded grid.
  /// The Nyquist coefficient is dropped.
  Samples inverse_padded(std::span<const std::complex<double>> c) const {
    check_spectrum(c);
    const std::size_t m_pad = padded_size();
    Spectrum scratch(m_pad / 2 + 1, {0.0, 0.0});
    std::copy(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n_ / 2),
              scratch.begin());
    Samples out(m_pad);
    plans_->c2r(scratch.data(), out.data(), true);
    const double scale = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= scale;
    return out;
  }

  /// Transforms samples on the padded grid and truncates back to the n-point
  /// spectrum (same normalization as forward()). Nyquist is zeroed.
  Spectrum forward_padded(std::span<const double> f) const {
    const std::size_t m_pad = padded_size();
    if (f.size() != m_pad) {
      throw ContractViolation("expected " + std::to_string(m_pad) +
                              " padded samples, got " + std::to_string(f.size()));
    }
    Spectrum full(m_pad / 2 + 1);
    plans_->r2c(f.data(), full.data(), true);
    Spectrum out(spectrum_size(), {0.0, 0.0});
    const double scale = static_cast<double>(n_) / static_cast<double>(m_pad);
    for (std::size_t m = 0; m < n_ / 2; ++m) out[m] = full[m] * scale;
    return out;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  void check_spectrum(std::span<const std::complex<double>> c) const {
    if (c.size() != spectrum_size()) {
      throw ContractViolation("expected " + std::to_string(spectrum_size()) +
                              " spectral coefficients, got " +
                              std::to_string(c.size()));
    }
  }

  double length_;
  std::size_t n_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// (i k)^order for half-spectrum index m; the Nyquist entry is zero for odd
/// orders so derivatives of real fields stay real.
inline std::complex<double> derivative_symbol(const Grid& grid, std::size_t m,
                                              int order) {
  if (order % 2 == 1 && m == grid.size() / 2) return {0.0, 0.0};
  const std::complex<double> ik{0.0, grid.wavenumber(m)};
  std::complex<double> s{1.0, 0.0};
  for (int p = 0; p < order; ++p) s *= ik;
  return s;
}

/// Spectral derivative of order 1..4.
inline Samples deriv(const Grid& grid, std::span<const double> f, int order) {
  if (order < 1 || order > 4) {
    throw UnsupportedOrder("derivative order must be in 1..4, got " +
                           std::to_string(order));
  }
  Spectrum c = grid.forward(f);
  for (std::size_t m = 0; m < c.size(); ++m) {
    c[m] *= derivative_symbol(grid, m, order);
  }
  return grid.inverse(c);
}

inline double mean(std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v;
  return f.empty() ? 0.0 : s / static_cast<double>(f.size());
}

inline double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

/// Rectangle-rule quadrature over the periodic box.
inline double integrate(const Grid& grid, std::span<const double> f) {
  grid.check_size(f);
  double s = 0.0;
  for (double v : f) s += v;
  return grid.dx() * s;
}

/// Zero-mean periodic antiderivative. Requires |mean(f)| <= 1e-12 max(1, |f|_inf).
inline Samples antideriv(const Grid& grid, std::span<const double> f) {
  grid.check_size(f);
  const double mu = mean(f);
  const double tol = 1e-12 * std::max(1.0, max_abs(f));
  if (std::abs(mu) > tol) throw NonIntegrableInput(mu, tol);
  Spectrum c = grid.forward(f);
  c[0] = {0.0, 0.0};
  c[grid.size() / 2] = {0.0, 0.0};
  for (std::size_t m = 1; m < grid.size() / 2; ++m) {
    c[m] /= std::complex<double>{0.0, grid.wavenumber(m)};
  }
  return grid.inverse(c);
}

/// Returns g(x) = f(x - shift), exact for band-limited f.
inline Samples translate(const Grid& grid, std::span<const double> f,
                         double shift) {
  Spectrum c = grid.forward(f);
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double k = grid.wavenumber(m);
    if (m == grid.size() / 2) {
      c[m] *= std::cos(k * shift);
    } else {
      c[m] *= std::polar(1.0, -k * shift);
    }
  }
  return grid.inverse(c);
}

/// Half-sample cumulative integral anchored at the left box edge:
/// F_j = dx (f_0 + ... + f_{j-1} + f_j / 2).
inline Samples cumulative(const Grid& grid, std::span<const double> f) {
  grid.check_size(f);
  Samples out(f.size());
  double running = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[j] = grid.dx() * (running + 0.5 * f[j]);
    running += f[j];
  }
  return out;
}

}  // namespace ckdv

#endif
