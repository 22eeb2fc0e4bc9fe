#ifndef CKDV_RANDOM_STATES_HPP
#define CKDV_RANDOM_STATES_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "ckdv/fields.hpp"
#include "ckdv/grid.hpp"

namespace ckdv {

using Rng = std::mt19937_64;

/// Random trigonometric polynomial with modes 1..max_mode (amplitudes decay
/// like 1/m) plus, unless zero_mean, a random constant.
inline Samples random_band_limited_field(const Grid& grid, std::size_t max_mode,
                                         Rng& rng, bool zero_mean) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Samples f(grid.size(), zero_mean ? 0.0 : 0.5 * normal(rng));
  for (std::size_t m = 1; m <= max_mode; ++m) {
    const double amp = normal(rng) / static_cast<double>(m);
    const double theta = phase(rng);
    const double k = 2.0 * std::numbers::pi * static_cast<double>(m) / grid.length();
    for (std::size_t j = 0; j < f.size(); ++j) f[j] += amp * std::cos(k * grid.x(j) + theta);
  }
  return f;
}

/// State whose fields are independent random_band_limited_field draws.
/// Keep max_mode below n/4 for alias-free pointwise products.
inline FieldState random_band_limited(const Grid& grid, std::size_t components,
                                      std::size_t max_mode, Rng& rng,
                                      bool zero_mean = false) {
  Samples u = random_band_limited_field(grid, max_mode, rng, zero_mean);
  std::vector<Samples> phi;
  for (std::size_t i = 0; i < components; ++i) {
    phi.push_back(random_band_limited_field(grid, max_mode, rng, zero_mean));
  }
  return FieldState(grid, std::move(u), std::move(phi));
}

/// Sum of a few periodized Gaussian bumps per field with random centers,
/// widths in [w_min, w_max] and signed heights.
inline FieldState random_bump_state(const Grid& grid, std::size_t components,
                                    Rng& rng, double w_min, double w_max) {
  std::uniform_real_distribution<double> center(0.0, grid.length());
  std::uniform_real_distribution<double> width(w_min, w_max);
  std::normal_distribution<double> height(0.0, 1.0);
  auto field = [&] {
    Samples f(grid.size(), 0.0);
    for (int b = 0; b < 3; ++b) {
      const double c = center(rng);
      const double w = width(rng);
      const double h = height(rng);
      for (std::size_t j = 0; j < f.size(); ++j) {
        double z = grid.x(j) - c;
        z -= grid.length() * std::floor(z / grid.length() + 0.5);
        f[j] += h * std::exp(-z * z / (w * w));
      }
    }
    return f;
  };
  Samples u = field();
  std::vector<Samples> phi;
  for (std::size_t i = 0; i < components; ++i) phi.push_back(field());
  return FieldState(grid, std::move(u), std::move(phi));
}

/// Rescales every field so that ||(u, xi)||_{L2} = norm. The zero state is
/// returned unchanged.
inline FieldState normalize_l2(const FieldState& s, double norm) {
  const double current = std::sqrt(l2_norm_sq(s));
  if (current == 0.0) return s;
  const double f = norm / current;
  Samples u = s.u();
  for (double& v : u) v *= f;
  std::vector<Samples> phi = s.phi();
  for (auto& p : phi) {
    for (double& v : p) v *= f;
  }
  return FieldState(s.grid(), std::move(u), std::move(phi), s.time());
}

}  // namespace ckdv

#endif
