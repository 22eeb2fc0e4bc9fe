#ifndef CKDV_SOLITONS_HPP
#define CKDV_SOLITONS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ckdv/dynamics.hpp"
#include "ckdv/error.hpp"
#include "ckdv/fields.hpp"
#include "ckdv/grid.hpp"

namespace ckdv {

enum class VelocityMode {
  paper,     // v = 1 + C, as printed alongside the solution
  oracle,    // v = C, the speed that zeroes the traveling-wave residual
  explicit_  // user supplied
};

/// u = 3C sech^2(z), z = sqrt(C)/2 (x - L/2 - v t + a), xi = 0.
/// Positions are measured from the box center and wrap periodically.
struct SolitonSpec {
  double C = 1.0;
  double a = 0.0;
  VelocityMode velocity_mode = VelocityMode::oracle;
  double explicit_velocity = 0.0;
};

inline double soliton_velocity(const SolitonSpec& spec) {
  switch (spec.velocity_mode) {
    case VelocityMode::paper:
      return 1.0 + spec.C;
    case VelocityMode::oracle:
      return spec.C;
    case VelocityMode::explicit_:
      return spec.explicit_velocity;
  }
  return spec.C;
}

namespace detail {

inline void check_soliton_spec(const SolitonSpec& spec) {
  if (!(spec.C > 0.0) || !std::isfinite(spec.C)) {
    throw ContractViolation("soliton amplitude parameter C must be > 0");
  }
}

// Position relative to the moving center, wrapped into [-L/2, L/2).
inline double soliton_coordinate(const SolitonSpec& spec, const Grid& grid,
                                 std::size_t j, double t) {
  const double len = grid.length();
  double z = grid.x(j) - 0.5 * len - soliton_velocity(spec) * t + spec.a;
  z -= len * std::floor(z / len + 0.5);
  return z;
}

inline double sech2(double z) {
  const double c = std::cosh(z);
  return 1.0 / (c * c);
}

}  // namespace detail

/// Samples the one-soliton with K zero components.
inline FieldState one_soliton(const SolitonSpec& spec, const Grid& grid, double t,
                              std::size_t components = 0) {
  detail::check_soliton_spec(spec);
  const double k = 0.5 * std::sqrt(spec.C);
  if (detail::sech2(k * 0.5 * grid.length()) > 1e-12) {
    throw DomainTooSmall("soliton tails exceed 1e-12 of the peak on a box of length " +
                         std::to_string(grid.length()));
  }
  Samples u(grid.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    u[j] = 3.0 * spec.C * detail::sech2(k * detail::soliton_coordinate(spec, grid, j, t));
  }
  return FieldState(grid, std::move(u),
                    std::vector<Samples>(components, Samples(grid.size(), 0.0)), t);
}

/// max |-v du_exact - rhs(s).u| for a profile s translating at speed v.
inline double traveling_wave_residual(const FieldState& s, const Samples& du_exact,
                                      double v, double lambda) {
  s.grid().check_size(du_exact);
  const FieldRates r = rhs(s, lambda);
  double worst = 0.0;
  for (std::size_t j = 0; j < du_exact.size(); ++j) {
    worst = std::max(worst, std::abs(-v * du_exact[j] - r.u[j]));
  }
  return worst;
}

/// Residual of the one-soliton at its configured velocity, using the
/// analytic u' = -6 C k sech^2(z) tanh(z). Independent of lambda (xi = 0).
inline double residual_check(const SolitonSpec& spec, const Grid& grid, double t,
                             double lambda) {
  const FieldState s = one_soliton(spec, grid, t);
  const double k = 0.5 * std::sqrt(spec.C);
  Samples du(grid.size());
  for (std::size_t j = 0; j < du.size(); ++j) {
    const double z = k * detail::soliton_coordinate(spec, grid, j, t);
    du[j] = -6.0 * spec.C * k * detail::sech2(z) * std::tanh(z);
  }
  return traveling_wave_residual(s, du, soliton_velocity(spec), lambda);
}

namespace detail {

struct ProfileValue {
  double u = 0.0;
  double u_t = 0.0;
};

// Hirota two-soliton of u_t + u u' + u''' = 0, u = 12 (log f)_xx with
// f = 1 + e^eta1 + e^eta2 + A e^(eta1+eta2), eta_i = kappa_i x - kappa_i^3 t,
// A = ((kappa1-kappa2)/(kappa1+kappa2))^2. Written with normalized weights
// w_s = e^E_s / sum e^E so large exponents do not overflow:
//   (log f)_xx = 1/2 sum_{s,r} w_s w_r (D_s - D_r)^2.
inline ProfileValue two_soliton_value(double kappa1, double kappa2, double x,
                                      double t) {
  const double log_a = 2.0 * std::log(std::abs((kappa1 - kappa2) / (kappa1 + kappa2)));
  const double eta1 = kappa1 * x - kappa1 * kappa1 * kappa1 * t;
  const double eta2 = kappa2 * x - kappa2 * kappa2 * kappa2 * t;
  const std::array<double, 4> e{0.0, eta1, eta2, eta1 + eta2 + log_a};
  const std::array<double, 4> d{0.0, kappa1, kappa2, kappa1 + kappa2};
  const double w1 = -kappa1 * kappa1 * kappa1;
  const double w2 = -kappa2 * kappa2 * kappa2;
  const std::array<double, 4> rate{0.0, w1, w2, w1 + w2};

  const double e_max = *std::max_element(e.begin(), e.end());
  std::array<double, 4> w{};
  double total = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    w[s] = std::exp(e[s] - e_max);
    total += w[s];
  }
  double mean_rate = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    w[s] /= total;
    mean_rate += w[s] * rate[s];
  }
  double lxx = 0.0;
  double lxxt = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t r = 0; r < 4; ++r) {
      const double dd = (d[s] - d[r]) * (d[s] - d[r]);
      lxx += 0.5 * w[s] * w[r] * dd;
      lxxt += 0.5 * w[s] * w[r] * dd * (rate[s] + rate[r] - 2.0 * mean_rate);
    }
  }
  return {12.0 * lxx, 12.0 * lxxt};
}

inline void check_two_soliton(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw ContractViolation("two-soliton parameters must be > 0");
  }
  if (c1 == c2) throw DegenerateParameters("two-soliton needs C1 != C2");
}

}  // namespace detail

/// Exact KdV two-soliton with xi = 0. Both solitons are centered at the box
/// middle at t = 0; for t -> +inf the faster one carries the phase shift
/// log(((kappa1-kappa2)/(kappa1+kappa2))^2), kappa = sqrt(C).
inline FieldState kdv_two_soliton(double c1, double c2, const Grid& grid, double t,
                                  std::size_t components = 0) {
  detail::check_two_soliton(c1, c2);
  const double k1 = std::sqrt(c1);
  const double k2 = std::sqrt(c2);
  Samples u(grid.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    u[j] = detail::two_soliton_value(k1, k2, grid.x(j) - 0.5 * grid.length(), t).u;
  }
  const double peak = max_abs(u);
  const double edge =
      std::max(std::abs(u[0]),
               std::abs(detail::two_soliton_value(k1, k2, 0.5 * grid.length(), t).u));
  if (edge > 1e-12 * peak) {
    throw DomainTooSmall("two-soliton tails exceed 1e-12 of the peak");
  }
  return FieldState(grid, std::move(u),
                    std::vector<Samples>(components, Samples(grid.size(), 0.0)), t);
}

/// max |u_t(exact) - rhs(u)| for the two-soliton.
inline double two_soliton_residual(double c1, double c2, const Grid& grid, double t,
                                   double lambda) {
  const FieldState s = kdv_two_soliton(c1, c2, grid, t);
  const FieldRates r = rhs(s, lambda);
  const double k1 = std::sqrt(c1);
  const double k2 = std::sqrt(c2);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto v = detail::two_soliton_value(k1, k2, grid.x(j) - 0.5 * grid.length(), t);
    worst = std::max(worst, std::abs(v.u_t - r.u[j]));
  }
  return worst;
}

}  // namespace ckdv

#endif
