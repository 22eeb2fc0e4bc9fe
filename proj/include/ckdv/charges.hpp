#ifndef CKDV_CHARGES_HPP
#define CKDV_CHARGES_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ckdv/error.hpp"
#include "ckdv/fields.hpp"
#include "ckdv/grid.hpp"

namespace ckdv {

/// Conserved quantities of the lambda-family sampled at one instant.
struct ChargeReport {
  double t = 0.0;
  std::vector<double> h_half;  // integral of phi_i, per component
  double h1 = 0.0;
  double h3 = 0.0;
  double h5 = 0.0;
  double nonlocal = 0.0;
  double l2 = 0.0;
  double sobolev_h1 = 0.0;
};

inline std::vector<double> charge_h_half(const FieldState& s) {
  std::vector<double> out;
  out.reserve(s.components());
  for (const auto& phi : s.phi()) out.push_back(integrate(s.grid(), phi));
  return out;
}

inline double charge_h1(const FieldState& s) { return integrate(s.grid(), s.u()); }

/// Integral of u^2 + sum phi_i^2, summed field by field and cross-checked
/// against l2_norm_sq().
inline double charge_h3(const FieldState& s) {
  const Grid& g = s.grid();
  auto square_integral = [&](const Samples& f) {
    Samples sq(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) sq[j] = f[j] * f[j];
    return integrate(g, sq);
  };
  double h3 = square_integral(s.u());
  for (const auto& phi : s.phi()) h3 += square_integral(phi);
  const double l2 = l2_norm_sq(s);
  if (std::abs(h3 - l2) > 1e-12 * std::max(1.0, std::abs(l2))) {
    throw ConsistencyError("H3 disagrees with the L2 norm");
  }
  return h3;
}

/// Density of H5: -u^3/3 - (lambda/2) u P + (u')^2 + sum (phi_i')^2.
inline Samples h5_density(const FieldState& s, double lambda) {
  const Grid& g = s.grid();
  const Samples p = body_p(s);
  const Samples du = deriv(g, s.u(), 1);
  Samples density(g.size());
  for (std::size_t j = 0; j < density.size(); ++j) {
    const double u = s.u()[j];
    density[j] = -u * u * u / 3.0 - 0.5 * lambda * u * p[j] + du[j] * du[j];
  }
  for (const auto& phi : s.phi()) {
    const Samples dphi = deriv(g, phi, 1);
    for (std::size_t j = 0; j < density.size(); ++j) density[j] += dphi[j] * dphi[j];
  }
  return density;
}

/// H5; the Hamiltonian of the flow is H = H5 / 2.
inline double charge_h5(const FieldState& s, double lambda) {
  return integrate(s.grid(), h5_density(s, lambda));
}

/// Non-local charge sum_i integral phi_i(x) integral_{-inf}^x phi_i(s) ds dx.
///
/// Path (a) quadratures phi_i against its left-anchored cumulative integral;
/// path (b) is the closed form (1/2) sum_i (integral phi_i)^2. Both are
/// evaluated and must agree to 1e-8 of the natural scale
/// (1/2) sum_i (integral |phi_i|)^2.
inline double charge_nonlocal(const FieldState& s) {
  const Grid& g = s.grid();
  double path_a = 0.0;
  double path_b = 0.0;
  double scale = 0.0;
  for (const auto& phi : s.phi()) {
    const Samples cum = cumulative(g, phi);
    Samples prod(phi.size());
    Samples mag(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) {
      prod[j] = phi[j] * cum[j];
      mag[j] = std::abs(phi[j]);
    }
    path_a += integrate(g, prod);
    const double total = integrate(g, phi);
    path_b += 0.5 * total * total;
    const double abs_total = integrate(g, mag);
    scale += 0.5 * abs_total * abs_total;
  }
  if (std::abs(path_a - path_b) > 1e-8 * scale) {
    throw ConsistencyError("non-local charge paths disagree");
  }
  return path_a;
}

/// integral u(x) integral_{-inf}^x phi_1(s) ds dx, the SKdV non-local quantity
/// that the broken system does not conserve.
inline double skdv_witness(const FieldState& s) {
  if (s.components() < 1) throw UnsupportedShape("witness needs K >= 1");
  const Samples cum = cumulative(s.grid(), s.phi(0));
  Samples prod(cum.size());
  for (std::size_t j = 0; j < cum.size(); ++j) prod[j] = s.u()[j] * cum[j];
  return integrate(s.grid(), prod);
}

inline ChargeReport charge_report(const FieldState& s, double lambda) {
  ChargeReport r;
  r.t = s.time();
  r.h_half = charge_h_half(s);
  r.h1 = charge_h1(s);
  r.h3 = charge_h3(s);
  r.h5 = charge_h5(s, lambda);
  r.nonlocal = charge_nonlocal(s);
  r.l2 = l2_norm_sq(s);
  r.sobolev_h1 = sobolev_h1_norm_sq(s);
  return r;
}

/// 1 + (m / (4 sqrt 2))^2 with m = max(1, |lambda|), written as 1 + m^2/32.
inline double lower_bound_constant(double lambda) {
  const double m = std::max(1.0, std::abs(lambda));
  return 1.0 + m * m / 32.0;
}

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
};

/// H5 >= -(1 + (m/(4 sqrt 2))^2) H3.
inline BoundCheck bound_check(const FieldState& s, double lambda) {
  BoundCheck b;
  b.lhs = charge_h5(s, lambda);
  b.rhs = -lower_bound_constant(lambda) * charge_h3(s);
  b.margin = b.lhs - b.rhs;
  b.holds = b.lhs >= b.rhs - 1e-10 * (1.0 + std::abs(b.rhs));
  return b;
}

struct SupBoundCheck {
  double sup_u = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// sup|u| <= ||u||_{H1} / sqrt(2), with u alone in the norm.
inline SupBoundCheck sobolev_sup_bound_check(const FieldState& s) {
  const FieldState u_only(s.grid(), s.u(), {}, s.time());
  SupBoundCheck c;
  c.sup_u = max_abs(s.u());
  c.bound = std::sqrt(sobolev_h1_norm_sq(u_only)) / std::numbers::sqrt2;
  c.holds = c.sup_u <= c.bound * (1.0 + 1e-12);
  return c;
}

}  // namespace ckdv

#endif
