#ifndef CKDV_FIELDS_HPP
#define CKDV_FIELDS_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ckdv/error.hpp"
#include "ckdv/grid.hpp"

namespace ckdv {

/// The real field u together with the K real coefficient fields phi_i of the
/// Clifford-valued field xi = sum_i phi_i e_i (+ higher generator products,
/// flattened into further components).
///
/// Only the body of xi xibar, sum_i phi_i^2, ever enters the dynamics or the
/// charges, so no generator arithmetic is modeled.
class FieldState {
 public:
  FieldState(Grid grid, Samples u, std::vector<Samples> phi, double t = 0.0)
      : grid_(std::move(grid)), u_(std::move(u)), phi_(std::move(phi)), t_(t) {
    grid_.check_size(u_);
    for (const auto& p : phi_) grid_.check_size(p);
    check_finite();
  }

  /// Zero state with K components.
  static FieldState zero(const Grid& grid, std::size_t components,
                         double t = 0.0) {
    return FieldState(grid, Samples(grid.size(), 0.0),
                      std::vector<Samples>(components, Samples(grid.size(), 0.0)),
                      t);
  }

  const Grid& grid() const { return grid_; }
  const Samples& u() const { return u_; }
  const std::vector<Samples>& phi() const { return phi_; }
  const Samples& phi(std::size_t i) const { return phi_.at(i); }
  std::size_t components() const { return phi_.size(); }
  double time() const { return t_; }

  FieldState with_time(double t) const {
    FieldState s = *this;
    s.t_ = t;
    return s;
  }

  /// Throws BlowUp naming the first non-finite field (0 = u, i = phi_i).
  void check_finite() const {
    auto bad = [](const Samples& f) {
      for (double v : f) {
        if (!std::isfinite(v)) return true;
      }
      return false;
    };
    if (bad(u_)) throw BlowUp(t_, t_, 0);
    for (std::size_t i = 0; i < phi_.size(); ++i) {
      if (bad(phi_[i])) throw BlowUp(t_, t_, i + 1);
    }
  }

 private:
  Grid grid_;
  Samples u_;
  std::vector<Samples> phi_;
  double t_;
};

/// P(xi xibar) = sum_i phi_i^2, pointwise.
inline Samples body_p(const FieldState& s) {
  Samples p(s.grid().size(), 0.0);
  for (const auto& phi : s.phi()) {
    for (std::size_t j = 0; j < p.size(); ++j) p[j] += phi[j] * phi[j];
  }
  return p;
}

/// ||(u, xi)||^2 in L2, i.e. the integral of u^2 + P(xi xibar).
inline double l2_norm_sq(const FieldState& s) {
  const Samples p = body_p(s);
  Samples density(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    density[j] = s.u()[j] * s.u()[j] + p[j];
  }
  return integrate(s.grid(), density);
}

/// Applies d/dx to every field.
inline FieldState spatial_derivative(const FieldState& s) {
  std::vector<Samples> dphi;
  dphi.reserve(s.components());
  for (const auto& phi : s.phi()) dphi.push_back(deriv(s.grid(), phi, 1));
  return FieldState(s.grid(), deriv(s.grid(), s.u(), 1), std::move(dphi),
                    s.time());
}

inline double sobolev_h1_norm_sq(const FieldState& s) {
  return l2_norm_sq(s) + l2_norm_sq(spatial_derivative(s));
}

/// Mixes the phi components with a K x K matrix (row-major):
/// phi'_i = sum_j q_ij phi_j. With q orthogonal the body P is unchanged.
inline FieldState mix_components(const FieldState& s,
                                 const std::vector<std::vector<double>>& q) {
  const std::size_t k = s.components();
  if (q.size() != k) throw UnsupportedShape("mixing matrix must be K x K");
  std::vector<Samples> out(k, Samples(s.grid().size(), 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    if (q[i].size() != k) throw UnsupportedShape("mixing matrix must be K x K");
    for (std::size_t m = 0; m < k; ++m) {
      for (std::size_t j = 0; j < out[i].size(); ++j) {
        out[i][j] += q[i][m] * s.phi(m)[j];
      }
    }
  }
  return FieldState(s.grid(), s.u(), std::move(out), s.time());
}

}  // namespace ckdv

#endif
