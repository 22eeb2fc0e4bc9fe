#ifndef CKDV_HAMILTONIAN_HPP
#define CKDV_HAMILTONIAN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ckdv/charges.hpp"
#include "ckdv/dynamics.hpp"
#include "ckdv/error.hpp"
#include "ckdv/fields.hpp"
#include "ckdv/grid.hpp"

namespace ckdv {

/// A point of the constrained phase space: potentials w, eta_i with
/// u = w', phi_i = eta_i', and conjugate momenta p, sigma_i. On the
/// constraint surface p = w'/2 and sigma_i = eta_i'/2.
struct ConstraintPair {
  Grid grid;
  Samples w;
  Samples p;
  std::vector<Samples> eta;
  std::vector<Samples> sigma;

  std::size_t components() const { return eta.size(); }
};

/// Requires zero-mean u and phi_i.
inline ConstraintPair lift_to_potentials(const FieldState& s) {
  const Grid& g = s.grid();
  ConstraintPair cp{g, antideriv(g, s.u()), s.u(), {}, {}};
  for (double& v : cp.p) v *= 0.5;
  for (const auto& phi : s.phi()) {
    cp.eta.push_back(antideriv(g, phi));
    Samples sigma = phi;
    for (double& v : sigma) v *= 0.5;
    cp.sigma.push_back(std::move(sigma));
  }
  return cp;
}

/// max over all points of |p - w'/2| and |sigma_i - eta_i'/2|.
inline double constraint_residual(const ConstraintPair& cp) {
  const Grid& g = cp.grid;
  double worst = 0.0;
  auto check = [&](const Samples& momentum, const Samples& potential) {
    const Samples d = deriv(g, potential, 1);
    for (std::size_t j = 0; j < d.size(); ++j) {
      worst = std::max(worst, std::abs(momentum[j] - 0.5 * d[j]));
    }
  };
  check(cp.p, cp.w);
  for (std::size_t i = 0; i < cp.components(); ++i) check(cp.sigma[i], cp.eta[i]);
  return worst;
}

/// The fields (u, phi) = (w', eta') of a phase point.
inline FieldState fields_of(const ConstraintPair& cp, double t = 0.0) {
  std::vector<Samples> phi;
  for (const auto& eta : cp.eta) phi.push_back(deriv(cp.grid, eta, 1));
  return FieldState(cp.grid, deriv(cp.grid, cp.w, 1), std::move(phi), t);
}

/// Lagrangian density
///   w' w_t / 2 + (w')^3 / 6 - (w'')^2 / 2 + (lambda/4) w' sum (eta_i')^2
///   + sum [ eta_i' eta_i,t / 2 - (eta_i'')^2 / 2 ]
/// with w_t, eta_i,t the zero-mean antiderivatives of the field velocities.
inline Samples lagrangian_density(const ConstraintPair& cp, const Samples& u_t,
                                  const std::vector<Samples>& phi_t, double lambda) {
  const Grid& g = cp.grid;
  if (phi_t.size() != cp.components()) {
    throw UnsupportedShape("velocity component count does not match phase point");
  }
  const Samples w_t = antideriv(g, u_t);
  const Samples w1 = deriv(g, cp.w, 1);
  const Samples w2 = deriv(g, cp.w, 2);
  Samples density(g.size());
  for (std::size_t j = 0; j < density.size(); ++j) {
    density[j] = 0.5 * w1[j] * w_t[j] + w1[j] * w1[j] * w1[j] / 6.0 -
                 0.5 * w2[j] * w2[j];
  }
  for (std::size_t i = 0; i < cp.components(); ++i) {
    const Samples eta_t = antideriv(g, phi_t[i]);
    const Samples e1 = deriv(g, cp.eta[i], 1);
    const Samples e2 = deriv(g, cp.eta[i], 2);
    for (std::size_t j = 0; j < density.size(); ++j) {
      density[j] += 0.25 * lambda * w1[j] * e1[j] * e1[j] + 0.5 * e1[j] * eta_t[j] -
                    0.5 * e2[j] * e2[j];
    }
  }
  return density;
}

/// <p w_t + sigma_i eta_i,t - L>_x with on-shell velocities; equals H5 / 2.
inline double legendre_hamiltonian(const ConstraintPair& cp, double lambda) {
  const double scale =
      std::max({1.0, max_abs(cp.p), [&] {
                  double m = 0.0;
                  for (const auto& s : cp.sigma) m = std::max(m, max_abs(s));
                  return m;
                }()});
  const double residual = constraint_residual(cp);
  if (residual > 1e-12 * scale) {
    throw InvalidPhasePoint("primary constraints violated by " +
                            std::to_string(residual));
  }
  const Grid& g = cp.grid;
  const FieldState s = fields_of(cp);
  const FieldRates v = rhs(s, lambda);
  const Samples density = lagrangian_density(cp, v.u, v.phi, lambda);
  const Samples w_t = antideriv(g, v.u);
  Samples h(g.size());
  for (std::size_t j = 0; j < h.size(); ++j) h[j] = cp.p[j] * w_t[j] - density[j];
  for (std::size_t i = 0; i < cp.components(); ++i) {
    const Samples eta_t = antideriv(g, v.phi[i]);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] += cp.sigma[i][j] * eta_t[j];
  }
  return integrate(g, h);
}

/// dH5/du = -u^2 - (lambda/2) P - 2 u''.
inline Samples functional_derivative_u(const FieldState& s, double lambda) {
  const Samples p = body_p(s);
  const Samples u2 = deriv(s.grid(), s.u(), 2);
  Samples out(p.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double u = s.u()[j];
    out[j] = -u * u - 0.5 * lambda * p[j] - 2.0 * u2[j];
  }
  return out;
}

/// dH5/dphi_i = -lambda u phi_i - 2 phi_i''.
inline Samples functional_derivative_phi(const FieldState& s, double lambda,
                                         std::size_t i) {
  if (i >= s.components()) {
    throw UnsupportedShape("component index " + std::to_string(i) + " out of range");
  }
  const Samples& phi = s.phi(i);
  const Samples phi2 = deriv(s.grid(), phi, 2);
  Samples out(phi.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = -lambda * s.u()[j] * phi[j] - 2.0 * phi2[j];
  }
  return out;
}

/// Flow generated by H = H5/2 through the Dirac brackets
/// {u(x),u(y)} = {phi_i(x),phi_j(y)}/delta_ij = d/dx delta(x-y), {u,phi_i} = 0:
/// u_t = d/dx (dH/du), phi_i,t = d/dx (dH/dphi_i).
/// Products are pointwise (no dealiasing).
inline FieldRates dirac_rhs(const FieldState& s, double lambda) {
  const Grid& g = s.grid();
  auto flow = [&](Samples grad) {
    for (double& v : grad) v *= 0.5;
    return deriv(g, grad, 1);
  };
  FieldRates r;
  r.u = flow(functional_derivative_u(s, lambda));
  for (std::size_t i = 0; i < s.components(); ++i) {
    r.phi.push_back(flow(functional_derivative_phi(s, lambda, i)));
  }
  return r;
}

namespace detail {

// Gradient of the smeared constraint V_I[f] = <f v_I> over the discrete phase
// space (q_0, p_0, q_1, p_1, ...), q_0 = w, q_i = eta_i. Only block I is
// non-zero: dV/dq_I = -(dx/2) D^T f, dV/dp_I = dx f, with D the spectral
// derivative matrix.
struct ConstraintGradient {
  std::vector<Samples> dq;
  std::vector<Samples> dp;
};

inline std::vector<Samples> derivative_matrix_columns(const Grid& g) {
  std::vector<Samples> cols(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    Samples e(g.size(), 0.0);
    e[j] = 1.0;
    cols[j] = deriv(g, e, 1);
  }
  return cols;
}

inline ConstraintGradient constraint_gradient(const Grid& g,
                                              const std::vector<Samples>& d_cols,
                                              std::size_t blocks, std::size_t block,
                                              const Samples& f) {
  const std::size_t n = g.size();
  ConstraintGradient gr{std::vector<Samples>(blocks, Samples(n, 0.0)),
                        std::vector<Samples>(blocks, Samples(n, 0.0))};
  for (std::size_t j = 0; j < n; ++j) {
    double dtf = 0.0;
    for (std::size_t l = 0; l < n; ++l) dtf += d_cols[j][l] * f[l];
    gr.dq[block][j] = -0.5 * g.dx() * dtf;
    gr.dp[block][j] = g.dx() * f[j];
  }
  return gr;
}

// Canonical bracket with {q_Ij, p_Jl} = delta_IJ delta_jl / dx.
inline double canonical_bracket(const ConstraintGradient& a,
                                const ConstraintGradient& b, double dx) {
  double bracket = 0.0;
  for (std::size_t blk = 0; blk < a.dq.size(); ++blk) {
    for (std::size_t j = 0; j < a.dq[blk].size(); ++j) {
      bracket += (a.dq[blk][j] * b.dp[blk][j] - a.dp[blk][j] * b.dq[blk][j]) / dx;
    }
  }
  return bracket;
}

}  // namespace detail

/// {V_I[f], V_J[g]} for the smeared constraints V_I[f] = <f v_I>,
/// v_0 = p - w'/2, v_i = sigma_i - eta_i'/2, assembled from the canonical
/// brackets {w_j, p_l} = {eta_ij, sigma_il} = delta_jl / dx by bilinearity.
/// Block 0 is (w, p), block i is (eta_i, sigma_i).
inline double constraint_bracket(const ConstraintPair& cp, std::size_t block_i,
                                 const Samples& f, std::size_t block_j,
                                 const Samples& g) {
  const std::size_t blocks = cp.components() + 1;
  if (block_i >= blocks || block_j >= blocks) {
    throw UnsupportedShape("constraint block out of range");
  }
  cp.grid.check_size(f);
  cp.grid.check_size(g);
  const auto cols = detail::derivative_matrix_columns(cp.grid);
  return detail::canonical_bracket(
      detail::constraint_gradient(cp.grid, cols, blocks, block_i, f),
      detail::constraint_gradient(cp.grid, cols, blocks, block_j, g), cp.grid.dx());
}

struct BracketCheck {
  bool holds = false;
  double max_deviation = 0.0;
};

/// Checks {V_I[f], V_J[g]} = -delta_IJ integral f g' (second-class pair with
/// bracket -delta_IJ d/dx delta) for the constant and the sin/cos modes
/// m = 1..3, over every pair of blocks.
inline BracketCheck constraint_bracket_matrix_check(const ConstraintPair& cp) {
  const Grid& g = cp.grid;
  const std::size_t n = g.size();
  const std::size_t blocks = cp.components() + 1;

  std::vector<Samples> tests;
  tests.emplace_back(n, 1.0);
  for (int m = 1; m <= 3; ++m) {
    Samples sn(n);
    Samples cs(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double arg = 2.0 * std::numbers::pi * m * g.x(j) / g.length();
      sn[j] = std::sin(arg);
      cs[j] = std::cos(arg);
    }
    tests.push_back(std::move(sn));
    tests.push_back(std::move(cs));
  }

  const auto cols = detail::derivative_matrix_columns(g);
  std::vector<std::vector<detail::ConstraintGradient>> grads(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (const auto& f : tests) {
      grads[b].push_back(detail::constraint_gradient(g, cols, blocks, b, f));
    }
  }

  BracketCheck result{true, 0.0};
  for (std::size_t bi = 0; bi < blocks; ++bi) {
    for (std::size_t bj = 0; bj < blocks; ++bj) {
      for (std::size_t a = 0; a < tests.size(); ++a) {
        for (std::size_t b = 0; b < tests.size(); ++b) {
          const double bracket =
              detail::canonical_bracket(grads[bi][a], grads[bj][b], g.dx());
          double expected = 0.0;
          if (bi == bj) {
            const Samples dh = deriv(g, tests[b], 1);
            Samples fh(n);
            for (std::size_t j = 0; j < n; ++j) fh[j] = tests[a][j] * dh[j];
            expected = -integrate(g, fh);
          }
          const double dev = std::abs(bracket - expected);
          result.max_deviation = std::max(result.max_deviation, dev);
          if (dev > 1e-10 * std::max(1.0, std::abs(expected))) result.holds = false;
        }
      }
    }
  }
  return result;
}

}  // namespace ckdv

#endif
