#ifndef CKDV_DYNAMICS_HPP
#define CKDV_DYNAMICS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ckdv/charges.hpp"
#include "ckdv/error.hpp"
#include "ckdv/fields.hpp"
#include "ckdv/grid.hpp"

namespace ckdv {

enum class Integrator { rk4, ifrk4 };

inline std::string to_string(Integrator i) {
  return i == Integrator::rk4 ? "rk4" : "ifrk4";
}

struct SolverConfig {
  double lambda = 1.0;
  double dt = 1e-4;
  double t_end = 0.0;
  Integrator integrator = Integrator::ifrk4;
  bool dealias = true;
  std::size_t sample_every = 1;
};

/// Any |field value| above this aborts the run.
inline constexpr double kBlowUpThreshold = 1e12;

inline void validate(const SolverConfig& cfg, const Grid& grid) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw ConfigError("dt must be finite and > 0");
  }
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
    throw ConfigError("t_end must be finite and >= 0");
  }
  if (!std::isfinite(cfg.lambda)) throw ConfigError("lambda must be finite");
  if (cfg.sample_every < 1) throw ConfigError("sample_every must be >= 1");
  if (cfg.integrator == Integrator::rk4) {
    const double k = grid.max_retained_wavenumber();
    const double limit = 2.5 / (k * k * k);
    if (cfg.dt > limit) {
      throw ConfigError("rk4 requires dt <= 2.5/k_max^3 = " + std::to_string(limit));
    }
  }
}

/// Time derivatives of (u, phi_1..phi_K).
struct FieldRates {
  Samples u;
  std::vector<Samples> phi;
};

namespace detail {

// Index 0 is u, index i >= 1 is phi_i.
using SpectralFields = std::vector<Spectrum>;

inline SpectralFields to_spectral(const FieldState& s) {
  SpectralFields out;
  out.reserve(s.components() + 1);
  out.push_back(s.grid().forward(s.u()));
  for (const auto& phi : s.phi()) out.push_back(s.grid().forward(phi));
  return out;
}

inline std::vector<Samples> to_physical(const Grid& grid,
                                        const SpectralFields& f) {
  std::vector<Samples> out;
  out.reserve(f.size());
  for (const auto& c : f) out.push_back(grid.inverse(c));
  return out;
}

// Nonlinear part of the lambda system in spectral form:
//   N_u     = d/dx ( -u^2/2 - (lambda/4) sum phi_i^2 )
//   N_phi_i = d/dx ( -(lambda/2) u phi_i )
// Products use the 3/2 rule when `dealias` is set.
inline SpectralFields nonlinear_term(const Grid& grid, const SpectralFields& f,
                                     double lambda, bool dealias, double t) {
  std::vector<Samples> phys;
  phys.reserve(f.size());
  for (const auto& c : f) {
    phys.push_back(dealias ? grid.inverse_padded(c) : grid.inverse(c));
  }
  const std::size_t np = phys[0].size();
  const Samples& u = phys[0];

  std::vector<Samples> flux(f.size(), Samples(np, 0.0));
  for (std::size_t j = 0; j < np; ++j) flux[0][j] = -0.5 * u[j] * u[j];
  for (std::size_t i = 1; i < f.size(); ++i) {
    const Samples& phi = phys[i];
    for (std::size_t j = 0; j < np; ++j) {
      flux[0][j] -= 0.25 * lambda * phi[j] * phi[j];
      flux[i][j] = -0.5 * lambda * u[j] * phi[j];
    }
  }
  for (std::size_t i = 0; i < flux.size(); ++i) {
    for (double v : flux[i]) {
      if (!std::isfinite(v)) throw BlowUp(t, t, i);
    }
  }

  SpectralFields out;
  out.reserve(f.size());
  for (const auto& q : flux) {
    Spectrum c = dealias ? grid.forward_padded(q) : grid.forward(q);
    for (std::size_t m = 0; m < c.size(); ++m) {
      c[m] *= derivative_symbol(grid, m, 1);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Symbol of the linear operator -d^3/dx^3.
inline std::vector<std::complex<double>> linear_symbol(const Grid& grid) {
  std::vector<std::complex<double>> l(grid.spectrum_size());
  for (std::size_t m = 0; m < l.size(); ++m) l[m] = -derivative_symbol(grid, m, 3);
  return l;
}

inline SpectralFields full_rhs(const Grid& grid, const SpectralFields& f,
                               double lambda, bool dealias, double t) {
  SpectralFields out = nonlinear_term(grid, f, lambda, dealias, t);
  const auto l = linear_symbol(grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t m = 0; m < l.size(); ++m) out[i][m] += l[m] * f[i][m];
  }
  return out;
}

// y + a * x, fieldwise.
inline SpectralFields axpy(const SpectralFields& y, double a,
                           const SpectralFields& x) {
  SpectralFields out = y;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t m = 0; m < out[i].size(); ++m) out[i][m] += a * x[i][m];
  }
  return out;
}

inline SpectralFields scale_modes(const std::vector<std::complex<double>>& e,
                                  const SpectralFields& x) {
  SpectralFields out = x;
  for (auto& c : out) {
    for (std::size_t m = 0; m < c.size(); ++m) c[m] *= e[m];
  }
  return out;
}

// Fixed-step stepper for one (grid, config, dt) triple; caches the
// integrating-factor exponentials.
class Stepper {
 public:
  Stepper(const Grid& grid, const SolverConfig& cfg, double dt)
      : grid_(grid), cfg_(cfg), dt_(dt) {
    if (cfg.integrator == Integrator::ifrk4) {
      const auto l = linear_symbol(grid);
      half_.resize(l.size());
      full_.resize(l.size());
      for (std::size_t m = 0; m < l.size(); ++m) {
        half_[m] = std::exp(l[m] * (0.5 * dt));
        full_[m] = std::exp(l[m] * dt);
      }
    }
  }

  SpectralFields advance(const SpectralFields& v, double t) const {
    return cfg_.integrator == Integrator::rk4 ? rk4(v, t) : ifrk4(v, t);
  }

 private:
  SpectralFields rk4(const SpectralFields& v, double t) const {
    const double h = dt_;
    const auto f = [&](const SpectralFields& y, double tt) {
      return full_rhs(grid_, y, cfg_.lambda, cfg_.dealias, tt);
    };
    const SpectralFields k1 = f(v, t);
    const SpectralFields k2 = f(axpy(v, 0.5 * h, k1), t + 0.5 * h);
    const SpectralFields k3 = f(axpy(v, 0.5 * h, k2), t + 0.5 * h);
    const SpectralFields k4 = f(axpy(v, h, k3), t + h);
    SpectralFields out = v;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t m = 0; m < out[i].size(); ++m) {
        out[i][m] += h / 6.0 *
                     (k1[i][m] + 2.0 * k2[i][m] + 2.0 * k3[i][m] + k4[i][m]);
      }
    }
    return out;
  }

  // Integrating-factor RK4: the dispersive term is propagated exactly by
  // exp(L dt), classical RK4 handles the nonlinear remainder.
  SpectralFields ifrk4(const SpectralFields& v, double t) const {
    const double h = dt_;
    const auto n = [&](const SpectralFields& y, double tt) {
      return nonlinear_term(grid_, y, cfg_.lambda, cfg_.dealias, tt);
    };
    const SpectralFields a = n(v, t);
    const SpectralFields ev = scale_modes(half_, v);
    const SpectralFields b = n(scale_modes(half_, axpy(v, 0.5 * h, a)), t + 0.5 * h);
    const SpectralFields c = n(axpy(ev, 0.5 * h, b), t + 0.5 * h);
    const SpectralFields d =
        n(axpy(scale_modes(full_, v), h, scale_modes(half_, c)), t + h);
    SpectralFields out = v;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t m = 0; m < out[i].size(); ++m) {
        out[i][m] = full_[m] * v[i][m] +
                    h / 6.0 *
                        (full_[m] * a[i][m] + 2.0 * half_[m] * (b[i][m] + c[i][m]) +
                         d[i][m]);
      }
    }
    return out;
  }

  Grid grid_;
  SolverConfig cfg_;
  double dt_;
  std::vector<std::complex<double>> half_;
  std::vector<std::complex<double>> full_;
};

inline FieldState accept(const Grid& grid, const SpectralFields& f, double t,
                         double last_good_t) {
  std::vector<Samples> phys = to_physical(grid, f);
  for (std::size_t i = 0; i < phys.size(); ++i) {
    for (double v : phys[i]) {
      if (!std::isfinite(v) || std::abs(v) > kBlowUpThreshold) {
        throw BlowUp(t, last_good_t, i);
      }
    }
  }
  Samples u = std::move(phys[0]);
  std::vector<Samples> phi(std::make_move_iterator(phys.begin() + 1),
                           std::make_move_iterator(phys.end()));
  return FieldState(grid, std::move(u), std::move(phi), t);
}

}  // namespace detail

/// du/dt = -u''' - (u^2/2)' - (lambda/4)(sum phi_i^2)'
/// dphi_i/dt = -phi_i''' - (lambda/2)(u phi_i)'
inline FieldRates rhs(const FieldState& s, double lambda, bool dealias = true) {
  const Grid& g = s.grid();
  const auto out = detail::full_rhs(g, detail::to_spectral(s), lambda, dealias,
                                    s.time());
  auto phys = detail::to_physical(g, out);
  FieldRates r;
  r.u = std::move(phys[0]);
  r.phi.assign(std::make_move_iterator(phys.begin() + 1),
               std::make_move_iterator(phys.end()));
  return r;
}

/// One fixed step of size cfg.dt.
inline FieldState step(const FieldState& s, const SolverConfig& cfg) {
  validate(cfg, s.grid());
  const detail::Stepper stepper(s.grid(), cfg, cfg.dt);
  const auto next = stepper.advance(detail::to_spectral(s), s.time());
  return detail::accept(s.grid(), next, s.time() + cfg.dt, s.time());
}

struct EvolveResult {
  FieldState final_state;
  std::vector<ChargeReport> reports;
};

using Observer = std::function<void(const FieldState&, const ChargeReport&)>;

/// Steps from s.time() to s.time() + cfg.t_end. A report is taken at the
/// start, after every sample_every steps, and at the end. If t_end is not a
/// multiple of dt the last step is shortened.
inline EvolveResult evolve(const FieldState& s, const SolverConfig& cfg,
                           const Observer& observer = {}) {
  validate(cfg, s.grid());
  const Grid& g = s.grid();
  const double t0 = s.time();

  auto full_steps = static_cast<std::size_t>(std::floor(cfg.t_end / cfg.dt + 1e-9));
  double remainder = cfg.t_end - static_cast<double>(full_steps) * cfg.dt;
  if (remainder < 1e-12 * std::max(1.0, cfg.t_end)) remainder = 0.0;
  const std::size_t total = full_steps + (remainder > 0.0 ? 1 : 0);

  std::vector<ChargeReport> reports;
  auto record = [&](const FieldState& state) {
    ChargeReport r = charge_report(state, cfg.lambda);
    if (observer) observer(state, r);
    reports.push_back(std::move(r));
  };

  record(s);
  FieldState state = s;
  detail::SpectralFields spec = detail::to_spectral(s);
  const detail::Stepper stepper(g, cfg, cfg.dt);
  for (std::size_t i = 1; i <= total; ++i) {
    const double t_prev = state.time();
    const bool last_short = (i == total && remainder > 0.0);
    const double t_next =
        last_short ? t0 + cfg.t_end : t0 + static_cast<double>(i) * cfg.dt;
    spec = last_short ? detail::Stepper(g, cfg, remainder).advance(spec, t_prev)
                      : stepper.advance(spec, t_prev);
    state = detail::accept(g, spec, t_next, t_prev);
    if (i % cfg.sample_every == 0 || i == total) record(state);
  }
  return {std::move(state), std::move(reports)};
}

/// u -> u + c; pair with translate(state, c t) for the full transformation.
inline FieldState galileo_boost(const FieldState& s, double c) {
  Samples u = s.u();
  for (double& v : u) v += c;
  return FieldState(s.grid(), std::move(u), s.phi(), s.time());
}

/// Shifts every field: f(x) -> f(x - shift).
inline FieldState translate(const FieldState& s, double shift) {
  std::vector<Samples> phi;
  phi.reserve(s.components());
  for (const auto& p : s.phi()) phi.push_back(translate(s.grid(), p, shift));
  return FieldState(s.grid(), translate(s.grid(), s.u(), shift), std::move(phi),
                    s.time());
}

/// v+ = u + phi_1, v- = u - phi_1; at lambda = 2 each obeys scalar KdV.
inline std::pair<Samples, Samples> decouple_lambda2(const FieldState& s) {
  if (s.components() != 1) {
    throw UnsupportedShape("decoupling needs exactly one component, got " +
                           std::to_string(s.components()));
  }
  Samples plus(s.u().size());
  Samples minus(s.u().size());
  for (std::size_t j = 0; j < plus.size(); ++j) {
    plus[j] = s.u()[j] + s.phi(0)[j];
    minus[j] = s.u()[j] - s.phi(0)[j];
  }
  return {std::move(plus), std::move(minus)};
}

}  // namespace ckdv

#endif
