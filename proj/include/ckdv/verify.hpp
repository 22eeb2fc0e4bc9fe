#ifndef CKDV_VERIFY_HPP
#define CKDV_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ckdv/charges.hpp"
#include "ckdv/dynamics.hpp"
#include "ckdv/hamiltonian.hpp"
#include "ckdv/io.hpp"
#include "ckdv/random_states.hpp"
#include "ckdv/scenarios.hpp"

// Fixed-seed property suites behind `ckdv verify`.
namespace ckdv::verify {

struct Check {
  std::string suite;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool expect_above = false;  // pass iff value >= threshold instead of <
  bool passed = false;
};

struct SuiteReport {
  std::vector<Check> checks;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.passed; });
  }
  void add(std::string suite, std::string name, double value, double threshold,
           bool expect_above = false) {
    const bool ok = expect_above ? value >= threshold : value < threshold;
    checks.push_back({std::move(suite), std::move(name), value, threshold,
                      expect_above, ok});
  }
  void append(const SuiteReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    for (const auto& [k, v] : other.detail.items()) detail[k] = v;
  }
};

inline std::string format_lambda(double lambda) { return format_double(lambda); }

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"charges", "hamiltonian", "bound",
                                              "lambda2", "nonlocal"};
  return names;
}

/// Largest pointwise difference over u and all components.
inline double max_field_difference(const FieldState& a, const FieldState& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.u().size(); ++j) {
    worst = std::max(worst, std::abs(a.u()[j] - b.u()[j]));
  }
  for (std::size_t i = 0; i < a.components(); ++i) {
    for (std::size_t j = 0; j < a.u().size(); ++j) {
      worst = std::max(worst, std::abs(a.phi(i)[j] - b.phi(i)[j]));
    }
  }
  return worst;
}

inline double max_rate_difference(const FieldRates& a, const FieldRates& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.u.size(); ++j) {
    worst = std::max(worst, std::abs(a.u[j] - b.u[j]));
  }
  for (std::size_t i = 0; i < a.phi.size(); ++i) {
    for (std::size_t j = 0; j < a.u.size(); ++j) {
      worst = std::max(worst, std::abs(a.phi[i][j] - b.phi[i][j]));
    }
  }
  return worst;
}

/// Relative drift |q - q0| / |q0| of a charge series, max over samples.
struct Drift {
  double h1 = 0.0;
  double h3 = 0.0;
  double h5 = 0.0;
  double nonlocal = 0.0;
  double h_half_abs = 0.0;
};

/// Relative drifts against the initial value. H1 = integral u can vanish
/// exactly (pure oscillations); when |H1(0)| is below 1e-8 of its
/// Cauchy-Schwarz bound sqrt(L H3(0)), that bound is the denominator instead.
inline Drift charge_drift(const std::vector<ChargeReport>& reports, double length) {
  Drift d;
  const ChargeReport& r0 = reports.front();
  auto rel = [](double q, double q0) {
    return std::abs(q - q0) / std::max(std::abs(q0), 1e-300);
  };
  const double h1_bound = std::sqrt(length * r0.h3);
  const double h1_scale = std::abs(r0.h1) > 1e-8 * h1_bound ? std::abs(r0.h1) : h1_bound;
  for (const auto& r : reports) {
    d.h1 = std::max(d.h1, std::abs(r.h1 - r0.h1) / std::max(h1_scale, 1e-300));
    d.h3 = std::max(d.h3, rel(r.h3, r0.h3));
    d.h5 = std::max(d.h5, rel(r.h5, r0.h5));
    if (r0.nonlocal != 0.0) d.nonlocal = std::max(d.nonlocal, rel(r.nonlocal, r0.nonlocal));
    for (std::size_t i = 0; i < r.h_half.size(); ++i) {
      d.h_half_abs = std::max(d.h_half_abs, std::abs(r.h_half[i] - r0.h_half[i]));
    }
  }
  return d;
}

/// Central-difference gradient of the discrete H5 functional divided by dx,
/// for u (component == 0) or phi_component. Step eps = 1e-5 (1 + |state|_inf).
inline Samples finite_difference_gradient(const FieldState& s, double lambda,
                                          std::size_t component) {
  double size = max_abs(s.u());
  for (const auto& p : s.phi()) size = std::max(size, max_abs(p));
  const double eps = 1e-5 * (1.0 + size);
  Samples out(s.grid().size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    auto perturbed = [&](double delta) {
      Samples u = s.u();
      std::vector<Samples> phi = s.phi();
      (component == 0 ? u : phi[component - 1])[j] += delta;
      return charge_h5(FieldState(s.grid(), std::move(u), std::move(phi)), lambda);
    };
    out[j] = (perturbed(eps) - perturbed(-eps)) / (2.0 * eps) / s.grid().dx();
  }
  return out;
}

inline double relative_max_error(const Samples& approx, const Samples& exact) {
  double num = 0.0;
  for (std::size_t j = 0; j < exact.size(); ++j) {
    num = std::max(num, std::abs(approx[j] - exact[j]));
  }
  return num / std::max(max_abs(exact), 1e-300);
}

// --------------------------------------------------------------------------

/// Conservation along the soliton and mixed runs plus L2 stability of zero.
inline SuiteReport charges_suite(std::uint64_t seed) {
  SuiteReport rep;
  const Grid grid = scenarios::standard_grid();
  const SolverConfig cfg = scenarios::standard_run(1.0);

  double worst_bound = 0.0;
  bool bound_ok = true;
  const Observer bound_observer = [&](const FieldState& st, const ChargeReport&) {
    const BoundCheck b = bound_check(st, cfg.lambda);
    bound_ok = bound_ok && b.holds;
    worst_bound = std::min(worst_bound, b.margin);
  };

  for (const auto& [label, state] :
       {std::pair{std::string("soliton"), scenarios::soliton_state(grid)},
        std::pair{std::string("mixed"), scenarios::mixed_state(grid)}}) {
    const EvolveResult res = evolve(state, cfg, bound_observer);
    const Drift d = charge_drift(res.reports, grid.length());
    rep.add("charges", label + " h1 relative drift", d.h1, 1e-8);
    rep.add("charges", label + " h3 relative drift", d.h3, 1e-8);
    rep.add("charges", label + " h5 relative drift", d.h5, 1e-8);
    rep.add("charges", label + " h_half absolute drift", d.h_half_abs, 1e-12);
    if (label == "soliton") {
      const FieldState exact = one_soliton(SolitonSpec{}, grid, cfg.t_end, 1);
      rep.add("charges", "soliton Linf error vs exact translate",
              max_field_difference(res.final_state, exact), 1e-6);
    }
  }
  rep.add("charges", "bound violations along runs", bound_ok ? 0.0 : 1.0, 0.5);

  Rng rng(seed);
  const Grid small(20.0, 64);
  SolverConfig zcfg;
  zcfg.lambda = 1.0;
  zcfg.dt = 1e-3;
  zcfg.t_end = 1.0;
  zcfg.sample_every = 10;
  const double delta = 1e-3;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const FieldState s0 =
        normalize_l2(random_band_limited(small, 2, 8, rng), delta);
    const EvolveResult res = evolve(s0, zcfg);
    for (const auto& r : res.reports) {
      worst = std::max(worst, std::abs(std::sqrt(r.l2) - delta) / delta);
    }
  }
  rep.add("charges", "zero-solution L2 stability |norm/delta - 1|", worst, 1e-8);
  return rep;
}

/// Dirac-bracket flow vs direct right-hand side, Legendre identity, gradient
/// checks and the constraint bracket.
inline SuiteReport hamiltonian_suite(std::uint64_t seed, int samples = 100) {
  SuiteReport rep;
  Rng rng(seed);
  const Grid grid(20.0, 64);
  const std::vector<double> lambdas{-1.0, 0.0, 1.0, 2.0, 3.0};

  nlohmann::ordered_json per_lambda = nlohmann::ordered_json::object();
  for (double lambda : lambdas) {
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
      const FieldState s = random_band_limited(grid, 2, 12, rng);
      worst = std::max(worst, max_rate_difference(dirac_rhs(s, lambda), rhs(s, lambda)));
    }
    per_lambda[format_lambda(lambda)] = worst;
    rep.add("hamiltonian", "dirac_rhs vs rhs, lambda=" + format_lambda(lambda), worst,
            1e-10);
  }

  nlohmann::ordered_json legendre = nlohmann::ordered_json::object();
  for (double lambda : {1.0, 3.0}) {
    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
      const FieldState s = random_band_limited(grid, 2, 12, rng, true);
      const double h = legendre_hamiltonian(lift_to_potentials(s), lambda);
      worst = std::max(worst, std::abs(h - 0.5 * charge_h5(s, lambda)));
    }
    legendre[format_lambda(lambda)] = worst;
    rep.add("hamiltonian", "Legendre |H - H5/2|, lambda=" + format_lambda(lambda),
            worst, 1e-9);
  }

  nlohmann::ordered_json gradients = nlohmann::ordered_json::object();
  for (double lambda : lambdas) {
    double worst = 0.0;
    for (int n = 0; n < 3; ++n) {
      const FieldState s = random_band_limited(grid, 1, 8, rng);
      worst = std::max(worst, relative_max_error(finite_difference_gradient(s, lambda, 0),
                                                 functional_derivative_u(s, lambda)));
      worst = std::max(worst,
                       relative_max_error(finite_difference_gradient(s, lambda, 1),
                                          functional_derivative_phi(s, lambda, 0)));
    }
    gradients[format_lambda(lambda)] = worst;
    rep.add("hamiltonian", "gradient check, lambda=" + format_lambda(lambda), worst, 1e-6);
  }

  const Grid bracket_grid(20.0, 32);
  const BracketCheck bc = constraint_bracket_matrix_check(
      lift_to_potentials(random_band_limited(bracket_grid, 2, 4, rng, true)));
  rep.add("hamiltonian", "constraint bracket {v_I, v_J} = -delta_IJ d/dx",
          bc.max_deviation, 1e-10);

  rep.detail["hamiltonian"] = {{"seed", seed},
                               {"samples_per_lambda", samples},
                               {"dirac_vs_rhs_max_abs", per_lambda},
                               {"legendre_residual", legendre},
                               {"gradient_check_relative", gradients},
                               {"constraint_bracket_max_deviation", bc.max_deviation},
                               {"passed", rep.passed()}};
  return rep;
}

/// Lower bound on H5 and the Sobolev sup bound over random normalized states.
inline SuiteReport bound_suite(std::uint64_t seed, int samples = 1000) {
  SuiteReport rep;
  Rng rng(seed);
  const Grid grid = scenarios::standard_grid();
  const std::vector<double> lambdas{-1.0, 0.0, 1.0, 2.0, 3.0};
  std::uniform_int_distribution<std::size_t> comps(0, 3);
  double min_margin = INFINITY;
  int bound_failures = 0;
  int sup_failures = 0;
  double min_sup_gap = INFINITY;
  for (int n = 0; n < samples; ++n) {
    const std::size_t k = comps(rng);
    const FieldState raw = (n % 2 == 0) ? random_band_limited(grid, k, 24, rng)
                                        : random_bump_state(grid, k, rng, 0.3, 6.0);
    const FieldState s = normalize_l2(raw, 1.0);
    for (double lambda : lambdas) {
      const BoundCheck b = bound_check(s, lambda);
      if (!b.holds) ++bound_failures;
      min_margin = std::min(min_margin, b.margin);
    }
    const SupBoundCheck sc = sobolev_sup_bound_check(s);
    if (!sc.holds) ++sup_failures;
    min_sup_gap = std::min(min_sup_gap, sc.bound - sc.sup_u);
  }
  rep.add("bound", "H5 lower-bound violations", bound_failures, 0.5);
  rep.add("bound", "Sobolev sup-bound violations", sup_failures, 0.5);
  rep.add("bound", "|bound constant(lambda=1) - 1.03125|",
          std::abs(lower_bound_constant(1.0) - 1.03125), 1e-300);
  rep.detail["bound"] = {{"seed", seed},
                         {"samples", samples},
                         {"min_margin", min_margin},
                         {"min_sup_gap", min_sup_gap}};
  return rep;
}

/// Decoupling into two KdV equations and Galileo invariance at lambda = 2.
inline SuiteReport lambda2_suite() {
  SuiteReport rep;
  const Grid grid = scenarios::standard_grid();
  SolverConfig cfg = scenarios::standard_run(2.0);
  cfg.t_end = 0.5;
  const FieldState s = scenarios::mixed_state(grid);

  const EvolveResult coupled = evolve(s, cfg);
  const auto [plus0, minus0] = decouple_lambda2(s);
  const auto [plus1, minus1] = decouple_lambda2(coupled.final_state);
  const FieldState vp = evolve(FieldState(grid, plus0, {}), cfg).final_state;
  const FieldState vm = evolve(FieldState(grid, minus0, {}), cfg).final_state;
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    worst = std::max({worst, std::abs(vp.u()[j] - plus1[j]), std::abs(vm.u()[j] - minus1[j])});
  }
  rep.add("lambda2", "decoupled KdV vs coupled run", worst, 1e-9);

  const double c = 1.0;
  for (double lambda : {2.0, 1.0}) {
    SolverConfig gc = cfg;
    gc.lambda = lambda;
    const FieldState lhs = evolve(galileo_boost(s, c), gc).final_state;
    const FieldState rhs_state =
        galileo_boost(translate(evolve(s, gc).final_state, c * gc.t_end), c);
    const double dev = max_field_difference(lhs, rhs_state);
    if (lambda == 2.0) {
      rep.add("lambda2", "Galileo commutation, lambda=2", dev, 1e-7);
    } else {
      rep.add("lambda2", "Galileo commutation broken, lambda=1", dev, 1e-2, true);
    }
  }
  return rep;
}

/// Non-local charge conservation, path identity, and the SKdV witness that
/// must not be conserved.
inline SuiteReport nonlocal_suite() {
  SuiteReport rep;
  const Grid grid = scenarios::standard_grid();
  const SolverConfig cfg = scenarios::standard_run(1.0);
  const FieldState s = scenarios::mixed_state(grid);
  int identity_failures = 0;
  const Observer obs = [&](const FieldState& st, const ChargeReport&) {
    try {
      charge_nonlocal(st);
    } catch (const ConsistencyError&) {
      ++identity_failures;
    }
  };
  const double w0 = skdv_witness(s);
  const EvolveResult res = evolve(s, cfg, obs);
  const double w1 = skdv_witness(res.final_state);
  rep.add("nonlocal", "non-local charge relative drift",
          charge_drift(res.reports, grid.length()).nonlocal, 1e-8);
  rep.add("nonlocal", "path (a)/(b) identity failures", identity_failures, 0.5);
  rep.add("nonlocal", "SKdV witness relative drift", std::abs(w1 - w0) / std::abs(w0), 1e-3,
          true);
  return rep;
}

inline SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "charges") return charges_suite(seed);
  if (name == "hamiltonian") return hamiltonian_suite(seed);
  if (name == "bound") return bound_suite(seed);
  if (name == "lambda2") return lambda2_suite();
  if (name == "nonlocal") return nonlocal_suite();
  if (name == "all") {
    SuiteReport all;
    for (const auto& n : suite_names()) all.append(run_suite(n, seed));
    return all;
  }
  throw ConfigError("unknown verify suite '" + name + "'");
}

inline void print_table(std::ostream& os, const SuiteReport& rep) {
  std::size_t width = 0;
  for (const auto& c : rep.checks) width = std::max(width, c.suite.size() + c.name.size() + 2);
  for (const auto& c : rep.checks) {
    std::ostringstream value;
    value << std::scientific << std::setprecision(3) << c.value;
    std::ostringstream thr;
    thr << std::scientific << std::setprecision(1) << c.threshold;
    os << (c.passed ? "PASS  " : "FAIL  ") << std::left
       << std::setw(static_cast<int>(width)) << (c.suite + ": " + c.name) << "  "
       << value.str() << (c.expect_above ? " >= " : " < ") << thr.str() << '\n';
  }
}

}  // namespace ckdv::verify

#endif
