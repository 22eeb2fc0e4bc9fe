#ifndef CKDV_SCENARIOS_HPP
#define CKDV_SCENARIOS_HPP

#include <cmath>
#include <cstdint>

#include "ckdv/dynamics.hpp"
#include "ckdv/fields.hpp"
#include "ckdv/solitons.hpp"

// Pinned instances shared by the verification suites, the acceptance tests
// and the shipped configs.
namespace ckdv::scenarios {

inline constexpr double kBoxLength = 80.0;
inline constexpr std::size_t kBoxPoints = 512;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

inline Grid standard_grid() { return Grid(kBoxLength, kBoxPoints); }

/// C = 1 soliton at the box center with one zero component.
inline FieldState soliton_state(const Grid& grid) {
  return one_soliton(SolitonSpec{}, grid, 0.0, 1);
}

/// C = 1 soliton in u plus phi_1 = amplitude exp(-((x - L/2)/width)^2),
/// overlapping the soliton.
inline FieldState mixed_state(const Grid& grid, double amplitude = 0.5,
                              double width = 2.0) {
  const FieldState sol = one_soliton(SolitonSpec{}, grid, 0.0);
  Samples phi(grid.size());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const double z = (grid.x(j) - 0.5 * grid.length()) / width;
    phi[j] = amplitude * std::exp(-z * z);
  }
  return FieldState(grid, sol.u(), {phi});
}

/// lambda = 1, dt = 1e-4, t_end = 1 with the integrating-factor scheme.
inline SolverConfig standard_run(double lambda = 1.0) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.dt = 1e-4;
  cfg.t_end = 1.0;
  cfg.integrator = Integrator::ifrk4;
  cfg.dealias = true;
  cfg.sample_every = 500;
  return cfg;
}

}  // namespace ckdv::scenarios

#endif
