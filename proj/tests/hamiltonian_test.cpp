#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ckdv/charges.hpp"
#include "ckdv/hamiltonian.hpp"
#include "ckdv/random_states.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ckdv;
using testing_support::max_diff;
using testing_support::sample;

namespace {

constexpr double kPi = std::numbers::pi;

// The discrete H5 with only u (component 0) or phi_c varied, written with
// finite-difference derivatives so the oracle shares no spectral code.
double h5_of(const FieldState& s, double lambda, std::size_t component,
             const std::vector<double>& f) {
  Samples u = s.u();
  std::vector<Samples> phi = s.phi();
  (component == 0 ? u : phi[component - 1]) = f;
  return charge_h5(FieldState(s.grid(), u, phi), lambda);
}

}  // namespace

TEST(Lift, ZeroAndCosine) {
  const double len = 10.0;
  const Grid g(len, 64);
  const ConstraintPair z = lift_to_potentials(FieldState::zero(g, 2));
  EXPECT_EQ(max_abs(z.w), 0.0);
  EXPECT_EQ(max_abs(z.sigma[1]), 0.0);

  const double k = 2 * kPi / len;
  const FieldState s(g, sample(g, [&](double x) { return std::cos(k * x); }), {});
  const ConstraintPair cp = lift_to_potentials(s);
  EXPECT_LT(max_diff(cp.w, sample(g, [&](double x) { return std::sin(k * x) / k; })), 1e-13);
  EXPECT_LT(max_diff(cp.p, sample(g, [&](double x) { return 0.5 * std::cos(k * x); })), 1e-15);
}

TEST(Lift, SatisfiesConstraintsAndRecoversFields) {
  Rng rng(71);
  const Grid g(20.0, 64);
  for (int trial = 0; trial < 30; ++trial) {
    const FieldState s = random_band_limited(g, 2, 12, rng, true);
    const ConstraintPair cp = lift_to_potentials(s);
    EXPECT_LT(constraint_residual(cp), 1e-12);
    const FieldState back = fields_of(cp);
    EXPECT_LT(max_diff(back.u(), s.u()), 1e-12);
    EXPECT_LT(max_diff(back.phi(1), s.phi(1)), 1e-12);
  }
  EXPECT_THROW(lift_to_potentials(FieldState(g, Samples(64, 1.0), {})), NonIntegrableInput);
}

TEST(Lagrangian, ZeroState) {
  const Grid g(20.0, 64);
  const ConstraintPair cp = lift_to_potentials(FieldState::zero(g, 1));
  EXPECT_EQ(max_abs(lagrangian_density(cp, Samples(64, 0.0), {Samples(64, 0.0)}, 1.0)), 0.0);
}

TEST(Lagrangian, StaticPotentialTerms) {
  const double len = 10.0;
  const Grid g(len, 64);
  const double k = 2 * kPi / len;
  const FieldState s(g, sample(g, [&](double x) { return std::cos(k * x); }), {});
  const Samples l = lagrangian_density(lift_to_potentials(s), Samples(64, 0.0), {}, 1.0);
  const Samples expected = sample(g, [&](double x) {
    const double u = std::cos(k * x);
    const double du = -k * std::sin(k * x);
    return u * u * u / 6.0 - 0.5 * du * du;
  });
  EXPECT_LT(max_diff(l, expected), 1e-13);
}

TEST(Lagrangian, LegendreTransformGivesHalfH5) {
  Rng rng(73);
  const Grid g(20.0, 64);
  for (double lambda : {1.0, 3.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const FieldState s = random_band_limited(g, 2, 12, rng, true);
      const ConstraintPair cp = lift_to_potentials(s);
      EXPECT_NEAR(legendre_hamiltonian(cp, lambda), 0.5 * charge_h5(s, lambda), 1e-9);

      // Same identity assembled by hand from the density.
      const FieldRates v = rhs(s, lambda);
      const Samples dens = lagrangian_density(cp, v.u, v.phi, lambda);
      const Samples wt = antideriv(g, v.u);
      double h = 0.0;
      for (std::size_t j = 0; j < 64; ++j) h += cp.p[j] * wt[j] - dens[j];
      for (std::size_t i = 0; i < 2; ++i) {
        const Samples et = antideriv(g, v.phi[i]);
        for (std::size_t j = 0; j < 64; ++j) h += cp.sigma[i][j] * et[j];
      }
      EXPECT_NEAR(h * g.dx(), 0.5 * charge_h5(s, lambda), 1e-9);
    }
  }
}

TEST(Lagrangian, OffShellPointIsRejected) {
  Rng rng(79);
  const Grid g(20.0, 64);
  ConstraintPair cp = lift_to_potentials(random_band_limited(g, 1, 8, rng, true));
  cp.p[5] += 1e-3;
  EXPECT_THROW(legendre_hamiltonian(cp, 1.0), InvalidPhasePoint);
}

TEST(FunctionalDerivative, ClosedForms) {
  const double len = 10.0;
  const Grid g(len, 64);
  const double k = 2 * kPi / len;
  EXPECT_EQ(max_abs(functional_derivative_u(FieldState::zero(g, 1), 1.0)), 0.0);
  EXPECT_EQ(max_abs(functional_derivative_phi(FieldState::zero(g, 1), 1.0, 0)), 0.0);

  const Samples sn = sample(g, [&](double x) { return std::sin(k * x); });
  const Samples du = functional_derivative_u(FieldState(g, sn, {}), 1.0);
  EXPECT_LT(max_diff(du, sample(g, [&](double x) {
              const double s = std::sin(k * x);
              return -s * s + 2 * k * k * s;
            })),
            1e-12);

  const Samples cs = sample(g, [&](double x) { return std::cos(k * x); });
  const Samples dphi = functional_derivative_phi(FieldState(g, Samples(64, 0.0), {cs}), 2.0, 0);
  EXPECT_LT(max_diff(dphi, sample(g, [&](double x) { return 2 * k * k * std::cos(k * x); })),
            1e-12);
  EXPECT_THROW(functional_derivative_phi(FieldState(g, sn, {}), 1.0, 0), UnsupportedShape);
}

TEST(FunctionalDerivative, MatchesPerturbedFunctional) {
  Rng rng(83);
  const Grid g(20.0, 64);
  for (double lambda : {-1.0, 0.0, 1.0, 2.0, 3.0}) {
    const FieldState s = random_band_limited(g, 2, 8, rng);
    for (std::size_t c = 0; c <= 2; ++c) {
      const std::vector<double> start = c == 0 ? s.u() : s.phi(c - 1);
      const std::vector<double> fd = oracle::functional_gradient(
          [&](const std::vector<double>& f) { return h5_of(s, lambda, c, f); }, start, g.dx(),
          1e-4);
      const Samples exact =
          c == 0 ? functional_derivative_u(s, lambda) : functional_derivative_phi(s, lambda, c - 1);
      EXPECT_LT(max_diff(fd, exact) / max_abs(exact), 1e-6) << "lambda " << lambda << " c " << c;
    }
  }
}

TEST(DiracFlow, ZeroAndConstantAreStationary) {
  const Grid g(20.0, 64);
  const FieldRates z = dirac_rhs(FieldState::zero(g, 1), 1.0);
  EXPECT_EQ(max_abs(z.u), 0.0);
  const FieldRates c = dirac_rhs(FieldState(g, Samples(64, 2.0), {Samples(64, 0.0)}), 1.0);
  EXPECT_LT(max_abs(c.u), 1e-13);
}

TEST(DiracFlow, ReproducesEquationsOfMotion) {
  Rng rng(89);
  const Grid g(20.0, 64);
  for (double lambda : {-1.0, 0.0, 1.0, 2.0, 3.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const FieldState s = random_band_limited(g, 2, 12, rng);
      const FieldRates a = dirac_rhs(s, lambda);
      const FieldRates b = rhs(s, lambda);
      EXPECT_LT(max_diff(a.u, b.u), 1e-10);
      EXPECT_LT(max_diff(a.phi[0], b.phi[0]), 1e-10);
      EXPECT_LT(max_diff(a.phi[1], b.phi[1]), 1e-10);
    }
  }
}

TEST(ConstraintBracket, SmearedExamples) {
  const double len = 2 * kPi;
  const Grid g(len, 32);
  Rng rng(97);
  const ConstraintPair cp = lift_to_potentials(random_band_limited(g, 1, 4, rng, true));
  const Samples one(32, 1.0);
  const Samples sn = sample(g, [](double x) { return std::sin(x); });
  const Samples cs = sample(g, [](double x) { return std::cos(x); });
  EXPECT_NEAR(constraint_bracket(cp, 0, one, 0, one), 0.0, 1e-12);
  // -integral sin (cos)' = integral sin^2 = pi.
  EXPECT_NEAR(constraint_bracket(cp, 0, sn, 0, cs), kPi, 1e-12);
  EXPECT_NEAR(constraint_bracket(cp, 1, sn, 1, cs), kPi, 1e-12);
  EXPECT_NEAR(constraint_bracket(cp, 0, sn, 1, cs), 0.0, 1e-12);
  EXPECT_NEAR(constraint_bracket(cp, 0, sn, 0, sn), 0.0, 1e-12);
  EXPECT_THROW(constraint_bracket(cp, 2, sn, 0, cs), UnsupportedShape);
}

TEST(ConstraintBracket, MatrixIsSecondClass) {
  Rng rng(101);
  const Grid g(20.0, 32);
  const BracketCheck bc =
      constraint_bracket_matrix_check(lift_to_potentials(random_band_limited(g, 2, 4, rng, true)));
  EXPECT_TRUE(bc.holds);
  EXPECT_LT(bc.max_deviation, 1e-10);
}
