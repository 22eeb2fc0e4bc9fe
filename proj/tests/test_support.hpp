#ifndef CKDV_TESTS_SUPPORT_HPP
#define CKDV_TESTS_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ckdv/fields.hpp"
#include "ckdv/grid.hpp"

namespace testing_support {

inline ckdv::Samples sample(const ckdv::Grid& g, double (*f)(double, double), double p) {
  ckdv::Samples out(g.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(g.x(j), p);
  return out;
}

template <typename F>
ckdv::Samples sample(const ckdv::Grid& g, F f) {
  ckdv::Samples out(g.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(g.x(j));
  return out;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// Random K x K rotation from Gram-Schmidt of a Gaussian matrix.
template <typename Rng>
std::vector<std::vector<double>> random_orthogonal(std::size_t k, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> q(k, std::vector<double>(k));
  for (auto& row : q) {
    for (double& v : row) v = normal(rng);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t p = 0; p < i; ++p) {
      double dot = 0.0;
      for (std::size_t j = 0; j < k; ++j) dot += q[i][j] * q[p][j];
      for (std::size_t j = 0; j < k; ++j) q[i][j] -= dot * q[p][j];
    }
    double norm = 0.0;
    for (double v : q[i]) norm += v * v;
    for (double& v : q[i]) v /= std::sqrt(norm);
  }
  return q;
}

}  // namespace testing_support

#endif
