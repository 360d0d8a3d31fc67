#pragma once

// Shared helpers for the unit suites: seeded random skew matrices and
// physical (mixed) covariance matrices.

#include "ghf/covariance.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace ghf::testing {

inline Eigen::MatrixXd random_skew(int n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = dist(rng);
  return ghf::antisymmetrize(a);
}

// Strictly mixed physical CM: Gibbs state of a random quadratic Hamiltonian.
inline ghf::CovarianceMatrix random_mixed_cm(int modes, std::uint64_t seed,
                                             double beta = 1.0) {
  return ghf::tanh_gibbs(random_skew(2 * modes, seed), beta);
}

}  // namespace ghf::testing
