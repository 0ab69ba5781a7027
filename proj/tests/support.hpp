#pragma once

#include <cstdint>

#include "isingdual/model.hpp"
#include "isingdual/rng.hpp"

namespace testing {

using namespace isingdual;

// Random model with thresholds and interactions uniform in [-scale, scale].
inline IsingModel random_model(Domain d, int p, Rng& rng, double scale = 2.0) {
  Eigen::VectorXd a(p);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) a(i) = scale * (2.0 * rng.uniform() - 1.0);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) b(i, j) = b(j, i) = scale * (2.0 * rng.uniform() - 1.0);
  return IsingModel(d, a, b);
}

inline StateVector random_state(Domain d, int p, Rng& rng) {
  return StateVector::from_index(d, p, rng.below(std::uint64_t{1} << p));
}

inline Dataset table1(Domain d) {
  const int lo = low_value(d);
  return Dataset::from_counts(d, 2, {{{lo, lo}, 140}, {{lo, 1}, 180}, {{1, lo}, 180}, {{1, 1}, 500}});
}

}  // namespace testing
