#pragma once

#include <vector>

#include <Eigen/Dense>

#include "isingdual/model.hpp"

// Exact sums over all 2^p states. Two implementations of every kernel:
// `serial` is the plain reference loop, `parallel` is the blocked OpenMP kernel
// used by the library. Both must agree to rounding; tests and bench/ compare them.
namespace isingdual::enumeration {

/// Log potentials above this magnitude switch Z to a max-shifted sum.
inline constexpr double kShiftThreshold = 600.0;

enum class Order { First, Second };

struct Sums {
  double log_z = 0.0;
  Eigen::VectorXd mean;        // E[T(s)] in packed order
  Eigen::MatrixXd covariance;  // Cov[T(s)]; empty for Order::First
};

namespace serial {
double log_partition(const IsingModel& model);
Sums moments(const IsingModel& model, Order order);
}  // namespace serial

namespace parallel {
double log_partition(const IsingModel& model);
Sums moments(const IsingModel& model, Order order);
/// log potential of every state, indexed by StateVector::index().
std::vector<double> log_potentials(const IsingModel& model);
}  // namespace parallel

/// States per block in the parallel kernels. Partial sums are combined in block
/// order, so results do not depend on the thread count.
inline constexpr long kBlockSize = 1L << 10;

}  // namespace isingdual::enumeration
