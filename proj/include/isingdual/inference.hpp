#pragma once

#include <cstdint>
#include <vector>

#include "isingdual/model.hpp"

namespace isingdual {

/// sum_i alpha_i s_i + sum_{i<j} beta_ij s_i s_j
double log_potential(const IsingModel& model, const StateVector& s);

double log_partition_function(const IsingModel& model);
double partition_function(const IsingModel& model);

double probability(const IsingModel& model, const StateVector& s);
double log_probability(const IsingModel& model, const StateVector& s);

/// Probability of every state, indexed by StateVector::index().
std::vector<double> probability_table(const IsingModel& model);

/// P(s_i = v).
double marginal(const IsingModel& model, int i, int v);

/// P(s_i = 1 | rest), where `rest` holds the other p - 1 variables in order.
double conditional_prob(const IsingModel& model, int i, const StateVector& rest);

/// P(s_i = 1 | s_{-i}) read off a full state; entry i of `state` is ignored.
double local_conditional(const IsingModel& model, int i, const StateVector& state);

struct StatExpectations {
  Eigen::VectorXd mean;  // E[s_i]
  Eigen::MatrixXd pair;  // E[s_i s_j], symmetric, diagonal E[s_i^2]
};

StatExpectations sufficient_stat_expectations(const IsingModel& model);

/// n i.i.d. draws by inverse-CDF over the enumerated state probabilities.
Dataset sample_exact(const IsingModel& model, std::int64_t n, std::uint64_t seed);

double logistic(double x);

}  // namespace isingdual
