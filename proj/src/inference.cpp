#include "isingdual/inference.hpp"

#include <algorithm>
#include <cmath>

#include "isingdual/enumeration.hpp"
#include "isingdual/rng.hpp"

namespace isingdual {

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_potential(const IsingModel& model, const StateVector& s) {
  model.check_state(s);
  double e = 0.0;
  for (int i = 0; i < model.p(); ++i) {
    e += model.alpha(i) * s[i];
    for (int j = i + 1; j < model.p(); ++j) e += model.beta(i, j) * s[i] * s[j];
  }
  return e;
}

double log_partition_function(const IsingModel& model) {
  return enumeration::parallel::log_partition(model);
}

double partition_function(const IsingModel& model) { return std::exp(log_partition_function(model)); }

double log_probability(const IsingModel& model, const StateVector& s) {
  const double lp = log_potential(model, s);
  return lp - log_partition_function(model);
}

double probability(const IsingModel& model, const StateVector& s) {
  return std::exp(log_probability(model, s));
}

std::vector<double> probability_table(const IsingModel& model) {
  auto lp = enumeration::parallel::log_potentials(model);
  const double log_z = enumeration::parallel::log_partition(model);
  for (double& v : lp) v = std::exp(v - log_z);
  return lp;
}

double marginal(const IsingModel& model, int i, int v) {
  if (i < 0 || i >= model.p()) throw DimensionError("variable index out of range");
  if (!admissible(model.domain(), v)) throw DomainError("value not admissible for the model's domain");
  const auto probs = probability_table(model);
  const bool want_high = v == 1;
  double m = 0.0;
  for (std::uint64_t k = 0; k < probs.size(); ++k)
    if ((((k >> i) & 1U) != 0) == want_high) m += probs[k];
  return m;
}

double local_conditional(const IsingModel& model, int i, const StateVector& state) {
  model.check_state(state);
  if (i < 0 || i >= model.p()) throw DimensionError("variable index out of range");
  double field = model.alpha(i);
  for (int j = 0; j < model.p(); ++j)
    if (j != i) field += model.beta(i, j) * state[j];
  // The log-odds of high vs low is field * (high - low): 1 for {0,1}, 2 for {-1,1}.
  const double scale = model.domain() == Domain::ZeroOne ? 1.0 : 2.0;
  return logistic(scale * field);
}

double conditional_prob(const IsingModel& model, int i, const StateVector& rest) {
  if (rest.size() != model.p() - 1) {
    throw DimensionError("conditioning set must hold p - 1 = " + std::to_string(model.p() - 1) + " values");
  }
  if (i < 0 || i >= model.p()) throw DimensionError("variable index out of range");
  std::vector<int> full;
  full.reserve(static_cast<std::size_t>(model.p()));
  for (int j = 0, r = 0; j < model.p(); ++j) full.push_back(j == i ? 1 : rest[r++]);
  return local_conditional(model, i, StateVector(rest.domain(), std::move(full)));
}

StatExpectations sufficient_stat_expectations(const IsingModel& model) {
  const int p = model.p();
  const auto sums = enumeration::parallel::moments(model, enumeration::Order::First);
  StatExpectations out;
  out.mean = sums.mean.head(p);
  out.pair = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    // s_i^2 is s_i on {0,1} and 1 on {-1,1}.
    out.pair(i, i) = model.domain() == Domain::ZeroOne ? out.mean(i) : 1.0;
    for (int j = i + 1; j < p; ++j) out.pair(i, j) = out.pair(j, i) = sums.mean(pair_offset(p, i, j));
  }
  return out;
}

Dataset sample_exact(const IsingModel& model, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample size must be at least 1");
  const auto probs = probability_table(model);
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) cdf[k] = acc += probs[k];

  std::vector<std::int64_t> hits(probs.size(), 0);
  Rng rng(seed);
  for (std::int64_t r = 0; r < n; ++r) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++hits[static_cast<std::size_t>(it - cdf.begin())];
  }

  Dataset data(model.domain(), model.p());
  for (std::size_t k = 0; k < hits.size(); ++k)
    if (hits[k] > 0) data.add(StateVector::from_index(model.domain(), model.p(), k), hits[k]);
  return data;
}

}  // namespace isingdual
