#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "isingdual/model.hpp"
#include "isingdual/rng.hpp"

namespace isingdual {

enum class UpdateRule {
  Synchronous,  // every variable redrawn from its conditional given the previous state
  Glauber       // one uniformly chosen variable redrawn per update
};

enum class InitialState { Random, AllHigh, AllLow };

struct SimulationConfig {
  explicit SimulationConfig(IsingModel m) : model(std::move(m)) {}

  IsingModel model;
  std::int64_t steps = 0;
  std::int64_t burn_in = 0;
  UpdateRule rule = UpdateRule::Synchronous;
  InitialState initial = InitialState::Random;
  /// Overrides `initial` when set.
  std::optional<StateVector> initial_state;
  std::uint64_t seed = 0;
  /// Random stream inside `seed`; lets several chains share one base seed.
  std::uint64_t stream = 0;
  /// Single-site updates per recorded Glauber step. 0 means p (one sweep).
  int glauber_updates_per_step = 0;

  /// Config with burn_in = steps / 10.
  static SimulationConfig with_defaults(IsingModel model, std::int64_t steps, UpdateRule rule, std::uint64_t seed);

  void validate() const;
};

struct TrajectoryStats {
  int p = 0;
  /// Number of variables equal to 1 after every post-burn-in step.
  std::vector<int> activation_counts;
  std::vector<double> histogram;
  double mean = 0.0;
  double variance = 0.0;

  static TrajectoryStats from_counts(int p, std::vector<int> counts);
};

StateVector step_synchronous(const IsingModel& model, const StateVector& s, Rng& rng);
StateVector step_glauber(const IsingModel& model, const StateVector& s, Rng& rng);

TrajectoryStats simulate(const SimulationConfig& config);

/// Runs independent configurations concurrently. Output order follows input order.
std::vector<TrajectoryStats> simulate_all(const std::vector<SimulationConfig>& configs);

/// Normalized frequency of each activation count 0..p.
std::vector<double> activation_histogram(const TrajectoryStats& stats);

/// Standard error of the mean of a correlated series, by non-overlapping batch means.
double batch_mean_standard_error(const std::vector<double>& series, int batches = 50);

struct Bimodality {
  bool bimodal = false;
  int low_mode = -1;
  int high_mode = -1;
  double trough = 0.0;
};

/// Two local maxima separated by a trough below half the smaller peak.
Bimodality detect_bimodality(const std::vector<double>& histogram);

}  // namespace isingdual
