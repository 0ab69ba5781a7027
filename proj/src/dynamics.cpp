#include "isingdual/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isingdual/inference.hpp"

namespace isingdual {

namespace {

double high_probability(const IsingModel& model, int i, const std::vector<int>& s) {
  double field = model.alpha(i);
  for (int j = 0; j < model.p(); ++j)
    if (j != i) field += model.beta(i, j) * s[j];
  return logistic(model.domain() == Domain::ZeroOne ? field : 2.0 * field);
}

void synchronous_update(const IsingModel& model, const std::vector<int>& in, std::vector<int>& out, Rng& rng) {
  const int low = low_value(model.domain());
  for (int i = 0; i < model.p(); ++i) out[i] = rng.uniform() < high_probability(model, i, in) ? 1 : low;
}

void glauber_update(const IsingModel& model, std::vector<int>& s, Rng& rng) {
  const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(model.p())));
  s[i] = rng.uniform() < high_probability(model, i, s) ? 1 : low_value(model.domain());
}

int count_high(const std::vector<int>& s) { return static_cast<int>(std::count(s.begin(), s.end(), 1)); }

}  // namespace

SimulationConfig SimulationConfig::with_defaults(IsingModel model, std::int64_t steps, UpdateRule rule,
                                                 std::uint64_t seed) {
  SimulationConfig c(std::move(model));
  c.steps = steps;
  c.burn_in = steps / 10;
  c.rule = rule;
  c.seed = seed;
  return c;
}

void SimulationConfig::validate() const {
  if (burn_in < 0) throw std::invalid_argument("burn-in must be non-negative");
  if (steps <= burn_in) throw std::invalid_argument("steps must exceed burn-in");
  if (glauber_updates_per_step < 0) throw std::invalid_argument("updates per step must be non-negative");
  if (initial_state) model.check_state(*initial_state);
}

TrajectoryStats TrajectoryStats::from_counts(int p, std::vector<int> counts) {
  TrajectoryStats t;
  t.p = p;
  t.activation_counts = std::move(counts);
  t.histogram = activation_histogram(t);
  const double m = static_cast<double>(t.activation_counts.size());
  if (m > 0) {
    double sum = 0.0;
    for (int c : t.activation_counts) sum += c;
    t.mean = sum / m;
    double ss = 0.0;
    for (int c : t.activation_counts) ss += (c - t.mean) * (c - t.mean);
    t.variance = ss / m;
  }
  return t;
}

StateVector step_synchronous(const IsingModel& model, const StateVector& s, Rng& rng) {
  model.check_state(s);
  std::vector<int> out(s.values().size());
  synchronous_update(model, s.values(), out, rng);
  return StateVector(model.domain(), std::move(out));
}

StateVector step_glauber(const IsingModel& model, const StateVector& s, Rng& rng) {
  model.check_state(s);
  std::vector<int> out = s.values();
  glauber_update(model, out, rng);
  return StateVector(model.domain(), std::move(out));
}

TrajectoryStats simulate(const SimulationConfig& config) {
  config.validate();
  const IsingModel& model = config.model;
  const int p = model.p();
  const int low = low_value(model.domain());
  Rng rng(config.seed, config.stream);

  std::vector<int> s(static_cast<std::size_t>(p));
  if (config.initial_state) {
    s = config.initial_state->values();
  } else {
    for (int i = 0; i < p; ++i) {
      switch (config.initial) {
        case InitialState::Random: s[i] = rng.bernoulli(0.5) ? 1 : low; break;
        case InitialState::AllHigh: s[i] = 1; break;
        case InitialState::AllLow: s[i] = low; break;
      }
    }
  }

  const int sweep = config.glauber_updates_per_step > 0 ? config.glauber_updates_per_step : p;
  std::vector<int> next(s.size());
  std::vector<int> counts;
  counts.reserve(static_cast<std::size_t>(config.steps - config.burn_in));
  for (std::int64_t t = 0; t < config.steps; ++t) {
    if (config.rule == UpdateRule::Synchronous) {
      synchronous_update(model, s, next, rng);
      s.swap(next);
    } else {
      for (int u = 0; u < sweep; ++u) glauber_update(model, s, rng);
    }
    if (t >= config.burn_in) counts.push_back(count_high(s));
  }
  return TrajectoryStats::from_counts(p, std::move(counts));
}

std::vector<TrajectoryStats> simulate_all(const std::vector<SimulationConfig>& configs) {
  std::vector<TrajectoryStats> out(configs.size());
  const long n = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) out[k] = simulate(configs[k]);
  return out;
}

std::vector<double> activation_histogram(const TrajectoryStats& stats) {
  std::vector<double> h(static_cast<std::size_t>(stats.p + 1), 0.0);
  if (stats.activation_counts.empty()) return h;
  for (int c : stats.activation_counts) h.at(static_cast<std::size_t>(c)) += 1.0;
  for (double& v : h) v /= static_cast<double>(stats.activation_counts.size());
  return h;
}

double batch_mean_standard_error(const std::vector<double>& series, int batches) {
  if (batches < 2) throw std::invalid_argument("need at least two batches");
  const std::size_t len = series.size() / static_cast<std::size_t>(batches);
  if (len == 0) throw std::invalid_argument("series too short for batch means");
  std::vector<double> means(static_cast<std::size_t>(batches), 0.0);
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t k = 0; k < len; ++k) s += series[b * len + k];
    means[b] = s / static_cast<double>(len);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= batches;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  return std::sqrt(ss / (batches - 1) / batches);
}

Bimodality detect_bimodality(const std::vector<double>& h) {
  Bimodality out;
  const int n = static_cast<int>(h.size());
  std::vector<int> peaks;
  for (int k = 0; k < n; ++k) {
    const double left = k > 0 ? h[k - 1] : -1.0;
    const double right = k + 1 < n ? h[k + 1] : -1.0;
    if (h[k] > 0.0 && h[k] >= left && h[k] > right) peaks.push_back(k);
  }
  if (peaks.size() < 2) return out;
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return h[a] > h[b]; });
  const int lo = std::min(peaks[0], peaks[1]);
  const int hi = std::max(peaks[0], peaks[1]);
  out.low_mode = lo;
  out.high_mode = hi;
  out.trough = *std::min_element(h.begin() + lo, h.begin() + hi + 1);
  out.bimodal = out.trough < 0.5 * std::min(h[lo], h[hi]);
  return out;
}

}  // namespace isingdual
