#include "isingdual/enumeration.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace isingdual::enumeration {

namespace {

double shift_for(double max_lp, double max_abs_lp) {
  return max_abs_lp > kShiftThreshold ? max_lp : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Reference: one state at a time through the public value types.

namespace serial {

namespace {

std::vector<double> all_log_potentials(const IsingModel& model, const Eigen::VectorXd& theta) {
  const std::uint64_t states = std::uint64_t{1} << model.p();
  std::vector<double> lp(states);
  for (std::uint64_t k = 0; k < states; ++k)
    lp[k] = theta.dot(sufficient_statistics(StateVector::from_index(model.domain(), model.p(), k)));
  return lp;
}

double pick_shift(const std::vector<double>& lp) {
  double mx = lp.front(), mabs = 0.0;
  for (double v : lp) {
    mx = std::max(mx, v);
    mabs = std::max(mabs, std::abs(v));
  }
  return shift_for(mx, mabs);
}

}  // namespace

double log_partition(const IsingModel& model) {
  require_enumerable(model.p());
  const auto lp = all_log_potentials(model, model.pack());
  const double shift = pick_shift(lp);
  double z = 0.0;
  for (double v : lp) z += std::exp(v - shift);
  return shift + std::log(z);
}

Sums moments(const IsingModel& model, Order order) {
  require_enumerable(model.p());
  const int p = model.p();
  const int d = stat_dimension(p);
  const auto lp = all_log_potentials(model, model.pack());
  const double shift = pick_shift(lp);

  double z = 0.0;
  Eigen::VectorXd first = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(order == Order::Second ? d : 0, order == Order::Second ? d : 0);
  for (std::uint64_t k = 0; k < lp.size(); ++k) {
    const double w = std::exp(lp[k] - shift);
    const Eigen::VectorXd t = sufficient_statistics(StateVector::from_index(model.domain(), p, k));
    z += w;
    first += w * t;
    if (order == Order::Second) second += w * t * t.transpose();
  }
  Sums out;
  out.log_z = shift + std::log(z);
  out.mean = first / z;
  if (order == Order::Second) out.covariance = second / z - out.mean * out.mean.transpose();
  return out;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// Blocked OpenMP kernels.

namespace parallel {

namespace {

struct Layout {
  int p;
  int d;
  int low;
  std::uint64_t states;
  long blocks;
};

Layout layout_of(const IsingModel& model) {
  require_enumerable(model.p());
  Layout l;
  l.p = model.p();
  l.d = stat_dimension(l.p);
  l.low = low_value(model.domain());
  l.states = std::uint64_t{1} << l.p;
  l.blocks = static_cast<long>((l.states + kBlockSize - 1) / kBlockSize);
  return l;
}

inline void decode(const Layout& l, std::uint64_t k, std::array<int, kEnumerationLimit>& s) {
  for (int i = 0; i < l.p; ++i) s[i] = (k >> i) & 1U ? 1 : l.low;
}

inline void fill_stats(const Layout& l, const std::array<int, kEnumerationLimit>& s, Eigen::VectorXd& t) {
  int c = l.p;
  for (int i = 0; i < l.p; ++i) {
    t(i) = s[i];
    for (int j = i + 1; j < l.p; ++j) t(c++) = s[i] * s[j];
  }
}

struct Shifted {
  std::vector<double> lp;
  double shift;
};

Shifted shifted_log_potentials(const IsingModel& model) {
  Shifted out{log_potentials(model), 0.0};
  double mx = out.lp.front(), mabs = 0.0;
  for (double v : out.lp) {
    mx = std::max(mx, v);
    mabs = std::max(mabs, std::abs(v));
  }
  out.shift = shift_for(mx, mabs);
  return out;
}

}  // namespace

std::vector<double> log_potentials(const IsingModel& model) {
  const Layout l = layout_of(model);
  const Eigen::VectorXd& alpha = model.alpha();
  const Eigen::MatrixXd& beta = model.beta();
  std::vector<double> lp(l.states);

#pragma omp parallel for schedule(static)
  for (long b = 0; b < l.blocks; ++b) {
    std::array<int, kEnumerationLimit> s{};
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlockSize;
    const std::uint64_t end = std::min<std::uint64_t>(begin + kBlockSize, l.states);
    for (std::uint64_t k = begin; k < end; ++k) {
      decode(l, k, s);
      double e = 0.0;
      for (int i = 0; i < l.p; ++i) {
        if (s[i] == 0) continue;
        double field = alpha(i);
        for (int j = i + 1; j < l.p; ++j) field += beta(i, j) * s[j];
        e += field * s[i];
      }
      lp[k] = e;
    }
  }
  return lp;
}

double log_partition(const IsingModel& model) {
  const Layout l = layout_of(model);
  const Shifted sh = shifted_log_potentials(model);
  std::vector<double> partial(static_cast<std::size_t>(l.blocks), 0.0);

#pragma omp parallel for schedule(static)
  for (long b = 0; b < l.blocks; ++b) {
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlockSize;
    const std::uint64_t end = std::min<std::uint64_t>(begin + kBlockSize, l.states);
    double acc = 0.0;
    for (std::uint64_t k = begin; k < end; ++k) acc += std::exp(sh.lp[k] - sh.shift);
    partial[b] = acc;
  }
  double z = 0.0;
  for (double v : partial) z += v;
  return sh.shift + std::log(z);
}

Sums moments(const IsingModel& model, Order order) {
  const Layout l = layout_of(model);
  const Shifted sh = shifted_log_potentials(model);
  const bool second = order == Order::Second;

  std::vector<double> z_part(static_cast<std::size_t>(l.blocks), 0.0);
  std::vector<Eigen::VectorXd> first_part(static_cast<std::size_t>(l.blocks));
  std::vector<Eigen::MatrixXd> second_part(second ? static_cast<std::size_t>(l.blocks) : 0);

#pragma omp parallel for schedule(static)
  for (long b = 0; b < l.blocks; ++b) {
    std::array<int, kEnumerationLimit> s{};
    Eigen::VectorXd t(l.d);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(l.d);
    Eigen::MatrixXd m;
    if (second) m = Eigen::MatrixXd::Zero(l.d, l.d);
    double z = 0.0;
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlockSize;
    const std::uint64_t end = std::min<std::uint64_t>(begin + kBlockSize, l.states);
    for (std::uint64_t k = begin; k < end; ++k) {
      const double w = std::exp(sh.lp[k] - sh.shift);
      decode(l, k, s);
      fill_stats(l, s, t);
      z += w;
      f.noalias() += w * t;
      if (second) m.selfadjointView<Eigen::Lower>().rankUpdate(t, w);
    }
    z_part[b] = z;
    first_part[b] = std::move(f);
    if (second) second_part[b] = std::move(m);
  }

  double z = 0.0;
  Eigen::VectorXd first = Eigen::VectorXd::Zero(l.d);
  Eigen::MatrixXd acc = second ? Eigen::MatrixXd::Zero(l.d, l.d) : Eigen::MatrixXd();
  for (long b = 0; b < l.blocks; ++b) {
    z += z_part[b];
    first += first_part[b];
    if (second) acc += second_part[b];
  }

  Sums out;
  out.log_z = sh.shift + std::log(z);
  out.mean = first / z;
  if (second) {
    Eigen::MatrixXd full = acc.selfadjointView<Eigen::Lower>();
    out.covariance = full / z - out.mean * out.mean.transpose();
  }
  return out;
}

}  // namespace parallel

}  // namespace isingdual::enumeration
