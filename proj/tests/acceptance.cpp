// Acceptance suite: one PASS/FAIL line per criterion, with wall time.
// Exit status is the number of failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "isingdual/dynamics.hpp"
#include "isingdual/estimation.hpp"
#include "isingdual/experiments.hpp"
#include "isingdual/inference.hpp"
#include "isingdual/transform.hpp"

using namespace isingdual;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v, const char* fmt = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

Dataset table1(Domain d) { return experiments::example_counts(d); }

double max_gap(const IsingModel& a, const IsingModel& b) {
  const auto pa = probability_table(a), pb = probability_table(b);
  double m = 0.0;
  for (std::size_t k = 0; k < pa.size(); ++k) m = std::max(m, std::abs(pa[k] - pb[k]));
  return m;
}

IsingModel random_model(Domain d, int p, Rng& rng, double lo, double hi) {
  Eigen::VectorXd a(p);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) a(i) = lo + (hi - lo) * rng.uniform();
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) b(i, j) = b(j, i) = lo + (hi - lo) * rng.uniform();
  return IsingModel(d, a, b);
}

// 1. Two-variable fit against the log-odds oracle and the displayed values.
Outcome criterion1() {
  Outcome o;
  const double a_star = std::log(0.18 / 0.14), b_star = std::log(0.5 * 0.14 / (0.18 * 0.18));
  const auto zo = fit_mle(table1(Domain::ZeroOne));
  const auto pm = fit_mle(table1(Domain::PlusMinusOne));
  o.require(zo.converged && pm.converged, "fit did not converge");
  for (int i = 0; i < 2; ++i) {
    o.require(std::abs(zo.model.alpha(i) - a_star) < 1e-3, "zero_one alpha vs oracle");
    o.require(std::abs(zo.model.alpha(i) - 0.251) < 5e-3, "zero_one alpha vs display");
    o.require(std::abs(pm.model.alpha(i) - (a_star / 2 + b_star / 4)) < 1e-3, "pm_one alpha vs oracle");
    o.require(std::abs(pm.model.alpha(i) - 0.318) < 5e-3, "pm_one alpha vs display");
  }
  o.require(std::abs(zo.model.beta(0, 1) - b_star) < 1e-3, "zero_one beta vs oracle");
  o.require(std::abs(zo.model.beta(0, 1) - 0.770) < 5e-3, "zero_one beta vs display");
  o.require(std::abs(pm.model.beta(0, 1) - b_star / 4) < 1e-3, "pm_one beta vs oracle");
  o.require(std::abs(pm.model.beta(0, 1) - 0.193) < 5e-3, "pm_one beta vs display");
  o.note("zero_one a*=" + num(zo.model.alpha(0), "%.4f") + " b*=" + num(zo.model.beta(0, 1), "%.4f") +
         ", pm_one a=" + num(pm.model.alpha(0), "%.4f") + " b=" + num(pm.model.beta(0, 1), "%.4f"));
  return o;
}

// 2. Potentials, partition functions and probabilities from the re-fit parameters.
Outcome criterion2() {
  Outcome o;
  struct Row {
    Domain d;
    std::vector<int> s;
    double potential;
  };
  const std::vector<Row> rows = {
      {Domain::PlusMinusOne, {-1, -1}, 0.6415304}, {Domain::PlusMinusOne, {-1, 1}, 0.8248249},
      {Domain::PlusMinusOne, {1, -1}, 0.8248249},  {Domain::PlusMinusOne, {1, 1}, 2.29118},
      {Domain::ZeroOne, {0, 0}, 1.0},              {Domain::ZeroOne, {0, 1}, 1.285714},
      {Domain::ZeroOne, {1, 0}, 1.285714},         {Domain::ZeroOne, {1, 1}, 3.571429}};
  const std::vector<double> probs = {0.14, 0.18, 0.18, 0.5};
  double worst = 0.0;
  for (Domain d : {Domain::PlusMinusOne, Domain::ZeroOne}) {
    const auto fit = fit_mle(table1(d));
    const double z = partition_function(fit.model);
    const double z_expected = d == Domain::PlusMinusOne ? 4.58236 : 7.142857;
    o.require(std::abs(z - z_expected) < 1e-4, std::string(to_string(d)) + " Z = " + num(z, "%.7f"));
    worst = std::max(worst, std::abs(z - z_expected));
    int k = 0;
    for (const auto& row : rows) {
      if (row.d != d) continue;
      const StateVector s(d, row.s);
      const double pot = std::exp(log_potential(fit.model, s));
      const double pr = probability(fit.model, s);
      o.require(std::abs(pot - row.potential) < 1e-4, "potential " + num(pot, "%.7f") + " vs " + num(row.potential, "%.7f"));
      o.require(std::abs(pr - probs[k]) < 1e-4, "probability " + num(pr, "%.7f"));
      worst = std::max({worst, std::abs(pot - row.potential), std::abs(pr - probs[k])});
      ++k;
    }
  }
  o.note("max deviation " + num(worst));
  return o;
}

// 3. Worked transform and round trip.
Outcome criterion3() {
  Outcome o;
  Eigen::MatrixXd b(2, 2);
  b << 0, 0.77, 0.77, 0;
  const IsingModel zo(Domain::ZeroOne, Eigen::VectorXd::Constant(2, 0.251), b);
  const auto [pm, report] = to_pm_one(zo);
  o.require(std::abs(pm.alpha(0) - 0.318) < 5e-4 && std::abs(pm.alpha(1) - 0.318) < 5e-4, "alpha = " + num(pm.alpha(0)));
  o.require(std::abs(pm.beta(0, 1) - 0.1925) < 5e-4, "beta = " + num(pm.beta(0, 1)));
  const auto back = to_zero_one(pm).first;
  const double err = (back.pack() - zo.pack()).cwiseAbs().maxCoeff();
  o.require(err < 1e-12, "round trip error " + num(err));
  o.note("a=" + num(pm.alpha(0), "%.5f") + " b=" + num(pm.beta(0, 1), "%.5f") + " C=" +
         num(report.constant_shift, "%.5f") + " round trip " + num(err));
  return o;
}

// 4. Synchronous dynamics, p = 10, 10^5 steps, both domains, couplings 0 / 0.1 / 0.2.
Outcome criterion4() {
  Outcome o;
  const auto cells = experiments::run_figure2(100000, experiments::kFigure2Seed);
  auto at = [&](Domain d, int k) -> const experiments::Figure2Cell& {
    return cells[(d == Domain::PlusMinusOne ? 0 : 3) + k];
  };
  auto beyond = [](double a, double sa, double b, double sb) { return b - a > 3.0 * std::hypot(sa, sb); };
  for (int k = 0; k < 3; ++k) {
    const auto& c = at(Domain::PlusMinusOne, k);
    o.require(std::abs(c.stats.mean - 5.0) <= 3.0 * c.mean_se,
              "pm_one mean " + num(c.stats.mean) + " +- " + num(c.mean_se) + " at " + num(c.coupling));
  }
  for (int k = 0; k < 2; ++k) {
    const auto &a = at(Domain::PlusMinusOne, k), &b = at(Domain::PlusMinusOne, k + 1);
    o.require(b.stats.variance > a.stats.variance, "pm_one variance not increasing at " + num(b.coupling));
  }
  const auto modes = detect_bimodality(at(Domain::PlusMinusOne, 2).stats.histogram);
  o.require(modes.bimodal && modes.low_mode == 0 && modes.high_mode == 10, "pm_one 0.2 not bimodal at 0 and 10");
  for (int k = 0; k < 2; ++k) {
    const auto &a = at(Domain::ZeroOne, k), &b = at(Domain::ZeroOne, k + 1);
    o.require(beyond(a.stats.mean, a.mean_se, b.stats.mean, b.mean_se), "zero_one mean not increasing at " + num(b.coupling));
    o.require(beyond(b.stats.variance, b.variance_se, a.stats.variance, a.variance_se),
              "zero_one variance not decreasing at " + num(b.coupling));
  }
  o.require(std::abs(at(Domain::ZeroOne, 0).stats.mean - 5.0) <= 3.0 * at(Domain::ZeroOne, 0).mean_se,
            "zero_one mean at 0 differs from 5");
  std::string summary;
  for (const auto& c : cells)
    summary += std::string(summary.empty() ? "" : ", ") + (c.domain == Domain::ZeroOne ? "zo " : "pm ") +
               num(c.coupling, "%.1f") + ": " + num(c.stats.mean, "%.2f") + "/" + num(c.stats.variance, "%.2f");
  o.note("mean/var " + summary);
  return o;
}

// 5. Two-variable marginal claims, exact.
Outcome criterion5() {
  Outcome o;
  Rng rng(5005);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double b = 0.01 + 4.0 * rng.uniform();
    Eigen::MatrixXd beta(2, 2);
    beta << 0, b, b, 0;
    const IsingModel pm(Domain::PlusMinusOne, Eigen::VectorXd::Zero(2), beta);
    const IsingModel zo(Domain::ZeroOne, Eigen::VectorXd::Zero(2), beta);
    const IsingModel zo_neg(Domain::ZeroOne, Eigen::VectorXd::Zero(2), -beta);
    for (int i = 0; i < 2; ++i) {
      worst = std::max({worst, std::abs(marginal(pm, i, 1) - 0.5), std::abs(marginal(pm, i, -1) - 0.5)});
      o.require(marginal(zo, i, 1) > marginal(zo, i, 0), "zero_one P(1) <= P(0) at beta " + num(b));
      o.require(marginal(zo_neg, i, 1) < marginal(zo_neg, i, 0), "no reversal at beta " + num(-b));
    }
  }
  o.require(worst < 1e-12, "pm_one marginal deviates by " + num(worst));
  o.note("100 models, max |P - 0.5| = " + num(worst));
  return o;
}

// 6. Transform equivalence and round trip on random models.
Outcome criterion6() {
  Outcome o;
  Rng rng(6006);
  double gap = 0.0, trip = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int p = 2 + static_cast<int>(rng.below(7));
    const Domain d = t % 2 ? Domain::ZeroOne : Domain::PlusMinusOne;
    const auto m = random_model(d, p, rng, -2.0, 2.0);
    const auto moved = transform(m, other(d)).first;
    // probability_table is indexed by high/low pattern, so equal indices are recoded states.
    gap = std::max(gap, max_gap(m, moved));
    trip = std::max(trip, (transform(moved, d).first.pack() - m.pack()).cwiseAbs().maxCoeff());
  }
  o.require(gap < 1e-12, "probability discrepancy " + num(gap));
  o.require(trip < 1e-12, "round trip error " + num(trip));
  o.note("200 models, max probability gap " + num(gap) + ", max round trip " + num(trip));
  return o;
}

// 7. Analytic gradient vs central differences; unpenalized limit of the l1 path.
Outcome criterion7() {
  Outcome o;
  Rng rng(7007);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int p = 2 + t % 5;
    const Domain d = t % 2 ? Domain::ZeroOne : Domain::PlusMinusOne;
    const auto truth = random_model(d, p, rng, -1.0, 1.0);
    const auto data = sample_exact(truth, 400, 100 + t);
    const auto at = random_model(d, p, rng, -1.0, 1.0);
    const auto g = log_likelihood_gradient(at, data);
    const auto theta = at.pack();
    const double h = 1e-5, n = static_cast<double>(data.n());
    for (int k = 0; k < theta.size(); ++k) {
      Eigen::VectorXd up = theta, dn = theta;
      up(k) += h;
      dn(k) -= h;
      const double fd =
          (log_likelihood(IsingModel::unpack(d, p, up), data) - log_likelihood(IsingModel::unpack(d, p, dn), data)) /
          (2 * h * n);
      worst = std::max(worst, std::abs(fd - g(k)) / std::max(1.0, std::abs(g(k))));
    }
  }
  o.require(worst < 1e-6, "gradient relative error " + num(worst));

  const auto data = sample_exact(experiments::path_study_model(), 500, 7);
  const auto mle = fit_mle(data);
  const auto path = fit_l1_path(data, {1.0, 0.1, 0.0}, 0.25);
  const double diff = (path.fits.back().model.pack() - mle.model.pack()).cwiseAbs().maxCoeff();
  o.require(diff < 1e-4, "lambda = 0 path point differs from MLE by " + num(diff));
  o.note("gradient rel err " + num(worst) + ", lambda=0 vs MLE " + num(diff));
  return o;
}

// 8. Matched penalty grids across domains select equivalent models.
Outcome criterion8() {
  Outcome o;
  const Dataset binary = sample_exact(experiments::path_study_model(), 500, experiments::kPathStudySeed);
  const Dataset spin = recode_dataset(binary, Domain::PlusMinusOne);
  const double gamma = 0.25;

  L1Options constraint;
  constraint.form = PenaltyForm::Constraint;
  std::vector<double> radii, radii_quarter;
  for (int k = 0; k < 20; ++k) {
    radii.push_back(0.2 * k);
    radii_quarter.push_back(0.05 * k);
  }
  const auto c01 = fit_l1_path(binary, radii, gamma, constraint);
  const auto cpm = fit_l1_path(spin, radii_quarter, gamma, constraint);
  const double dc = max_gap(to_pm_one(c01.selected().model).first, cpm.selected().model);
  o.require(dc < 1e-4, "constraint C vs C/4 gap " + num(dc));

  const auto lambdas = default_penalty_grid(binary);
  std::vector<double> four, quarter;
  for (double l : lambdas) {
    four.push_back(4.0 * l);
    quarter.push_back(0.25 * l);
  }
  const auto l01 = fit_l1_path(binary, lambdas, gamma);
  const auto lpm = fit_l1_path(spin, four, gamma);
  const auto lmis = fit_l1_path(spin, quarter, gamma);
  const double dl = max_gap(to_pm_one(l01.selected().model).first, lpm.selected().model);
  o.require(dl < 1e-4, "lagrangian L vs 4L gap " + num(dl));
  const double dm = max_gap(to_pm_one(l01.selected().model).first, lmis.selected().model);
  o.note("constraint C vs C/4: index " + std::to_string(c01.selected_index) + "/" + std::to_string(cpm.selected_index) +
         " gap " + num(dc) + "; lagrangian L vs 4L: index " + std::to_string(l01.selected_index) + "/" +
         std::to_string(lpm.selected_index) + " gap " + num(dl) + "; mismatched L vs L/4 (not asserted): gap " +
         num(dm) + (dm < 1e-4 ? " equivalent" : " not equivalent"));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "two-variable fit", 1.0, criterion1},
      {2, "potentials, Z and probabilities", 1.0, criterion2},
      {3, "worked transform", 1.0, criterion3},
      {4, "activation-count dynamics", 30.0, criterion4},
      {5, "two-variable marginals", 1.0, criterion5},
      {6, "statistical equivalence", 10.0, criterion6},
      {7, "gradient and unpenalized limit", 10.0, criterion7},
      {8, "penalized path equivalence", 30.0, criterion8},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.note("over time budget " + num(c.budget_s) + " s");
    }
    failed += !o.pass;
    std::printf("%s criterion %d (%s) [%.3f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed;
}
