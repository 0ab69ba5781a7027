// isingdual: fit, transform, query, simulate and compare Ising models in the
// {0,1} and {-1,1} domains.
//
// Exit codes: 0 success / PASS, 1 usage or input error, 2 numeric failure
// (non-convergence, divergence, FAIL verdict).

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isingdual/dynamics.hpp"
#include "isingdual/estimation.hpp"
#include "isingdual/experiments.hpp"
#include "isingdual/inference.hpp"
#include "isingdual/io.hpp"
#include "isingdual/transform.hpp"

namespace {

using namespace isingdual;
using io::format_fixed;
using io::format_real;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("cannot parse '" + cell + "' as an integer");
    }
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("cannot parse '" + cell + "' as a number");
    }
  }
  return out;
}

std::string state_text(const StateVector& s) {
  std::string out;
  for (int i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

void print_model(std::ostream& out, const IsingModel& m) {
  out << "domain " << to_string(m.domain()) << ", p = " << m.p() << "\n";
  out << "thresholds:";
  for (int i = 0; i < m.p(); ++i) out << " " << format_fixed(m.alpha(i), 4);
  out << "\ninteractions (i, j, value):\n";
  for (int i = 0; i < m.p(); ++i)
    for (int j = i + 1; j < m.p(); ++j)
      if (m.beta(i, j) != 0.0) out << "  " << i << " " << j << " " << format_fixed(m.beta(i, j), 4) << "\n";
}

void print_fit(std::ostream& out, const FitResult& fit) {
  print_model(out, fit.model);
  out << "log-likelihood " << format_fixed(fit.log_likelihood, 4) << ", gradient norm " << fit.gradient_norm
      << ", iterations " << fit.iterations << ", " << (fit.converged ? "converged" : "NOT converged");
  if (!fit.message.empty()) out << " (" << fit.message << ")";
  out << "\n";
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string data;
  std::string domain;
  std::string method = "mle";
  double tol = kDefaultTolerance;
  int max_iter = kDefaultMaxIterations;
  double gamma = 0.25;
  std::string lambdas;
  std::string penalty_form = "lagrangian";
  std::string ebic_variant = "log_p";
  std::string out;
};

int cmd_fit(const FitArgs& a) {
  const Domain domain = parse_domain(a.domain);
  const Dataset data = io::read_data(a.data, domain);
  std::optional<FitResult> fit;
  bool ok = true;

  if (a.method == "mle") {
    fit = fit_mle(data, a.tol, a.max_iter);
    print_fit(std::cout, *fit);
    ok = fit->converged;
  } else if (a.method == "pseudo") {
    fit = fit_pseudolikelihood(data, a.tol, a.max_iter);
    print_fit(std::cout, *fit);
    ok = fit->converged;
  } else if (a.method == "l1path") {
    L1Options opts;
    if (a.penalty_form == "constraint") opts.form = PenaltyForm::Constraint;
    else if (a.penalty_form != "lagrangian") throw UsageError("--penalty-form must be lagrangian or constraint");
    if (a.ebic_variant == "log_pairs") opts.ebic = EbicVariant::LogPairCount;
    else if (a.ebic_variant != "log_p") throw UsageError("--ebic-variant must be log_p or log_pairs");
    const auto grid = a.lambdas.empty() ? default_penalty_grid(data) : parse_real_list(a.lambdas);
    const auto path = fit_l1_path(data, grid, a.gamma, opts);
    std::cout << "penalty       s0  log-likelihood       EBIC  converged\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::cout << format_fixed(path.penalties[k], 4) << "  " << path.nonzero_counts[k] << "  "
                << format_fixed(path.fits[k].log_likelihood, 4) << "  " << format_fixed(path.ebic_scores[k], 4) << "  "
                << (path.fits[k].converged ? "yes" : "no") << (k == path.selected_index ? "  <- selected" : "")
                << "\n";
      ok = ok && path.fits[k].converged;
    }
    fit = path.selected();
    print_fit(std::cout, *fit);
  } else {
    throw UsageError("--method must be mle, pseudo or l1path");
  }

  if (!a.out.empty()) io::write_model(a.out, fit->model);
  else std::cout << io::model_to_json(fit->model);
  return ok ? kExitOk : kExitNumeric;
}

int cmd_transform(const std::string& model_path, const std::string& target, const std::string& out) {
  const IsingModel model = io::read_model(model_path);
  const Domain d = parse_domain(target);
  if (d == model.domain()) {
    std::cerr << "warning: model is already in the " << target << " domain; nothing to do\n";
    return kExitUsage;
  }
  const auto [converted, report] = transform(model, d);
  std::cerr << "constant shift C = " << format_real(report.constant_shift) << "\n";
  if (!out.empty()) io::write_model(out, converted);
  else std::cout << io::model_to_json(converted);
  return kExitOk;
}

int cmd_prob(const std::string& model_path, const std::string& state, bool all) {
  const IsingModel model = io::read_model(model_path);
  if (all == !state.empty()) throw UsageError("give exactly one of --state or --all");
  std::cout << "state,log_potential,potential,probability\n";
  auto row = [&](const StateVector& s, double prob) {
    const double lp = log_potential(model, s);
    std::cout << "\"" << state_text(s) << "\"," << format_fixed(lp, 6) << "," << format_fixed(std::exp(lp), 6) << ","
              << format_fixed(prob, 6) << "\n";
  };
  if (all) {
    const auto table = probability_table(model);
    for (std::uint64_t k = 0; k < table.size(); ++k) row(StateVector::from_index(model.domain(), model.p(), k), table[k]);
  } else {
    const StateVector s(model.domain(), parse_int_list(state));
    row(s, probability(model, s));
  }
  std::cout << "Z," << format_real(partition_function(model)) << "\n";
  return kExitOk;
}

struct SimulateArgs {
  std::string model;
  std::int64_t steps = 100000;
  std::optional<std::int64_t> burn_in;
  std::string rule = "synchronous";
  std::string initial = "random";
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  const IsingModel model = io::read_model(a.model);
  UpdateRule rule;
  if (a.rule == "synchronous") rule = UpdateRule::Synchronous;
  else if (a.rule == "glauber") rule = UpdateRule::Glauber;
  else throw UsageError("--rule must be synchronous or glauber");

  auto cfg = SimulationConfig::with_defaults(model, a.steps, rule, a.seed);
  if (a.burn_in) cfg.burn_in = *a.burn_in;
  if (a.initial == "random") cfg.initial = InitialState::Random;
  else if (a.initial == "high") cfg.initial = InitialState::AllHigh;
  else if (a.initial == "low") cfg.initial = InitialState::AllLow;
  else cfg.initial_state = StateVector(model.domain(), parse_int_list(a.initial));
  if (cfg.steps <= cfg.burn_in) throw UsageError("--steps must exceed --burn-in");

  const TrajectoryStats stats = simulate(cfg);
  const std::string csv = io::histogram_csv(stats);
  if (!a.out.empty()) io::write_text(a.out, csv);
  else std::cout << csv;
  const auto modes = detect_bimodality(stats.histogram);
  std::cerr << "mean " << format_fixed(stats.mean, 4) << ", variance " << format_fixed(stats.variance, 4)
            << ", recorded steps " << stats.activation_counts.size()
            << (modes.bimodal ? ", bimodal (modes " + std::to_string(modes.low_mode) + " and " +
                                    std::to_string(modes.high_mode) + ")"
                              : std::string(", unimodal"))
            << "\n";
  return kExitOk;
}

int cmd_equiv(const std::string& path_a, const std::string& path_b, double tol) {
  const IsingModel a = io::read_model(path_a);
  const IsingModel b = io::read_model(path_b);
  if (a.p() != b.p()) throw UsageError("models have different p");
  // State indices coincide under recoding: index bit i is set iff variable i is high.
  const auto pa = probability_table(a);
  const auto pb = probability_table(b);
  double worst = 0.0;
  std::uint64_t worst_state = 0;
  for (std::uint64_t k = 0; k < pa.size(); ++k) {
    const double gap = std::abs(pa[k] - pb[k]);
    if (gap > worst) {
      worst = gap;
      worst_state = k;
    }
  }
  const bool pass = worst <= tol;
  std::cout << "max |P_a - P_b| = " << format_real(worst) << " at state "
            << state_text(StateVector::from_index(a.domain(), a.p(), worst_state)) << " (" << to_string(a.domain())
            << " coding)\n"
            << (pass ? "PASS" : "FAIL") << " at tol " << tol << "\n";
  return pass ? kExitOk : kExitNumeric;
}

int cmd_reproduce(const std::string& which, const std::string& out_dir, std::optional<std::uint64_t> seed) {
  std::vector<std::string> todo;
  if (which == "all") todo = experiments::names();
  else todo = {which};
  bool ok = true;
  for (const auto& name : todo) {
    bool known = false;
    for (const auto& n : experiments::names()) known = known || n == name;
    if (!known) throw UsageError("unknown experiment '" + name + "'");
    const auto report = experiments::run(name, out_dir, seed);
    std::cout << report.render();
    ok = ok && report.passed();
  }
  return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-domain Ising model toolkit"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "estimate a model from a data CSV");
  fit_cmd->add_option("data", fit.data, "matrix or counts CSV")->required();
  fit_cmd->add_option("--domain", fit.domain, "zero_one or pm_one")->required();
  fit_cmd->add_option("--method", fit.method, "mle, pseudo or l1path")->capture_default_str();
  fit_cmd->add_option("--tol", fit.tol, "gradient max-norm tolerance")->capture_default_str();
  fit_cmd->add_option("--max-iter", fit.max_iter)->capture_default_str();
  fit_cmd->add_option("--gamma", fit.gamma, "EBIC gamma")->capture_default_str();
  fit_cmd->add_option("--lambdas", fit.lambdas, "comma-separated penalties (default: 20 log-spaced)");
  fit_cmd->add_option("--penalty-form", fit.penalty_form, "lagrangian or constraint")->capture_default_str();
  fit_cmd->add_option("--ebic-variant", fit.ebic_variant, "log_p or log_pairs")->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "model JSON path (default: stdout)");

  std::string tr_model, tr_domain, tr_out;
  auto* tr_cmd = app.add_subcommand("transform", "convert a model to the other domain");
  tr_cmd->add_option("model", tr_model)->required();
  tr_cmd->add_option("--domain", tr_domain, "target domain")->required();
  tr_cmd->add_option("--out", tr_out);

  std::string pr_model, pr_state;
  bool pr_all = false;
  auto* pr_cmd = app.add_subcommand("prob", "log potentials and probabilities");
  pr_cmd->add_option("model", pr_model)->required();
  pr_cmd->add_option("--state", pr_state, "comma-separated state");
  pr_cmd->add_flag("--all", pr_all, "enumerate all 2^p states");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "activation-count histogram of a dynamic run");
  sim_cmd->add_option("model", sim.model)->required();
  sim_cmd->add_option("--steps", sim.steps)->capture_default_str();
  sim_cmd->add_option("--burn-in", sim.burn_in, "default: steps / 10");
  sim_cmd->add_option("--rule", sim.rule, "synchronous or glauber")->capture_default_str();
  sim_cmd->add_option("--initial", sim.initial, "random, high, low or a comma-separated state")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "histogram CSV path (default: stdout)");

  std::string eq_a, eq_b;
  double eq_tol = 1e-9;
  auto* eq_cmd = app.add_subcommand("equiv", "compare state probabilities of two models");
  eq_cmd->add_option("model_a", eq_a)->required();
  eq_cmd->add_option("model_b", eq_b)->required();
  eq_cmd->add_option("--tol", eq_tol)->capture_default_str();

  std::string rep_name, rep_out = "reproduction";
  std::optional<std::uint64_t> rep_seed;
  auto* rep_cmd = app.add_subcommand("reproduce", "regenerate a reference experiment");
  rep_cmd->add_option("experiment", rep_name, "figure1, appendixA, transform_example, figure2, appendixD or all")
      ->required();
  rep_cmd->add_option("--out", rep_out)->capture_default_str();
  rep_cmd->add_option("--seed", rep_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit);
    if (*tr_cmd) return cmd_transform(tr_model, tr_domain, tr_out);
    if (*pr_cmd) return cmd_prob(pr_model, pr_state, pr_all);
    if (*sim_cmd) return cmd_simulate(sim);
    if (*eq_cmd) return cmd_equiv(eq_a, eq_b, eq_tol);
    if (*rep_cmd) return cmd_reproduce(rep_name, rep_out, rep_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EnumerationLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
