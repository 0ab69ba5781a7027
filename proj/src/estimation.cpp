#include "isingdual/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "isingdual/enumeration.hpp"
#include "isingdual/inference.hpp"
#include "isingdual/transform.hpp"

namespace isingdual {

namespace {

void require_fit_input(const Dataset& data, double tol) {
  if (data.empty()) throw std::invalid_argument("no observations");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Per-observation log-likelihood theta . T_bar - log Z.
double mean_log_likelihood(const IsingModel& model, const Eigen::VectorXd& observed) {
  return model.pack().dot(observed) - enumeration::parallel::log_partition(model);
}

/// Thresholds of the independence model matching the data's marginals, beta = 0.
Eigen::VectorXd independence_start(const Dataset& data, const Eigen::VectorXd& observed) {
  const int p = data.p();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(stat_dimension(p));
  for (int i = 0; i < p; ++i) {
    // P(high) for variable i.
    double q = data.domain() == Domain::ZeroOne ? observed(i) : 0.5 * (observed(i) + 1.0);
    q = std::clamp(q, 1e-12, 1.0 - 1e-12);
    const double logit = std::log(q / (1.0 - q));
    const double a = data.domain() == Domain::ZeroOne ? logit : 0.5 * logit;
    theta(i) = std::clamp(a, -kDivergenceCap, kDivergenceCap);
  }
  return theta;
}

double stat_variance_bound(Domain d) { return d == Domain::ZeroOne ? 0.25 : 1.0; }

double l1_of_pairs(const Eigen::VectorXd& theta, int p) {
  return theta.tail(theta.size() - p).cwiseAbs().sum();
}

// Euclidean projection onto {v : ||v||_1 <= radius}.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (v.cwiseAbs().sum() <= radius) return v;
  if (radius <= 0.0) return Eigen::VectorXd::Zero(v.size());
  std::vector<double> u(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) u[k] = std::abs(v(k));
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, shrink = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) shrink = candidate;
  }
  Eigen::VectorXd w(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double m = std::max(std::abs(v(k)) - shrink, 0.0);
    w(k) = v(k) < 0 ? -m : m;
  }
  return w;
}

}  // namespace

double log_likelihood(const IsingModel& model, const Dataset& data) {
  if (model.p() != data.p()) throw DimensionError("model and data disagree on p");
  if (model.domain() != data.domain()) throw DomainError("model and data are coded in different domains");
  if (data.empty()) return 0.0;
  return static_cast<double>(data.n()) * mean_log_likelihood(model, data.mean_statistics());
}

Eigen::VectorXd log_likelihood_gradient(const IsingModel& model, const Dataset& data) {
  if (model.p() != data.p()) throw DimensionError("model and data disagree on p");
  if (model.domain() != data.domain()) throw DomainError("model and data are coded in different domains");
  return data.mean_statistics() - enumeration::parallel::moments(model, enumeration::Order::First).mean;
}

// ---------------------------------------------------------------------------
// Exact MLE

FitResult fit_mle(const Dataset& data, double tol, int max_iter) {
  require_fit_input(data, tol);
  require_enumerable(data.p());
  const int p = data.p();
  const Domain domain = data.domain();
  const bool newton = p <= kNewtonLimit;
  const Eigen::VectorXd observed = data.mean_statistics();

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(stat_dimension(p));
  IsingModel model = IsingModel::unpack(domain, p, theta);
  double f = mean_log_likelihood(model, observed);

  FitResult result(model);
  Eigen::VectorXd prev_theta, prev_grad;
  double step_guess = 1.0 / (stat_dimension(p) * stat_variance_bound(domain));

  int iter = 0;
  for (;; ++iter) {
    const auto sums = enumeration::parallel::moments(model, newton ? enumeration::Order::Second
                                                                   : enumeration::Order::First);
    const Eigen::VectorXd grad = observed - sums.mean;
    result.gradient_norm = max_abs(grad);

    Eigen::VectorXd newton_dir;
    if (newton) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(sums.covariance);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) newton_dir = ldlt.solve(grad);
      if (newton_dir.size() > 0 && (!newton_dir.allFinite() || newton_dir.dot(grad) <= 0.0)) newton_dir.resize(0);
    }
    if (result.gradient_norm <= tol) {
      // A tiny gradient with a large Newton step means the likelihood keeps rising
      // along a direction of vanishing curvature: the estimate is running off to infinity.
      if (!newton || (newton_dir.size() > 0 && max_abs(newton_dir) <= kNewtonStepTolerance)) {
        result.converged = true;
        break;
      }
      if (newton_dir.size() == 0) {
        result.diverged = true;
        result.message = "information matrix is singular at the optimum; the data do not support a finite MLE";
        break;
      }
    }
    if (max_abs(theta) > kDivergenceCap) {
      result.diverged = true;
      result.message = "parameters exceeded the divergence cap; the data do not support a finite MLE";
      break;
    }
    if (iter >= max_iter) {
      result.message = "iteration limit reached";
      break;
    }

    Eigen::VectorXd direction;
    double step = 1.0;
    if (newton) {
      direction = newton_dir;
      if (direction.size() == 0) {
        direction = grad;
        step = step_guess;
      }
    } else {
      direction = grad;
      if (prev_theta.size() > 0) {
        // Barzilai-Borwein step, safeguarded.
        const Eigen::VectorXd s = theta - prev_theta;
        const Eigen::VectorXd y = prev_grad - grad;
        const double sy = s.dot(y);
        if (sy > 0.0) step_guess = std::clamp(s.squaredNorm() / sy, 1e-6, 1e6);
      }
      step = step_guess;
      prev_theta = theta;
      prev_grad = grad;
    }

    // Armijo backtracking on the concave objective. The slack absorbs rounding
    // once the gradient is near machine precision.
    const double slope = grad.dot(direction);
    const double slack = 1e-14 * std::max(1.0, std::abs(f));
    for (int halvings = 0;; ++halvings) {
      const Eigen::VectorXd trial = theta + step * direction;
      IsingModel trial_model = IsingModel::unpack(domain, p, trial);
      const double f_trial = mean_log_likelihood(trial_model, observed);
      if (f_trial >= f + 1e-4 * step * slope - slack || halvings >= 60) {
        theta = trial;
        model = std::move(trial_model);
        f = f_trial;
        break;
      }
      step *= 0.5;
    }
  }

  result.model = model;
  result.iterations = iter;
  result.log_likelihood = static_cast<double>(data.n()) * f;
  return result;
}

// ---------------------------------------------------------------------------
// Pseudolikelihood

NodewiseFit fit_nodewise(const Dataset& data, double tol, int max_iter) {
  require_fit_input(data, tol);
  const int p = data.p();
  const Dataset coded = recode_dataset(data, Domain::ZeroOne);

  // Distinct states with weights; regressions iterate over these, not raw rows.
  std::vector<std::vector<double>> states;
  std::vector<double> weights;
  for (const auto& [s, c] : coded.counts()) {
    states.emplace_back(s.values().begin(), s.values().end());
    weights.push_back(static_cast<double>(c));
  }
  const double n = static_cast<double>(coded.n());

  NodewiseFit out;
  out.coefficients = Eigen::MatrixXd::Zero(p, p);

  for (int i = 0; i < p; ++i) {
    // Design row: (1, x_j for j != i); coefficient k maps to column col[k] of row i.
    std::vector<int> col{i};
    for (int j = 0; j < p; ++j)
      if (j != i) col.push_back(j);
    const int k_dim = static_cast<int>(col.size());

    auto design = [&](const std::vector<double>& x) {
      Eigen::VectorXd z(k_dim);
      z(0) = 1.0;
      for (int k = 1; k < k_dim; ++k) z(k) = x[col[k]];
      return z;
    };
    auto objective = [&](const Eigen::VectorXd& w) {
      double ll = 0.0;
      for (std::size_t r = 0; r < states.size(); ++r) {
        const double eta = design(states[r]).dot(w);
        // log P(y | eta) = y eta - log(1 + e^eta)
        const double log1pe = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
        ll += weights[r] * (states[r][i] * eta - log1pe);
      }
      return ll / n;
    };

    Eigen::VectorXd w = Eigen::VectorXd::Zero(k_dim);
    double f = objective(w);
    int iter = 0;
    bool done = false, separated = false;
    double gnorm = 0.0;
    for (; iter <= max_iter; ++iter) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(k_dim);
      Eigen::MatrixXd info = Eigen::MatrixXd::Zero(k_dim, k_dim);
      for (std::size_t r = 0; r < states.size(); ++r) {
        const Eigen::VectorXd z = design(states[r]);
        const double mu = logistic(z.dot(w));
        grad += weights[r] * (states[r][i] - mu) * z;
        info += weights[r] * mu * (1.0 - mu) * z * z.transpose();
      }
      grad /= n;
      info /= n;
      gnorm = max_abs(grad);
      if (gnorm <= tol) {
        done = true;
        break;
      }
      if (max_abs(w) > kDivergenceCap) {
        separated = true;
        break;
      }
      if (iter == max_iter) break;

      Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
      Eigen::VectorXd direction;
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) direction = ldlt.solve(grad);
      if (direction.size() == 0 || !direction.allFinite() || direction.dot(grad) <= 0.0) direction = grad;

      const double slope = grad.dot(direction);
      const double slack = 1e-14 * std::max(1.0, std::abs(f));
      double step = 1.0;
      for (int halvings = 0;; ++halvings) {
        const Eigen::VectorXd trial = w + step * direction;
        const double f_trial = objective(trial);
        if (f_trial >= f + 1e-4 * step * slope - slack || halvings >= 60) {
          w = trial;
          f = f_trial;
          break;
        }
        step *= 0.5;
      }
    }
    if (separated) w = w.cwiseMax(-kDivergenceCap).cwiseMin(kDivergenceCap);

    for (int k = 0; k < k_dim; ++k) out.coefficients(i, col[k]) = w(k);
    out.gradient_norm = std::max(out.gradient_norm, gnorm);
    out.iterations = std::max(out.iterations, iter);
    out.converged = out.converged && done;
    out.separated = out.separated || separated;
    out.log_pseudolikelihood += n * objective(w);
  }
  return out;
}

FitResult fit_pseudolikelihood(const Dataset& data, double tol, int max_iter) {
  const NodewiseFit nodewise = fit_nodewise(data, tol, max_iter);
  const int p = data.p();
  Eigen::VectorXd alpha = nodewise.coefficients.diagonal();
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      beta(i, j) = beta(j, i) = 0.5 * (nodewise.coefficients(i, j) + nodewise.coefficients(j, i));

  IsingModel binary(Domain::ZeroOne, std::move(alpha), std::move(beta));
  IsingModel model = data.domain() == Domain::ZeroOne ? binary : to_pm_one(binary).first;

  FitResult result(model);
  result.gradient_norm = nodewise.gradient_norm;
  result.iterations = nodewise.iterations;
  result.converged = nodewise.converged;
  result.diverged = nodewise.separated;
  if (nodewise.separated) result.message = "perfect separation in a nodewise regression; coefficients capped";
  else if (!nodewise.converged) result.message = "iteration limit reached in a nodewise regression";
  result.log_likelihood =
      p <= kEnumerationLimit ? log_likelihood(model, data) : nodewise.log_pseudolikelihood;
  return result;
}

// ---------------------------------------------------------------------------
// EBIC

int nonzero_interactions(const IsingModel& model, double zero_threshold) {
  int s0 = 0;
  for (int i = 0; i < model.p(); ++i)
    for (int j = i + 1; j < model.p(); ++j) s0 += std::abs(model.beta(i, j)) >= zero_threshold;
  return s0;
}

double ebic_score(double ll, int s0, std::int64_t n, int p, double gamma, EbicVariant variant) {
  const double size_term = variant == EbicVariant::LogP
                               ? std::log(static_cast<double>(p))
                               : std::log(static_cast<double>(p) * (p - 1) / 2.0);
  return -2.0 * ll + s0 * std::log(static_cast<double>(n)) + 4.0 * s0 * gamma * size_term;
}

double ebic_score(const FitResult& fit, std::int64_t n, int p, double gamma, EbicVariant variant) {
  return ebic_score(fit.log_likelihood, nonzero_interactions(fit.model), n, p, gamma, variant);
}

// ---------------------------------------------------------------------------
// l1-penalized fits: accelerated proximal gradient with function-value restart.

FitResult fit_l1(const Dataset& data, double penalty, const L1Options& options) {
  if (data.empty()) throw std::invalid_argument("no observations");
  if (!(penalty >= 0.0)) throw std::invalid_argument("penalties must be non-negative");
  require_enumerable(data.p());

  const int p = data.p();
  const Domain domain = data.domain();
  const double n = static_cast<double>(data.n());
  const Eigen::VectorXd observed = data.mean_statistics();
  const double lipschitz = stat_dimension(p) * stat_variance_bound(domain);
  const double step = 1.0 / lipschitz;
  const bool lagrangian = options.form == PenaltyForm::Lagrangian;
  const double per_obs_penalty = penalty / n;

  auto prox = [&](Eigen::VectorXd v) {
    auto pairs = v.tail(v.size() - p);
    if (lagrangian) {
      const double t = per_obs_penalty * step;
      for (Eigen::Index k = 0; k < pairs.size(); ++k) {
        const double m = std::max(std::abs(pairs(k)) - t, 0.0);
        pairs(k) = pairs(k) < 0 ? -m : m;
      }
    } else {
      pairs = project_l1_ball(Eigen::VectorXd(pairs), penalty);
    }
    return v;
  };
  // Negative per-observation objective (minimized).
  auto objective = [&](const Eigen::VectorXd& theta) {
    const double smooth = -mean_log_likelihood(IsingModel::unpack(domain, p, theta), observed);
    return lagrangian ? smooth + per_obs_penalty * l1_of_pairs(theta, p) : smooth;
  };
  auto gradient = [&](const Eigen::VectorXd& theta) -> Eigen::VectorXd {
    return enumeration::parallel::moments(IsingModel::unpack(domain, p, theta), enumeration::Order::First).mean -
           observed;
  };

  Eigen::VectorXd x = prox(independence_start(data, observed));
  Eigen::VectorXd y = x;
  double momentum = 1.0;
  double f = objective(x);
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false, diverged = false;
  int iter = 0;

  for (; iter < options.max_iter; ++iter) {
    Eigen::VectorXd x_next = prox(y - step * gradient(y));
    double f_next = objective(x_next);
    if (f_next > f) {
      // Restart momentum and take a plain proximal step from x.
      y = x;
      momentum = 1.0;
      x_next = prox(x - step * gradient(x));
      f_next = objective(x_next);
    }
    residual = lipschitz * max_abs(x_next - y);
    const double change = std::abs(f - f_next);

    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = x_next + ((momentum - 1.0) / momentum_next) * (x_next - x);
    x = std::move(x_next);
    f = f_next;
    momentum = momentum_next;

    if (change < options.objective_tol && residual < options.residual_tol) {
      converged = true;
      ++iter;
      break;
    }
    if (max_abs(x) > kDivergenceCap) {
      diverged = true;
      ++iter;
      break;
    }
  }

  IsingModel model = IsingModel::unpack(domain, p, x);
  FitResult result(model);
  result.log_likelihood = n * mean_log_likelihood(model, observed);
  result.gradient_norm = residual;
  result.iterations = iter;
  result.converged = converged;
  result.diverged = diverged;
  if (diverged) result.message = "parameters exceeded the divergence cap";
  else if (!converged) result.message = "iteration limit reached";
  return result;
}

EbicPathResult fit_l1_path(const Dataset& data, const std::vector<double>& penalties, double gamma,
                           const L1Options& options) {
  if (penalties.empty()) throw std::invalid_argument("penalty list is empty");
  for (double l : penalties)
    if (!(l >= 0.0)) throw std::invalid_argument("penalties must be non-negative");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (data.empty()) throw std::invalid_argument("no observations");
  require_enumerable(data.p());

  const long count = static_cast<long>(penalties.size());
  std::vector<std::optional<FitResult>> slots(penalties.size());

#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) slots[k] = fit_l1(data, penalties[k], options);

  EbicPathResult out;
  out.penalties = penalties;
  out.gamma = gamma;
  for (auto& s : slots) {
    out.nonzero_counts.push_back(nonzero_interactions(s->model));
    out.ebic_scores.push_back(ebic_score(s->log_likelihood, out.nonzero_counts.back(), data.n(), data.p(), gamma,
                                         options.ebic));
    out.fits.push_back(std::move(*s));
  }
  out.selected_index = static_cast<std::size_t>(
      std::min_element(out.ebic_scores.begin(), out.ebic_scores.end()) - out.ebic_scores.begin());
  return out;
}

std::vector<double> default_penalty_grid(const Dataset& data, int count, double min_ratio) {
  if (data.empty()) throw std::invalid_argument("no observations");
  if (count < 1) throw std::invalid_argument("grid needs at least one value");
  const int p = data.p();
  const Eigen::VectorXd observed = data.mean_statistics();
  const IsingModel start = IsingModel::unpack(data.domain(), p, independence_start(data, observed));
  const auto expected = enumeration::parallel::moments(start, enumeration::Order::First).mean;
  const double lambda_max =
      p < 2 ? 1.0 : static_cast<double>(data.n()) * max_abs((observed - expected).tail(stat_dimension(p) - p));
  std::vector<double> grid;
  for (int k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    grid.push_back(lambda_max * std::pow(min_ratio, frac));
  }
  return grid;
}

}  // namespace isingdual
