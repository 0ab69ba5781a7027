#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "isingdual/model.hpp"

namespace isingdual {

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr int kDefaultMaxIterations = 500;
/// |parameter| beyond this means the MLE is running off to infinity.
inline constexpr double kDivergenceCap = 30.0;
/// |beta| below this counts as a zero edge in s0.
inline constexpr double kZeroThreshold = 1e-6;
/// Largest p fitted by Newton's method; above it fit_mle uses gradient ascent.
inline constexpr int kNewtonLimit = 12;
/// Newton fits also require the last Newton step (max-norm) below this to count as converged.
inline constexpr double kNewtonStepTolerance = 1e-4;

struct FitResult {
  explicit FitResult(IsingModel m) : model(std::move(m)) {}

  IsingModel model;
  /// Joint log-likelihood (total over observations) at the returned model.
  double log_likelihood = 0.0;
  /// Max-norm of the per-observation gradient (observed minus expected statistics).
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Parameters hit kDivergenceCap: the data do not support a finite MLE.
  bool diverged = false;
  std::string message;
};

/// Exact log-likelihood sum_s count(s) * log P(s).
double log_likelihood(const IsingModel& model, const Dataset& data);

/// Gradient of the per-observation log-likelihood in packed order.
Eigen::VectorXd log_likelihood_gradient(const IsingModel& model, const Dataset& data);

/// Exact maximum likelihood in the dataset's own domain.
FitResult fit_mle(const Dataset& data, double tol = kDefaultTolerance, int max_iter = kDefaultMaxIterations);

/// Raw nodewise logistic-regression coefficients on the {0,1} recoding.
/// Row i holds regression i: (i, i) is its intercept, (i, j) its slope on x_j.
struct NodewiseFit {
  Eigen::MatrixXd coefficients;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = true;
  bool separated = false;
  double log_pseudolikelihood = 0.0;
};

NodewiseFit fit_nodewise(const Dataset& data, double tol = kDefaultTolerance, int max_iter = kDefaultMaxIterations);

/// Nodewise pseudolikelihood, symmetrized by averaging beta*_ij and beta*_ji,
/// returned in the dataset's domain.
FitResult fit_pseudolikelihood(const Dataset& data, double tol = kDefaultTolerance,
                               int max_iter = kDefaultMaxIterations);

enum class EbicVariant {
  LogP,         // -2 LL + s0 log n + 4 s0 gamma log p
  LogPairCount  // -2 LL + s0 log n + 4 s0 gamma log(p (p - 1) / 2)
};

int nonzero_interactions(const IsingModel& model, double zero_threshold = kZeroThreshold);

double ebic_score(double log_likelihood, int s0, std::int64_t n, int p, double gamma,
                  EbicVariant variant = EbicVariant::LogP);
double ebic_score(const FitResult& fit, std::int64_t n, int p, double gamma,
                  EbicVariant variant = EbicVariant::LogP);

/// How the l1 penalty enters the fit.
///  Lagrangian: maximize LL - lambda * sum_{i<j} |beta_ij|.
///  Constraint: maximize LL subject to sum_{i<j} |beta_ij| <= lambda.
/// Thresholds are never penalized.
enum class PenaltyForm { Lagrangian, Constraint };

struct L1Options {
  PenaltyForm form = PenaltyForm::Lagrangian;
  EbicVariant ebic = EbicVariant::LogP;
  /// Stop once the objective changes by less than this between iterations...
  double objective_tol = 1e-10;
  /// ...and the gradient-mapping max-norm (per observation) is below this.
  double residual_tol = 1e-9;
  int max_iter = 200000;
};

struct EbicPathResult {
  std::vector<double> penalties;
  std::vector<FitResult> fits;
  std::vector<int> nonzero_counts;
  std::vector<double> ebic_scores;
  std::size_t selected_index = 0;
  double gamma = 0.0;

  const FitResult& selected() const { return fits.at(selected_index); }
};

/// One l1-penalized exact-likelihood fit.
FitResult fit_l1(const Dataset& data, double penalty, const L1Options& options = {});

/// Fits every penalty independently (in parallel) and picks the EBIC minimizer.
/// Ties go to the earliest index.
EbicPathResult fit_l1_path(const Dataset& data, const std::vector<double>& penalties, double gamma,
                           const L1Options& options = {});

/// `count` log-spaced Lagrangian penalties from the smallest lambda that zeroes every
/// interaction down to `min_ratio` of it, in decreasing order.
std::vector<double> default_penalty_grid(const Dataset& data, int count = 20, double min_ratio = 0.01);

}  // namespace isingdual
