#include "isingdual/model.hpp"

#include <sstream>

namespace isingdual {

std::string_view to_string(Domain d) {
  return d == Domain::ZeroOne ? "zero_one" : "pm_one";
}

Domain parse_domain(std::string_view s) {
  if (s == "zero_one") return Domain::ZeroOne;
  if (s == "pm_one") return Domain::PlusMinusOne;
  throw DomainError("unknown domain '" + std::string(s) + "' (expected zero_one or pm_one)");
}

void require_enumerable(int p) {
  if (p > kEnumerationLimit) {
    throw EnumerationLimitError("p = " + std::to_string(p) + " exceeds the exact enumeration limit of " +
                                std::to_string(kEnumerationLimit));
  }
}

StateVector::StateVector(Domain domain, std::vector<int> values)
    : domain_(domain), values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!admissible(domain_, values_[i])) {
      std::ostringstream msg;
      msg << "value " << values_[i] << " at position " << i << " is not admissible for domain "
          << to_string(domain_);
      throw DomainError(msg.str());
    }
  }
}

StateVector StateVector::from_index(Domain domain, int p, std::uint64_t index) {
  std::vector<int> v(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) v[i] = (index >> i) & 1U ? high_value(domain) : low_value(domain);
  return StateVector(domain, std::move(v));
}

std::uint64_t StateVector::index() const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] == 1) idx |= std::uint64_t{1} << i;
  return idx;
}

int StateVector::count_high() const {
  int c = 0;
  for (int v : values_) c += v == 1;
  return c;
}

IsingModel::IsingModel(Domain domain, Eigen::VectorXd alpha, Eigen::MatrixXd beta)
    : domain_(domain), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  const auto p = alpha_.size();
  if (p < 1) throw DimensionError("model needs at least one variable");
  if (beta_.rows() != p || beta_.cols() != p) {
    throw DimensionError("beta must be " + std::to_string(p) + "x" + std::to_string(p));
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (beta_(i, i) != 0.0) throw DimensionError("beta must have a zero diagonal");
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (beta_(i, j) != beta_(j, i)) {
        std::ostringstream msg;
        msg << "beta is not symmetric at (" << i << ", " << j << ")";
        throw DimensionError(msg.str());
      }
    }
  }
}

IsingModel IsingModel::from_upper(Domain domain, Eigen::VectorXd alpha, const Eigen::MatrixXd& upper) {
  const auto p = alpha.size();
  if (upper.rows() != p || upper.cols() != p) throw DimensionError("beta must be p x p");
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j) beta(i, j) = beta(j, i) = upper(i, j);
  return IsingModel(domain, std::move(alpha), std::move(beta));
}

IsingModel IsingModel::zero(Domain domain, int p) {
  return IsingModel(domain, Eigen::VectorXd::Zero(p), Eigen::MatrixXd::Zero(p, p));
}

IsingModel IsingModel::fully_connected(Domain domain, int p, double threshold, double coupling) {
  Eigen::MatrixXd beta = Eigen::MatrixXd::Constant(p, p, coupling);
  beta.diagonal().setZero();
  return IsingModel(domain, Eigen::VectorXd::Constant(p, threshold), std::move(beta));
}

double IsingModel::beta_row_sum(int i) const {
  double s = 0.0;
  for (int j = 0; j < p(); ++j)
    if (j != i) s += beta_(i, j);
  return s;
}

Eigen::VectorXd IsingModel::pack() const {
  const int n = p();
  Eigen::VectorXd theta(stat_dimension(n));
  theta.head(n) = alpha_;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) theta(pair_offset(n, i, j)) = beta_(i, j);
  return theta;
}

IsingModel IsingModel::unpack(Domain domain, int p, const Eigen::VectorXd& theta) {
  if (theta.size() != stat_dimension(p)) throw DimensionError("packed parameter vector has wrong length");
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) beta(i, j) = beta(j, i) = theta(pair_offset(p, i, j));
  return IsingModel(domain, theta.head(p), std::move(beta));
}

void IsingModel::check_state(const StateVector& s) const {
  if (s.size() != p()) {
    throw DimensionError("state has " + std::to_string(s.size()) + " entries, model has p = " +
                         std::to_string(p()));
  }
  if (s.domain() != domain_) {
    throw DomainError("state is coded " + std::string(to_string(s.domain())) + " but model is " +
                      std::string(to_string(domain_)));
  }
}

Dataset::Dataset(Domain domain, int p) : domain_(domain), p_(p) {
  if (p < 1) throw DimensionError("dataset needs at least one variable");
}

Dataset Dataset::from_rows(Domain domain, int p, const std::vector<std::vector<int>>& rows) {
  Dataset d(domain, p);
  for (const auto& r : rows) d.add(StateVector(domain, r));
  return d;
}

Dataset Dataset::from_counts(Domain domain, int p,
                             const std::vector<std::pair<std::vector<int>, std::int64_t>>& counts) {
  Dataset d(domain, p);
  for (const auto& [values, c] : counts) d.add(StateVector(domain, values), c);
  return d;
}

void Dataset::add(const StateVector& s, std::int64_t count) {
  if (s.size() != p_) throw DimensionError("observation length does not match p");
  if (s.domain() != domain_) throw DomainError("observation coded in the wrong domain");
  if (count < 0) throw std::invalid_argument("counts must be non-negative");
  if (count == 0) return;
  counts_[s] += count;
  n_ += count;
}

std::int64_t Dataset::count(const StateVector& s) const {
  auto it = counts_.find(s);
  return it == counts_.end() ? 0 : it->second;
}

double Dataset::frequency(const StateVector& s) const {
  return n_ == 0 ? 0.0 : static_cast<double>(count(s)) / static_cast<double>(n_);
}

std::vector<std::vector<int>> Dataset::rows() const {
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(n_));
  for (const auto& [s, c] : counts_)
    for (std::int64_t k = 0; k < c; ++k) out.push_back(s.values());
  return out;
}

Eigen::VectorXd Dataset::mean_statistics() const {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(stat_dimension(p_));
  if (n_ == 0) return t;
  for (const auto& [s, c] : counts_) t += static_cast<double>(c) * sufficient_statistics(s);
  return t / static_cast<double>(n_);
}

Eigen::VectorXd sufficient_statistics(const StateVector& s) {
  const int p = s.size();
  Eigen::VectorXd t(stat_dimension(p));
  for (int i = 0; i < p; ++i) {
    t(i) = s[i];
    for (int j = i + 1; j < p; ++j) t(pair_offset(p, i, j)) = s[i] * s[j];
  }
  return t;
}

}  // namespace isingdual
