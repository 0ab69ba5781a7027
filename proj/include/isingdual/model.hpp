#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace isingdual {

/// Numeric coding of the two labels. ZeroOne admits {0, 1}; PlusMinusOne admits {-1, 1}.
enum class Domain { ZeroOne, PlusMinusOne };

/// Exact operations enumerate all 2^p states; beyond this they refuse to run.
inline constexpr int kEnumerationLimit = 20;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EnumerationLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// "high" is 1 in both domains.
constexpr int high_value(Domain) { return 1; }
constexpr int low_value(Domain d) { return d == Domain::ZeroOne ? 0 : -1; }
constexpr bool admissible(Domain d, int v) { return v == 1 || v == low_value(d); }
constexpr Domain other(Domain d) {
  return d == Domain::ZeroOne ? Domain::PlusMinusOne : Domain::ZeroOne;
}

std::string_view to_string(Domain d);  // "zero_one" / "pm_one"
Domain parse_domain(std::string_view s);

void require_enumerable(int p);

/// One configuration of p binary variables, tagged with its domain.
class StateVector {
 public:
  StateVector(Domain domain, std::vector<int> values);

  /// State number `index` in the canonical enumeration: bit i of index set means s_i is high.
  static StateVector from_index(Domain domain, int p, std::uint64_t index);

  Domain domain() const { return domain_; }
  int size() const { return static_cast<int>(values_.size()); }
  int operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& values() const { return values_; }
  std::uint64_t index() const;
  int count_high() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;
  friend auto operator<=>(const StateVector& a, const StateVector& b) {
    return a.values_ <=> b.values_;
  }

 private:
  Domain domain_;
  std::vector<int> values_;
};

/// Thresholds alpha and a symmetric, zero-diagonal interaction matrix beta.
class IsingModel {
 public:
  /// Validates symmetry (exact) and zero diagonal.
  IsingModel(Domain domain, Eigen::VectorXd alpha, Eigen::MatrixXd beta);

  /// Builds from the strict upper triangle of `upper`; the lower triangle is ignored.
  static IsingModel from_upper(Domain domain, Eigen::VectorXd alpha, const Eigen::MatrixXd& upper);
  static IsingModel zero(Domain domain, int p);
  /// All thresholds `threshold`, every pair coupled with `coupling`.
  static IsingModel fully_connected(Domain domain, int p, double threshold, double coupling);

  Domain domain() const { return domain_; }
  int p() const { return static_cast<int>(alpha_.size()); }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::MatrixXd& beta() const { return beta_; }
  double alpha(int i) const { return alpha_(i); }
  double beta(int i, int j) const { return beta_(i, j); }

  /// Row sum beta_{i+} = sum_{j != i} beta_ij.
  double beta_row_sum(int i) const;

  /// Parameters packed as (alpha_0..alpha_{p-1}, beta_01, beta_02, ..., beta_{p-2,p-1}).
  Eigen::VectorXd pack() const;
  static IsingModel unpack(Domain domain, int p, const Eigen::VectorXd& theta);

  void check_state(const StateVector& s) const;

 private:
  Domain domain_;
  Eigen::VectorXd alpha_;
  Eigen::MatrixXd beta_;
};

/// Length of the packed parameter / sufficient statistic vector.
constexpr int stat_dimension(int p) { return p + p * (p - 1) / 2; }

/// Index of pair (i, j), i < j, inside the packed vector.
constexpr int pair_offset(int p, int i, int j) {
  return p + i * (2 * p - i - 1) / 2 + (j - i - 1);
}

/// Observations as a state-frequency table. Rows and counts are interconvertible.
class Dataset {
 public:
  Dataset(Domain domain, int p);

  static Dataset from_rows(Domain domain, int p, const std::vector<std::vector<int>>& rows);
  static Dataset from_counts(Domain domain, int p, const std::vector<std::pair<std::vector<int>, std::int64_t>>& counts);

  void add(const StateVector& s, std::int64_t count = 1);

  Domain domain() const { return domain_; }
  int p() const { return p_; }
  std::int64_t n() const { return n_; }
  bool empty() const { return n_ == 0; }
  const std::map<StateVector, std::int64_t>& counts() const { return counts_; }
  std::int64_t count(const StateVector& s) const;
  double frequency(const StateVector& s) const;

  /// Expanded n x p matrix, rows ordered by state.
  std::vector<std::vector<int>> rows() const;

  /// Mean sufficient statistics in packed order: E_data[s_i], E_data[s_i s_j].
  Eigen::VectorXd mean_statistics() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Domain domain_;
  int p_;
  std::int64_t n_ = 0;
  std::map<StateVector, std::int64_t> counts_;
};

/// Packed sufficient statistics T(s) = (s_i, s_i s_j) of one state.
Eigen::VectorXd sufficient_statistics(const StateVector& s);

}  // namespace isingdual
