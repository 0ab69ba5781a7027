#include "isingdual/transform.hpp"

#include <string>

namespace isingdual {

namespace {

void require_domain(const IsingModel& model, Domain expected) {
  if (model.domain() != expected) {
    throw DomainError("expected a " + std::string(to_string(expected)) + " model, got " +
                      std::string(to_string(model.domain())));
  }
}

double pair_sum(const IsingModel& model) {
  double s = 0.0;
  for (int i = 0; i < model.p(); ++i)
    for (int j = i + 1; j < model.p(); ++j) s += model.beta(i, j);
  return s;
}

}  // namespace

std::pair<IsingModel, TransformReport> to_pm_one(const IsingModel& model) {
  require_domain(model, Domain::ZeroOne);
  const int p = model.p();
  Eigen::VectorXd alpha(p);
  for (int i = 0; i < p; ++i) alpha(i) = 0.5 * model.alpha(i) + 0.25 * model.beta_row_sum(i);
  Eigen::MatrixXd beta = 0.25 * model.beta();

  const double c = 0.5 * model.alpha().sum() + 0.25 * pair_sum(model);
  return {IsingModel(Domain::PlusMinusOne, std::move(alpha), std::move(beta)),
          TransformReport{Domain::ZeroOne, Domain::PlusMinusOne, c}};
}

std::pair<IsingModel, TransformReport> to_zero_one(const IsingModel& model) {
  require_domain(model, Domain::PlusMinusOne);
  const int p = model.p();
  Eigen::VectorXd alpha(p);
  for (int i = 0; i < p; ++i) alpha(i) = 2.0 * model.alpha(i) - 2.0 * model.beta_row_sum(i);
  Eigen::MatrixXd beta = 4.0 * model.beta();

  const double c = pair_sum(model) - model.alpha().sum();
  return {IsingModel(Domain::ZeroOne, std::move(alpha), std::move(beta)),
          TransformReport{Domain::PlusMinusOne, Domain::ZeroOne, c}};
}

std::pair<IsingModel, TransformReport> transform(const IsingModel& model, Domain target) {
  if (model.domain() == target) {
    throw DomainError("model is already in the " + std::string(to_string(target)) + " domain");
  }
  return target == Domain::PlusMinusOne ? to_pm_one(model) : to_zero_one(model);
}

StateVector recode_state(const StateVector& s, Domain target) {
  if (s.domain() == target) return s;
  std::vector<int> out(s.values());
  for (int& v : out) v = v == 1 ? 1 : low_value(target);
  return StateVector(target, std::move(out));
}

Dataset recode_dataset(const Dataset& data, Domain target) {
  Dataset out(target, data.p());
  for (const auto& [s, c] : data.counts()) out.add(recode_state(s, target), c);
  return out;
}

}  // namespace isingdual
