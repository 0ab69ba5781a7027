#pragma once

#include <utility>

#include "isingdual/model.hpp"

namespace isingdual {

/// Reparameterization bookkeeping. `constant_shift` is the additive constant C
/// with log_potential_source(x) = log_potential_target(recode(x)) + C, which Z absorbs.
struct TransformReport {
  Domain source_domain;
  Domain target_domain;
  double constant_shift;
};

/// {0,1} -> {-1,1}: alpha_i = alpha*_i / 2 + beta*_{i+} / 4, beta_ij = beta*_ij / 4.
std::pair<IsingModel, TransformReport> to_pm_one(const IsingModel& model);

/// {-1,1} -> {0,1}: alpha*_i = 2 alpha_i - 2 beta_{i+}, beta*_ij = 4 beta_ij.
std::pair<IsingModel, TransformReport> to_zero_one(const IsingModel& model);

/// Dispatches to to_pm_one / to_zero_one; a same-domain request throws DomainError.
std::pair<IsingModel, TransformReport> transform(const IsingModel& model, Domain target);

/// x = (y + 1) / 2, y = 2x - 1. Identity when `target` is already the state's domain.
StateVector recode_state(const StateVector& s, Domain target);

Dataset recode_dataset(const Dataset& data, Domain target);

}  // namespace isingdual
