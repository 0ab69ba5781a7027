#include <doctest.h>

#include <cmath>
#include <numeric>

#include <omp.h>

#include "isingdual/enumeration.hpp"
#include "isingdual/estimation.hpp"
#include "isingdual/inference.hpp"
#include "support.hpp"

using namespace isingdual;
using doctest::Approx;

namespace {

// Parameters as displayed (rounded) for the example data.
IsingModel fig1(Domain d) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  const bool zo = d == Domain::ZeroOne;
  b(0, 1) = b(1, 0) = zo ? 0.77 : 0.193;
  return IsingModel(d, Eigen::VectorXd::Constant(2, zo ? 0.251 : 0.318), b);
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("potentials of the two-variable example") {
  // The 7-digit reference values follow from the unrounded fitted parameters;
  // the 3-decimal parameters reproduce them only to about 1e-3.
  const auto pm = fit_mle(testing::table1(Domain::PlusMinusOne)).model;
  CHECK(std::exp(log_potential(pm, StateVector(Domain::PlusMinusOne, {-1, -1}))) == Approx(0.6415304).epsilon(1e-6));
  CHECK(std::exp(log_potential(pm, StateVector(Domain::PlusMinusOne, {1, -1}))) == Approx(0.8248249).epsilon(1e-6));
  CHECK(std::exp(log_potential(pm, StateVector(Domain::PlusMinusOne, {1, 1}))) == Approx(2.29118).epsilon(1e-5));
  CHECK(partition_function(pm) == Approx(4.58236).epsilon(1e-5));
  CHECK(probability(pm, StateVector(Domain::PlusMinusOne, {1, 1})) == Approx(0.5).epsilon(1e-9));

  const auto pm_rounded = fig1(Domain::PlusMinusOne);
  CHECK(std::exp(log_potential(pm_rounded, StateVector(Domain::PlusMinusOne, {-1, -1}))) == Approx(0.6415304).epsilon(1e-3));
  CHECK(partition_function(pm_rounded) == Approx(4.58236).epsilon(1e-3));
  CHECK(probability(pm_rounded, StateVector(Domain::PlusMinusOne, {1, 1})) == Approx(0.5).epsilon(2e-3));

  const auto zo = fig1(Domain::ZeroOne);
  CHECK(log_potential(zo, StateVector(Domain::ZeroOne, {0, 0})) == 0.0);
  CHECK(std::exp(log_potential(zo, StateVector(Domain::ZeroOne, {0, 1}))) == Approx(1.285714).epsilon(1e-3));
  CHECK(partition_function(zo) == Approx(7.142857).epsilon(1e-3));
  CHECK(probability(zo, StateVector(Domain::ZeroOne, {0, 0})) == Approx(0.14).epsilon(2e-3));
  const auto zo_fit = fit_mle(testing::table1(Domain::ZeroOne)).model;
  CHECK(std::exp(log_potential(zo_fit, StateVector(Domain::ZeroOne, {1, 1}))) == Approx(3.571429).epsilon(1e-6));
  CHECK(partition_function(zo_fit) == Approx(7.142857).epsilon(1e-6));
}

TEST_CASE("zero model") {
  for (Domain d : {Domain::ZeroOne, Domain::PlusMinusOne}) {
    const auto z2 = IsingModel::zero(d, 2);
    CHECK(partition_function(z2) == 4.0);
    CHECK(log_potential(z2, StateVector(d, {1, low_value(d)})) == 0.0);
    const auto z3 = IsingModel::zero(d, 3);
    for (std::uint64_t k = 0; k < 8; ++k) CHECK(probability(z3, StateVector::from_index(d, 3, k)) == Approx(0.125));
    CHECK(marginal(z3, 2, low_value(d)) == Approx(0.5));
    CHECK(conditional_prob(z3, 1, StateVector(d, {1, 1})) == 0.5);
  }
  const auto e_pm = sufficient_stat_expectations(IsingModel::zero(Domain::PlusMinusOne, 3));
  CHECK(e_pm.mean.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(e_pm.pair(0, 2)) < 1e-15);
  const auto e_zo = sufficient_stat_expectations(IsingModel::zero(Domain::ZeroOne, 3));
  CHECK(e_zo.mean(1) == Approx(0.5));
  CHECK(e_zo.pair(0, 1) == Approx(0.25));
}

TEST_CASE("conditional probabilities of the example") {
  // Derived from the example probabilities 0.14/0.18/0.18/0.5.
  CHECK(conditional_prob(fig1(Domain::ZeroOne), 0, StateVector(Domain::ZeroOne, {1})) ==
        Approx(0.5 / 0.68).epsilon(2e-3));
  CHECK(conditional_prob(fig1(Domain::PlusMinusOne), 0, StateVector(Domain::PlusMinusOne, {-1})) ==
        Approx(0.18 / 0.32).epsilon(3e-3));
  CHECK(sufficient_stat_expectations(fig1(Domain::ZeroOne)).mean(0) == Approx(0.68).epsilon(2e-3));
}

TEST_CASE("normalization and conditional consistency on random models") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Domain d = trial % 2 ? Domain::ZeroOne : Domain::PlusMinusOne;
    const int p = 1 + static_cast<int>(rng.below(10));
    const auto m = testing::random_model(d, p, rng);
    const auto table = probability_table(m);
    CHECK(std::abs(std::accumulate(table.begin(), table.end(), 0.0) - 1.0) < 1e-12);

    if (p > 6 || p < 2) continue;
    for (std::uint64_t k = 0; k < table.size(); ++k) {
      const StateVector s = StateVector::from_index(d, p, k);
      for (int i = 0; i < p; ++i) {
        const std::uint64_t hi = k | (std::uint64_t{1} << i), lo = k & ~(std::uint64_t{1} << i);
        const double ratio = table[hi] / (table[hi] + table[lo]);
        CHECK(std::abs(local_conditional(m, i, s) - ratio) < 1e-12);
        std::vector<int> rest;
        for (int j = 0; j < p; ++j)
          if (j != i) rest.push_back(s[j]);
        CHECK(conditional_prob(m, i, StateVector(d, rest)) == local_conditional(m, i, s));
      }
    }
  }
}

TEST_CASE("marginals for two variables") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const double b = 0.01 + 3.0 * rng.uniform();
    Eigen::MatrixXd beta(2, 2);
    beta << 0, b, b, 0;
    const IsingModel pm(Domain::PlusMinusOne, Eigen::VectorXd::Zero(2), beta);
    const IsingModel zo(Domain::ZeroOne, Eigen::VectorXd::Zero(2), beta);
    const IsingModel zo_neg(Domain::ZeroOne, Eigen::VectorXd::Zero(2), -beta);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(marginal(pm, i, 1) - 0.5) < 1e-12);
      CHECK(std::abs(marginal(pm, i, -1) - 0.5) < 1e-12);
      CHECK(marginal(zo, i, 1) > marginal(zo, i, 0));
      CHECK(marginal(zo_neg, i, 1) < marginal(zo_neg, i, 0));
    }
  }
}

TEST_CASE("serial and parallel enumeration agree") {
  Rng rng(8);
  for (int p : {1, 3, 9, 10, 11, 13}) {
    const Domain d = p % 2 ? Domain::ZeroOne : Domain::PlusMinusOne;
    const auto m = testing::random_model(d, p, rng, 0.5);
    const double ls = enumeration::serial::log_partition(m);
    CHECK(enumeration::parallel::log_partition(m) == Approx(ls).epsilon(1e-13));
    const auto a = enumeration::serial::moments(m, enumeration::Order::Second);
    const auto b = enumeration::parallel::moments(m, enumeration::Order::Second);
    CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.covariance - b.covariance).cwiseAbs().maxCoeff() < 1e-12);
    const auto lp = enumeration::parallel::log_potentials(m);
    CHECK(lp.size() == (std::size_t{1} << p));
    CHECK(lp[5 % lp.size()] == Approx(log_potential(m, StateVector::from_index(d, p, 5 % lp.size()))));
  }
}

TEST_CASE("enumeration is bit-identical across thread counts") {
  Rng rng(10);
  const auto m = testing::random_model(Domain::ZeroOne, 14, rng, 0.3);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double one = enumeration::parallel::log_partition(m);
  const auto mom_one = enumeration::parallel::moments(m, enumeration::Order::Second);
  omp_set_num_threads(4);
  const double four = enumeration::parallel::log_partition(m);
  const auto mom_four = enumeration::parallel::moments(m, enumeration::Order::Second);
  omp_set_num_threads(saved);
  CHECK(one == four);
  CHECK(mom_one.mean == mom_four.mean);
  CHECK(mom_one.covariance == mom_four.covariance);
}

TEST_CASE("covariance equals the finite-difference Jacobian of the mean") {
  Rng rng(9);
  const auto m = testing::random_model(Domain::ZeroOne, 4, rng, 1.0);
  const auto s = enumeration::parallel::moments(m, enumeration::Order::Second);
  const auto theta = m.pack();
  const double h = 1e-6;
  for (int k = 0; k < theta.size(); ++k) {
    Eigen::VectorXd up = theta, dn = theta;
    up(k) += h;
    dn(k) -= h;
    const auto mu = enumeration::parallel::moments(IsingModel::unpack(Domain::ZeroOne, 4, up), enumeration::Order::First);
    const auto md = enumeration::parallel::moments(IsingModel::unpack(Domain::ZeroOne, 4, dn), enumeration::Order::First);
    CHECK(((mu.mean - md.mean) / (2 * h) - s.covariance.col(k)).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("large potentials stay finite") {
  const auto m = IsingModel::fully_connected(Domain::PlusMinusOne, 8, 5.0, 20.0);
  const double lz = log_partition_function(m);
  CHECK(std::isfinite(lz));
  const auto table = probability_table(m);
  CHECK(table.back() == Approx(1.0));
  CHECK(enumeration::serial::log_partition(m) == Approx(lz).epsilon(1e-13));
}

TEST_CASE("exact sampling") {
  const auto m = fig1(Domain::ZeroOne);
  const auto a = sample_exact(m, 1'000'000, 7);
  CHECK(a.n() == 1'000'000);
  CHECK(std::abs(a.frequency(StateVector(Domain::ZeroOne, {1, 1})) - probability(m, StateVector(Domain::ZeroOne, {1, 1}))) < 0.002);
  CHECK(sample_exact(m, 1000, 7) == sample_exact(m, 1000, 7));
  CHECK_FALSE(sample_exact(m, 1000, 7) == sample_exact(m, 1000, 8));
  const auto u = sample_exact(IsingModel::zero(Domain::PlusMinusOne, 2), 200000, 1);
  for (const auto& [s, c] : u.counts()) {
    CHECK(s.domain() == Domain::PlusMinusOne);
    CHECK(std::abs(static_cast<double>(c) / 200000 - 0.25) < 0.005);
  }
}

TEST_CASE("logistic is stable") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(logistic(800.0) == 1.0);
  CHECK(logistic(-800.0) >= 0.0);
  CHECK(logistic(-800.0) < 1e-300);
  CHECK(logistic(2.0) + logistic(-2.0) == Approx(1.0).epsilon(1e-15));
}

}
