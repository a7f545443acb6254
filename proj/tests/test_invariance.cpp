#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "idlab/invariance.hpp"
#include "idlab/rng.hpp"
#include "oracles.hpp"

using namespace idlab;

namespace {

TrainConfig gd_config(int epochs) {
  TrainConfig cfg;
  cfg.optimizer = Optimizer::Gd;
  cfg.learning_rate = 0.01;
  cfg.epochs = epochs;
  return cfg;
}

TrainConfig adam_config(int epochs) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  return cfg;
}

Architecture one_hidden() {
  Architecture arch;
  arch.hidden = {256};
  return arch;
}

}  // namespace

TEST_CASE("coupled trajectories: one-hot under gradient descent") {
  const LabeledDataset data = build_training_set(100);
  const CouplingReport r =
      coupled_train_pair(data, one_hot_encoding(), one_hidden(), gd_config(200), 1);
  CHECK(r.steps == 200);
  CHECK(r.optimizer == Optimizer::Gd);
  CHECK(r.transform_kind == MatrixKind::Permutation);
  CHECK(r.max_param_residual < 1e-8);
  CHECK(r.max_output_residual < 1e-8);
}

TEST_CASE("coupled trajectories: haar under gradient descent") {
  const LabeledDataset data = build_training_set(101);
  const CouplingReport r =
      coupled_train_pair(data, haar_encoding(7), one_hidden(), gd_config(200), 2);
  CHECK(r.transform_kind == MatrixKind::Orthogonal);
  CHECK(r.max_param_residual < 1e-7);
  CHECK(r.max_output_residual < 1e-7);
}

TEST_CASE("coupled trajectories: one-hot under adam") {
  const LabeledDataset data = build_training_set(102);
  const CouplingReport r =
      coupled_train_pair(data, one_hot_encoding(), one_hidden(), adam_config(500), 3);
  CHECK(r.optimizer == Optimizer::Adam);
  CHECK(r.max_param_residual < 1e-7);
  CHECK(r.max_output_residual < 1e-7);
}

TEST_CASE("residual growth stays tame between 20 and 200 gd steps") {
  const LabeledDataset data = build_training_set(103);
  const CouplingReport r20 =
      coupled_train_pair(data, one_hot_encoding(), one_hidden(), gd_config(20), 4);
  const CouplingReport r200 =
      coupled_train_pair(data, one_hot_encoding(), one_hidden(), gd_config(200), 4);
  if (r20.max_param_residual == 0.0)
    CHECK(r200.max_param_residual == 0.0);  // one-hot coupling is exact in fp
  else
    CHECK(r200.max_param_residual < 10.0 * r20.max_param_residual);
}

TEST_CASE("adam and gd coupling residuals are comparable for permutations") {
  const LabeledDataset data = build_training_set(104);
  const CouplingReport gd =
      coupled_train_pair(data, one_hot_encoding(), one_hidden(), gd_config(200), 5);
  const CouplingReport adam =
      coupled_train_pair(data, one_hot_encoding(), one_hidden(), adam_config(200), 5);
  CHECK(adam.max_param_residual <= 10.0 * gd.max_param_residual + 1e-13);
}

TEST_CASE("optimizer/transform preconditions are enforced") {
  const LabeledDataset data = build_training_set(105);
  CHECK_THROWS_AS(
      coupled_train_pair(data, haar_encoding(3), one_hidden(), adam_config(10), 6),
      std::invalid_argument);
  CHECK_THROWS_AS(
      coupled_train_pair(data, j_active_binary_encoding(3, 3), one_hidden(), gd_config(10), 6),
      std::invalid_argument);
  CHECK_THROWS_AS(
      rating_impossibility_coupled(j_active_binary_encoding(3, 3), one_hidden(),
                                   gd_config(10), 6),
      std::invalid_argument);
}

TEST_CASE("rating impossibility: YY and YZ cannot be told apart") {
  CHECK(rating_impossibility_coupled(one_hot_encoding(), one_hidden(), gd_config(200), 7) <
        1e-7);
  CHECK(rating_impossibility_coupled(haar_encoding(8), one_hidden(), gd_config(200), 8) <
        1e-7);
  CHECK(rating_impossibility_coupled(one_hot_encoding(), one_hidden(), adam_config(500), 9) <
        1e-7);
}

TEST_CASE("convex invariance holds for one-hot and haar") {
  const std::optional<double> onehot = convex_invariance_check(one_hot_encoding(), 1e-2,
                                                               1e-10, 10);
  REQUIRE(onehot.has_value());
  CHECK(*onehot < 1e-6);
  const std::optional<double> haar = convex_invariance_check(haar_encoding(11), 1e-2,
                                                             1e-10, 11);
  REQUIRE(haar.has_value());
  CHECK(*haar < 1e-6);
}

TEST_CASE("convex invariance edge cases: lambda and transform kind") {
  CHECK_FALSE(convex_invariance_check(one_hot_encoding(), 0.0, 1e-10, 12).has_value());
  CHECK_THROWS_AS(convex_invariance_check(one_hot_encoding(), -1e-3, 1e-10, 12),
                  std::invalid_argument);
  CHECK_THROWS_AS(convex_invariance_check(j_active_binary_encoding(5, 3), 1e-2, 1e-10, 12),
                  std::invalid_argument);
}

TEST_CASE("convex invariance survives a dataset the swap actually moves") {
  // Generated training sets are fixed by the swap, so they only test
  // uniqueness. Add Y/Z words so tau(D) != D: train on D and on tau(D),
  // compare through the word swap.
  LabeledDataset data = build_training_set(200);
  data.items.push_back({Word::parse("AY"), 0.0});
  data.items.push_back({Word::parse("BZ"), 1.0});
  data.items.push_back({Word::parse("YY"), 1.0});
  const LabeledDataset swapped = swap_second_yz(data);

  const Encoding enc = haar_encoding(200);
  const LogisticModel a = logistic_model_train(data, enc, 1e-2, 1e-10);
  const LogisticModel b = logistic_model_train(swapped, enc, 1e-2, 1e-10);
  double gap = 0.0;
  for (const Word& w : all_words())
    gap = std::max(gap, std::abs(logistic_predict(b, enc, swap_second_yz(w)) -
                                 logistic_predict(a, enc, w)));
  CHECK(gap < 1e-6);
}

TEST_CASE("distributional gap statistics match a direct computation") {
  const ValidationSet val = build_validation_set();
  std::vector<Eigen::VectorXd> reps;
  Rng rng(55);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < 5; ++r) {
    Eigen::VectorXd v(static_cast<int>(val.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = unit(rng);
    reps.push_back(v);
  }
  const GapReport report = distributional_gap(reps);
  REQUIRE(report.columns.size() == 6);
  CHECK(report.columns[0].column == "YY");
  CHECK(report.columns[5].column == "xZ");

  auto pool = [&](ValidationColumn c) {
    std::vector<double> out;
    for (const auto& rep : reps)
      for (std::size_t i = 0; i < val.items.size(); ++i)
        if (val.items[i].column == c) out.push_back(rep(static_cast<int>(i)));
    return out;
  };
  for (std::size_t k = 0; k < report.columns.size(); ++k) {
    const auto values = pool(static_cast<ValidationColumn>(k));
    CHECK(report.columns[k].mean == doctest::Approx(oracle::mean(values)).epsilon(1e-14));
    CHECK(report.columns[k].stddev ==
          doctest::Approx(oracle::stddev(values)).epsilon(1e-12));
    CHECK(report.columns[k].mean >= 0.0);
    CHECK(report.columns[k].mean <= 1.0);
    CHECK(report.columns[k].stddev >= 0.0);
  }

  auto pooled_mean = [&](ValidationColumn a, ValidationColumn b) {
    auto va = pool(a);
    const auto vb = pool(b);
    va.insert(va.end(), vb.begin(), vb.end());
    return oracle::mean(va);
  };
  const double expected_gap = pooled_mean(ValidationColumn::YY, ValidationColumn::ZZ) -
                              pooled_mean(ValidationColumn::YZ, ValidationColumn::ZY);
  CHECK(report.mean_gap == doctest::Approx(expected_gap).epsilon(1e-13));
}

TEST_CASE("distributional gap is insensitive to repetition order") {
  const ValidationSet val = build_validation_set();
  std::vector<Eigen::VectorXd> reps;
  Rng rng(56);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < 4; ++r) {
    Eigen::VectorXd v(static_cast<int>(val.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = unit(rng);
    reps.push_back(v);
  }
  std::vector<Eigen::VectorXd> reversed(reps.rbegin(), reps.rend());
  const GapReport a = distributional_gap(reps);
  const GapReport b = distributional_gap(reversed);
  for (std::size_t k = 0; k < a.columns.size(); ++k) {
    CHECK(a.columns[k].mean == doctest::Approx(b.columns[k].mean).epsilon(1e-13));
    CHECK(a.columns[k].stddev == doctest::Approx(b.columns[k].stddev).epsilon(1e-13));
  }
  CHECK(a.mean_gap == doctest::Approx(b.mean_gap).epsilon(1e-13));
}

TEST_CASE("distributional gap rejects malformed input") {
  CHECK_THROWS_AS(distributional_gap({}), std::invalid_argument);
  CHECK_THROWS_AS(distributional_gap({Eigen::VectorXd::Zero(52)}), std::invalid_argument);
  CHECK_THROWS_AS(
      distributional_gap({Eigen::VectorXd::Zero(10), Eigen::VectorXd::Zero(10)}),
      std::invalid_argument);
}
