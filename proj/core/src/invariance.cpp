#include "idlab/invariance.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "idlab/rng.hpp"

namespace idlab {

namespace {

constexpr std::uint64_t kDataSubstream = 1;
constexpr std::uint64_t kInitSubstreamA = 2;
constexpr std::uint64_t kInitSubstreamB = 3;

void check_coupling_preconditions(Optimizer opt, MatrixKind kind) {
  if (opt == Optimizer::Adam && kind != MatrixKind::Permutation)
    throw std::invalid_argument(
        "coupling: Adam's coordinatewise moment scaling only commutes with a "
        "permutation transform, not a general orthogonal one");
  if (opt == Optimizer::Gd && kind == MatrixKind::General)
    throw std::invalid_argument(
        "coupling: gradient descent requires an orthogonal transform matrix");
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

struct CoupledOutcome {
  MlpParams run_a;
  MlpParams run_b;
  double max_param_residual = 0.0;
};

// Trains run A on batch_a from (rest0, first0) and run B on batch_b from
// (rest0, first0 * M), stepping both in lockstep and recording the worst
// parameter gap ||first_B * M - first_A||_max and ||rest_B - rest_A||_max
// seen at any step (the initial state included).
CoupledOutcome train_coupled(const EncodedBatch& batch_a, const EncodedBatch& batch_b,
                             const Eigen::MatrixXd& m, const Architecture& arch,
                             const TrainConfig& cfg, std::uint64_t init_seed) {
  validate(cfg);
  Rng rng(init_seed);
  CoupledOutcome out;
  out.run_a = init_params(arch, rng, cfg.init_sigma2);
  out.run_b = out.run_a;
  out.run_b.first_layer() = out.run_a.first_layer() * m;

  OptimizerState state_a = OptimizerState::zeros_like(out.run_a);
  OptimizerState state_b = OptimizerState::zeros_like(out.run_b);

  auto record_residual = [&] {
    double r = max_abs_diff(out.run_b.first_layer() * m, out.run_a.first_layer());
    for (std::size_t l = 1; l < out.run_a.weights.size(); ++l)
      r = std::max(r, max_abs_diff(out.run_b.weights[l], out.run_a.weights[l]));
    for (std::size_t l = 0; l < out.run_a.biases.size(); ++l)
      r = std::max(r, max_abs_diff(out.run_b.biases[l], out.run_a.biases[l]));
    out.max_param_residual = std::max(out.max_param_residual, r);
  };

  record_residual();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const MlpGrad grad_a = backprop_grad(out.run_a, batch_a, cfg.lambda);
    const MlpGrad grad_b = backprop_grad(out.run_b, batch_b, cfg.lambda);
    optimizer_step(state_a, out.run_a, grad_a, cfg);
    optimizer_step(state_b, out.run_b, grad_b, cfg);
    record_residual();
  }
  return out;
}

}  // namespace

CouplingReport coupled_train_pair(const LabeledDataset& data, const Encoding& enc,
                                  const Architecture& arch, const TrainConfig& cfg,
                                  std::uint64_t seed) {
  const TransformMatrix t = swap_matrix(enc);
  check_coupling_preconditions(cfg.optimizer, t.kind);

  const EncodedBatch batch_a = encode_dataset(enc, data);
  const EncodedBatch batch_b = encode_dataset(enc, swap_second_yz(data));
  const CoupledOutcome run =
      train_coupled(batch_a, batch_b, t.matrix, arch, cfg, mix_seed(seed, kInitSubstreamA));

  CouplingReport report;
  report.steps = cfg.epochs;
  report.optimizer = cfg.optimizer;
  report.transform_kind = t.kind;
  report.max_param_residual = run.max_param_residual;
  for (const Word& w : all_words()) {
    const double gap =
        std::abs(predict(run.run_b, enc, swap_second_yz(w)) - predict(run.run_a, enc, w));
    report.max_output_residual = std::max(report.max_output_residual, gap);
  }
  return report;
}

double rating_impossibility_coupled(const Encoding& enc, const Architecture& arch,
                                    const TrainConfig& cfg, std::uint64_t seed) {
  const TransformMatrix t = swap_matrix(enc);
  check_coupling_preconditions(cfg.optimizer, t.kind);

  const LabeledDataset data = build_training_set(mix_seed(seed, kDataSubstream));
  if (!(swap_second_yz(data).items.size() == data.items.size()))
    throw std::logic_error("rating_impossibility_coupled: dataset size changed under swap");
  const LabeledDataset swapped = swap_second_yz(data);
  for (std::size_t i = 0; i < data.items.size(); ++i)
    if (swapped.items[i].word != data.items[i].word ||
        swapped.items[i].rating != data.items[i].rating)
      throw std::logic_error(
          "rating_impossibility_coupled: training set is not fixed by the swap");

  // Both runs see the same (swap-invariant) data; only the first-layer
  // initializations are coupled through the transform.
  const EncodedBatch batch = encode_dataset(enc, data);
  const CoupledOutcome run =
      train_coupled(batch, batch, t.matrix, arch, cfg, mix_seed(seed, kInitSubstreamA));

  const Word yy{Letter(kLetterY), Letter(kLetterY)};
  const Word yz{Letter(kLetterY), Letter(kLetterZ)};
  return std::abs(predict(run.run_b, enc, yz) - predict(run.run_a, enc, yy));
}

std::optional<double> convex_invariance_check(const Encoding& enc, double lambda,
                                              double tol, std::uint64_t seed) {
  if (lambda < 0.0) throw std::invalid_argument("convex_invariance_check: lambda must be >= 0");
  if (lambda == 0.0) {
    std::cerr << "convex_invariance_check: lambda = 0 gives no uniqueness guarantee; "
                 "check skipped\n";
    return std::nullopt;
  }
  const TransformMatrix t = swap_matrix(enc);
  if (t.kind == MatrixKind::General)
    throw std::invalid_argument(
        "convex_invariance_check: the squared-Frobenius regularizer is only invariant "
        "under orthogonal transforms");

  const LabeledDataset data = build_training_set(mix_seed(seed, kDataSubstream));
  const LabeledDataset swapped = swap_second_yz(data);

  auto random_init = [&](std::uint64_t s) {
    Rng rng(s);
    std::normal_distribution<double> gauss(0.0, 0.1);
    LogisticModel m;
    m.weights.resize(2 * enc.code_length);
    for (int i = 0; i < m.weights.size(); ++i) m.weights(i) = gauss(rng);
    m.bias = gauss(rng);
    return m;
  };
  const LogisticModel init_a = random_init(mix_seed(seed, kInitSubstreamA));
  const LogisticModel init_b = random_init(mix_seed(seed, kInitSubstreamB));

  const LogisticModel model_a = logistic_model_train(data, enc, lambda, tol, &init_a);
  const LogisticModel model_b = logistic_model_train(swapped, enc, lambda, tol, &init_b);

  double max_gap = 0.0;
  for (const Word& w : all_words()) {
    const double gap = std::abs(logistic_predict(model_b, enc, swap_second_yz(w)) -
                                logistic_predict(model_a, enc, w));
    max_gap = std::max(max_gap, gap);
  }
  return max_gap;
}

GapReport distributional_gap(const std::vector<Eigen::VectorXd>& per_rep_ratings) {
  if (per_rep_ratings.size() < 2)
    throw std::invalid_argument("distributional_gap: need at least 2 repetitions");
  const ValidationSet val = build_validation_set();
  for (const auto& r : per_rep_ratings)
    if (r.size() != static_cast<int>(val.size()))
      throw std::invalid_argument("distributional_gap: ratings not aligned with validation set");

  const ValidationColumn columns[] = {ValidationColumn::YY, ValidationColumn::ZZ,
                                      ValidationColumn::YZ, ValidationColumn::ZY,
                                      ValidationColumn::xY, ValidationColumn::xZ};
  auto pool = [&](std::initializer_list<ValidationColumn> cols) {
    std::vector<double> values;
    for (const auto& rep : per_rep_ratings)
      for (std::size_t i = 0; i < val.items.size(); ++i)
        for (ValidationColumn c : cols)
          if (val.items[i].column == c) values.push_back(rep(static_cast<int>(i)));
    return values;
  };
  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto std_of = [&](const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size()));
  };

  GapReport report;
  for (ValidationColumn c : columns) {
    const auto values = pool({c});
    const double mean = mean_of(values);
    report.columns.push_back({to_string(c), mean, std_of(values, mean)});
  }
  report.mean_gap = mean_of(pool({ValidationColumn::YY, ValidationColumn::ZZ})) -
                    mean_of(pool({ValidationColumn::YZ, ValidationColumn::ZY}));
  return report;
}

}  // namespace idlab
