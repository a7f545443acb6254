#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <vector>

#include "idlab/corpus.hpp"
#include "idlab/encodings.hpp"
#include "idlab/rng.hpp"

namespace idlab {

/// Dense feedforward net: ReLU hidden layers, one sigmoid output unit.
/// `hidden` may be empty, which degenerates to a logistic model.
struct Architecture {
  int input_dim = kEncodedDim;
  std::vector<int> hidden;  // e.g. {256}, {256, 256}, {256, 256, 256}

  int depth() const { return static_cast<int>(hidden.size()) + 1; }
};

/// Weight matrices W_l (out x in) and bias vectors b_l per layer. The first
/// weight matrix is the block that multiplies the encoded input; all
/// remaining parameters (including every bias) form the rest.
struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  Eigen::MatrixXd& first_layer() { return weights.front(); }
  const Eigen::MatrixXd& first_layer() const { return weights.front(); }
};

/// Gradients share the parameter shapes.
using MlpGrad = MlpParams;

enum class Optimizer { Gd, Adam };

std::string to_string(Optimizer o);
Optimizer optimizer_from_string(const std::string& s);

struct TrainConfig {
  Optimizer optimizer = Optimizer::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 500;
  double lambda = 0.0;        // L2 weight on the first layer only
  double init_sigma2 = 0.0025;
  std::vector<double> step_schedule;  // optional per-step rates; overrides learning_rate
};

void validate(const TrainConfig& cfg);

/// Adam moment accumulators (zero-initialized) plus the step counter; plain
/// gradient descent only advances the counter.
struct OptimizerState {
  std::vector<Eigen::MatrixXd> weight_m, weight_v;
  std::vector<Eigen::VectorXd> bias_m, bias_v;
  long step = 0;

  static OptimizerState zeros_like(const MlpParams& p);
};

/// Weights i.i.d. normal(0, sigma2) in layer order, row-major within each
/// matrix; biases exactly zero.
MlpParams init_params(const Architecture& arch, Rng& rng, double sigma2);

/// Pre-activations and activations per layer, kept for backprop.
struct ForwardCache {
  std::vector<Eigen::VectorXd> pre;  // z_l
  std::vector<Eigen::VectorXd> act;  // sigma_l(z_l); act.back() is the rating
};

/// Single-sample forward pass; the rating is sigmoid(z_L), strictly in (0,1).
double forward(const MlpParams& p, const Eigen::VectorXd& x, ForwardCache* cache = nullptr);

/// Row-per-sample batch forward; returns the column of ratings.
Eigen::VectorXd forward_batch(const MlpParams& p, const Eigen::MatrixXd& inputs);

/// Dataset encoded for training: one row per word, labels aligned.
struct EncodedBatch {
  Eigen::MatrixXd inputs;  // n x 52
  Eigen::VectorXd labels;  // n
};

EncodedBatch encode_dataset(const Encoding& enc, const LabeledDataset& d);

inline constexpr double kBceClamp = 1e-12;

/// Mean binary cross-entropy with predictions clamped to
/// [kBceClamp, 1 - kBceClamp], plus lambda * ||W_1||_F^2.
double bce_loss(const Eigen::VectorXd& preds, const Eigen::VectorXd& labels,
                const MlpParams& p, double lambda);

/// Clamped mean BCE without the regularization term.
double bce_mean(const Eigen::VectorXd& preds, const Eigen::VectorXd& labels);

/// Exact gradient of bce_loss over the whole batch, including the
/// 2*lambda*W_1 term on the first layer.
MlpGrad backprop_grad(const MlpParams& p, const EncodedBatch& batch, double lambda);

/// One full-batch update in place. GD takes the step from the schedule when
/// one is configured, else the fixed learning rate; Adam is the standard
/// bias-corrected first/second-moment update.
void optimizer_step(OptimizerState& state, MlpParams& p, const MlpGrad& g,
                    const TrainConfig& cfg);

struct TrainHistory {
  std::vector<double> train_loss;  // objective at the start of each epoch
  std::vector<double> val_loss;    // mean BCE over the validation set after the update
};

struct TrainResult {
  MlpParams params;
  TrainHistory history;
};

/// Full-batch training: one optimizer step per epoch over all items.
/// Deterministic given (rng state, config, dataset, encoding).
TrainResult train(const LabeledDataset& data, const Encoding& enc,
                  const Architecture& arch, const TrainConfig& cfg, Rng& rng);

double predict(const MlpParams& p, const Encoding& enc, const Word& w);

/// History CSV: header `epoch,train_loss,val_loss`, epochs 1-based.
void save_history_csv(const TrainHistory& h, const std::filesystem::path& path);

/// Parameter CSV: header `layer,kind,row,col,value` with kind W or b.
void save_params_csv(const MlpParams& p, const std::filesystem::path& path);
MlpParams load_params_csv(const std::filesystem::path& path);

// --- Convex reference learner -------------------------------------------

/// Logistic model sigmoid(c . x + b); with lambda > 0 the regularized loss
/// is strictly convex, so the minimizer is unique.
struct LogisticModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

/// Minimizes mean clamped BCE + lambda * ||c||^2 by full-batch gradient
/// descent until the gradient infinity-norm drops below `tol`. The step size
/// comes from an eigenvalue bound on the loss curvature. Throws
/// std::runtime_error when `max_steps` is exhausted first and
/// std::invalid_argument for lambda <= 0.
LogisticModel logistic_model_train(const LabeledDataset& d, const Encoding& enc,
                                   double lambda, double tol,
                                   const LogisticModel* init = nullptr,
                                   long max_steps = 5'000'000);

double logistic_predict(const LogisticModel& m, const Encoding& enc, const Word& w);

/// Gradient infinity-norm of the regularized logistic objective at `m`.
double logistic_grad_norm(const LogisticModel& m, const LabeledDataset& d,
                          const Encoding& enc, double lambda);

}  // namespace idlab
