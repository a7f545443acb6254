#include "idlab/neuralnet.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "idlab/csv.hpp"

namespace idlab {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Eigen::VectorXd sigmoid_vec(const Eigen::VectorXd& z) {
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

Eigen::VectorXd clamp_preds(const Eigen::VectorXd& p) {
  return p.cwiseMax(kBceClamp).cwiseMin(1.0 - kBceClamp);
}

void check_shapes(const MlpParams& p, int input_dim) {
  if (p.weights.empty() || p.weights.size() != p.biases.size())
    throw std::invalid_argument("MlpParams: inconsistent layer counts");
  if (p.weights.front().cols() != input_dim)
    throw std::invalid_argument("MlpParams: input dimension mismatch");
}

}  // namespace

std::string to_string(Optimizer o) {
  return o == Optimizer::Gd ? "gd" : "adam";
}

Optimizer optimizer_from_string(const std::string& s) {
  if (s == "gd") return Optimizer::Gd;
  if (s == "adam") return Optimizer::Adam;
  throw std::invalid_argument("unknown optimizer: " + s);
}

void validate(const TrainConfig& cfg) {
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  if (cfg.beta1 < 0.0 || cfg.beta1 >= 1.0 || cfg.beta2 < 0.0 || cfg.beta2 >= 1.0)
    throw std::invalid_argument("TrainConfig: betas must lie in [0, 1)");
  if (cfg.epsilon <= 0.0) throw std::invalid_argument("TrainConfig: epsilon must be > 0");
  if (cfg.epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
  if (cfg.lambda < 0.0) throw std::invalid_argument("TrainConfig: lambda must be >= 0");
  if (cfg.init_sigma2 < 0.0) throw std::invalid_argument("TrainConfig: init_sigma2 must be >= 0");
  for (double s : cfg.step_schedule)
    if (s <= 0.0) throw std::invalid_argument("TrainConfig: step sizes must be > 0");
}

OptimizerState OptimizerState::zeros_like(const MlpParams& p) {
  OptimizerState s;
  for (const auto& w : p.weights) {
    s.weight_m.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    s.weight_v.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : p.biases) {
    s.bias_m.push_back(Eigen::VectorXd::Zero(b.size()));
    s.bias_v.push_back(Eigen::VectorXd::Zero(b.size()));
  }
  return s;
}

MlpParams init_params(const Architecture& arch, Rng& rng, double sigma2) {
  if (sigma2 < 0.0) throw std::invalid_argument("init_params: sigma2 must be >= 0");
  std::vector<int> dims;
  dims.push_back(arch.input_dim);
  for (int h : arch.hidden) dims.push_back(h);
  dims.push_back(1);

  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2));
  MlpParams p;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Eigen::MatrixXd w(dims[l + 1], dims[l]);
    if (sigma2 == 0.0) {
      w.setZero();
    } else {
      for (int r = 0; r < w.rows(); ++r)
        for (int c = 0; c < w.cols(); ++c) w(r, c) = gauss(rng);
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(dims[l + 1]));
  }
  return p;
}

double forward(const MlpParams& p, const Eigen::VectorXd& x, ForwardCache* cache) {
  check_shapes(p, static_cast<int>(x.size()));
  const std::size_t layers = p.weights.size();
  if (cache) {
    cache->pre.assign(layers, {});
    cache->act.assign(layers, {});
  }
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::VectorXd z = p.weights[l] * a + p.biases[l];
    if (l + 1 < layers) {
      a = z.cwiseMax(0.0);
    } else {
      a = sigmoid_vec(z);
    }
    if (cache) {
      cache->pre[l] = z;
      cache->act[l] = a;
    }
  }
  return a(0);
}

Eigen::VectorXd forward_batch(const MlpParams& p, const Eigen::MatrixXd& inputs) {
  check_shapes(p, static_cast<int>(inputs.cols()));
  const std::size_t layers = p.weights.size();
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (a * p.weights[l].transpose()).rowwise() + p.biases[l].transpose();
    if (l + 1 < layers) {
      a = z.cwiseMax(0.0);
    } else {
      a = z.unaryExpr([](double v) { return sigmoid(v); });
    }
  }
  return a.col(0);
}

EncodedBatch encode_dataset(const Encoding& enc, const LabeledDataset& d) {
  EncodedBatch b;
  b.inputs.resize(static_cast<int>(d.items.size()), 2 * enc.code_length);
  b.labels.resize(static_cast<int>(d.items.size()));
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    b.inputs.row(static_cast<int>(i)) = encode_word(enc, d.items[i].word).transpose();
    b.labels(static_cast<int>(i)) = d.items[i].rating;
  }
  return b;
}

double bce_mean(const Eigen::VectorXd& preds, const Eigen::VectorXd& labels) {
  if (preds.size() != labels.size())
    throw std::invalid_argument("bce_mean: preds/labels length mismatch");
  const Eigen::ArrayXd p = clamp_preds(preds).array();
  const Eigen::ArrayXd y = labels.array();
  return -(y * p.log() + (1.0 - y) * (1.0 - p).log()).mean();
}

double bce_loss(const Eigen::VectorXd& preds, const Eigen::VectorXd& labels,
                const MlpParams& p, double lambda) {
  return bce_mean(preds, labels) + lambda * p.first_layer().squaredNorm();
}

namespace detail {

// Batch backprop; also returns the predictions of the forward pass so the
// training loop can log the loss without a second pass.
MlpGrad backprop_with_preds(const MlpParams& p, const EncodedBatch& batch, double lambda,
                            Eigen::VectorXd* preds_out) {
  check_shapes(p, static_cast<int>(batch.inputs.cols()));
  if (batch.inputs.rows() == 0) throw std::invalid_argument("backprop_grad: empty batch");
  if (batch.inputs.rows() != batch.labels.size())
    throw std::invalid_argument("backprop_grad: inputs/labels mismatch");

  const std::size_t layers = p.weights.size();
  const double n = static_cast<double>(batch.inputs.rows());

  std::vector<Eigen::MatrixXd> acts(layers + 1);
  std::vector<Eigen::MatrixXd> pre(layers);
  acts[0] = batch.inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l] = (acts[l] * p.weights[l].transpose()).rowwise() + p.biases[l].transpose();
    acts[l + 1] = (l + 1 < layers)
                      ? pre[l].cwiseMax(0.0).eval()
                      : pre[l].unaryExpr([](double v) { return sigmoid(v); }).eval();
  }
  Eigen::VectorXd preds = acts[layers].col(0);
  if (preds_out) *preds_out = preds;

  MlpGrad g;
  g.weights.resize(layers);
  g.biases.resize(layers);

  // Sigmoid + mean BCE collapse to (pred - label) / n at the output.
  Eigen::MatrixXd delta = (preds - batch.labels) / n;
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta.transpose() * acts[l];
    g.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = (delta * p.weights[l]).cwiseProduct(
          (pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  if (lambda != 0.0) g.weights[0] += 2.0 * lambda * p.weights[0];
  return g;
}

}  // namespace detail

MlpGrad backprop_grad(const MlpParams& p, const EncodedBatch& batch, double lambda) {
  return detail::backprop_with_preds(p, batch, lambda, nullptr);
}

void optimizer_step(OptimizerState& state, MlpParams& p, const MlpGrad& g,
                    const TrainConfig& cfg) {
  double lr = cfg.learning_rate;
  if (!cfg.step_schedule.empty()) {
    if (state.step >= static_cast<long>(cfg.step_schedule.size()))
      throw std::runtime_error("optimizer_step: step schedule exhausted");
    lr = cfg.step_schedule[static_cast<std::size_t>(state.step)];
  }
  state.step += 1;

  if (cfg.optimizer == Optimizer::Gd) {
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
      p.weights[l] -= lr * g.weights[l];
      p.biases[l] -= lr * g.biases[l];
    }
    return;
  }

  const double corr1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  auto adam_update = [&](auto& param, auto& m, auto& v, const auto& grad) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    param.array() -=
        lr * (m.array() / corr1) / ((v.array() / corr2).sqrt() + cfg.epsilon);
  };
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    adam_update(p.weights[l], state.weight_m[l], state.weight_v[l], g.weights[l]);
    adam_update(p.biases[l], state.bias_m[l], state.bias_v[l], g.biases[l]);
  }
}

TrainResult train(const LabeledDataset& data, const Encoding& enc,
                  const Architecture& arch, const TrainConfig& cfg, Rng& rng) {
  validate(cfg);
  if (data.items.empty()) throw std::invalid_argument("train: empty dataset");

  const EncodedBatch batch = encode_dataset(enc, data);
  const ValidationSet val = build_validation_set();
  Eigen::MatrixXd val_inputs(static_cast<int>(val.size()), 2 * enc.code_length);
  Eigen::VectorXd val_labels(static_cast<int>(val.size()));
  for (std::size_t i = 0; i < val.items.size(); ++i) {
    val_inputs.row(static_cast<int>(i)) = encode_word(enc, val.items[i].word).transpose();
    val_labels(static_cast<int>(i)) = val.items[i].rating;
  }

  TrainResult res;
  res.params = init_params(arch, rng, cfg.init_sigma2);
  OptimizerState state = OptimizerState::zeros_like(res.params);
  res.history.train_loss.reserve(static_cast<std::size_t>(cfg.epochs));
  res.history.val_loss.reserve(static_cast<std::size_t>(cfg.epochs));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Eigen::VectorXd preds;
    MlpGrad g = detail::backprop_with_preds(res.params, batch, cfg.lambda, &preds);
    res.history.train_loss.push_back(bce_loss(preds, batch.labels, res.params, cfg.lambda));
    optimizer_step(state, res.params, g, cfg);
    res.history.val_loss.push_back(bce_mean(forward_batch(res.params, val_inputs), val_labels));
  }
  return res;
}

double predict(const MlpParams& p, const Encoding& enc, const Word& w) {
  return forward(p, encode_word(enc, w));
}

void save_history_csv(const TrainHistory& h, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < h.train_loss.size(); ++e)
    out << (e + 1) << ',' << csv::format_double(h.train_loss[e]) << ','
        << csv::format_double(h.val_loss[e]) << '\n';
  csv::write_file(path, out.str());
}

void save_params_csv(const MlpParams& p, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "layer,kind,row,col,value\n";
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const auto& w = p.weights[l];
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c)
        out << (l + 1) << ",W," << r << ',' << c << ',' << csv::format_double(w(r, c)) << '\n';
    const auto& b = p.biases[l];
    for (int r = 0; r < b.size(); ++r)
      out << (l + 1) << ",b," << r << ",0," << csv::format_double(b(r)) << '\n';
  }
  csv::write_file(path, out.str());
}

MlpParams load_params_csv(const std::filesystem::path& path) {
  std::istringstream in(csv::read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "layer,kind,row,col,value")
    throw std::runtime_error("params csv: missing header");

  struct Entry { int row; int col; double value; };
  std::map<int, std::vector<Entry>> w_entries, b_entries;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = csv::split_line(line);
    if (f.size() != 5) throw std::runtime_error("params csv: bad row");
    const int layer = std::stoi(f[0]);
    Entry e{std::stoi(f[2]), std::stoi(f[3]), std::stod(f[4])};
    (f[1] == "W" ? w_entries : b_entries)[layer].push_back(e);
  }

  MlpParams p;
  for (auto& [layer, entries] : w_entries) {
    int rows = 0, cols = 0;
    for (const auto& e : entries) {
      rows = std::max(rows, e.row + 1);
      cols = std::max(cols, e.col + 1);
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& e : entries) w(e.row, e.col) = e.value;
    p.weights.push_back(std::move(w));

    int bsize = 0;
    for (const auto& e : b_entries[layer]) bsize = std::max(bsize, e.row + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(bsize);
    for (const auto& e : b_entries[layer]) b(e.row) = e.value;
    p.biases.push_back(std::move(b));
  }
  return p;
}

}  // namespace idlab
