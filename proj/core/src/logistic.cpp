#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "idlab/neuralnet.hpp"

namespace idlab {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct LogisticGrad {
  Eigen::VectorXd weights;
  double bias;

  double inf_norm() const { return std::max(weights.cwiseAbs().maxCoeff(), std::abs(bias)); }
};

LogisticGrad gradient(const LogisticModel& m, const EncodedBatch& batch, double lambda) {
  const double n = static_cast<double>(batch.inputs.rows());
  Eigen::VectorXd margins = batch.inputs * m.weights;
  margins.array() += m.bias;
  const Eigen::VectorXd resid =
      margins.unaryExpr([](double z) { return sigmoid(z); }) - batch.labels;
  LogisticGrad g;
  g.weights = batch.inputs.transpose() * resid / n + 2.0 * lambda * m.weights;
  g.bias = resid.mean();
  return g;
}

// Upper bound on the objective curvature: the logistic second derivative is
// at most 1/4, so L <= 0.25 * lambda_max([X 1]^T [X 1]) / n + 2*lambda.
double curvature_bound(const EncodedBatch& batch, double lambda) {
  const int n = static_cast<int>(batch.inputs.rows());
  Eigen::MatrixXd ext(n, batch.inputs.cols() + 1);
  ext.leftCols(batch.inputs.cols()) = batch.inputs;
  ext.col(batch.inputs.cols()).setOnes();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ext.transpose() * ext);
  return 0.25 * eig.eigenvalues().maxCoeff() / static_cast<double>(n) + 2.0 * lambda;
}

}  // namespace

LogisticModel logistic_model_train(const LabeledDataset& d, const Encoding& enc,
                                   double lambda, double tol, const LogisticModel* init,
                                   long max_steps) {
  if (lambda <= 0.0)
    throw std::invalid_argument("logistic_model_train: lambda must be > 0 for a unique minimizer");
  if (tol <= 0.0) throw std::invalid_argument("logistic_model_train: tol must be > 0");
  if (d.items.empty()) throw std::invalid_argument("logistic_model_train: empty dataset");

  const EncodedBatch batch = encode_dataset(enc, d);
  LogisticModel m;
  if (init) {
    if (init->weights.size() != batch.inputs.cols())
      throw std::invalid_argument("logistic_model_train: init dimension mismatch");
    m = *init;
  } else {
    m.weights = Eigen::VectorXd::Zero(batch.inputs.cols());
    m.bias = 0.0;
  }

  const double step = 1.0 / (1.05 * curvature_bound(batch, lambda));
  for (long i = 0; i < max_steps; ++i) {
    const LogisticGrad g = gradient(m, batch, lambda);
    if (g.inf_norm() < tol) return m;
    m.weights -= step * g.weights;
    m.bias -= step * g.bias;
  }
  throw std::runtime_error("logistic_model_train: no convergence within the step cap");
}

double logistic_predict(const LogisticModel& m, const Encoding& enc, const Word& w) {
  return sigmoid(m.weights.dot(encode_word(enc, w)) + m.bias);
}

double logistic_grad_norm(const LogisticModel& m, const LabeledDataset& d,
                          const Encoding& enc, double lambda) {
  return gradient(m, encode_dataset(enc, d), lambda).inf_norm();
}

}  // namespace idlab
