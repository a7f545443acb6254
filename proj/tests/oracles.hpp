// Independent reference implementations the tests trust instead of the
// library's own numerics: a central-difference gradient, Gaussian elimination
// for rank/determinant, and plain accumulation statistics.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "idlab/neuralnet.hpp"

namespace oracle {

// Central finite differences of the library's training objective with respect
// to every parameter. Differentiation is done from scratch; only the scalar
// objective itself comes from the library under test.
inline idlab::MlpGrad fd_gradient(const idlab::MlpParams& p, const idlab::EncodedBatch& batch,
                                  double lambda, double h) {
  auto objective = [&](const idlab::MlpParams& q) {
    return idlab::bce_loss(idlab::forward_batch(q, batch.inputs), batch.labels, q, lambda);
  };
  idlab::MlpGrad g = p;
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    for (int i = 0; i < p.weights[l].rows(); ++i) {
      for (int j = 0; j < p.weights[l].cols(); ++j) {
        idlab::MlpParams q = p;
        q.weights[l](i, j) = p.weights[l](i, j) + h;
        const double up = objective(q);
        q.weights[l](i, j) = p.weights[l](i, j) - h;
        const double down = objective(q);
        g.weights[l](i, j) = (up - down) / (2.0 * h);
      }
    }
    for (int i = 0; i < p.biases[l].size(); ++i) {
      idlab::MlpParams q = p;
      q.biases[l](i) = p.biases[l](i) + h;
      const double up = objective(q);
      q.biases[l](i) = p.biases[l](i) - h;
      const double down = objective(q);
      g.biases[l](i) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

// |a - b| relative to the larger magnitude, floored so that finite-difference
// roundoff on near-zero entries is judged on an absolute scale.
inline double rel_err(double a, double b, double floor = 1e-4) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double max_rel_err(const idlab::MlpGrad& a, const idlab::MlpGrad& b,
                          double floor = 1e-4) {
  double worst = 0.0;
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    for (int i = 0; i < a.weights[l].rows(); ++i)
      for (int j = 0; j < a.weights[l].cols(); ++j)
        worst = std::max(worst, rel_err(a.weights[l](i, j), b.weights[l](i, j), floor));
    for (int i = 0; i < a.biases[l].size(); ++i)
      worst = std::max(worst, rel_err(a.biases[l](i), b.biases[l](i), floor));
  }
  return worst;
}

// Rank by Gaussian elimination with partial pivoting, written out by hand.
inline int rank(Eigen::MatrixXd m, double tol = 1e-9) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    double best = tol;
    for (int i = r; i < rows; ++i) {
      if (std::abs(m(i, c)) > best) {
        best = std::abs(m(i, c));
        pivot = i;
      }
    }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(r));
    for (int i = r + 1; i < rows; ++i) m.row(i) -= (m(i, c) / m(r, c)) * m.row(r);
    ++r;
  }
  return r;
}

// Determinant from the same elimination (pivot product and swap parity).
inline double determinant(Eigen::MatrixXd m) {
  const int n = static_cast<int>(m.rows());
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(m(i, c)) > std::abs(m(pivot, c))) pivot = i;
    if (m(pivot, c) == 0.0) return 0.0;
    if (pivot != c) {
      m.row(pivot).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    for (int i = c + 1; i < n; ++i) m.row(i) -= (m(i, c) / m(c, c)) * m.row(c);
  }
  return det;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace oracle
