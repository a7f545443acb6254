#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idlab/corpus.hpp"
#include "idlab/encodings.hpp"
#include "idlab/neuralnet.hpp"
#include "idlab/transforms.hpp"

namespace idlab {

struct CouplingReport {
  double max_param_residual = 0.0;   // max over steps of the first-layer and rest-block gaps
  double max_output_residual = 0.0;  // max over all 676 words of the paired prediction gap
  int steps = 0;
  Optimizer optimizer = Optimizer::Gd;
  MatrixKind transform_kind = MatrixKind::General;
};

/// Trains two coupled runs: run A from (rest0, first0) on `data`, run B from
/// (rest0, first0 * M) on the swapped dataset, where M realizes the Y/Z swap
/// under `enc`. For orthogonal M under plain gradient descent (or permutation
/// M under Adam) the trajectories correspond step by step; the report holds
/// the worst parameter gap seen at any step and the worst paired prediction
/// gap over all words.
///
/// Throws std::invalid_argument when the optimizer cannot support the
/// transform kind: Adam's coordinatewise moment scaling only commutes with
/// permutations, and plain GD needs M orthogonal.
CouplingReport coupled_train_pair(const LabeledDataset& data, const Encoding& enc,
                                  const Architecture& arch, const TrainConfig& cfg,
                                  std::uint64_t seed);

/// Constructive witness that a coupled learner cannot rate YY and YZ
/// differently: run A trains from (rest0, first0) and run B from
/// (rest0, first0 * M), both on the same generated training set (which the
/// swap fixes exactly); returns |rating_B(YZ) - rating_A(YY)|.
/// Same optimizer/transform preconditions as coupled_train_pair.
double rating_impossibility_coupled(const Encoding& enc, const Architecture& arch,
                                    const TrainConfig& cfg, std::uint64_t seed);

/// Trains the regularized logistic model on a generated training set and on
/// its swapped copy (different random inits) and returns the max over all
/// 676 words of |rating'(swap(w)) - rating(w)|. Returns nullopt for
/// lambda == 0, where the minimizer may not be unique; throws
/// std::invalid_argument for lambda < 0 and requires an orthogonal swap
/// matrix.
std::optional<double> convex_invariance_check(const Encoding& enc, double lambda,
                                              double tol, std::uint64_t seed);

struct ColumnStat {
  std::string column;
  double mean = 0.0;
  double stddev = 0.0;
};

struct GapReport {
  std::vector<ColumnStat> columns;
  double mean_gap = 0.0;  // mean over {YY, ZZ} minus mean over {YZ, ZY}
};

/// Pools per-repetition ratings over the fixed validation set (each vector
/// aligned with build_validation_set() order) into per-column means and
/// standard deviations. Requires at least two repetitions.
GapReport distributional_gap(const std::vector<Eigen::VectorXd>& per_rep_ratings);

}  // namespace idlab
