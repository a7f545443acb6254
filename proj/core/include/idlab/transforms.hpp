#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>

#include "idlab/corpus.hpp"
#include "idlab/encodings.hpp"
#include "idlab/words.hpp"

namespace idlab {

/// Swaps Y and Z in the second position only; every other word is fixed.
/// An involution on the 676 words.
Word swap_second_yz(const Word& w);

/// Item-wise swap_second_yz; ratings and order unchanged.
LabeledDataset swap_second_yz(const LabeledDataset& d);

enum class MatrixKind { Permutation, Orthogonal, General };

std::string to_string(MatrixKind kind);

/// The 52x52 matrix realization of the second-position Y/Z swap under a
/// given encoding: identity on the first 26 coordinates, the conjugated
/// letter swap on the last 26.
struct TransformMatrix {
  Eigen::MatrixXd matrix;  // 52 x 52
  MatrixKind kind;
};

/// Builds the swap matrix for `enc` by conjugating the Y/Z letter-swap
/// permutation through the letter-code basis: with E = letter_codes^T,
/// the second block is E P E^{-1} (computed by LU solves with partial
/// pivoting). Throws std::runtime_error if the letter codes are singular.
TransformMatrix swap_matrix(const Encoding& enc);

/// Permutation when entries are within 1e-10 of {0,1} with exactly one 1 per
/// row and column; else Orthogonal when max|M^T M - I| < 1e-8; else General.
MatrixKind classify_matrix(const Eigen::MatrixXd& m);

enum class RegKind { FrobeniusSq, L1 };

/// FrobeniusSq: sum of squared entries. L1: sum of absolute entries.
double regularizer(const Eigen::MatrixXd& c, RegKind kind);

/// CSV form: one line with the kind, then 52 rows of 52 doubles.
void save_transform_csv(const TransformMatrix& t, const std::filesystem::path& path);
TransformMatrix load_transform_csv(const std::filesystem::path& path);

}  // namespace idlab
