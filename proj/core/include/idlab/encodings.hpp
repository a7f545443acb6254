#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "idlab/words.hpp"

namespace idlab {

enum class EncodingKind { OneHot, DenseBinary, JActiveBinary, Haar };

std::string to_string(EncodingKind kind);
EncodingKind encoding_kind_from_string(const std::string& s);

/// A letter-encoding scheme: row i of `letter_codes` is the length-26 code
/// vector of letter i. Words encode as the concatenation of their two letter
/// codes (length 52).
struct Encoding {
  EncodingKind kind;
  int code_length = kAlphabetSize;        // k
  std::optional<int> active_bits;         // j, JActiveBinary only
  std::uint64_t seed = 0;                 // 0 for the deterministic one-hot
  Eigen::MatrixXd letter_codes;           // 26 x 26

  Eigen::VectorXd letter_code(Letter l) const { return letter_codes.row(l.index()); }
};

/// Deterministic localist encoding: letter i maps to the standard basis
/// vector e_i, so letter_codes is the identity.
Encoding one_hot_encoding();

/// 26 pairwise-distinct uniform-random bit vectors. Rows are re-drawn on
/// collision and the whole matrix is re-drawn while singular; throws
/// std::runtime_error once the retry caps are exhausted.
Encoding dense_binary_encoding(std::uint64_t seed);

/// Binary codes with exactly `j` ones per row, positions uniform without
/// replacement. Same distinctness and full-rank enforcement as the dense
/// variant. Throws std::invalid_argument for j outside [1, 26].
Encoding j_active_binary_encoding(std::uint64_t seed, int j = 3);

/// Uniformly random orthogonal letter codes: Gaussian matrix, Householder QR,
/// then the sign-of-R-diagonal correction that makes the factor Haar
/// distributed on O(26).
Encoding haar_encoding(std::uint64_t seed);

/// [code(first) ; code(second)], length 52.
Eigen::VectorXd encode_word(const Encoding& enc, const Word& w);

inline constexpr int kEncodedDim = 2 * kAlphabetSize;

/// CSV form: one metadata line `kind,k,j,seed` (j empty when absent), then
/// 26 rows of 26 doubles at 17 significant digits.
void save_encoding_csv(const Encoding& enc, const std::filesystem::path& path);
Encoding load_encoding_csv(const std::filesystem::path& path);

}  // namespace idlab
