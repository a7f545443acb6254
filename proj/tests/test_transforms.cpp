#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <random>

#include "idlab/rng.hpp"
#include "idlab/transforms.hpp"

using namespace idlab;

namespace {

std::vector<Encoding> sample_encodings(std::uint64_t seed) {
  return {one_hot_encoding(), dense_binary_encoding(seed), j_active_binary_encoding(seed, 3),
          haar_encoding(seed)};
}

}  // namespace

TEST_CASE("word-level swap acts on the second position only") {
  CHECK(swap_second_yz(Word::parse("AY")) == Word::parse("AZ"));
  CHECK(swap_second_yz(Word::parse("AZ")) == Word::parse("AY"));
  CHECK(swap_second_yz(Word::parse("AB")) == Word::parse("AB"));
  CHECK(swap_second_yz(Word::parse("YZ")) == Word::parse("YY"));
  CHECK(swap_second_yz(Word::parse("YA")) == Word::parse("YA"));
  CHECK(swap_second_yz(Word::parse("ZB")) == Word::parse("ZB"));
}

TEST_CASE("word-level swap is an involution on all 676 words") {
  int moved = 0;
  for (const Word& w : all_words()) {
    CHECK(swap_second_yz(swap_second_yz(w)) == w);
    if (swap_second_yz(w) != w) ++moved;
  }
  CHECK(moved == 52);  // the 26 xY words and the 26 xZ words
}

TEST_CASE("dataset swap maps items in place and preserves ratings") {
  LabeledDataset d;
  d.items.push_back({Word::parse("AY"), 0.0});
  d.items.push_back({Word::parse("BB"), 1.0});
  const LabeledDataset s = swap_second_yz(d);
  REQUIRE(s.size() == 2);
  CHECK(s.items[0].word == Word::parse("AZ"));
  CHECK(s.items[0].rating == 0.0);
  CHECK(s.items[1].word == Word::parse("BB"));
  const LabeledDataset back = swap_second_yz(s);
  CHECK(back.items[0].word == d.items[0].word);
  CHECK(back.items[1].word == d.items[1].word);
}

TEST_CASE("swap matrix agrees with the word-level swap on all 676 words") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    for (const Encoding& enc : sample_encodings(seed)) {
      const TransformMatrix t = swap_matrix(enc);
      REQUIRE(t.matrix.rows() == 52);
      REQUIRE(t.matrix.cols() == 52);
      for (const Word& w : all_words()) {
        const Eigen::VectorXd lhs = t.matrix * encode_word(enc, w);
        const Eigen::VectorXd rhs = encode_word(enc, swap_second_yz(w));
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("swap matrix is an involution and block-diagonal") {
  for (std::uint64_t seed : {1ull, 9ull}) {
    for (const Encoding& enc : sample_encodings(seed)) {
      const TransformMatrix t = swap_matrix(enc);
      const Eigen::MatrixXd sq = t.matrix * t.matrix;
      CHECK((sq - Eigen::MatrixXd::Identity(52, 52)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(t.matrix.topLeftCorner(26, 26) == Eigen::MatrixXd::Identity(26, 26));
      CHECK(t.matrix.topRightCorner(26, 26).isZero(0.0));
      CHECK(t.matrix.bottomLeftCorner(26, 26).isZero(0.0));
    }
  }
}

TEST_CASE("one-hot swap matrix is exactly the Y/Z transposition") {
  const TransformMatrix t = swap_matrix(one_hot_encoding());
  CHECK(t.kind == MatrixKind::Permutation);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(52, 52);
  expected(26 + kLetterY, 26 + kLetterY) = 0.0;
  expected(26 + kLetterZ, 26 + kLetterZ) = 0.0;
  expected(26 + kLetterY, 26 + kLetterZ) = 1.0;
  expected(26 + kLetterZ, 26 + kLetterY) = 1.0;
  CHECK((t.matrix - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("haar swap matrix is orthogonal, jactive generically is not") {
  int jactive_general = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TransformMatrix haar = swap_matrix(haar_encoding(seed));
    CHECK(haar.kind == MatrixKind::Orthogonal);
    const Eigen::MatrixXd gram = haar.matrix.transpose() * haar.matrix;
    CHECK((gram - Eigen::MatrixXd::Identity(52, 52)).cwiseAbs().maxCoeff() < 1e-10);

    const TransformMatrix jact = swap_matrix(j_active_binary_encoding(seed, 3));
    if (jact.kind == MatrixKind::General) {
      ++jactive_general;
      const Eigen::MatrixXd jgram = jact.matrix.transpose() * jact.matrix;
      CHECK((jgram - Eigen::MatrixXd::Identity(52, 52)).cwiseAbs().maxCoeff() > 1e-6);
    }
  }
  CHECK(jactive_general >= 4);
}

TEST_CASE("classify_matrix tolerances") {
  CHECK(classify_matrix(Eigen::MatrixXd::Identity(52, 52)) == MatrixKind::Permutation);

  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(4, 4);
  perm(0, 1) = 1.0;
  perm(1, 0) = 1.0;
  perm(2, 3) = 1.0;
  perm(3, 2) = 1.0;
  CHECK(classify_matrix(perm) == MatrixKind::Permutation);

  Eigen::MatrixXd rot(2, 2);
  const double c = std::cos(0.3), s = std::sin(0.3);
  rot << c, -s, s, c;
  CHECK(classify_matrix(rot) == MatrixKind::Orthogonal);

  Eigen::MatrixXd skew(2, 2);
  skew << 1.0, 1.0, 0.0, 1.0;
  CHECK(classify_matrix(skew) == MatrixKind::General);

  // Doubled row/column breaks the one-per-line permutation test.
  Eigen::MatrixXd doubled = Eigen::MatrixXd::Zero(2, 2);
  doubled(0, 0) = 1.0;
  doubled(1, 0) = 1.0;
  CHECK(classify_matrix(doubled) == MatrixKind::General);
}

TEST_CASE("regularizer values on small matrices") {
  CHECK(regularizer(Eigen::MatrixXd::Identity(2, 2), RegKind::FrobeniusSq) == 2.0);
  CHECK(regularizer(Eigen::MatrixXd::Identity(2, 2), RegKind::L1) == 2.0);
  Eigen::MatrixXd m(2, 2);
  m << 1.0, -2.0, 3.0, -4.0;
  CHECK(regularizer(m, RegKind::FrobeniusSq) == doctest::Approx(30.0).epsilon(1e-15));
  CHECK(regularizer(m, RegKind::L1) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("frobenius^2 is invariant under orthogonal right factors, L1 under permutations") {
  Rng rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const TransformMatrix perm = swap_matrix(one_hot_encoding());
  const TransformMatrix orth = swap_matrix(haar_encoding(77));
  int l1_moved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd c(8, 52);
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) c(i, j) = gauss(rng);

    const double frob = regularizer(c, RegKind::FrobeniusSq);
    CHECK(std::abs(regularizer(c * orth.matrix, RegKind::FrobeniusSq) - frob) < 1e-9);
    CHECK(std::abs(regularizer(c * perm.matrix, RegKind::FrobeniusSq) - frob) < 1e-9);

    const double l1 = regularizer(c, RegKind::L1);
    CHECK(std::abs(regularizer(c * perm.matrix, RegKind::L1) - l1) < 1e-9);
    if (std::abs(regularizer(c * orth.matrix, RegKind::L1) - l1) > 1e-3) ++l1_moved;
  }
  CHECK(l1_moved >= 90);  // L1 is not invariant under a generic orthogonal factor
}

TEST_CASE("transform CSV round-trip") {
  const TransformMatrix t = swap_matrix(haar_encoding(13));
  const auto path = std::filesystem::temp_directory_path() / "idlab_transform.csv";
  save_transform_csv(t, path);
  const TransformMatrix back = load_transform_csv(path);
  CHECK(back.kind == t.kind);
  CHECK(back.matrix == t.matrix);
  std::filesystem::remove(path);
}
