#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "idlab/encodings.hpp"
#include "oracles.hpp"

using namespace idlab;

TEST_CASE("one-hot rows are the standard basis") {
  const Encoding enc = one_hot_encoding();
  CHECK(enc.kind == EncodingKind::OneHot);
  CHECK(enc.letter_codes == Eigen::MatrixXd::Identity(26, 26));
  CHECK(enc.letter_code(Letter::from_char('A'))(0) == 1.0);
  CHECK(enc.letter_code(Letter::from_char('A')).tail(25).isZero(0.0));
  CHECK(enc.letter_code(Letter::from_char('Z'))(25) == 1.0);
  CHECK(oracle::rank(enc.letter_codes) == 26);
}

TEST_CASE("one-hot is reproducible bit for bit") {
  CHECK(one_hot_encoding().letter_codes == one_hot_encoding().letter_codes);
}

TEST_CASE("dense binary: 0/1 entries, distinct rows, full rank") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
    const Encoding enc = dense_binary_encoding(seed);
    for (int i = 0; i < 26; ++i)
      for (int j = 0; j < 26; ++j)
        CHECK((enc.letter_codes(i, j) == 0.0 || enc.letter_codes(i, j) == 1.0));
    for (int a = 0; a < 26; ++a)
      for (int b = a + 1; b < 26; ++b)
        CHECK(enc.letter_codes.row(a) != enc.letter_codes.row(b));
    CHECK(oracle::rank(enc.letter_codes) == 26);
  }
}

TEST_CASE("dense binary is deterministic in the seed") {
  CHECK(dense_binary_encoding(7).letter_codes == dense_binary_encoding(7).letter_codes);
  CHECK(dense_binary_encoding(7).letter_codes != dense_binary_encoding(8).letter_codes);
}

TEST_CASE("j-active rows each carry exactly j ones") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Encoding enc = j_active_binary_encoding(seed, 3);
    REQUIRE(enc.active_bits == 3);
    for (int i = 0; i < 26; ++i) {
      CHECK(enc.letter_codes.row(i).sum() == 3.0);
      for (int j = 0; j < 26; ++j)
        CHECK((enc.letter_codes(i, j) == 0.0 || enc.letter_codes(i, j) == 1.0));
    }
    for (int a = 0; a < 26; ++a)
      for (int b = a + 1; b < 26; ++b)
        CHECK(enc.letter_codes.row(a) != enc.letter_codes.row(b));
    CHECK(oracle::rank(enc.letter_codes) == 26);
  }
}

TEST_CASE("j-active input validation and the impossible j = 26") {
  CHECK_THROWS_AS(j_active_binary_encoding(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(j_active_binary_encoding(1, 27), std::invalid_argument);
  // Only one 26-active pattern exists, so 26 distinct rows cannot be drawn.
  CHECK_THROWS_AS(j_active_binary_encoding(1, 26), std::runtime_error);
}

TEST_CASE("haar codes are orthogonal with unit determinant") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Encoding enc = haar_encoding(seed);
    const Eigen::MatrixXd gram =
        enc.letter_codes.transpose() * enc.letter_codes - Eigen::MatrixXd::Identity(26, 26);
    CHECK(gram.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(std::abs(oracle::determinant(enc.letter_codes)) - 1.0) < 1e-10);
  }
}

TEST_CASE("haar sampling: distinct seeds give distinct matrices, same seed repeats") {
  CHECK(haar_encoding(1).letter_codes == haar_encoding(1).letter_codes);
  CHECK(haar_encoding(1).letter_codes != haar_encoding(2).letter_codes);
}

TEST_CASE("haar (1,1) entry is sign-symmetric across seeds") {
  int positive = 0;
  const int n = 200;
  for (std::uint64_t seed = 0; seed < n; ++seed)
    if (haar_encoding(seed).letter_codes(0, 0) > 0.0) ++positive;
  // Binomial(200, 1/2): +-4 sigma is about +-28.3.
  CHECK(positive > 100 - 29);
  CHECK(positive < 100 + 29);
}

TEST_CASE("encode_word concatenates the two letter codes") {
  const Encoding onehot = one_hot_encoding();
  const Eigen::VectorXd ab = encode_word(onehot, Word::parse("AB"));
  REQUIRE(ab.size() == 52);
  CHECK(ab(0) == 1.0);
  CHECK(ab(27) == 1.0);
  CHECK(ab.sum() == 2.0);
  const Eigen::VectorXd yy = encode_word(onehot, Word::parse("YY"));
  CHECK(yy(24) == 1.0);
  CHECK(yy(26 + 24) == 1.0);
  CHECK(yy.sum() == 2.0);

  for (std::uint64_t seed : {5ull, 6ull}) {
    const Encoding haar = haar_encoding(seed);
    const Eigen::VectorXd v = encode_word(haar, Word::parse("AB"));
    CHECK(std::abs(v.squaredNorm() - 2.0) < 1e-10);
    CHECK(v.head(26) == haar.letter_codes.row(0).transpose());
    CHECK(v.tail(26) == haar.letter_codes.row(1).transpose());
  }
}

TEST_CASE("every encoding kind splits words into the two letter-code halves") {
  const Encoding encs[] = {one_hot_encoding(), dense_binary_encoding(3),
                           j_active_binary_encoding(3, 3), haar_encoding(3)};
  for (const Encoding& enc : encs) {
    for (const Word& w : {Word::parse("QX"), Word::parse("ZA"), Word::parse("MM")}) {
      const Eigen::VectorXd v = encode_word(enc, w);
      CHECK(v.head(26) == enc.letter_codes.row(w.first.index()).transpose());
      CHECK(v.tail(26) == enc.letter_codes.row(w.second.index()).transpose());
    }
  }
}

TEST_CASE("encoding CSV round-trip") {
  const std::filesystem::path tmp = std::filesystem::temp_directory_path();
  for (const Encoding& enc : {one_hot_encoding(), dense_binary_encoding(11),
                              j_active_binary_encoding(11, 3), haar_encoding(11)}) {
    const auto path = tmp / ("enc_" + to_string(enc.kind) + ".csv");
    save_encoding_csv(enc, path);
    const Encoding back = load_encoding_csv(path);
    CHECK(back.kind == enc.kind);
    CHECK(back.code_length == enc.code_length);
    CHECK(back.active_bits == enc.active_bits);
    CHECK(back.seed == enc.seed);
    CHECK(back.letter_codes == enc.letter_codes);  // 17 digits round-trip exactly
    std::filesystem::remove(path);
  }
}
