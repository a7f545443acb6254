#include "idlab/encodings.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "idlab/csv.hpp"
#include "idlab/rng.hpp"

namespace idlab {

namespace {

constexpr int kMaxRowRedraws = 1000;   // per-row collision retries
constexpr int kMaxRankRedraws = 100;   // whole-matrix retries until full rank

bool full_rank(const Eigen::MatrixXd& m) {
  return Eigen::FullPivLU<Eigen::MatrixXd>(m).rank() == m.rows();
}

std::uint32_t pack_row(const Eigen::RowVectorXd& row) {
  std::uint32_t bits = 0;
  for (int i = 0; i < row.size(); ++i)
    if (row(i) != 0.0) bits |= 1u << i;
  return bits;
}

// Draws 26 pairwise-distinct binary rows via draw_row, redrawing the whole
// matrix while it is rank deficient.
Eigen::MatrixXd distinct_binary_rows(Rng& rng,
                                     const std::function<Eigen::RowVectorXd(Rng&)>& draw_row) {
  for (int attempt = 0; attempt < kMaxRankRedraws; ++attempt) {
    Eigen::MatrixXd codes(kAlphabetSize, kAlphabetSize);
    std::set<std::uint32_t> seen;
    for (int r = 0; r < kAlphabetSize; ++r) {
      int redraws = 0;
      for (;;) {
        Eigen::RowVectorXd row = draw_row(rng);
        if (seen.insert(pack_row(row)).second) {
          codes.row(r) = row;
          break;
        }
        if (++redraws >= kMaxRowRedraws)
          throw std::runtime_error(
              "binary encoding: could not draw 26 distinct rows (pathological pattern space)");
      }
    }
    if (full_rank(codes)) return codes;
  }
  throw std::runtime_error("binary encoding: no full-rank matrix after retries");
}

}  // namespace

std::string to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::OneHot: return "onehot";
    case EncodingKind::DenseBinary: return "binary";
    case EncodingKind::JActiveBinary: return "jactive";
    case EncodingKind::Haar: return "haar";
  }
  throw std::logic_error("unknown EncodingKind");
}

EncodingKind encoding_kind_from_string(const std::string& s) {
  if (s == "onehot") return EncodingKind::OneHot;
  if (s == "binary") return EncodingKind::DenseBinary;
  if (s == "jactive") return EncodingKind::JActiveBinary;
  if (s == "haar") return EncodingKind::Haar;
  throw std::invalid_argument("unknown encoding kind: " + s);
}

Encoding one_hot_encoding() {
  Encoding enc;
  enc.kind = EncodingKind::OneHot;
  enc.letter_codes = Eigen::MatrixXd::Identity(kAlphabetSize, kAlphabetSize);
  return enc;
}

Encoding dense_binary_encoding(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> bit(0, 1);
  auto draw_row = [&bit](Rng& r) {
    Eigen::RowVectorXd row(kAlphabetSize);
    for (int i = 0; i < kAlphabetSize; ++i) row(i) = static_cast<double>(bit(r));
    return row;
  };
  Encoding enc;
  enc.kind = EncodingKind::DenseBinary;
  enc.seed = seed;
  enc.letter_codes = distinct_binary_rows(rng, draw_row);
  return enc;
}

Encoding j_active_binary_encoding(std::uint64_t seed, int j) {
  if (j < 1 || j > kAlphabetSize)
    throw std::invalid_argument("j_active_binary_encoding: j must be in [1, 26]");
  Rng rng(seed);
  auto draw_row = [j](Rng& r) {
    // Partial Fisher-Yates: the first j slots are a uniform j-subset.
    std::array<int, kAlphabetSize> idx{};
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < j; ++i) {
      std::uniform_int_distribution<int> pick(i, kAlphabetSize - 1);
      std::swap(idx[i], idx[pick(r)]);
    }
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(kAlphabetSize);
    for (int i = 0; i < j; ++i) row(idx[i]) = 1.0;
    return row;
  };
  Encoding enc;
  enc.kind = EncodingKind::JActiveBinary;
  enc.active_bits = j;
  enc.seed = seed;
  enc.letter_codes = distinct_binary_rows(rng, draw_row);
  return enc;
}

Encoding haar_encoding(std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(kAlphabetSize, kAlphabetSize);
  for (int r = 0; r < kAlphabetSize; ++r)
    for (int c = 0; c < kAlphabetSize; ++c) g(r, c) = gauss(rng);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(kAlphabetSize, kAlphabetSize);
  Eigen::VectorXd rdiag = qr.matrixQR().diagonal();
  // Q -> Q Lambda with Lambda = diag(sign(r_ii)), sign(0) := 1; this removes
  // the sign ambiguity of the QR factors and makes the draw Haar distributed.
  for (int c = 0; c < kAlphabetSize; ++c)
    if (rdiag(c) < 0.0) q.col(c) = -q.col(c);

  Encoding enc;
  enc.kind = EncodingKind::Haar;
  enc.seed = seed;
  enc.letter_codes = std::move(q);
  return enc;
}

Eigen::VectorXd encode_word(const Encoding& enc, const Word& w) {
  Eigen::VectorXd v(2 * enc.code_length);
  v.head(enc.code_length) = enc.letter_codes.row(w.first.index());
  v.tail(enc.code_length) = enc.letter_codes.row(w.second.index());
  return v;
}

void save_encoding_csv(const Encoding& enc, const std::filesystem::path& path) {
  std::ostringstream out;
  out << to_string(enc.kind) << ',' << enc.code_length << ','
      << (enc.active_bits ? std::to_string(*enc.active_bits) : "") << ',' << enc.seed << '\n';
  for (int r = 0; r < enc.letter_codes.rows(); ++r) {
    for (int c = 0; c < enc.letter_codes.cols(); ++c) {
      if (c) out << ',';
      out << csv::format_double(enc.letter_codes(r, c));
    }
    out << '\n';
  }
  csv::write_file(path, out.str());
}

Encoding load_encoding_csv(const std::filesystem::path& path) {
  std::istringstream in(csv::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("encoding csv: empty file");
  auto meta = csv::split_line(line);
  if (meta.size() != 4) throw std::runtime_error("encoding csv: bad metadata line");

  Encoding enc;
  enc.kind = encoding_kind_from_string(meta[0]);
  enc.code_length = std::stoi(meta[1]);
  if (!meta[2].empty()) enc.active_bits = std::stoi(meta[2]);
  enc.seed = std::stoull(meta[3]);
  enc.letter_codes.resize(enc.code_length, enc.code_length);
  for (int r = 0; r < enc.code_length; ++r) {
    if (!std::getline(in, line)) throw std::runtime_error("encoding csv: truncated matrix");
    auto fields = csv::split_line(line);
    if (static_cast<int>(fields.size()) != enc.code_length)
      throw std::runtime_error("encoding csv: bad row width");
    for (int c = 0; c < enc.code_length; ++c) enc.letter_codes(r, c) = std::stod(fields[c]);
  }
  return enc;
}

}  // namespace idlab
