#include "idlab/transforms.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "idlab/csv.hpp"

namespace idlab {

Word swap_second_yz(const Word& w) {
  if (w.second.index() == kLetterY) return Word{w.first, Letter(kLetterZ)};
  if (w.second.index() == kLetterZ) return Word{w.first, Letter(kLetterY)};
  return w;
}

LabeledDataset swap_second_yz(const LabeledDataset& d) {
  LabeledDataset out;
  out.items.reserve(d.items.size());
  for (const auto& item : d.items) out.items.push_back({swap_second_yz(item.word), item.rating});
  return out;
}

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Permutation: return "permutation";
    case MatrixKind::Orthogonal: return "orthogonal";
    case MatrixKind::General: return "general";
  }
  throw std::logic_error("unknown MatrixKind");
}

TransformMatrix swap_matrix(const Encoding& enc) {
  const int k = enc.code_length;
  // Columns of E are the letter codes; P swaps the Y and Z columns.
  Eigen::MatrixXd basis = enc.letter_codes.transpose();
  Eigen::MatrixXd swapped = basis;
  swapped.col(kLetterY) = basis.col(kLetterZ);
  swapped.col(kLetterZ) = basis.col(kLetterY);

  // Second block T2 = E P E^{-1}, i.e. T2 E = E P, solved from the right
  // through E^T T2^T = (E P)^T.
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis.transpose());
  if (std::abs(lu.determinant()) < 1e-300)
    throw std::runtime_error("swap_matrix: singular letter codes");
  Eigen::MatrixXd second_block = lu.solve(swapped.transpose()).transpose();

  TransformMatrix t;
  t.matrix = Eigen::MatrixXd::Identity(2 * k, 2 * k);
  t.matrix.block(k, k, k, k) = second_block;
  t.kind = classify_matrix(t.matrix);
  return t;
}

MatrixKind classify_matrix(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  constexpr double kEntryTol = 1e-10;
  constexpr double kOrthTol = 1e-8;

  bool permutation = true;
  std::vector<int> col_ones(n, 0);
  for (int r = 0; r < n && permutation; ++r) {
    int row_ones = 0;
    for (int c = 0; c < n; ++c) {
      const double v = m(r, c);
      if (std::abs(v - 1.0) <= kEntryTol) {
        ++row_ones;
        ++col_ones[c];
      } else if (std::abs(v) > kEntryTol) {
        permutation = false;
        break;
      }
    }
    if (row_ones != 1) permutation = false;
  }
  if (permutation)
    for (int c = 0; c < n; ++c)
      if (col_ones[c] != 1) permutation = false;
  if (permutation) return MatrixKind::Permutation;

  const double orth_err =
      (m.transpose() * m - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (orth_err < kOrthTol) return MatrixKind::Orthogonal;
  return MatrixKind::General;
}

double regularizer(const Eigen::MatrixXd& c, RegKind kind) {
  switch (kind) {
    case RegKind::FrobeniusSq: return c.squaredNorm();
    case RegKind::L1: return c.cwiseAbs().sum();
  }
  throw std::logic_error("unknown RegKind");
}

void save_transform_csv(const TransformMatrix& t, const std::filesystem::path& path) {
  std::ostringstream out;
  out << to_string(t.kind) << '\n';
  for (int r = 0; r < t.matrix.rows(); ++r) {
    for (int c = 0; c < t.matrix.cols(); ++c) {
      if (c) out << ',';
      out << csv::format_double(t.matrix(r, c));
    }
    out << '\n';
  }
  csv::write_file(path, out.str());
}

TransformMatrix load_transform_csv(const std::filesystem::path& path) {
  std::istringstream in(csv::read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("transform csv: empty file");

  TransformMatrix t;
  if (line == "permutation") t.kind = MatrixKind::Permutation;
  else if (line == "orthogonal") t.kind = MatrixKind::Orthogonal;
  else if (line == "general") t.kind = MatrixKind::General;
  else throw std::runtime_error("transform csv: bad kind line");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = csv::split_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(std::stod(f));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("transform csv: no matrix rows");
  t.matrix.resize(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw std::runtime_error("transform csv: ragged rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      t.matrix(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  }
  return t;
}

}  // namespace idlab
