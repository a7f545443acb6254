#include "idlab/corpus.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "idlab/csv.hpp"
#include "idlab/rng.hpp"

namespace idlab {

double label(const Word& w) { return w.first == w.second ? 1.0 : 0.0; }

LabeledDataset build_training_set(std::uint64_t seed) {
  constexpr int kTrainLetters = 24;  // A..X; Y and Z are held out entirely
  constexpr int kNegatives = 48;

  LabeledDataset d;
  d.items.reserve(kTrainLetters + kNegatives);
  for (int a = 0; a < kTrainLetters; ++a)
    d.items.push_back({Word{Letter(a), Letter(a)}, 1.0});

  // All 24*23 ordered non-identical pairs over A..X; a partial Fisher-Yates
  // draws 48 of them uniformly without replacement, order preserved as drawn.
  std::vector<Word> pool;
  pool.reserve(kTrainLetters * (kTrainLetters - 1));
  for (int a = 0; a < kTrainLetters; ++a)
    for (int b = 0; b < kTrainLetters; ++b)
      if (a != b) pool.push_back(Word{Letter(a), Letter(b)});

  Rng rng(seed);
  for (int i = 0; i < kNegatives; ++i) {
    std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
    std::swap(pool[i], pool[pick(rng)]);
    d.items.push_back({pool[i], 0.0});
  }
  return d;
}

std::string to_string(ValidationColumn c) {
  switch (c) {
    case ValidationColumn::YY: return "YY";
    case ValidationColumn::ZZ: return "ZZ";
    case ValidationColumn::YZ: return "YZ";
    case ValidationColumn::ZY: return "ZY";
    case ValidationColumn::xY: return "xY";
    case ValidationColumn::xZ: return "xZ";
  }
  throw std::logic_error("unknown ValidationColumn");
}

ValidationSet build_validation_set() {
  const Letter y(kLetterY), z(kLetterZ);
  ValidationSet v;
  v.items.reserve(52);
  v.items.push_back({Word{y, y}, 1.0, ValidationColumn::YY});
  v.items.push_back({Word{z, z}, 1.0, ValidationColumn::ZZ});
  v.items.push_back({Word{y, z}, 0.0, ValidationColumn::YZ});
  v.items.push_back({Word{z, y}, 0.0, ValidationColumn::ZY});
  for (int a = 0; a < 24; ++a)
    v.items.push_back({Word{Letter(a), y}, 0.0, ValidationColumn::xY});
  for (int a = 0; a < 24; ++a)
    v.items.push_back({Word{Letter(a), z}, 0.0, ValidationColumn::xZ});
  return v;
}

void save_dataset_csv(const LabeledDataset& d, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "word,rating\n";
  for (const auto& item : d.items)
    out << item.word.str() << ',' << csv::format_double(item.rating) << '\n';
  csv::write_file(path, out.str());
}

LabeledDataset load_dataset_csv(const std::filesystem::path& path) {
  std::istringstream in(csv::read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "word,rating")
    throw std::runtime_error("dataset csv: missing word,rating header");
  LabeledDataset d;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = csv::split_line(line);
    if (fields.size() != 2) throw std::runtime_error("dataset csv: bad row");
    d.items.push_back({Word::parse(fields[0]), std::stod(fields[1])});
  }
  return d;
}

}  // namespace idlab
