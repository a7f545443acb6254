#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "idlab/words.hpp"

namespace idlab {

struct LabeledWord {
  Word word;
  double rating;  // 0.0 or 1.0
};

/// Ordered list of (word, rating) pairs with no duplicate words.
struct LabeledDataset {
  std::vector<LabeledWord> items;

  std::size_t size() const { return items.size(); }
};

/// 1.0 when the two letters match, else 0.0.
double label(const Word& w);

/// The 24 identical words AA..XX (rating 1) followed by 48 distinct
/// non-identical words drawn uniformly without replacement over letters A..X
/// (rating 0), in draw order. Never contains Y or Z, so the second-position
/// Y/Z swap fixes every training set exactly.
LabeledDataset build_training_set(std::uint64_t seed);

enum class ValidationColumn { YY, ZZ, YZ, ZY, xY, xZ };

std::string to_string(ValidationColumn c);

struct ValidationItem {
  Word word;
  double rating;
  ValidationColumn column;
};

/// The fixed 52-word validation set: YY, ZZ, YZ, ZY, then AY..XY, then
/// AZ..XZ. Ratings are 1 for YY and ZZ, 0 otherwise.
struct ValidationSet {
  std::vector<ValidationItem> items;

  std::size_t size() const { return items.size(); }
};

/// Deterministic; every call returns the identical set.
ValidationSet build_validation_set();

/// CSV form: header `word,rating`, words as two ASCII capitals.
void save_dataset_csv(const LabeledDataset& d, const std::filesystem::path& path);
LabeledDataset load_dataset_csv(const std::filesystem::path& path);

}  // namespace idlab
