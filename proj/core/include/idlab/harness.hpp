#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "idlab/corpus.hpp"
#include "idlab/encodings.hpp"
#include "idlab/invariance.hpp"
#include "idlab/neuralnet.hpp"

namespace idlab {

/// Compact encoding selector, round-trippable as a token: "onehot",
/// "binary", "jactive<j>", "haar".
struct EncodingToken {
  EncodingKind kind = EncodingKind::OneHot;
  int j = 3;  // JActiveBinary only

  std::string str() const;
  static EncodingToken parse(const std::string& token);

  /// Instantiates the encoding; `seed` is ignored by the deterministic
  /// one-hot scheme.
  Encoding instantiate(std::uint64_t seed) const;

  friend bool operator==(const EncodingToken& a, const EncodingToken& b) {
    return a.kind == b.kind && (a.kind != EncodingKind::JActiveBinary || a.j == b.j);
  }
};

/// Independent randomness streams of one experiment grid.
enum class StreamTag : std::uint64_t {
  TrainingData = 1,  // depends on the repetition only: every encoding and
                     // architecture sees the same 40 training sets
  WeightInit = 2,    // depends on (architecture, repetition): the same init
                     // sequence is reused across encodings
  EncodingGen = 3,   // depends on (encoding, repetition)
};

/// Deterministic 64-bit seed for one stream of one grid cell. Coordinates a
/// stream must not depend on are excluded from the hash (see StreamTag).
std::uint64_t derive_seed(std::uint64_t master_seed, int encoding_index, int arch_index,
                          int repetition_index, StreamTag tag);

struct SuiteConfig {
  std::vector<EncodingToken> encodings = {
      EncodingToken{EncodingKind::OneHot},
      EncodingToken{EncodingKind::JActiveBinary, 3},
      EncodingToken{EncodingKind::Haar},
  };
  std::vector<int> layer_counts = {1, 2, 3};
  int hidden_width = 256;
  int repetitions = 40;
  int epochs = 500;
  int loss_curve_epochs = 100;  // plotting window; curves are recorded in full
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";

  Optimizer optimizer = Optimizer::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double lambda = 0.0;
  double init_sigma2 = 0.0025;

  TrainConfig train_config() const;
};

void validate(const SuiteConfig& cfg);

/// One trained grid cell: the validation ratings plus the two training-set
/// reference columns (AA and the first drawn negative) and the loss curves.
struct CellResult {
  int encoding_index = 0;
  int arch_index = 0;
  int repetition = 0;
  std::vector<Word> training_words;    // provenance, in dataset order
  Word first_negative{Letter(0), Letter(1)};
  double rating_aa = 0.0;
  double rating_first_negative = 0.0;
  Eigen::VectorXd validation_ratings;  // aligned with build_validation_set()
  TrainHistory history;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<CellResult> cells;  // lexicographic in (encoding, arch, repetition)
};

/// Runs the full grid. Cells are independent; `threads` > 1 runs them
/// concurrently with results aggregated in cell order, so the output is
/// identical for any thread count. threads == 0 picks the hardware count.
SuiteResult run_suite(const SuiteConfig& cfg, int threads = 1);

/// Distribution summary of one (encoding, architecture) cell group: the
/// columns AA, xy, YY, ZZ, YZ, ZY, xY, xZ pooled over repetitions.
struct CellSummary {
  std::string encoding;
  int layers = 0;
  std::vector<ColumnStat> columns;
  double mean_gap = 0.0;
};

std::vector<CellSummary> summarize(const SuiteResult& res);

/// Rebuilds the summary from a previously written ratings.csv; pooling order
/// matches summarize(), so the recomputed statistics are bit-identical.
std::vector<CellSummary> summarize_ratings_csv(const std::filesystem::path& ratings_csv);

/// Writes the `encoding,arch,column,mean,std` table.
void write_summary_csv(const std::vector<CellSummary>& summaries,
                       const std::filesystem::path& path);

/// Writes ratings.csv, summary.csv, losses.csv and the manifest into `dir`
/// (created if missing). Floats carry 17 significant digits; re-running with
/// the same master seed reproduces the files byte for byte.
void emit_outputs(const SuiteResult& res, const std::filesystem::path& dir);

/// Plain-text `key=value` echo of the configuration, sufficient to re-run.
void write_manifest(const SuiteConfig& cfg, const std::filesystem::path& path);
SuiteConfig parse_manifest(const std::filesystem::path& path);

}  // namespace idlab
