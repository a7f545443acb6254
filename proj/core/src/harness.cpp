#include "idlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "idlab/csv.hpp"
#include "idlab/rng.hpp"

namespace idlab {

namespace {

const char* const kRatingColumns[] = {"AA", "xy", "YY", "ZZ", "YZ", "ZY", "xY", "xZ"};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

std::string EncodingToken::str() const {
  switch (kind) {
    case EncodingKind::OneHot:
      return "onehot";
    case EncodingKind::DenseBinary:
      return "binary";
    case EncodingKind::JActiveBinary:
      return "jactive" + std::to_string(j);
    case EncodingKind::Haar:
      return "haar";
  }
  throw std::logic_error("EncodingToken::str: bad kind");
}

EncodingToken EncodingToken::parse(const std::string& token) {
  if (token == "onehot") return {EncodingKind::OneHot};
  if (token == "binary") return {EncodingKind::DenseBinary};
  if (token == "haar") return {EncodingKind::Haar};
  if (token.rfind("jactive", 0) == 0) {
    EncodingToken t{EncodingKind::JActiveBinary};
    const std::string digits = token.substr(7);
    if (!digits.empty()) {
      std::size_t used = 0;
      try {
        t.j = std::stoi(digits, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != digits.size() || t.j < 1 || t.j > kAlphabetSize)
        throw std::invalid_argument("bad encoding token: " + token);
    }
    return t;
  }
  throw std::invalid_argument("bad encoding token: " + token);
}

Encoding EncodingToken::instantiate(std::uint64_t seed) const {
  switch (kind) {
    case EncodingKind::OneHot:
      return one_hot_encoding();
    case EncodingKind::DenseBinary:
      return dense_binary_encoding(seed);
    case EncodingKind::JActiveBinary:
      return j_active_binary_encoding(seed, j);
    case EncodingKind::Haar:
      return haar_encoding(seed);
  }
  throw std::logic_error("EncodingToken::instantiate: bad kind");
}

std::uint64_t derive_seed(std::uint64_t master_seed, int encoding_index, int arch_index,
                          int repetition_index, StreamTag tag) {
  std::uint64_t h = mix_seed(master_seed, static_cast<std::uint64_t>(tag));
  switch (tag) {
    case StreamTag::TrainingData:
      break;  // shared across encodings and architectures
    case StreamTag::WeightInit:
      h = mix_seed(h, static_cast<std::uint64_t>(arch_index));
      break;
    case StreamTag::EncodingGen:
      h = mix_seed(h, static_cast<std::uint64_t>(encoding_index));
      break;
  }
  return mix_seed(h, static_cast<std::uint64_t>(repetition_index));
}

TrainConfig SuiteConfig::train_config() const {
  TrainConfig cfg;
  cfg.optimizer = optimizer;
  cfg.learning_rate = learning_rate;
  cfg.beta1 = beta1;
  cfg.beta2 = beta2;
  cfg.epsilon = epsilon;
  cfg.epochs = epochs;
  cfg.lambda = lambda;
  cfg.init_sigma2 = init_sigma2;
  return cfg;
}

void validate(const SuiteConfig& cfg) {
  if (cfg.encodings.empty()) throw std::invalid_argument("suite: no encodings");
  if (cfg.layer_counts.empty()) throw std::invalid_argument("suite: no architectures");
  for (int l : cfg.layer_counts)
    if (l < 1) throw std::invalid_argument("suite: layer count must be >= 1");
  if (cfg.hidden_width < 1) throw std::invalid_argument("suite: hidden width must be >= 1");
  if (cfg.repetitions < 1) throw std::invalid_argument("suite: repetitions must be >= 1");
  if (cfg.loss_curve_epochs < 0)
    throw std::invalid_argument("suite: loss_curve_epochs must be >= 0");
  validate(cfg.train_config());
}

namespace {

CellResult run_cell(const SuiteConfig& cfg, int enc_i, int arch_i, int rep) {
  CellResult cell;
  cell.encoding_index = enc_i;
  cell.arch_index = arch_i;
  cell.repetition = rep;

  const LabeledDataset data = build_training_set(
      derive_seed(cfg.master_seed, enc_i, arch_i, rep, StreamTag::TrainingData));
  const Encoding enc = cfg.encodings[enc_i].instantiate(
      derive_seed(cfg.master_seed, enc_i, arch_i, rep, StreamTag::EncodingGen));

  Architecture arch;
  arch.hidden.assign(cfg.layer_counts[arch_i], cfg.hidden_width);
  Rng init_rng(derive_seed(cfg.master_seed, enc_i, arch_i, rep, StreamTag::WeightInit));
  const TrainResult trained = train(data, enc, arch, cfg.train_config(), init_rng);

  cell.training_words.reserve(data.size());
  for (const LabeledWord& lw : data.items) cell.training_words.push_back(lw.word);
  cell.first_negative = data.items[kAlphabetSize - 2].word;  // first drawn negative
  cell.rating_aa = predict(trained.params, enc, Word::parse("AA"));
  cell.rating_first_negative = predict(trained.params, enc, cell.first_negative);

  const ValidationSet val = build_validation_set();
  cell.validation_ratings.resize(static_cast<int>(val.size()));
  for (std::size_t i = 0; i < val.items.size(); ++i)
    cell.validation_ratings(static_cast<int>(i)) =
        predict(trained.params, enc, val.items[i].word);
  cell.history = trained.history;
  return cell;
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& cfg, int threads) {
  validate(cfg);
  if (threads < 0) throw std::invalid_argument("run_suite: threads must be >= 0");
  if (threads == 0)
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  struct CellCoord {
    int enc_i, arch_i, rep;
  };
  std::vector<CellCoord> coords;
  for (int e = 0; e < static_cast<int>(cfg.encodings.size()); ++e)
    for (int a = 0; a < static_cast<int>(cfg.layer_counts.size()); ++a)
      for (int r = 0; r < cfg.repetitions; ++r) coords.push_back({e, a, r});

  SuiteResult res;
  res.config = cfg;
  res.cells.resize(coords.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= coords.size()) return;
      const CellCoord c = coords[i];
      try {
        res.cells[i] = run_cell(cfg, c.enc_i, c.arch_i, c.rep);
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty())
          first_error = "cell (encoding=" + cfg.encodings[c.enc_i].str() +
                        ", layers=" + std::to_string(cfg.layer_counts[c.arch_i]) +
                        ", repetition=" + std::to_string(c.rep) + "): " + ex.what();
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw std::runtime_error("run_suite: " + first_error);
  return res;
}

std::vector<CellSummary> summarize(const SuiteResult& res) {
  if (res.cells.empty()) throw std::invalid_argument("summarize: empty result");
  const SuiteConfig& cfg = res.config;
  std::vector<CellSummary> out;

  for (int e = 0; e < static_cast<int>(cfg.encodings.size()); ++e) {
    for (int a = 0; a < static_cast<int>(cfg.layer_counts.size()); ++a) {
      std::vector<double> aa, xy;
      std::vector<Eigen::VectorXd> per_rep;
      for (const CellResult& cell : res.cells) {
        if (cell.encoding_index != e || cell.arch_index != a) continue;
        aa.push_back(cell.rating_aa);
        xy.push_back(cell.rating_first_negative);
        per_rep.push_back(cell.validation_ratings);
      }
      if (per_rep.empty()) throw std::logic_error("summarize: incomplete grid");

      CellSummary s;
      s.encoding = cfg.encodings[e].str();
      s.layers = cfg.layer_counts[a];
      const double aa_mean = mean_of(aa);
      const double xy_mean = mean_of(xy);
      s.columns.push_back({"AA", aa_mean, std_of(aa, aa_mean)});
      s.columns.push_back({"xy", xy_mean, std_of(xy, xy_mean)});
      if (per_rep.size() >= 2) {
        const GapReport gap = distributional_gap(per_rep);
        s.columns.insert(s.columns.end(), gap.columns.begin(), gap.columns.end());
        s.mean_gap = gap.mean_gap;
      } else {
        // Single repetition: degenerate stats, same column layout.
        const ValidationSet val = build_validation_set();
        auto pool = [&](std::initializer_list<ValidationColumn> cols) {
          std::vector<double> v;
          for (std::size_t i = 0; i < val.items.size(); ++i)
            for (ValidationColumn c : cols)
              if (val.items[i].column == c) v.push_back(per_rep[0](static_cast<int>(i)));
          return v;
        };
        for (ValidationColumn c : {ValidationColumn::YY, ValidationColumn::ZZ,
                                   ValidationColumn::YZ, ValidationColumn::ZY,
                                   ValidationColumn::xY, ValidationColumn::xZ}) {
          const auto v = pool({c});
          const double m = mean_of(v);
          s.columns.push_back({to_string(c), m, std_of(v, m)});
        }
        s.mean_gap = mean_of(pool({ValidationColumn::YY, ValidationColumn::ZZ})) -
                     mean_of(pool({ValidationColumn::YZ, ValidationColumn::ZY}));
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<CellSummary> summarize_ratings_csv(const std::filesystem::path& ratings_csv) {
  std::istringstream in(csv::read_file(ratings_csv));
  std::string line;
  if (!std::getline(in, line) || csv::split_line(line) !=
      std::vector<std::string>{"encoding", "arch", "repetition", "column", "word", "rating"})
    throw std::runtime_error("summarize: bad ratings header in " + ratings_csv.string());

  // Group key -> per-column values, pooled in file order (matching summarize()).
  std::vector<std::pair<std::string, int>> order;
  std::map<std::pair<std::string, int>, std::map<std::string, std::vector<double>>> groups;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = csv::split_line(line);
    if (fields.size() != 6)
      throw std::runtime_error("summarize: bad ratings row: " + line);
    const std::pair<std::string, int> key{fields[0], std::stoi(fields[1])};
    if (groups.find(key) == groups.end()) order.push_back(key);
    groups[key][fields[3]].push_back(std::stod(fields[5]));
  }
  if (order.empty()) throw std::runtime_error("summarize: no data rows");

  std::vector<CellSummary> out;
  for (const auto& key : order) {
    const auto& cols = groups[key];
    CellSummary s;
    s.encoding = key.first;
    s.layers = key.second;
    auto values = [&](const std::string& name) -> const std::vector<double>& {
      const auto it = cols.find(name);
      if (it == cols.end() || it->second.empty())
        throw std::runtime_error("summarize: missing column " + name + " for " + key.first);
      return it->second;
    };
    for (const char* name : kRatingColumns) {
      const auto& v = values(name);
      const double m = mean_of(v);
      s.columns.push_back({name, m, std_of(v, m)});
    }
    // distributional_gap pools repetition-major (YY then ZZ within each rep);
    // interleave the same way so the recomputed gap is bit-identical.
    auto pooled_mean = [&](const char* c1, const char* c2) {
      const auto& a = values(c1);
      const auto& b = values(c2);
      if (a.size() != b.size())
        throw std::runtime_error("summarize: ragged columns in " + key.first);
      std::vector<double> v;
      v.reserve(2 * a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        v.push_back(a[i]);
        v.push_back(b[i]);
      }
      return mean_of(v);
    };
    s.mean_gap = pooled_mean("YY", "ZZ") - pooled_mean("YZ", "ZY");
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary_csv(const std::vector<CellSummary>& summaries,
                       const std::filesystem::path& path) {
  std::string out = "encoding,arch,column,mean,std\n";
  for (const CellSummary& s : summaries)
    for (const ColumnStat& c : s.columns)
      out += s.encoding + "," + std::to_string(s.layers) + "," + c.column + "," +
             csv::format_double(c.mean) + "," + csv::format_double(c.stddev) + "\n";
  csv::write_file(path, out);
}

void emit_outputs(const SuiteResult& res, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const SuiteConfig& cfg = res.config;
  const ValidationSet val = build_validation_set();

  std::string ratings = "encoding,arch,repetition,column,word,rating\n";
  std::string losses = "encoding,arch,repetition,epoch,train_loss,val_loss\n";
  for (const CellResult& cell : res.cells) {
    const std::string prefix = cfg.encodings[cell.encoding_index].str() + "," +
                               std::to_string(cfg.layer_counts[cell.arch_index]) + "," +
                               std::to_string(cell.repetition) + ",";
    ratings += prefix + "AA,AA," + csv::format_double(cell.rating_aa) + "\n";
    ratings += prefix + "xy," + cell.first_negative.str() + "," +
               csv::format_double(cell.rating_first_negative) + "\n";
    for (std::size_t i = 0; i < val.items.size(); ++i)
      ratings += prefix + to_string(val.items[i].column) + "," + val.items[i].word.str() +
                 "," + csv::format_double(cell.validation_ratings(static_cast<int>(i))) + "\n";
    for (std::size_t e = 0; e < cell.history.train_loss.size(); ++e)
      losses += prefix + std::to_string(e + 1) + "," +
                csv::format_double(cell.history.train_loss[e]) + "," +
                csv::format_double(cell.history.val_loss[e]) + "\n";
  }
  csv::write_file(dir / "ratings.csv", ratings);
  csv::write_file(dir / "losses.csv", losses);
  write_summary_csv(summarize(res), dir / "summary.csv");
  write_manifest(cfg, dir / "manifest");
}

void write_manifest(const SuiteConfig& cfg, const std::filesystem::path& path) {
  std::string out;
  out += "artifact_version=1\n";
  out += "master_seed=" + std::to_string(cfg.master_seed) + "\n";
  std::string encs;
  for (const EncodingToken& t : cfg.encodings) {
    if (!encs.empty()) encs += ",";
    encs += t.str();
  }
  out += "encodings=" + encs + "\n";
  std::string layers;
  for (int l : cfg.layer_counts) {
    if (!layers.empty()) layers += ",";
    layers += std::to_string(l);
  }
  out += "layer_counts=" + layers + "\n";
  out += "hidden_width=" + std::to_string(cfg.hidden_width) + "\n";
  out += "repetitions=" + std::to_string(cfg.repetitions) + "\n";
  out += "epochs=" + std::to_string(cfg.epochs) + "\n";
  out += "loss_curve_epochs=" + std::to_string(cfg.loss_curve_epochs) + "\n";
  out += "optimizer=" + to_string(cfg.optimizer) + "\n";
  out += "learning_rate=" + csv::format_double(cfg.learning_rate) + "\n";
  out += "beta1=" + csv::format_double(cfg.beta1) + "\n";
  out += "beta2=" + csv::format_double(cfg.beta2) + "\n";
  out += "epsilon=" + csv::format_double(cfg.epsilon) + "\n";
  out += "lambda=" + csv::format_double(cfg.lambda) + "\n";
  out += "init_sigma2=" + csv::format_double(cfg.init_sigma2) + "\n";
  out += "output_dir=" + cfg.output_dir + "\n";
  csv::write_file(path, out);
}

SuiteConfig parse_manifest(const std::filesystem::path& path) {
  std::istringstream in(csv::read_file(path));
  SuiteConfig cfg;
  std::string line;
  auto split_list = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("manifest: bad line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "artifact_version") {
      if (value != "1") throw std::runtime_error("manifest: unsupported version " + value);
    } else if (key == "master_seed") {
      cfg.master_seed = std::stoull(value);
    } else if (key == "encodings") {
      cfg.encodings.clear();
      for (const std::string& tok : split_list(value))
        cfg.encodings.push_back(EncodingToken::parse(tok));
    } else if (key == "layer_counts") {
      cfg.layer_counts.clear();
      for (const std::string& tok : split_list(value)) cfg.layer_counts.push_back(std::stoi(tok));
    } else if (key == "hidden_width") {
      cfg.hidden_width = std::stoi(value);
    } else if (key == "repetitions") {
      cfg.repetitions = std::stoi(value);
    } else if (key == "epochs") {
      cfg.epochs = std::stoi(value);
    } else if (key == "loss_curve_epochs") {
      cfg.loss_curve_epochs = std::stoi(value);
    } else if (key == "optimizer") {
      cfg.optimizer = optimizer_from_string(value);
    } else if (key == "learning_rate") {
      cfg.learning_rate = std::stod(value);
    } else if (key == "beta1") {
      cfg.beta1 = std::stod(value);
    } else if (key == "beta2") {
      cfg.beta2 = std::stod(value);
    } else if (key == "epsilon") {
      cfg.epsilon = std::stod(value);
    } else if (key == "lambda") {
      cfg.lambda = std::stod(value);
    } else if (key == "init_sigma2") {
      cfg.init_sigma2 = std::stod(value);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      throw std::runtime_error("manifest: unknown key " + key);
    }
  }
  validate(cfg);
  return cfg;
}

}  // namespace idlab
