// idlab: identity-effect learning lab.
//
// Subcommands: run a full experiment grid, check the three invariance
// properties constructively, or rebuild the summary table from a previous
// run's ratings.csv. Every command is deterministic given --seed.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idlab/csv.hpp"
#include "idlab/harness.hpp"
#include "idlab/invariance.hpp"

namespace {

using namespace idlab;

struct CheckOptions {
  std::string encoding = "haar";
  int j = 3;
  bool j_given = false;
  int layers = 1;
  int width = 256;
  int epochs = 200;
  std::uint64_t seed = 0;
  std::string optimizer = "gd";
  double lr = 1e-3;
  double lambda = 0.0;
  double tol = 1e-7;
};

void add_check_flags(CLI::App* cmd, CheckOptions& o) {
  cmd->add_option("--encoding", o.encoding, "Letter encoding")
      ->check(CLI::IsMember({"onehot", "binary", "jactive", "haar"}));
  cmd->add_option("--j", o.j, "Active bits for the jactive encoding")
      ->check(CLI::Range(1, kAlphabetSize));
  cmd->add_option("--layers", o.layers, "Hidden layers")->check(CLI::Range(1, 8));
  cmd->add_option("--width", o.width, "Hidden width")->check(CLI::PositiveNumber);
  cmd->add_option("--epochs", o.epochs, "Full-batch steps")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--optimizer", o.optimizer, "Optimizer")
      ->check(CLI::IsMember({"gd", "adam"}));
  cmd->add_option("--lr", o.lr, "Learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", o.lambda, "First-layer L2 weight")
      ->check(CLI::NonNegativeNumber);
}

EncodingToken token_of(const std::string& encoding, int j) {
  EncodingToken t = EncodingToken::parse(encoding);
  if (t.kind == EncodingKind::JActiveBinary) t.j = j;
  return t;
}

Encoding encoding_of(const CheckOptions& o) {
  return token_of(o.encoding, o.j)
      .instantiate(derive_seed(o.seed, 0, 0, 0, StreamTag::EncodingGen));
}

TrainConfig train_config_of(const CheckOptions& o) {
  TrainConfig cfg;
  cfg.optimizer = optimizer_from_string(o.optimizer);
  cfg.learning_rate = o.lr;
  cfg.epochs = o.epochs;
  cfg.lambda = o.lambda;
  return cfg;
}

Architecture arch_of(const CheckOptions& o) {
  Architecture arch;
  arch.hidden.assign(o.layers, o.width);
  return arch;
}

void print_summary_table(const std::vector<CellSummary>& summaries) {
  std::printf("%-10s %-6s", "encoding", "arch");
  for (const ColumnStat& c : summaries.front().columns)
    std::printf(" %10s", c.column.c_str());
  std::printf(" %10s\n", "gap");
  for (const CellSummary& s : summaries) {
    std::printf("%-10s %-6d", s.encoding.c_str(), s.layers);
    for (const ColumnStat& c : s.columns) std::printf(" %10.4f", c.mean);
    std::printf(" %10.4f\n", s.mean_gap);
  }
}

int cmd_run(const SuiteConfig& cfg, int threads) {
  const SuiteResult res = run_suite(cfg, threads);
  emit_outputs(res, cfg.output_dir);
  print_summary_table(summarize(res));
  for (const char* name : {"ratings.csv", "summary.csv", "losses.csv", "manifest"})
    std::cout << "wrote " << (std::filesystem::path(cfg.output_dir) / name).string() << "\n";
  return 0;
}

int cmd_check_coupling(const CheckOptions& o, const std::string& out_dir) {
  const LabeledDataset data =
      build_training_set(derive_seed(o.seed, 0, 0, 0, StreamTag::TrainingData));
  const CouplingReport r =
      coupled_train_pair(data, encoding_of(o), arch_of(o), train_config_of(o), o.seed);
  const std::string csv_text =
      "encoding,optimizer,steps,param_residual,output_residual\n" + o.encoding + "," +
      to_string(r.optimizer) + "," + std::to_string(r.steps) + "," +
      csv::format_double(r.max_param_residual) + "," +
      csv::format_double(r.max_output_residual) + "\n";
  std::cout << csv_text;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    csv::write_file(std::filesystem::path(out_dir) / "coupling.csv", csv_text);
  }
  if (r.max_param_residual >= o.tol || r.max_output_residual >= o.tol) {
    std::cerr << "coupling check failed: residuals exceed tol " << o.tol << "\n";
    return 1;
  }
  return 0;
}

int cmd_check_impossibility(const CheckOptions& o) {
  const double gap =
      rating_impossibility_coupled(encoding_of(o), arch_of(o), train_config_of(o), o.seed);
  std::cout << "encoding=" << o.encoding << " optimizer=" << o.optimizer
            << " |L(D,YZ)-L(D,YY)| = " << csv::format_double(gap) << "\n";
  if (gap >= o.tol) {
    std::cerr << "impossibility check failed: gap " << gap << " exceeds tol " << o.tol
              << "\n";
    return 1;
  }
  return 0;
}

int cmd_check_convex(const CheckOptions& o, double grad_tol) {
  const std::optional<double> gap =
      convex_invariance_check(encoding_of(o), o.lambda, grad_tol, o.seed);
  if (!gap) {
    std::cerr << "convex check skipped: lambda = 0 has no unique minimizer\n";
    return 1;
  }
  std::cout << "encoding=" << o.encoding << " lambda=" << o.lambda
            << " max|L(tau(D),tau(w))-L(D,w)| = " << csv::format_double(*gap) << "\n";
  if (*gap >= o.tol) {
    std::cerr << "convex check failed: gap " << *gap << " exceeds tol " << o.tol << "\n";
    return 1;
  }
  return 0;
}

int cmd_summarize(const std::string& dir) {
  const auto ratings = std::filesystem::path(dir) / "ratings.csv";
  const std::vector<CellSummary> summaries = summarize_ratings_csv(ratings);
  write_summary_csv(summaries, std::filesystem::path(dir) / "summary.csv");
  print_summary_table(summaries);
  std::cout << "wrote " << (std::filesystem::path(dir) / "summary.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idlab: identity-effect learning laboratory"};
  app.require_subcommand(1);

  // --- run ----------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Train the experiment grid and emit CSVs");
  std::string manifest_path;
  std::vector<std::string> encodings;
  std::vector<int> layer_counts;
  int width = 256, epochs = 0, reps = 0, threads = 1;
  std::uint64_t seed = 0;
  std::string optimizer, out_dir;
  double lr = 0.0, lambda = 0.0;
  int jactive_j = 3;
  auto* m_opt = run->add_option("--manifest", manifest_path,
                                "Re-run the configuration echoed in a manifest file");
  auto* e_opt = run->add_option("--encoding", encodings,
                                "Encodings (repeatable): onehot|binary|jactive|haar");
  auto* j_opt =
      run->add_option("--j", jactive_j, "Active bits for jactive")->check(CLI::Range(1, 26));
  auto* l_opt = run->add_option("--layers", layer_counts, "Hidden layer counts (repeatable)");
  auto* w_opt = run->add_option("--width", width, "Hidden width")->check(CLI::PositiveNumber);
  auto* ep_opt = run->add_option("--epochs", epochs, "Epochs")->check(CLI::NonNegativeNumber);
  auto* r_opt = run->add_option("--reps", reps, "Repetitions")->check(CLI::PositiveNumber);
  auto* s_opt = run->add_option("--seed", seed, "Master seed");
  auto* o_opt = run->add_option("--optimizer", optimizer, "Optimizer")
                    ->check(CLI::IsMember({"gd", "adam"}));
  auto* lr_opt = run->add_option("--lr", lr, "Learning rate")->check(CLI::PositiveNumber);
  auto* la_opt = run->add_option("--lambda", lambda, "First-layer L2 weight")
                     ->check(CLI::NonNegativeNumber);
  auto* od_opt = run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "Worker threads (0 = hardware)")
      ->check(CLI::NonNegativeNumber);

  // --- check --------------------------------------------------------------
  auto* check = app.add_subcommand("check", "Constructive invariance checks");
  check->require_subcommand(1);
  CheckOptions coupling_opts, impossibility_opts, convex_opts;
  std::string coupling_out;

  auto* coupling = check->add_subcommand(
      "coupling", "Coupled trajectories: init B = init A x T, data B = tau(data A)");
  add_check_flags(coupling, coupling_opts);
  coupling->add_option("--tol", coupling_opts.tol, "Residual tolerance")
      ->check(CLI::PositiveNumber);
  coupling->add_option("--out", coupling_out, "Directory for coupling.csv");

  auto* impossibility = check->add_subcommand(
      "impossibility", "Rating impossibility: |L(D,YZ) - L(D,YY)| on swap-fixed data");
  add_check_flags(impossibility, impossibility_opts);
  impossibility->add_option("--tol", impossibility_opts.tol, "Gap tolerance")
      ->check(CLI::PositiveNumber);

  auto* convex = check->add_subcommand(
      "convex", "Unique-minimizer invariance of the regularized logistic model");
  convex_opts.lambda = 1e-2;
  convex_opts.tol = 1e-6;
  double convex_grad_tol = 1e-10;
  convex->add_option("--encoding", convex_opts.encoding, "Letter encoding")
      ->check(CLI::IsMember({"onehot", "binary", "jactive", "haar"}));
  convex->add_option("--j", convex_opts.j, "Active bits for the jactive encoding")
      ->check(CLI::Range(1, kAlphabetSize));
  convex->add_option("--seed", convex_opts.seed, "Master seed");
  convex->add_option("--lambda", convex_opts.lambda, "L2 weight (must be > 0)")
      ->check(CLI::NonNegativeNumber);
  convex->add_option("--grad-tol", convex_grad_tol, "Gradient convergence tolerance")
      ->check(CLI::PositiveNumber);
  convex->add_option("--tol", convex_opts.tol, "Invariance gap tolerance")
      ->check(CLI::PositiveNumber);

  // --- summarize ------------------------------------------------------------
  auto* summarize_cmd =
      app.add_subcommand("summarize", "Rebuild summary.csv from <dir>/ratings.csv");
  std::string summarize_dir = "out";
  summarize_cmd->add_option("dir", summarize_dir, "Run output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      SuiteConfig cfg;
      if (m_opt->count()) cfg = parse_manifest(manifest_path);
      if (e_opt->count()) {
        cfg.encodings.clear();
        for (const std::string& e : encodings)
          cfg.encodings.push_back(EncodingToken::parse(e));
      }
      if (j_opt->count())
        for (EncodingToken& t : cfg.encodings)
          if (t.kind == EncodingKind::JActiveBinary) t.j = jactive_j;
      if (l_opt->count()) cfg.layer_counts = layer_counts;
      if (w_opt->count()) cfg.hidden_width = width;
      if (ep_opt->count()) cfg.epochs = epochs;
      if (r_opt->count()) cfg.repetitions = reps;
      if (s_opt->count()) cfg.master_seed = seed;
      if (o_opt->count()) cfg.optimizer = optimizer_from_string(optimizer);
      if (lr_opt->count()) cfg.learning_rate = lr;
      if (la_opt->count()) cfg.lambda = lambda;
      if (od_opt->count()) cfg.output_dir = out_dir;
      return cmd_run(cfg, threads);
    }
    if (coupling->parsed()) return cmd_check_coupling(coupling_opts, coupling_out);
    if (impossibility->parsed()) return cmd_check_impossibility(impossibility_opts);
    if (convex->parsed()) return cmd_check_convex(convex_opts, convex_grad_tol);
    if (summarize_cmd->parsed()) return cmd_summarize(summarize_dir);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
