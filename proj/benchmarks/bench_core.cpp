// Microbenchmarks for the hot paths: encoding generation, swap matrices,
// batch forward/backward, optimizer updates, and a short end-to-end training
// run. Sizes mirror the experiment grid (52-dim inputs, width-256 layers,
// 72-word batches).

#include <benchmark/benchmark.h>

#include "idlab/harness.hpp"
#include "idlab/invariance.hpp"

using namespace idlab;

namespace {

EncodedBatch grid_batch(const Encoding& enc) {
  return encode_dataset(enc, build_training_set(99));
}

Architecture one_hidden() {
  Architecture arch;
  arch.hidden = {256};
  return arch;
}

void bench_haar_encoding(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(haar_encoding(seed++).letter_codes);
}
BENCHMARK(bench_haar_encoding);

void bench_jactive_encoding(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(j_active_binary_encoding(seed++, 3).letter_codes);
}
BENCHMARK(bench_jactive_encoding);

void bench_swap_matrix(benchmark::State& state) {
  const Encoding enc = haar_encoding(7);
  for (auto _ : state) benchmark::DoNotOptimize(swap_matrix(enc).matrix);
}
BENCHMARK(bench_swap_matrix);

void bench_encode_dataset(benchmark::State& state) {
  const Encoding enc = haar_encoding(7);
  const LabeledDataset data = build_training_set(99);
  for (auto _ : state) benchmark::DoNotOptimize(encode_dataset(enc, data).inputs);
}
BENCHMARK(bench_encode_dataset);

void bench_forward_batch(benchmark::State& state) {
  const EncodedBatch batch = grid_batch(haar_encoding(7));
  Rng rng(1);
  const MlpParams p = init_params(one_hidden(), rng, 0.0025);
  for (auto _ : state) benchmark::DoNotOptimize(forward_batch(p, batch.inputs));
}
BENCHMARK(bench_forward_batch);

void bench_backprop(benchmark::State& state) {
  const EncodedBatch batch = grid_batch(haar_encoding(7));
  Rng rng(1);
  const MlpParams p = init_params(one_hidden(), rng, 0.0025);
  for (auto _ : state) benchmark::DoNotOptimize(backprop_grad(p, batch, 0.0).weights);
}
BENCHMARK(bench_backprop);

void bench_adam_step(benchmark::State& state) {
  const EncodedBatch batch = grid_batch(haar_encoding(7));
  Rng rng(1);
  MlpParams p = init_params(one_hidden(), rng, 0.0025);
  const MlpGrad g = backprop_grad(p, batch, 0.0);
  OptimizerState opt = OptimizerState::zeros_like(p);
  TrainConfig cfg;
  for (auto _ : state) {
    optimizer_step(opt, p, g, cfg);
    benchmark::DoNotOptimize(p.weights);
  }
}
BENCHMARK(bench_adam_step);

void bench_train_50_epochs(benchmark::State& state) {
  const Encoding enc = haar_encoding(7);
  const LabeledDataset data = build_training_set(99);
  TrainConfig cfg;
  cfg.epochs = 50;
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(train(data, enc, one_hidden(), cfg, rng).params.weights);
  }
}
BENCHMARK(bench_train_50_epochs)->Unit(benchmark::kMillisecond);

void bench_logistic_train(benchmark::State& state) {
  const Encoding enc = one_hot_encoding();
  const LabeledDataset data = build_training_set(99);
  for (auto _ : state)
    benchmark::DoNotOptimize(logistic_model_train(data, enc, 1e-2, 1e-6).weights);
}
BENCHMARK(bench_logistic_train)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
