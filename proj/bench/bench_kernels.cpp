// Serial vs OpenMP word enumeration. Both policies do the same multiplications,
// so any difference is scheduling overhead or parallel speedup.

#include <random>

#include <benchmark/benchmark.h>

#include "qreach/decision.hpp"
#include "qreach/kernels.hpp"

namespace {

using qreach::CMatrix;
using qreach::Exec;

std::vector<CMatrix> letters(int n, int dim) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<CMatrix> out;
  for (int i = 0; i < n; ++i) {
    CMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = {g(rng), g(rng)};
    out.push_back(m / (2.0 * dim));
  }
  return out;
}

Exec policy(const benchmark::State& state) { return state.range(0) == 0 ? Exec::kSerial : Exec::kParallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

// Norm of every product of length 8 over 3 letters (dim 9: a 3-dim T).
void BM_ProductNorms(benchmark::State& state) {
  const auto ls = letters(3, 9);
  for (auto _ : state) {
    auto v = qreach::word_product_map(
        ls, 8, [](const qreach::LetterWord&, const CMatrix& p) { return p.norm(); }, policy(state));
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * 6561);
  label(state);
}
BENCHMARK(BM_ProductNorms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Full scan with no hit: the fixed-point test used by the bounded check.
void BM_FixedPointScan(benchmark::State& state) {
  const auto ls = letters(2, 9);
  const CMatrix id = CMatrix::Identity(9, 9);
  for (auto _ : state) {
    auto w = qreach::first_word_where(
        ls, 12, [&](const qreach::LetterWord&, const CMatrix& p) { return qreach::null_space(p - id).cols() > 0; },
        policy(state));
    benchmark::DoNotOptimize(w);
  }
  state.SetItemsProcessed(state.iterations() * 4096);
  label(state);
}
BENCHMARK(BM_FixedPointScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Spectral radius table up to k = 10 over two 9x9 letters.
void BM_JsrBounds(benchmark::State& state) {
  const auto ls = letters(2, 9);
  for (auto _ : state) {
    auto r = qreach::jsr_bounds(ls, 10, 1000000, {}, policy(state));
    benchmark::DoNotOptimize(r.rows.data());
  }
  label(state);
}
BENCHMARK(BM_JsrBounds)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
