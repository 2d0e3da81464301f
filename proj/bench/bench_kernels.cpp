#include <benchmark/benchmark.h>

#include <random>

#include "eagle/datagen.hpp"
#include "eagle/graph.hpp"
#include "eagle/kernels.hpp"

using namespace eagle;

namespace {

Matrix random_matrix(Index r, Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  return m;
}

const SparseCsr& incidence() {
  static const SparseCsr b = [] {
    SyntheticSpec s;
    s.num_u = 2000;
    s.num_v = 1000;
    s.num_edges = 40000;
    return combined_incidence(build_incidence(gen_synthetic(s)), 0.5);
  }();
  return b;
}

template <Matrix (*F)(const SparseCsr&, const Matrix&)>
void BM_Spmm(benchmark::State& st) {
  const SparseCsr bt = incidence().transpose();
  const Matrix h = random_matrix(bt.cols(), st.range(0), 1);
  for (auto _ : st) benchmark::DoNotOptimize(F(bt, h));
}

template <Matrix (*F)(const Matrix&, const Matrix&)>
void BM_Gemm(benchmark::State& st) {
  const Matrix a = random_matrix(st.range(0), 32, 1), b = random_matrix(32, 256, 2);
  for (auto _ : st) benchmark::DoNotOptimize(F(a, b));
}

template <Matrix (*F)(const Matrix&, const Matrix&, double)>
void BM_LowRank(benchmark::State& st) {
  const Matrix q = random_matrix(st.range(0), 256, 1), h = random_matrix(st.range(0), 256, 2);
  for (auto _ : st) benchmark::DoNotOptimize(F(q, h, 0.5));
}

template <Matrix (*F)(const Matrix&)>
void BM_Sigmoid(benchmark::State& st) {
  const Matrix x = random_matrix(st.range(0), 256, 3);
  for (auto _ : st) benchmark::DoNotOptimize(F(x));
}

}  // namespace

BENCHMARK(BM_Spmm<kernels::spmm>)->Name("spmm/parallel")->Arg(32)->Arg(256);
BENCHMARK(BM_Spmm<kernels::serial::spmm>)->Name("spmm/serial")->Arg(32)->Arg(256);
BENCHMARK(BM_Gemm<kernels::gemm>)->Name("gemm/parallel")->Arg(4000)->Arg(40000);
BENCHMARK(BM_Gemm<kernels::serial::gemm>)->Name("gemm/serial")->Arg(4000)->Arg(40000);
BENCHMARK(BM_LowRank<kernels::lowrank_apply>)->Name("lowrank_apply/parallel")->Arg(4000);
BENCHMARK(BM_LowRank<kernels::serial::lowrank_apply>)->Name("lowrank_apply/serial")->Arg(4000);
BENCHMARK(BM_Sigmoid<kernels::sigmoid>)->Name("sigmoid/parallel")->Arg(40000);
BENCHMARK(BM_Sigmoid<kernels::serial::sigmoid>)->Name("sigmoid/serial")->Arg(40000);

BENCHMARK_MAIN();
