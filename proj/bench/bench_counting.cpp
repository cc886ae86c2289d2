#include <benchmark/benchmark.h>

#include <omp.h>

#include "qms/counting.hpp"

using namespace qms;

namespace {

const GenusTwoCurve& curve() {
  static const GenusTwoCurve C = [] {
    const QuadField& K = QuadField::get(3);
    std::vector<QuadFraction> d{QuadFraction(K, 1),  QuadFraction(K, -8, -4), QuadFraction(K, 20, 20),
                                QuadFraction(K, -24, -16), QuadFraction(K, 20, -8), QuadFraction(K, 4, -32),
                                QuadFraction(K, 20, -8)};
    return GenusTwoCurve::from_descending(K, d, "C2");
  }();
  return C;
}

// Point count over one residue field, serial vs threaded.
void BM_CountSerial(benchmark::State& state) {
  const auto& K = curve().field();
  auto P = K.prime_by_label(static_cast<std::uint64_t>(state.range(0)), 0);
  auto F = ResidueField::of(P);
  omp_set_num_threads(1);
  for (auto _ : state) benchmark::DoNotOptimize(count_points(curve(), F));
  omp_set_num_threads(omp_get_num_procs());
}

void BM_CountParallel(benchmark::State& state) {
  const auto& K = curve().field();
  auto P = K.prime_by_label(static_cast<std::uint64_t>(state.range(0)), 0);
  auto F = ResidueField::of(P);
  omp_set_num_threads(omp_get_num_procs());
  for (auto _ : state) benchmark::DoNotOptimize(count_points(curve(), F));
}

// Plain double loop against the character sum, split primes.
void BM_CountReference(benchmark::State& state) {
  auto P = curve().field().prime_by_label(static_cast<std::uint64_t>(state.range(0)), 1);
  auto F = ResidueField::of(P);
  for (auto _ : state) benchmark::DoNotOptimize(count_points_reference(curve(), F));
}

void BM_CountFast(benchmark::State& state) {
  auto P = curve().field().prime_by_label(static_cast<std::uint64_t>(state.range(0)), 1);
  auto F = ResidueField::of(P);
  for (auto _ : state) benchmark::DoNotOptimize(count_points(curve(), F));
}

void BM_TraceTable(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_table(curve(), 3000, 500, jobs).records.size());
}

}  // namespace

// Inert primes of Q(sqrt(-3)): residue fields of size p^2.
BENCHMARK(BM_CountSerial)->Arg(293)->Arg(509)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountParallel)->Arg(293)->Arg(509)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountReference)->Arg(1009)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountFast)->Arg(1009)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TraceTable)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
