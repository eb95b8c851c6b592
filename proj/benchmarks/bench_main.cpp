#include <benchmark/benchmark.h>

#include "qibg/bigcell.hpp"
#include "qibg/decompose.hpp"
#include "qibg/rootsys.hpp"

namespace {

using namespace qibg;

// Arguments: n, word length.
void BM_ColumnMajor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  UnimodularMatrix gamma = random_word(n, static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_column_major(gamma));
}
BENCHMARK(BM_ColumnMajor)->ArgsProduct({{3, 5, 8}, {10, 40, 160}});

void BM_Clockwise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  UnimodularMatrix gamma = random_word(n, static_cast<std::size_t>(state.range(1)), 1);
  TypeAOrdering ord = sample_type_a_ordering(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_clockwise(gamma, ord));
}
BENCHMARK(BM_Clockwise)->ArgsProduct({{3, 5}, {10, 40}});

void BM_Verify(benchmark::State& state) {
  UnimodularMatrix gamma = random_word(5, static_cast<std::size_t>(state.range(0)), 2);
  Factorization f = decompose_column_major(gamma);
  for (auto _ : state) benchmark::DoNotOptimize(verify(gamma, f));
}
BENCHMARK(BM_Verify)->Arg(10)->Arg(40)->Arg(160);

void BM_GcdTransform(benchmark::State& state) {
  mpz_class a, b;
  mpz_ui_pow_ui(a.get_mpz_t(), 3, static_cast<unsigned long>(state.range(0)));
  mpz_ui_pow_ui(b.get_mpz_t(), 7, static_cast<unsigned long>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gcd_transform(a, b));
}
BENCHMARK(BM_GcdTransform)->Arg(20)->Arg(200)->Arg(2000);

void BM_UlFactorize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RationalMatrix g;
  for (std::uint64_t seed = 0;; ++seed) {
    g = to_rational(random_word(n, 30, seed).matrix());
    if (in_big_cell(g)) break;
  }
  for (auto _ : state) benchmark::DoNotOptimize(ul_factorize(g));
}
BENCHMARK(BM_UlFactorize)->Arg(3)->Arg(5)->Arg(8);

void BM_NotationInvariants(benchmark::State& state) {
  static const std::vector<std::pair<Family, int>> systems = {{Family::A, 4}, {Family::F4, 4}, {Family::E8, 8}};
  const auto [family, rank] = systems.at(static_cast<std::size_t>(state.range(0)));
  RootSystem rs = RootSystem::build(family, rank);
  Projection p = sample_projection(rs, 1);
  state.SetLabel(rs.name());
  for (auto _ : state) benchmark::DoNotOptimize(verify_notation_invariants(rs, p));
}
BENCHMARK(BM_NotationInvariants)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_BuildE8(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(RootSystem::build(Family::E8, 8));
}
BENCHMARK(BM_BuildE8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
