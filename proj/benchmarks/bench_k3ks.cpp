#include <benchmark/benchmark.h>

#include <random>

#include "k3ks/k3lattice.hpp"
#include "k3ks/kugasatake.hpp"

using namespace k3ks;

namespace {

std::shared_ptr<const QClifford> reference_algebra(RelationConvention c) {
  const auto f = SymCubicField::reference();
  return QClifford::make(relation_form(build_transcendental(f, f.b_basis()).D.gram(), c));
}

std::vector<QElt> reference_generators() {
  return build_generators(expand_f1f2(SymCubicField::reference(), reference_algebra(RelationConvention::quadratic_coefficients)))
      .as_vector();
}

void BM_CliffordMultiply(benchmark::State& state) {
  const auto alg = reference_algebra(RelationConvention::quadratic_coefficients);
  const auto g = reference_generators();
  const QElt x = g[0] * g[3], y = g[1] * g[7];
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_CliffordMultiply);

void BM_Words(benchmark::State& state) {
  const auto g = reference_generators();
  const auto policy = state.range(0) == 3 ? WordPolicy::three_fold() : WordPolicy::restricted_four_fold();
  for (auto _ : state) benchmark::DoNotOptimize(generate_words(g, policy));
}
BENCHMARK(BM_Words)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SpanRank(benchmark::State& state) {
  const auto words = generate_words(reference_generators(), WordPolicy::restricted_four_fold());
  for (auto _ : state) benchmark::DoNotOptimize(span_rank(words, 101));
}
BENCHMARK(BM_SpanRank)->Unit(benchmark::kMillisecond);

void BM_Closure(benchmark::State& state) {
  const auto g = reference_generators();
  const auto fp = FpClifford::make(g[0].algebra()->gram(), PrimeField(101));
  std::vector<FpElt> gp;
  for (const auto& x : g) gp.push_back(reduce_mod_p(x, fp));
  for (auto _ : state) benchmark::DoNotOptimize(closure_basis(gp));
}
BENCHMARK(BM_Closure)->Unit(benchmark::kMillisecond);

void BM_HilbertSymbol(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<std::pair<Rational, Rational>> pairs;
  for (int i = 0; i < 256; ++i)
    pairs.emplace_back(Rational(static_cast<long>(rng() % 20000) + 1), Rational(-static_cast<long>(rng() % 20000) - 1));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(hilbert_symbol(a, b, Place::prime(2)) * hilbert_symbol(a, b, Place::prime(3)));
  }
}
BENCHMARK(BM_HilbertSymbol);

void BM_Complement(benchmark::State& state) {
  const QForm q1 = QForm::diagonal({3, -5, 7});
  const QForm q2 = QForm::diagonal({1, 1, 2, -1, -3, -11, 13, -1});
  for (auto _ : state) benchmark::DoNotOptimize(complement_for_embedding(q1, q2));
}
BENCHMARK(BM_Complement)->Unit(benchmark::kMicrosecond);

void BM_FieldRoots(benchmark::State& state) {
  const auto f = SymCubicField::reference();
  const auto bits = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(f.roots(bits));
}
BENCHMARK(BM_FieldRoots)->Arg(64)->Arg(256);

void BM_Period(benchmark::State& state) {
  const auto f = SymCubicField::reference();
  const auto space = build_transcendental(f, search_prop33(f).f);
  const Rational t = default_period_parameter(space);
  for (auto _ : state) benchmark::DoNotOptimize(solve_period(space, t, 128));
}
BENCHMARK(BM_Period)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
