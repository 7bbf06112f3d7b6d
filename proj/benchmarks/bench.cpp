#include <benchmark/benchmark.h>

#include "nctwist/breaking.hpp"
#include "nctwist/fluct.hpp"
#include "nctwist/models.hpp"
#include "nctwist/rng.hpp"
#include "nctwist/triple.hpp"

namespace {

using namespace nctwist;

void bm_verify_toy(benchmark::State& state) {
  TwistedTriple t = build_toy(Complex(1.0, 0.0), Complex(1.0, 0.0));
  for (auto _ : state) {
    ConditionReport rep = verify_axioms(t);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(bm_verify_toy);

void bm_break_toy(benchmark::State& state) {
  TwistedTriple t = build_toy(Complex(1.0, 0.0), Complex(1.0, 0.0));
  for (auto _ : state) {
    BreakReport rep = breaking_fixed_point(t);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(bm_break_toy);

void bm_fluctuate_toy(benchmark::State& state) {
  TwistedTriple t = build_toy(Complex(1.0, 0.0), Complex(1.0, 0.0));
  OneForm omega = build_one_form(t.algebra, random_generator_pairs(t.algebra, 3, 11), true);
  for (auto _ : state) {
    TwistedTriple out = fluctuate(t, omega);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(bm_fluctuate_toy);

void bm_commutant_toy(benchmark::State& state) {
  TwistedTriple t = build_toy(Complex(1.0, 0.0), Complex(1.0, 0.0));
  for (auto _ : state) {
    RealSubspace c = commutant(t.algebra.rep_basis);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(bm_commutant_toy);

}  // namespace

BENCHMARK_MAIN();
