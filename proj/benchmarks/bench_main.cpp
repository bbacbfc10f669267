// Micro benchmarks for the exact-arithmetic hot paths: determinants, normal
// forms, p-adic symbols, the embedding pipeline, and the residue-ring index.
// All inputs are fixed (seeded) so runs are comparable across machines.

#include <benchmark/benchmark.h>

#include <random>

#include "latglue/aut.hpp"
#include "latglue/bianchi.hpp"
#include "latglue/genus.hpp"
#include "latglue/gluing.hpp"
#include "latglue/lattice.hpp"
#include "latglue/matrix.hpp"

namespace {

using namespace latglue;

// Symmetric nonsingular matrix with entries in [-10, 10], fixed seed.
IntMat random_gram(std::size_t dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> entry(-10, 10);
  for (;;) {
    IntMat g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) {
        g(i, j) = entry(rng);
        g(j, i) = g(i, j);
      }
    if (det_exact(g) != 0) return g;
  }
}

Lattice lorentz_diag(long k, std::size_t dim) {
  IntMat g = IntMat::identity(dim);
  g(0, 0) = -k;
  return Lattice::from_gram(g);
}

void bm_det_exact(benchmark::State& state) {
  IntMat g = random_gram(static_cast<std::size_t>(state.range(0)), 12345);
  for (auto _ : state) benchmark::DoNotOptimize(det_exact(g));
}
BENCHMARK(bm_det_exact)->Arg(4)->Arg(6)->Arg(8);

void bm_snf(benchmark::State& state) {
  IntMat g = random_gram(static_cast<std::size_t>(state.range(0)), 98765);
  for (auto _ : state) benchmark::DoNotOptimize(snf(g));
}
BENCHMARK(bm_snf)->Arg(4)->Arg(6)->Arg(8);

void bm_discriminant_group(benchmark::State& state) {
  Lattice l = Lattice::from_gram(random_gram(6, 24680));
  for (auto _ : state) benchmark::DoNotOptimize(discriminant_group(l));
}
BENCHMARK(bm_discriminant_group);

void bm_jordan_2adic(benchmark::State& state) {
  Lattice l = Lattice::from_gram(random_gram(6, 13579));
  for (auto _ : state) benchmark::DoNotOptimize(jordan_decompose(l, Int(2)));
}
BENCHMARK(bm_jordan_2adic);

void bm_oddity_formula(benchmark::State& state) {
  Lattice l = Lattice::from_gram(random_gram(6, 11111));
  for (auto _ : state) benchmark::DoNotOptimize(oddity_formula_check(l));
}
BENCHMARK(bm_oddity_formula);

void bm_genus_spec(benchmark::State& state) {
  Lattice l = Lattice::from_gram(random_gram(5, 22222));
  for (auto _ : state) benchmark::DoNotOptimize(genus_spec_of(l));
}
BENCHMARK(bm_genus_spec);

void bm_genus_exists(benchmark::State& state) {
  GenusSpec spec = genus_spec_of(Lattice::from_gram(random_gram(5, 22222)));
  for (auto _ : state) benchmark::DoNotOptimize(genus_exists(spec));
}
BENCHMARK(bm_genus_exists);

void bm_embed_unimodular(benchmark::State& state) {
  Lattice l = lorentz_diag(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(embed_unimodular(l, 300));
}
BENCHMARK(bm_embed_unimodular)->Arg(7)->Arg(15)->Arg(30);

void bm_verify_embedding(benchmark::State& state) {
  Embedding e = embed_unimodular(lorentz_diag(7, 4), 300);
  for (auto _ : state) benchmark::DoNotOptimize(verify_embedding(e));
}
BENCHMARK(bm_verify_embedding);

void bm_find_automorphisms(benchmark::State& state) {
  Lattice l = lorentz_diag(7, 4);
  long bound = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(find_automorphisms(l, bound));
}
BENCHMARK(bm_find_automorphisms)->Arg(1)->Arg(2);

void bm_check_level2_extension(benchmark::State& state) {
  Lattice l = lorentz_diag(7, 4);
  Embedding e = embed_unimodular(l, 300);
  std::vector<Int> v{Int(0), Int(1), Int(0), Int(0)};
  AutElement r = reflection(l, v);
  for (auto _ : state) benchmark::DoNotOptimize(check_level2_extension(e, r));
}
BENCHMARK(bm_check_level2_extension);

void bm_bianchi_index(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bianchi_index(state.range(0)));
}
BENCHMARK(bm_bianchi_index)->Arg(47);

}  // namespace

BENCHMARK_MAIN();
