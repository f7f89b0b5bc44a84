#include <benchmark/benchmark.h>

#include "pisim/construct.hpp"
#include "pisim/jordan.hpp"
#include "pisim/projections.hpp"
#include "pisim/random.hpp"

namespace {

using namespace pisim;

// Nilpotent-heavy input: J_k(0) blocks mixed with semisimple eigenvalues,
// conjugated by a well-conditioned similarity.
ComplexMat defective_matrix(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<JordanEigenBlocks> blocks{{0.0, {}}};
  int left = n;
  while (left > 0) {
    const int size = std::min(left, 3);
    blocks.front().sizes.push_back(size);
    left -= size;
    if (left > 0) {
      blocks.push_back({std::polar(0.5, 0.7 * static_cast<double>(blocks.size())), {1}});
      --left;
    }
  }
  const JordanSpec spec = JordanSpec::canonical(std::move(blocks));
  const ComplexMat s = random_similarity(rng, n, 10.0);
  return s * jordan_matrix(spec) * inverse(s);
}

void BM_JordanStructure(benchmark::State& state) {
  const ComplexMat a = defective_matrix(static_cast<int>(state.range(0)), 1);
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(jordan_structure(a, tol));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_JordanStructure)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_JordanTransform(benchmark::State& state) {
  const ComplexMat a = defective_matrix(static_cast<int>(state.range(0)), 2);
  const Tolerances tol;
  const JordanSpec spec = jordan_structure(a, tol);
  for (auto _ : state) benchmark::DoNotOptimize(jordan_transform(a, spec, tol));
}
BENCHMARK(BM_JordanTransform)->RangeMultiplier(2)->Range(4, 64);

void BM_Superdiagonal(benchmark::State& state) {
  Rng rng(3);
  std::vector<Complex> xis(static_cast<std::size_t>(state.range(0) - 1));
  for (auto& x : xis) x = rng.in_annulus(0.0, 0.99);
  for (auto _ : state) benchmark::DoNotOptimize(superdiagonal_partial_isometry(xis));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Superdiagonal)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_Synthesize(benchmark::State& state) {
  Rng rng(4);
  const JordanSpec spec =
      random_admissible_spec(rng, {.n_max = static_cast<int>(state.range(0))});
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_partial_isometry(spec, tol));
  state.counters["n"] = spec.dimension();
}
BENCHMARK(BM_Synthesize)->Arg(8)->Arg(16);

void BM_CanonicalTwoProjections(benchmark::State& state) {
  Rng rng(5);
  const int n = static_cast<int>(state.range(0));
  const ComplexMat p = random_projection(rng, n, n / 2);
  const ComplexMat q = random_projection(rng, n, n / 3);
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(canonical_two_projections(p, q, tol));
}
BENCHMARK(BM_CanonicalTwoProjections)->RangeMultiplier(2)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
