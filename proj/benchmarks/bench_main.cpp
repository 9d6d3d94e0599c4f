#include <benchmark/benchmark.h>

#include <map>

#include "sptnoise/observables.hpp"

using namespace sptnoise;

namespace {

const SymmetricMps& z4_state(int D) {
  static std::map<int, SymmetricMps> cache;
  auto it = cache.find(D);
  if (it == cache.end()) it = cache.emplace(D, random_symmetric_mps(FiniteAbelianGroup::zn_squared(4), 1, D, 16, 0)).first;
  return it->second;
}

void BM_TransferRight(benchmark::State& st) {
  const auto& s = z4_state(static_cast<int>(st.range(0)));
  TransferMap map(s.tensor, s.rep.at(5));
  const int D = s.tensor.D();
  CMatrix r = CMatrix::Identity(D, D);
  for (auto _ : st) {
    r = map.right(r);
    r /= r.norm();
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_TransferRight)->Arg(4)->Arg(8)->Arg(16);

void BM_LeadingEigenpair(benchmark::State& st) {
  const auto& s = z4_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(leading_transfer_eig(s.tensor, s.rep.at(5)));
}
BENCHMARK(BM_LeadingEigenpair)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SpectralGap(benchmark::State& st) {
  const auto& s = z4_state(16);
  const CMatrix id = CMatrix::Identity(16, 16);
  for (auto _ : st) benchmark::DoNotOptimize(leading_transfer_eig(s.tensor, id, true));
}
BENCHMARK(BM_SpectralGap)->Unit(benchmark::kMillisecond);

void BM_Generator(benchmark::State& st) {
  auto g = FiniteAbelianGroup::zn_squared(4);
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(random_symmetric_mps(g, 1, static_cast<int>(st.range(0)), 16, seed++));
}
BENCHMARK(BM_Generator)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_PatternExtract(benchmark::State& st) {
  const auto& s = z4_state(static_cast<int>(st.range(0)));
  auto ch = liouville(k_ss(1));
  for (auto _ : st) benchmark::DoNotOptimize(pattern_extract(s, ch));
}
BENCHMARK(BM_PatternExtract)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_EvolveLindbladian(benchmark::State& st) {
  auto lb = coser();
  for (auto _ : st) benchmark::DoNotOptimize(evolve(lb, 1.0));
}
BENCHMARK(BM_EvolveLindbladian)->Unit(benchmark::kMicrosecond);

void BM_EvolvedString(benchmark::State& st) {
  auto s = aklt();
  auto ch = liouville(dephasing(0.5));
  auto g = s.rep.group();
  StringSpec spec{g.element({1, 1}), spin1('z'), spin1('z'), static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(evolved_string_expectation(s, ch, spec));
}
BENCHMARK(BM_EvolvedString)->Arg(8)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
