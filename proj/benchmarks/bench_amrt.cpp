#include <benchmark/benchmark.h>

#include <random>

#include "amrt/aanalytic.hpp"
#include "amrt/attenuation.hpp"
#include "amrt/pipeline.hpp"

namespace {

using namespace amrt;

const ScalarSpec kAttenuation{0.85, {{0.3, {0.1, -0.05}, 0.35}}};

TensorSampler phantom_sampler(std::uint64_t seed) {
  Phantom ph(random_phantom_spec(seed));
  return [ph](Vec2 x) { return ph(x); };
}

void BM_ForwardAll(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TensorSampler f = phantom_sampler(1);
  for (auto _ : state) {
    auto ms = forward_all(f, Attenuation::none(), Domain::disk(), {n, n, 1.0 / 128.0});
    benchmark::DoNotOptimize(ms.layers[0].data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ForwardAll)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CauchyOperator(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const Domain d = Domain::disk();
  const DomainGrid g(d, res);
  const int nb = 4 * res;
  SeqField b(nb, 32);
  for (int i = 0; i < nb; ++i) {
    const cplx z = d.boundary_point(kTwoPi * i / nb).as_complex();
    b.at(i, 0) = std::conj(z) * std::exp(z);
    b.at(i, 2) = -std::exp(z);
  }
  for (auto _ : state) {
    auto w = bukhgeim_cauchy(b, g);
    benchmark::DoNotOptimize(w.raw().data());
  }
}
BENCHMARK(BM_CauchyOperator)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AreaOperator(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const DomainGrid g(Domain::disk(), res);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  SeqField h(g.size(), 32);
  for (std::size_t i : g.inside_nodes())
    for (int n = 0; n <= 32; ++n) h.at(i, n) = {nd(rng), nd(rng)};
  for (auto _ : state) {
    auto t = pompeiu(h, g);
    benchmark::DoNotOptimize(t.raw().data());
  }
}
BENCHMARK(BM_AreaOperator)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_IntegratingFactor(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const Domain d = Domain::disk();
  const DomainGrid g(d, res);
  const Attenuation att = Attenuation::from_spec(kAttenuation, d);
  for (auto _ : state) {
    auto f = integrating_factor(att, g, 32);
    benchmark::DoNotOptimize(f.alpha(0));
  }
}
BENCHMARK(BM_IntegratingFactor)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ReconstructNonAttenuated(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const DomainGrid g(Domain::disk(), res);
  const auto ms = forward_all(phantom_sampler(1), Attenuation::none(), g.domain(), {128, 128, 1.0 / 64.0});
  ReconstructionOptions o;
  o.N = 24;
  for (auto _ : state) {
    auto r = reconstruct_nonattenuated(ms, g, o);
    benchmark::DoNotOptimize(r.fields.f1.data());
  }
}
BENCHMARK(BM_ReconstructNonAttenuated)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
