#include <benchmark/benchmark.h>

#include <random>

#include "lnr/constructions.hpp"
#include "lnr/search.hpp"

namespace lnr {
  namespace {

    template <class Group>
    std::vector<Coordinates> random_elems(Group const& g) {
      std::mt19937_64                     rng(1);
      std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(g.order() - 1));
      std::vector<Coordinates>            v(4096);
      for (auto& e : v) {
        e = g.coordinates(pick(rng));
      }
      return v;
    }

    // closed-form addition in H1(p)
    void BM_H1ClosedForm(benchmark::State& state) {
      H1Arith const h(static_cast<std::uint32_t>(state.range(0)));
      auto const    xs = random_elems(h);
      std::size_t   k  = 0;
      for (auto _ : state) {
        benchmark::DoNotOptimize(h.add(xs[k & 4095], xs[(k + 1) & 4095]));
        ++k;
      }
    }
    BENCHMARK(BM_H1ClosedForm)->Arg(5)->Arg(7)->Arg(11);

    // the same addition by collection in the pc presentation
    void BM_H1Collection(benchmark::State& state) {
      auto const  pres = build_presentation("h1", static_cast<std::uint32_t>(state.range(0)));
      auto const  xs   = random_elems(pres);
      std::size_t k    = 0;
      for (auto _ : state) {
        benchmark::DoNotOptimize(pres.add(xs[k & 4095], xs[(k + 1) & 4095]));
        ++k;
      }
    }
    BENCHMARK(BM_H1Collection)->Arg(5)->Arg(7)->Arg(11);

    // sampled associativity and distributivity sweep on the p=5 example
    void BM_SampledAxiomSweep(benchmark::State& state) {
      auto const    nr = build_example_nearring(5);
      VerifyOptions o;
      o.mode     = VerifyOptions::Mode::kSampled;
      o.samples  = 1'000'000;
      o.parallel = static_cast<unsigned>(state.range(0));
      for (auto _ : state) {
        benchmark::DoNotOptimize(verify_axioms(nr, o));
      }
      state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * o.samples));
    }
    BENCHMARK(BM_SampledAxiomSweep)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

    // exhaustive pairwise condition sweep for the p=5 maps
    void BM_LocalConditions(benchmark::State& state) {
      auto const maps = example1_maps(5);
      for (auto _ : state) {
        benchmark::DoNotOptimize(check_local_conditions(maps));
      }
    }
    BENCHMARK(BM_LocalConditions)->Unit(benchmark::kMillisecond);

    void BM_Search(benchmark::State& state, char const* name, bool local) {
      auto const    pres = build_presentation(name);
      SearchOptions o;
      o.require_local = local;
      for (auto _ : state) {
        benchmark::DoNotOptimize(search_local_nearrings(pres, o));
      }
    }
    BENCHMARK_CAPTURE(BM_Search, c16, "c16", true)->Unit(benchmark::kMillisecond);
    BENCHMARK_CAPTURE(BM_Search, d16, "d16", true)->Unit(benchmark::kMillisecond);
    BENCHMARK_CAPTURE(BM_Search, q16_all, "q16", false)->Unit(benchmark::kMillisecond);

  }  // namespace
}  // namespace lnr
BENCHMARK_MAIN();
