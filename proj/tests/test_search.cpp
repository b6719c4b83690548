#include <gtest/gtest.h>

#include <filesystem>

#include "brute.hpp"
#include "lnr/nearring.hpp"
#include "lnr/search.hpp"

namespace lnr {
  namespace {

    // Order-8 groups on s, r, r^2.
    PcPresentation d8() {
      PcPresentation pres("d8", 2, 3);
      pres.set_power(1, {0, 0, 1, 0});
      pres.set_commutator_tail(1, 0, {0, 0, 1, 0});
      return pres;
    }
    PcPresentation q8() {
      PcPresentation pres = d8();
      pres.set_power(0, {0, 0, 1, 0});
      return pres;
    }

    // Abelian and class-2 controls, several of which carry local nearrings.
    PcPresentation c2xc2() {
      return PcPresentation("c2xc2", 2, 2);
    }
    PcPresentation c9() {
      PcPresentation pres("c9", 3, 2);
      pres.set_power(0, {0, 1, 0, 0});
      return pres;
    }
    PcPresentation c4xc2() {
      PcPresentation pres("c4xc2", 2, 3);
      pres.set_power(0, {0, 0, 1, 0});
      return pres;
    }
    PcPresentation c2cubed() {
      return PcPresentation("c2^3", 2, 3);
    }
    PcPresentation c4xc4() {
      PcPresentation pres("c4xc4", 2, 4);
      pres.set_power(0, {0, 0, 1, 0});
      pres.set_power(1, {0, 0, 0, 1});
      return pres;
    }
    PcPresentation heisenberg27() {
      PcPresentation pres("heis27", 3, 3);
      pres.set_commutator_tail(1, 0, {0, 0, 2, 0});
      return pres;
    }

    std::vector<FoundNearring> run(PcPresentation const& pres, SearchOptions o) {
      auto const r = search_local_nearrings(pres, o);
      EXPECT_EQ(r.status, SearchStatus::kExhaustive);
      EXPECT_EQ(r.verification_failures, 0u);
      return r.results;
    }

    TEST(Endomorphisms, CountsMatchBruteForce) {
      for (auto const& pres :
           {d8(), q8(), build_presentation("c16"), build_presentation("d16"),
            build_presentation("qd16"), build_presentation("q16"), build_presentation("g81-7"),
            build_presentation("g81-10")}) {
        auto const endos = enumerate_endomorphisms(pres);
        EXPECT_EQ(endos.size(),
                  brute::count_endomorphisms_2gen(AdditiveGroup::from_presentation(pres)))
            << pres.name();
      }
    }

    TEST(Endomorphisms, KnownCounts) {
      EXPECT_EQ(enumerate_endomorphisms(build_presentation("c16")).size(), 16u);
      EXPECT_EQ(enumerate_endomorphisms(build_presentation("d16")).size(), 100u);
      EXPECT_EQ(enumerate_endomorphisms(d8()).size(), 36u);
      EXPECT_EQ(enumerate_endomorphisms(q8()).size(), 28u);
    }

    TEST(Endomorphisms, ImagesAreHomomorphisms) {
      auto const pres = build_presentation("qd16");
      auto const g    = AdditiveGroup::from_presentation(pres);
      for (auto const& e : enumerate_endomorphisms(pres)) {
        for (Elem x = 0; x < 16; ++x) {
          for (Elem y = 0; y < 16; ++y) {
            ASSERT_EQ(e.image[g.add(x, y)], g.add(e.image[x], e.image[y]));
          }
        }
      }
      EXPECT_THROW(enumerate_endomorphisms(build_presentation("h1", 5)), CapExceeded);
    }

    TEST(Search, IdentityCandidatesHaveExponentOrder) {
      EXPECT_EQ(identity_candidates(build_presentation("c16")).size(), 8u);
      EXPECT_EQ(identity_candidates(build_presentation("d16")).size(), 4u);
      EXPECT_EQ(identity_candidates(build_presentation("q16")).size(), 4u);
    }

    TEST(Search, NoLocalNearringsOnNonCyclicOrder16) {
      for (auto name : {"d16", "qd16", "q16"}) {
        auto const r = search_local_nearrings(build_presentation(name));
        EXPECT_EQ(r.status, SearchStatus::kExhaustive) << name;
        EXPECT_EQ(r.result_count, 0u) << name;
        EXPECT_EQ(r.endo_count, enumerate_endomorphisms(build_presentation(name)).size());
      }
    }

    TEST(Search, CyclicGivesMultiplicationModSixteen) {
      auto const pres = build_presentation("c16");
      auto const g    = AdditiveGroup::from_presentation(pres);
      auto const r    = search_local_nearrings(pres);
      ASSERT_EQ(r.status, SearchStatus::kExhaustive);
      ASSERT_EQ(r.result_count, 8u);
      ASSERT_EQ(r.candidates.size(), 8u);
      for (auto const& c : r.candidates) {
        EXPECT_EQ(c.results, 1u);
      }
      for (auto const& f : r.results) {
        EXPECT_TRUE(f.verified && f.local);
        unsigned const u = brute::c16_value(g, f.identity);
        unsigned       v = 1;
        while (u * v % 16 != 1) {
          ++v;
        }
        for (Elem x = 0; x < 16; ++x) {
          for (Elem y = 0; y < 16; ++y) {
            unsigned const fx  = brute::c16_value(g, x) * v % 16;
            unsigned const fy  = brute::c16_value(g, y) * v % 16;
            unsigned const fxy = brute::c16_value(g, f.table[x * 16 + y]) * v % 16;
            ASSERT_EQ(fxy, fx * fy % 16);
          }
        }
      }
    }

    TEST(Search, PruningAgreesWithGenerateAndTest) {
      for (auto const& pres : {d8(), q8(), c2xc2(), c9(), c4xc2(), build_presentation("c16")}) {
        for (bool local : {true, false}) {
          SearchOptions o;
          o.require_local = local;
          auto const full = run(pres, o);
          o.prune         = PruneMode::kClosureOnly;
          auto const closure = run(pres, o);
          o.prune            = PruneMode::kGenerateAndTest;
          auto const brute   = run(pres, o);
          EXPECT_EQ(full, brute) << pres.name() << " local=" << local;
          EXPECT_EQ(closure, brute) << pres.name() << " local=" << local;
        }
      }
    }

    TEST(Search, LocalityPruneAgreesWhereLocalNearringsExist) {
      std::vector<std::pair<PcPresentation, std::size_t>> const cases = {
          {c2xc2(), 15}, {c9(), 6}, {c4xc2(), 24}, {c2cubed(), 532}, {c4xc4(), 1032},
          {heisenberg27(), 1080}};
      for (auto const& [pres, expected] : cases) {
        SearchOptions o;
        o.allow_order81 = true;
        o.max_results   = 1u << 20;
        auto const full = run(pres, o);
        o.prune         = PruneMode::kClosureOnly;
        EXPECT_EQ(run(pres, o), full) << pres.name();
        EXPECT_EQ(full.size(), expected) << pres.name();
      }
    }

    TEST(Search, CompositionTableCap) {
      EXPECT_THROW(search_local_nearrings(PcPresentation("c2^4", 2, 4)), CapExceeded);
    }

    TEST(Search, LocalityPruneAgreesOnClassThree) {
      for (auto name : {"d16", "q16", "qd16"}) {
        SearchOptions o;
        auto const    full = run(build_presentation(name), o);
        o.prune            = PruneMode::kClosureOnly;
        EXPECT_EQ(run(build_presentation(name), o), full) << name;
      }
    }

    TEST(Search, AllNearringsIncludeTheLocalOnes) {
      SearchOptions o;
      o.require_local = false;
      // on a cyclic group lambda_x is fixed by lambda_x(i) = x, so every
      // nearring with identity is the local one for its identity
      EXPECT_EQ(run(build_presentation("c16"), o), run(build_presentation("c16"), {}));
      auto const all = run(d8(), o);
      EXPECT_EQ(all.size(), 40u);
      EXPECT_TRUE(run(d8(), {}).empty());
      for (auto const& f : all) {
        EXPECT_TRUE(f.verified);
        EXPECT_FALSE(f.local);
      }
      EXPECT_TRUE(run(q8(), o).empty());
    }

    TEST(Search, ResultsAreIndependentOfWorkers) {
      SearchOptions o;
      o.require_local = false;
      auto const a    = search_local_nearrings(d8(), o);
      o.parallel      = 4;
      auto const b    = search_local_nearrings(d8(), o);
      EXPECT_EQ(a.results, b.results);
      EXPECT_EQ(a.branches_explored, b.branches_explored);
      EXPECT_EQ(a.leaves, b.leaves);
    }

    TEST(Search, MaxResultsTruncatesStorageOnly) {
      SearchOptions o;
      o.max_results = 3;
      auto const r  = search_local_nearrings(build_presentation("c16"), o);
      EXPECT_EQ(r.result_count, 8u);
      EXPECT_EQ(r.results.size(), 3u);
      EXPECT_TRUE(r.truncated);
    }

    TEST(Search, OrderLimits) {
      EXPECT_THROW(search_local_nearrings(build_presentation("g81-7")), UsageError);
      EXPECT_THROW(search_local_nearrings(build_presentation("h1", 5)), CapExceeded);
    }

    TEST(Search, TinyBudgetIsInconclusive) {
      SearchOptions o;
      o.allow_order81 = true;
      o.require_local = false;
      o.budget        = std::chrono::milliseconds(1);
      auto const r    = search_local_nearrings(build_presentation("g81-7"), o);
      EXPECT_EQ(r.status, SearchStatus::kInconclusive);
      EXPECT_LT(r.subtrees_done, r.subtrees_total);
    }

    TEST(Search, CheckpointResumes) {
      auto const path =
          std::filesystem::temp_directory_path() / ("lnr-ckpt-" + std::to_string(::getpid()) + ".json");
      std::filesystem::remove(path);
      SearchOptions o;
      o.require_local   = false;
      o.checkpoint_path = path.string();
      auto const first  = search_local_nearrings(d8(), o);
      ASSERT_TRUE(std::filesystem::exists(path));
      EXPECT_EQ(first.subtrees_from_checkpoint, 0u);
      auto const second = search_local_nearrings(d8(), o);
      EXPECT_EQ(second.subtrees_from_checkpoint, second.subtrees_total);
      EXPECT_EQ(second.results, first.results);
      EXPECT_EQ(second.status, SearchStatus::kExhaustive);

      o.require_local = true;  // a different search must not reuse the file
      EXPECT_THROW(search_local_nearrings(d8(), o), UsageError);
      std::filesystem::remove(path);
    }

    TEST(Search, PruneModeNames) {
      for (auto m : {PruneMode::kFull, PruneMode::kClosureOnly, PruneMode::kGenerateAndTest}) {
        EXPECT_EQ(parse_prune_mode(to_string(m)), m);
      }
      EXPECT_THROW(parse_prune_mode("none"), UsageError);
    }

  }  // namespace
}  // namespace lnr
