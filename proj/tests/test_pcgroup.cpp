#include <gtest/gtest.h>

#include "brute.hpp"
#include "lnr/pcgroup.hpp"

namespace lnr {
  namespace {

    AdditiveGroup group(std::string_view name, std::uint32_t p = 0) {
      return AdditiveGroup::from_presentation(build_presentation(name, p));
    }

    TEST(PcGroup, ParsesEveryName) {
      for (auto name : {"h1", "h2", "h3", "h4", "c16", "d16", "qd16", "q16", "g81-7", "g81-8",
                        "g81-9", "g81-10"}) {
        EXPECT_EQ(group_name(parse_group_id(name)), name);
      }
      EXPECT_THROW(parse_group_id("d8"), UsageError);
    }

    TEST(PcGroup, RejectsSmallOrCompositePrimes) {
      EXPECT_THROW(build_presentation("h1", 3), UsageError);
      EXPECT_THROW(build_presentation("h1", 4), UsageError);
      EXPECT_THROW(build_presentation("h2", 9), UsageError);
      EXPECT_NO_THROW(build_presentation("h1", 7));
    }

    TEST(PcGroup, H1AtFiveHasOrder625ExponentFiveClassThree) {
      auto const pres = build_presentation("h1", 5);
      EXPECT_EQ(pres.order(), 625u);
      EXPECT_EQ(pres.exponent(), 5u);
      EXPECT_EQ(nilpotency_class(pres), 3u);
    }

    TEST(PcGroup, HFamilyExponentsAndClass) {
      for (auto name : {"h2", "h3", "h4"}) {
        auto const pres = build_presentation(name, 5);
        EXPECT_EQ(pres.exponent(), 25u) << name;
        EXPECT_EQ(nilpotency_class(pres), 3u) << name;
      }
    }

    TEST(PcGroup, Order16ElementOrderHistograms) {
      // (order, count) pairs
      using H = std::vector<std::uint32_t>;
      EXPECT_EQ(brute::order_histogram(group("c16")), (H{1, 1, 2, 1, 4, 2, 8, 4, 16, 8}));
      EXPECT_EQ(brute::order_histogram(group("d16")), (H{1, 1, 2, 9, 4, 2, 8, 4}));
      EXPECT_EQ(brute::order_histogram(group("qd16")), (H{1, 1, 2, 5, 4, 6, 8, 4}));
      EXPECT_EQ(brute::order_histogram(group("q16")), (H{1, 1, 2, 1, 4, 10, 8, 4}));
    }

    TEST(PcGroup, Order16Classes) {
      EXPECT_EQ(nilpotency_class(build_presentation("c16")), 1u);
      for (auto name : {"d16", "qd16", "q16"}) {
        EXPECT_EQ(nilpotency_class(build_presentation(name)), 3u) << name;
      }
    }

    TEST(PcGroup, Order81GroupsHaveMaximalClass) {
      for (auto name : {"g81-7", "g81-8", "g81-9", "g81-10"}) {
        auto const pres = build_presentation(name);
        EXPECT_EQ(pres.order(), 81u);
        EXPECT_EQ(nilpotency_class(pres), 3u) << name;
        EXPECT_TRUE(check_consistency(pres).passed()) << name;
      }
    }

    TEST(PcGroup, Order81GroupsArePairwiseDistinct) {
      std::vector<std::vector<std::uint32_t>> seen;
      std::vector<std::size_t>                endos;
      for (auto name : {"g81-7", "g81-8", "g81-9", "g81-10"}) {
        auto const g = group(name);
        seen.push_back(brute::order_histogram(g));
        endos.push_back(brute::count_endomorphisms_2gen(g));
      }
      for (std::size_t i = 0; i < seen.size(); ++i) {
        for (std::size_t j = i + 1; j < seen.size(); ++j) {
          EXPECT_TRUE(seen[i] != seen[j] || endos[i] != endos[j]) << i << " vs " << j;
        }
      }
    }

    TEST(PcGroup, ExhaustiveConsistency) {
      for (auto name : {"c16", "d16", "qd16", "q16"}) {
        auto const r = check_consistency(build_presentation(name));
        EXPECT_TRUE(r.exhaustive);
        EXPECT_EQ(r.triples_checked, 16u * 16 * 16);
        EXPECT_TRUE(r.passed()) << name;
      }
    }

    TEST(PcGroup, InconsistentPresentationIsCaught) {
      // g1^2 = g2 forces g1 and g2 to commute, but the tail says otherwise
      PcPresentation pres("bad", 2, 3);
      pres.set_power(0, {0, 1, 0, 0});
      pres.set_commutator_tail(1, 0, {0, 0, 1, 0});
      auto const r = check_consistency(pres);
      EXPECT_FALSE(r.passed());
    }

    TEST(PcGroup, NegAndCommutator) {
      auto const pres = build_presentation("h1", 7);
      for (Elem i = 0; i < pres.order(); i += 13) {
        auto const x = pres.coordinates(i);
        EXPECT_EQ(pres.add(x, pres.neg(x)), Coordinates{});
        EXPECT_EQ(pres.smul(x, 7), Coordinates{});
        EXPECT_EQ(pres.add(pres.smul(x, 3), pres.smul(x, -3)), Coordinates{});
      }
      auto const a = pres.generator(0), b = pres.generator(1), c = pres.generator(2);
      EXPECT_EQ(pres.commutator(a, b), c);
      EXPECT_EQ(pres.commutator(a, c), pres.generator(3));
    }

    TEST(PcGroup, SampledConsistencyIsSeeded) {
      auto const pres = build_presentation("h1", 11);
      auto const a    = check_consistency(pres, 100'000, 9, 1);
      auto const b    = check_consistency(pres, 100'000, 9, 4);
      EXPECT_FALSE(a.exhaustive);
      EXPECT_EQ(a.seed, 9u);
      EXPECT_EQ(a.triples_checked, 100'000u);
      EXPECT_TRUE(a.passed());
      EXPECT_EQ(a.triples_checked, b.triples_checked);
      EXPECT_EQ(a.exponent, 11u);
    }

  }  // namespace
}  // namespace lnr
