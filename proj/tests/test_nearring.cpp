#include <gtest/gtest.h>

#include <sstream>

#include "brute.hpp"
#include "lnr/nearring.hpp"

namespace lnr {
  namespace {

    AdditiveGroup c16() {
      return AdditiveGroup::from_presentation(build_presentation("c16"));
    }

    std::vector<Elem> value_to_index(AdditiveGroup const& g) {
      std::vector<Elem> idx(16);
      for (Elem x = 0; x < 16; ++x) {
        idx[brute::c16_value(g, x)] = x;
      }
      return idx;
    }

    // Z/16 as a ring: multiplication of integer values mod 16.
    NearringInstance z16_ring() {
      auto const g   = c16();
      auto const idx = value_to_index(g);
      return NearringInstance("z16", g, idx[1], [g, idx](Elem x, Elem y) {
        return idx[brute::c16_value(g, x) * brute::c16_value(g, y) % 16];
      });
    }

    NearringInstance square_right() {
      auto const g   = c16();
      auto const idx = value_to_index(g);
      return NearringInstance("square", g, idx[1], [g, idx](Elem x, Elem y) {
        unsigned const v = brute::c16_value(g, y);
        return idx[brute::c16_value(g, x) * v * v % 16];
      });
    }

    TEST(AdditiveGroup, H1TablesMatchClosedForms) {
      auto const g = AdditiveGroup::h1(5);
      ASSERT_TRUE(g.tabulated());
      H1Arith const h(5);
      for (Elem x = 0; x < 625; x += 7) {
        for (Elem y = 0; y < 625; y += 3) {
          EXPECT_EQ(g.add(x, y), h.add(x, y));
        }
      }
      EXPECT_EQ(g.exponent(), 5u);
    }

    TEST(AdditiveGroup, SubgroupClosure) {
      auto const g    = AdditiveGroup::h1(5);
      auto const span = g.subgroup_closure({g.generator(0), g.generator(1)});
      EXPECT_EQ(std::count(span.begin(), span.end(), true), 625);
      auto const l = g.subgroup_closure({g.generator(1), g.generator(2), g.generator(3)});
      EXPECT_EQ(std::count(l.begin(), l.end(), true), 125);
    }

    TEST(Axioms, RingZ16IsLocalWithCyclicL) {
      auto const nr = z16_ring();
      auto const ax = verify_axioms(nr);
      EXPECT_TRUE(ax.is_nearring_with_identity());
      EXPECT_TRUE(ax.zero_symmetric);
      EXPECT_EQ(ax.associativity.checks, 4096u);
      auto const local = units_and_locality(nr);
      EXPECT_EQ(local.units.size(), 8u);
      EXPECT_TRUE(local.is_local());
      EXPECT_EQ(local.l_order, 8u);
      EXPECT_TRUE(local.l_cyclic);
      EXPECT_TRUE(local.units_closed);
      EXPECT_TRUE(local.i_plus_l_is_subgroup_of_units);
      for (Elem m : local.non_units) {
        EXPECT_EQ(brute::c16_value(nr.group(), m) % 2, 0u);
      }
    }

    TEST(Axioms, LeftProjectionFailsLeftIdentity) {
      auto const             g = c16();
      NearringInstance const nr("proj", g, 8, [](Elem x, Elem) { return x; });
      auto const             ax = verify_axioms(nr);
      EXPECT_TRUE(ax.associativity.passed);
      EXPECT_FALSE(ax.identity_left.passed);
      ASSERT_TRUE(ax.identity_left.witness.has_value());
      EXPECT_FALSE(ax.right_zero.passed);
      EXPECT_FALSE(ax.is_nearring_with_identity());
    }

    TEST(Axioms, NonAssociativeWitness) {
      // x*y = x y^2: (x*y)*z = x y^2 z^2 but x*(y*z) = x y^2 z^4
      auto const             nr = square_right();
      auto const             ax = verify_axioms(nr);
      EXPECT_FALSE(ax.associativity.passed);
      ASSERT_TRUE(ax.associativity.witness.has_value());
      auto const& w = *ax.associativity.witness;
      EXPECT_NE(nr.mul(nr.mul(w[0], w[1]), w[2]), nr.mul(w[0], nr.mul(w[1], w[2])));
      EXPECT_FALSE(ax.left_distributivity.passed);
      EXPECT_FALSE(ax.is_nearring_with_identity());
    }

    TEST(Axioms, SampledModeIsDeterministicAcrossWorkers) {
      auto          nr = z16_ring();
      VerifyOptions o;
      o.mode    = VerifyOptions::Mode::kSampled;
      o.samples = 200'000;
      o.seed    = 5;
      auto const a = verify_axioms(nr, o);
      o.parallel   = 3;
      auto const b = verify_axioms(nr, o);
      EXPECT_EQ(a.associativity.checks, 200'000u);
      EXPECT_EQ(a.associativity.checks, b.associativity.checks);
      EXPECT_TRUE(b.is_nearring_with_identity());
    }

    TEST(Axioms, FailureCountIsIndependentOfWorkers) {
      auto const    nr = square_right();
      VerifyOptions o;
      auto const    a = verify_axioms(nr, o);
      o.parallel      = 4;
      auto const b    = verify_axioms(nr, o);
      EXPECT_EQ(a.associativity.checks, b.associativity.checks);
      EXPECT_EQ(a.associativity.witness, b.associativity.witness);
      EXPECT_EQ(a.left_distributivity.checks, b.left_distributivity.checks);
      EXPECT_EQ(a.left_distributivity.witness, b.left_distributivity.witness);
    }

    TEST(Subgroups, CountsForOrder16Groups) {
      auto count = [](std::string_view name) {
        return enumerate_subgroups(AdditiveGroup::from_presentation(build_presentation(name)))
            .size();
      };
      EXPECT_EQ(count("c16"), 5u);
      EXPECT_EQ(count("d16"), 19u);
      EXPECT_EQ(count("q16"), 11u);
      EXPECT_EQ(count("qd16"), 15u);
    }

    TEST(Subgroups, ElementsAreClosedAndGenerated) {
      auto const g = AdditiveGroup::h1(5);
      for (auto const& s : enumerate_subgroups(g)) {
        auto const span = g.subgroup_closure(s.generators);
        EXPECT_EQ(static_cast<std::size_t>(std::count(span.begin(), span.end(), true)),
                  s.elements.size());
        for (Elem e : s.elements) {
          EXPECT_TRUE(span[e]);
        }
      }
    }

    TEST(Tables, CsvRoundTrip) {
      auto const         nr = z16_ring();
      MulTable const     t  = multiplication_table(nr);
      std::ostringstream out;
      write_table_csv(out, t);
      EXPECT_EQ(out.str().rfind("2,16,8\n", 0), 0u);
      std::istringstream in(out.str());
      EXPECT_EQ(read_table_csv(in), t);
    }

    TEST(Tables, MalformedCsvIsRejected) {
      std::istringstream short_row("2,2,1\n0,0\n0\n");
      EXPECT_THROW(read_table_csv(short_row), UsageError);
      std::istringstream out_of_range("2,2,1\n0,0\n0,7\n");
      EXPECT_THROW(read_table_csv(out_of_range), UsageError);
      std::istringstream empty("");
      EXPECT_THROW(read_table_csv(empty), UsageError);
    }

    TEST(Instance, RejectsBadConstruction) {
      EXPECT_THROW(NearringInstance("z", c16(), 0, std::vector<TableEntry>(256, 0)), UsageError);
      EXPECT_THROW(NearringInstance("z", c16(), 8, std::vector<TableEntry>(10, 0)), UsageError);
      EXPECT_THROW(NearringInstance("z", c16(), 8, std::vector<TableEntry>(256, 99)), UsageError);
    }

  }  // namespace
}  // namespace lnr
