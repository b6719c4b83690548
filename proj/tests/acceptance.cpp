// Acceptance checks, one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "brute.hpp"
#include "cli.hpp"
#include "lnr/constructions.hpp"
#include "lnr/report.hpp"
#include "lnr/search.hpp"

namespace {

  using namespace lnr;

  // Accumulates the sub-checks of one criterion.
  struct Criterion {
    std::ostringstream detail;
    bool               ok = true;

    void expect(bool cond, std::string const& what) {
      if (!cond) {
        ok = false;
        detail << " [failed: " << what << "]";
      }
    }
  };

  void consistency(Criterion& c) {
    std::vector<PcPresentation> groups;
    for (auto name : {"c16", "d16", "qd16", "q16", "g81-7", "g81-8", "g81-9", "g81-10"}) {
      groups.push_back(build_presentation(name));
    }
    for (auto name : {"h1", "h2", "h3", "h4"}) {
      groups.push_back(build_presentation(name, 5));
    }
    for (auto const& pres : groups) {
      auto const r = check_consistency(pres, 0, 1, 0, 625);
      std::uint64_t const n = pres.order();
      c.expect(r.exhaustive && r.triples_checked == n * n * n && r.passed(), pres.name());
    }
    auto const h1 = build_presentation("h1", 5);
    c.expect(h1.order() == 625 && h1.exponent() == 5, "H1(5) order 625, exponent 5");
    c.detail << groups.size() << " groups, all |G|^3 triples";
  }

  void equivalence(Criterion& c) {
    auto const r5 = check_h1_equivalence(5, 0, 1, 0);
    c.expect(r5.exhaustive && r5.add_pairs == 390'625 && r5.passed(), "p=5 exhaustive");
    for (std::uint32_t p : {7u, 11u}) {
      auto const r = check_h1_equivalence(p, 1'000'000, 1, 0);
      c.expect(r.add_pairs == 1'000'000 && r.passed(), "p=" + std::to_string(p));
    }
    c.detail << "390625 pairs at p=5, 10^6 seeded pairs at p=7, 11";
  }

  void identities(Criterion& c) {
    for (std::uint32_t p : {5u, 7u, 11u}) {
      auto const r = check_identity_suite(p);
      c.expect(r.passed(), "p=" + std::to_string(p));
      for (auto const& id : r.identities) {
        if (!id.required) {
          c.detail << "(" << id.name << " recorded as failing at p=" << p << ") ";
        }
      }
    }
    c.detail << "required identities hold at p=5, 7, 11";
  }

  bool l_is_x1_zero(LocalStructure const& local, AdditiveGroup const& g) {
    std::set<Elem> const l(local.non_units.begin(), local.non_units.end());
    for (Elem x = 0; x < g.order(); ++x) {
      if ((g.coordinates(x)[0] == 0) != l.contains(x)) {
        return false;
      }
    }
    return true;
  }

  void existence5(Criterion& c) {
    auto const nr = build_example_nearring(5);
    auto const ax = verify_axioms(nr, {.mode = VerifyOptions::Mode::kExhaustive, .parallel = 0});
    std::uint64_t const triples = 625ull * 625 * 625;
    c.expect(ax.associativity.passed && ax.associativity.checks == triples, "associativity");
    c.expect(ax.left_distributivity.passed && ax.left_distributivity.checks == triples,
             "left distributivity");
    c.expect(ax.identity_left.passed && ax.identity_right.passed, "identity laws");
    auto const local = units_and_locality(nr);
    c.expect(local.is_local(), "locality");
    c.expect(local.units.size() == 500, "|R*| = 500");
    c.expect(local.l_order == 125, "|L| = 125");
    c.expect(!local.l_cyclic, "L non-cyclic");
    c.expect(l_is_x1_zero(local, nr.group()), "L = <b>+<c>+<d>");
    auto const s = check_structural_properties(nr, local);
    c.expect(s.identity_order == 5 && s.exponent == 5, "order of i = exponent = 5");
    c.expect(local.i_plus_l_is_subgroup_of_units && local.l_order == 125,
             "i+L subgroup of R* of order 125");
    c.expect(s.rr_subgroup.passed, "x m y in L");
    c.expect(s.passed(), "structural properties");
    c.detail << "2 x " << triples << " triples, |R*|=" << local.units.size()
             << ", |L|=" << local.l_order << ", rr " << s.rr_mode << " ("
             << s.rr_subgroup.checks << " checks)";
  }

  void existence7(Criterion& c) {
    PairSweepOptions o;
    o.parallel   = 0;
    auto const r = check_local_conditions(example1_maps(7), o);
    c.expect(r.exhaustive, "pairwise sweeps exhaustive");
    for (auto const& k : r.conditions) {
      c.expect(k.passed, k.name);
    }
    auto const nr = build_example_nearring(7);
    auto const ax = verify_axioms(
        nr, {.mode = VerifyOptions::Mode::kSampled, .samples = 10'000'000, .seed = 1, .parallel = 0});
    c.expect(ax.associativity.passed && ax.associativity.checks == 10'000'000, "associativity");
    c.expect(ax.left_distributivity.passed && ax.left_distributivity.checks == 10'000'000,
             "left distributivity");
    c.expect(ax.is_nearring_with_identity(), "axioms");
    c.detail << "conditions over 2401^2 pairs, 10^7 seeded triples, zero failures";
  }

  void nonexistence16(Criterion& c) {
    for (auto name : {"d16", "qd16", "q16"}) {
      auto const r = search_local_nearrings(build_presentation(name), {.parallel = 0});
      c.expect(r.status == SearchStatus::kExhaustive, std::string(name) + " EXHAUSTIVE");
      c.expect(r.result_count == 0, std::string(name) + " no results");
      c.detail << name << ": " << to_string(r.status) << ", " << r.result_count << " found; ";
    }
  }

  void cyclic16(Criterion& c) {
    auto const pres = build_presentation("c16");
    auto const g    = AdditiveGroup::from_presentation(pres);
    auto const r    = search_local_nearrings(pres, {.parallel = 0});
    c.expect(r.status == SearchStatus::kExhaustive, "EXHAUSTIVE");
    c.expect(r.candidates.size() == 8 && r.result_count == 8, "8 results");
    for (auto const& k : r.candidates) {
      c.expect(k.results == 1, "one per identity candidate");
    }
    for (auto const& f : r.results) {
      unsigned const u = brute::c16_value(g, f.identity);
      unsigned       v = 1;
      while (u * v % 16 != 1) {
        ++v;
      }
      bool mod16 = true;
      for (Elem x = 0; x < 16; ++x) {
        for (Elem y = 0; y < 16; ++y) {
          unsigned const fx = brute::c16_value(g, x) * v % 16;
          unsigned const fy = brute::c16_value(g, y) * v % 16;
          mod16 = mod16 && brute::c16_value(g, f.table[x * 16 + y]) * v % 16 == fx * fy % 16;
        }
      }
      c.expect(mod16, "relabeled table is multiplication mod 16");
    }
    c.detail << r.result_count << " local nearrings, one per candidate, each Z/16 after relabeling";
  }

  bool backed_by_sweep(ConstructReport const& r) {
    std::uint64_t const n = std::uint64_t{r.prime} * r.prime * r.prime * r.prime;
    std::uint64_t const need =
        r.axioms.mode == VerifyOptions::Mode::kExhaustive ? n * n * n : 10'000'000;
    return r.axioms.is_nearring_with_identity() && r.axioms.associativity.checks >= need
           && r.axioms.left_distributivity.checks >= need && r.local && r.local->is_local();
  }

  void soundness(Criterion& c) {
    ConstructOptions o;
    o.verify.parallel = 0;
    o.pairs.parallel  = 0;
    int local         = 0;
    for (auto [name, p] : {std::pair{"example1", 5u}, {"trivial-beta1", 5u}, {"example1", 7u}}) {
      auto const r = construct_and_verify(builtin_maps(name, p), o);
      if (r.verdict == Verdict::kLocal) {
        ++local;
        c.expect(backed_by_sweep(r), std::string(name) + " p=" + std::to_string(p));
      }
    }
    c.expect(local == 3, "three LOCAL verdicts");

    // maps that fail screening: the verdict must still come from the sweep
    MapQuad maps = example1_maps(5);
    for (std::size_t x = 0; x < maps.size(); ++x) {
      maps.alpha[x] = x == 125 ? 0 : static_cast<std::uint32_t>(x * 7 % 5);
    }
    auto const bad = construct_and_verify(maps, o);
    c.expect(!bad.conditions.passed(), "screening rejects");
    c.expect(bad.verdict != Verdict::kLocal || backed_by_sweep(bad), "no screening-only verdict");
    c.expect(bad.verdict == Verdict::kNotANearring && bad.axioms.associativity.witness.has_value()
                 == !bad.axioms.associativity.passed,
             "axiom witness");

    auto const s = search_local_nearrings(build_presentation("c16"), {.parallel = 0});
    for (auto const& f : s.results) {
      c.expect(f.verified && f.local, "search result verified");
    }
    c.expect(s.verification_failures == 0, "no verification failures");
    c.detail << local << " LOCAL verdicts, each with a full axiom sweep; search results re-verified";
  }

  std::string strip_timings(std::vector<std::string> args) {
    std::ostringstream out, err;
    int const          code = cli::run(args, out, err);
    json               doc  = json::parse(out.str());
    doc.erase("timings");
    return std::to_string(code) + doc.dump();
  }

  void determinism(Criterion& c) {
    std::vector<std::vector<std::string>> const commands = {
        {"oracle-check", "--group", "h1", "--p", "7"},
        {"oracle-check", "--group", "h1", "--p", "11"},
        {"verify-example", "--p", "5"},
        {"verify-example", "--p", "7"},
        {"construct", "--p", "5", "--maps", "trivial-beta1"},
        {"search", "--group", "d16"},
        {"search", "--group", "c16"},
    };
    for (auto const& base : commands) {
      std::string reference;
      for (std::string const parallel : {"1", "4", "1"}) {
        auto args = base;
        args.insert(args.end(), {"--seed", "1", "--parallel", parallel});
        auto const got = strip_timings(args);
        if (reference.empty()) {
          reference = got;
        }
        c.expect(got == reference, base[0] + " at --parallel " + parallel);
      }
    }
    c.detail << commands.size() << " commands, identical output at --parallel 1, 4 and on rerun";
  }

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<char const*, std::function<void(Criterion&)>>> const criteria = {
      {"oracle consistency", consistency},
      {"closed-form equivalence", equivalence},
      {"identity suite", identities},
      {"existence at p=5", existence5},
      {"existence at p=7", existence7},
      {"nonexistence at order 16", nonexistence16},
      {"cyclic positive control", cyclic16},
      {"verdict soundness", soundness},
      {"determinism", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    wanted.insert(std::atoi(argv[i]));
  }
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    int const id = static_cast<int>(k + 1);
    if (!wanted.empty() && !wanted.contains(id)) {
      continue;
    }
    Criterion  c;
    auto const start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(c);
    } catch (std::exception const& e) {
      c.ok = false;
      c.detail << " [exception: " << e.what() << "]";
    }
    double const secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[k].first
              << "): " << c.detail.str() << " [" << secs << "s]" << std::endl;
    failures += !c.ok;
  }
  return failures == 0 ? 0 : 1;
}
