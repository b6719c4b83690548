#include "lnr/h1_arith.hpp"

#include <functional>

#include "lnr/parallel.hpp"
#include "lnr/pcgroup.hpp"

namespace lnr {

  H1Arith::H1Arith(std::uint32_t p) : _p(p), _inv2(0), _inv6(0) {
    if (!is_prime(p)) {
      throw UsageError("p = " + std::to_string(p) + " is not prime");
    }
    if (p <= 3) {
      throw UsageError("H1 arithmetic needs a prime p > 3");
    }
    _inv2 = inverse_mod(2, p);
    _inv6 = inverse_mod(6, p);
  }

  Coordinates H1Arith::neg(Coordinates const& x) const noexcept {
    std::int64_t const x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    return {mod(-x1, _p),
            mod(-x2, _p),
            mod(-x1 * x2 - x3, _p),
            mod(-x4 - x2 * binom2(-x1) - x1 * x3, _p)};
  }

  Coordinates H1Arith::smul(Coordinates const& x, std::int64_t r) const noexcept {
    std::int64_t const x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    std::int64_t const rr = mod(r, _p);
    std::int64_t const r2 = binom2(rr);
    std::int64_t const p  = _p;
    return {mod(x1 * rr, _p),
            mod(x2 * rr, _p),
            mod(x3 * rr - x1 * x2 % p * r2, _p),
            mod(x4 * rr + x2 * binom2(x1) % p * r2 - x1 * x3 % p * r2
                    + x1 * x1 % p * x2 % p * binom3(rr),
                _p)};
  }

  bool IdentitySuiteReport::passed() const noexcept {
    for (auto const& id : identities) {
      if (id.required
          && !id.holds[static_cast<int>(BinomialReading::kPolynomial)]) {
        return false;
      }
    }
    return !identities.empty();
  }

  namespace {

    std::int64_t literal_binom(std::int64_t n, std::int64_t k) {
      if (k < 0 || k > n) {
        return 0;
      }
      std::int64_t result = 1;
      for (std::int64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
      }
      return result;
    }

    // Binomials as they appear in the identities.
    struct Binomials {
      H1Arith const&  h1;
      BinomialReading reading;

      std::int64_t c2(std::int64_t n) const {
        return reading == BinomialReading::kPolynomial ? h1.binom2(n)
                                                       : literal_binom(n, 2);
      }
      // C(r, r-3)
      std::int64_t c_r_rm3(std::int64_t r) const {
        return reading == BinomialReading::kPolynomial ? h1.binom3(r)
                                                       : literal_binom(r, r - 3);
      }
    };

    // Collection-only evaluation of words in a, b, c, d.
    struct Words {
      PcPresentation const& g;
      Coordinates           a, b, c, d;

      explicit Words(PcPresentation const& pres)
          : g(pres),
            a(pres.generator(0)),
            b(pres.generator(1)),
            c(pres.generator(2)),
            d(pres.generator(3)) {}

      Coordinates mul(Coordinates const& x, std::int64_t k) const {
        return g.smul(x, k);
      }
      Coordinates neg(Coordinates const& x) const {
        return g.neg(x);
      }
      template <typename... Rest>
      Coordinates sum(Coordinates const& x, Rest const&... rest) const {
        Coordinates s = x;
        ((s = g.add(s, rest)), ...);
        return s;
      }
    };

    using Side = std::function<Coordinates(Words const&,
                                           std::vector<std::int64_t> const&,
                                           Binomials const&)>;

    struct Identity {
      std::string              name;
      std::string              statement;
      std::vector<std::string> parameters;
      bool                     required;
      std::string              note;
      Side                     lhs;
      Side                     rhs;
    };

    std::vector<Identity> identities() {
      using V = std::vector<std::int64_t>;
      std::vector<Identity> out;
      out.push_back(
          {"comm-ac", "-ak-cm+ak+cm = dkm", {"k", "m"}, true, "",
           [](Words const& w, V const& v, Binomials const&) {
             auto ak = w.mul(w.a, v[0]), cm = w.mul(w.c, v[1]);
             return w.sum(w.neg(ak), w.neg(cm), ak, cm);
           },
           [](Words const& w, V const& v, Binomials const&) {
             return w.mul(w.d, v[0] * v[1]);
           }});
      out.push_back(
          {"swap-ca", "cm+ak = ak+cm-dkm", {"k", "m"}, true, "",
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.mul(w.c, v[1]), w.mul(w.a, v[0]));
           },
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.mul(w.a, v[0]), w.mul(w.c, v[1]),
                          w.mul(w.d, -v[0] * v[1]));
           }});
      out.push_back(
          {"swap-negc-a", "-cm+ak = ak-cm+dkm", {"k", "m"}, true, "",
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.neg(w.mul(w.c, v[1])), w.mul(w.a, v[0]));
           },
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.mul(w.a, v[0]), w.neg(w.mul(w.c, v[1])),
                          w.mul(w.d, v[0] * v[1]));
           }});
      out.push_back(
          {"swap-negc-nega", "-cm-ak = -ak-cm-dkm", {"k", "m"}, true, "",
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.neg(w.mul(w.c, v[1])), w.neg(w.mul(w.a, v[0])));
           },
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.neg(w.mul(w.a, v[0])), w.neg(w.mul(w.c, v[1])),
                          w.mul(w.d, -v[0] * v[1]));
           }});
      auto const commutator_ab = [](Words const& w, V const& v, Binomials const&) {
        auto ak = w.mul(w.a, v[0]), bl = w.mul(w.b, v[1]);
        return w.sum(w.neg(ak), w.neg(bl), ak, bl);
      };
      out.push_back(
          {"comm-ab-plus", "-ak-bl+ak+bl = ckl+dl*C(k,2)", {"k", "l"}, false,
           "plus sign on the d-term; collection gives -dl*C(k,2)",
           commutator_ab,
           [](Words const& w, V const& v, Binomials const& bin) {
             return w.sum(w.mul(w.c, v[0] * v[1]), w.mul(w.d, v[1] * bin.c2(v[0])));
           }});
      out.push_back(
          {"comm-ab", "-ak-bl+ak+bl = ckl-dl*C(k,2)", {"k", "l"}, true,
           "sign-corrected d-term", commutator_ab,
           [](Words const& w, V const& v, Binomials const& bin) {
             return w.sum(w.mul(w.c, v[0] * v[1]), w.mul(w.d, -v[1] * bin.c2(v[0])));
           }});
      out.push_back(
          {"swap-ba", "bl+ak = ak+bl-ckl+dl*C(k,2)", {"k", "l"}, true, "",
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.mul(w.b, v[1]), w.mul(w.a, v[0]));
           },
           [](Words const& w, V const& v, Binomials const& bin) {
             return w.sum(w.mul(w.a, v[0]), w.mul(w.b, v[1]),
                          w.mul(w.c, -v[0] * v[1]), w.mul(w.d, v[1] * bin.c2(v[0])));
           }});
      out.push_back(
          {"swap-negb-a", "-bl+ak = ak-bl+ckl-dl*C(k,2)", {"k", "l"}, true, "",
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.neg(w.mul(w.b, v[1])), w.mul(w.a, v[0]));
           },
           [](Words const& w, V const& v, Binomials const& bin) {
             return w.sum(w.mul(w.a, v[0]), w.neg(w.mul(w.b, v[1])),
                          w.mul(w.c, v[0] * v[1]), w.mul(w.d, -v[1] * bin.c2(v[0])));
           }});
      out.push_back(
          {"swap-negb-nega", "-bl-ak = -ak-bl-ckl-dl*C(-k,2)", {"k", "l"}, true, "",
           [](Words const& w, V const& v, Binomials const&) {
             return w.sum(w.neg(w.mul(w.b, v[1])), w.neg(w.mul(w.a, v[0])));
           },
           [](Words const& w, V const& v, Binomials const& bin) {
             return w.sum(w.neg(w.mul(w.a, v[0])), w.neg(w.mul(w.b, v[1])),
                          w.mul(w.c, -v[0] * v[1]),
                          w.mul(w.d, -v[1] * bin.c2(-v[0])));
           }});
      out.push_back(
          {"smul",
           "(ak+bl+cm+dn)r = akr+blr+c(mr-kl*C(r,2))"
           "+d(nr+l*C(k,2)*C(r,2)-km*C(r,2)+k^2*l*C(r,r-3))",
           {"k", "l", "m", "n", "r"}, true, "",
           [](Words const& w, V const& v, Binomials const&) {
             auto x = w.sum(w.mul(w.a, v[0]), w.mul(w.b, v[1]), w.mul(w.c, v[2]),
                            w.mul(w.d, v[3]));
             return w.mul(x, v[4]);
           },
           [](Words const& w, V const& v, Binomials const& bin) {
             std::int64_t const k = v[0], l = v[1], m = v[2], n = v[3], r = v[4];
             std::int64_t const r2 = bin.c2(r);
             return w.sum(w.mul(w.a, k * r), w.mul(w.b, l * r),
                          w.mul(w.c, m * r - k * l * r2),
                          w.mul(w.d, n * r + l * bin.c2(k) * r2 - k * m * r2
                                         + k * k * l * bin.c_r_rm3(r)));
           }});
      return out;
    }

  }  // namespace

  IdentitySuiteReport check_identity_suite(std::uint32_t p) {
    H1Arith const        h1(p);  // validates p > 3
    PcPresentation const oracle = build_presentation(GroupId::kH1, p);
    Words const          words(oracle);
    Binomials const      readings[2]
        = {{h1, BinomialReading::kPolynomial}, {h1, BinomialReading::kLiteral}};

    IdentitySuiteReport report;
    report.prime = p;
    for (auto const& id : identities()) {
      IdentityResult result;
      result.name       = id.name;
      result.statement  = id.statement;
      result.parameters = id.parameters;
      result.required   = id.required;
      result.note       = id.note;
      result.holds      = {true, true};

      std::size_t const         arity = id.parameters.size();
      std::vector<std::int64_t> v(arity, 0);
      while (true) {
        Coordinates const lhs = id.lhs(words, v, readings[0]);
        for (int r = 0; r < 2; ++r) {
          if (id.rhs(words, v, readings[r]) != lhs && result.holds[r]) {
            result.holds[r]   = false;
            result.witness[r] = v;
          }
        }
        ++result.tuples;
        std::size_t i = arity;
        while (i > 0 && ++v[i - 1] == static_cast<std::int64_t>(p)) {
          v[--i] = 0;
        }
        if (i == 0) {
          break;
        }
      }
      report.identities.push_back(std::move(result));
    }
    return report;
  }

  EquivalenceReport check_h1_equivalence(std::uint32_t p,
                                         std::uint64_t samples,
                                         std::uint64_t seed,
                                         unsigned      parallel,
                                         std::size_t   exhaustive_cap) {
    H1Arith const        h1(p);
    PcPresentation const oracle = build_presentation(GroupId::kH1, p);
    std::size_t const    n      = h1.order();

    EquivalenceReport report;
    report.prime = p;
    unsigned const workers = worker_count(parallel);

    std::vector<FirstWitness<std::array<Elem, 2>>> add_found(workers);
    std::vector<FirstWitness<Elem>>                neg_found(workers);
    std::vector<FirstWitness<std::array<Elem, 2>>> smul_found(workers);
    std::vector<std::array<std::uint64_t, 3>>      counts(workers, {0, 0, 0});

    auto check_neg_smul = [&](unsigned w, std::uint64_t pos, Elem x, std::uint32_t r) {
      Coordinates const cx = h1.coordinates(x);
      if (h1.neg(cx) != oracle.neg(cx)) {
        neg_found[w].offer(pos, x);
      }
      // closed form vs collection, and vs iterated closed-form addition
      Coordinates iterated{};
      for (std::uint32_t i = 0; i < r; ++i) {
        iterated = h1.add(iterated, cx);
      }
      Coordinates const closed = h1.smul(cx, r);
      if (closed != oracle.smul(cx, r) || closed != iterated) {
        smul_found[w].offer(pos, {x, r});
      }
      ++counts[w][1];
      ++counts[w][2];
    };

    if (n <= exhaustive_cap) {
      report.exhaustive = true;
      parallel_blocks(n, workers, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t x = b; x < e; ++x) {
          Coordinates const cx = h1.coordinates(static_cast<Elem>(x));
          for (Elem y = 0; y < n; ++y) {
            Coordinates const cy = h1.coordinates(y);
            if (h1.add(cx, cy) != oracle.add(cx, cy)) {
              add_found[w].offer(x * n + y, {static_cast<Elem>(x), y});
            }
          }
          counts[w][0] += n;
          for (std::uint32_t r = 0; r <= p; ++r) {
            check_neg_smul(w, x * (p + 1) + r, static_cast<Elem>(x), r);
          }
        }
      });
    } else {
      report.seed = seed;
      std::uint64_t const chunks = (samples + kSampleChunk - 1) / kSampleChunk;
      parallel_blocks(chunks, workers, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t c = b; c < e; ++c) {
          auto                                 rng = chunk_rng(seed, c);
          std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
          std::uniform_int_distribution<std::uint32_t> pick_r(0, p);
          std::uint64_t const first = c * kSampleChunk;
          std::uint64_t const last  = std::min(samples, first + kSampleChunk);
          for (std::uint64_t s = first; s < last; ++s) {
            Elem const        x = pick(rng), y = pick(rng);
            Coordinates const cx = h1.coordinates(x), cy = h1.coordinates(y);
            if (h1.add(cx, cy) != oracle.add(cx, cy)) {
              add_found[w].offer(s, {x, y});
            }
            ++counts[w][0];
            check_neg_smul(w, s, x, pick_r(rng));
          }
        }
      });
    }

    FirstWitness<std::array<Elem, 2>> add_first, smul_first;
    FirstWitness<Elem>                neg_first;
    for (unsigned w = 0; w < workers; ++w) {
      add_first.merge(add_found[w]);
      neg_first.merge(neg_found[w]);
      smul_first.merge(smul_found[w]);
      report.add_pairs += counts[w][0];
      report.neg_checks += counts[w][1];
      report.smul_checks += counts[w][2];
    }
    report.add_witness  = add_first.witness;
    report.neg_witness  = neg_first.witness;
    report.smul_witness = smul_first.witness;
    return report;
  }

}  // namespace lnr
