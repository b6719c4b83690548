#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lnr/common.hpp"

namespace lnr {

  // Constant-time arithmetic in H1(p), p > 3, on normal forms
  // x = a*x1 + b*x2 + c*x3 + d*x4 with c = -a-b+a+b and d = -a-c+a+c:
  //
  //   x + y = a(x1+y1) + b(x2+y2) + c(x3 - x2*y1 + y3)
  //           + d(x4 + y4 + x2*C(y1,2) - x3*y1)
  //
  // Binomials are polynomials over Z_p (see binom2/binom3), which is why p > 3
  // is required.
  class H1Arith {
   public:
    explicit H1Arith(std::uint32_t p);

    std::uint32_t prime() const noexcept {
      return _p;
    }
    std::size_t order() const noexcept {
      return static_cast<std::size_t>(_p) * _p * _p * _p;
    }

    // n(n-1)/2 and n(n-1)(n-2)/6 mod p, for any integer n.
    std::uint32_t binom2(std::int64_t n) const noexcept {
      std::uint64_t const m = mod(n, _p);
      return static_cast<std::uint32_t>(m * ((m + _p - 1) % _p) % _p * _inv2 % _p);
    }
    std::uint32_t binom3(std::int64_t n) const noexcept {
      std::uint64_t const m = mod(n, _p);
      return static_cast<std::uint32_t>(m * ((m + _p - 1) % _p) % _p
                                        * ((m + _p - 2) % _p) % _p * _inv6 % _p);
    }

    Coordinates add(Coordinates const& x, Coordinates const& y) const noexcept {
      std::uint64_t const p = _p;
      return {static_cast<std::uint32_t>((x[0] + y[0]) % p),
              static_cast<std::uint32_t>((x[1] + y[1]) % p),
              static_cast<std::uint32_t>(
                  (x[2] + y[2] + p * p - std::uint64_t{x[1]} * y[0]) % p),
              static_cast<std::uint32_t>(
                  (x[3] + y[3] + std::uint64_t{x[1]} * binom2(y[0]) + p * p
                   - std::uint64_t{x[2]} * y[0])
                  % p)};
    }

    Coordinates neg(Coordinates const& x) const noexcept;

    // r-fold sum, r taken mod p (every element has order dividing p):
    //   x*r = a(x1 r) + b(x2 r) + c(x3 r - x1 x2 C(r,2))
    //         + d(x4 r + x2 C(x1,2) C(r,2) - x1 x3 C(r,2) + x1^2 x2 C(r,3))
    Coordinates smul(Coordinates const& x, std::int64_t r) const noexcept;

    // -x - y + x + y
    Coordinates commutator(Coordinates const& x,
                           Coordinates const& y) const noexcept {
      return add(add(neg(x), neg(y)), add(x, y));
    }

    Elem index(Coordinates const& x) const noexcept {
      return ((x[0] * _p + x[1]) * _p + x[2]) * _p + x[3];
    }
    Coordinates coordinates(Elem i) const noexcept {
      Coordinates x{};
      x[3] = i % _p;
      i /= _p;
      x[2] = i % _p;
      i /= _p;
      x[1] = i % _p;
      x[0] = i / _p;
      return x;
    }

    Elem add(Elem x, Elem y) const noexcept {
      return index(add(coordinates(x), coordinates(y)));
    }
    Elem neg(Elem x) const noexcept {
      return index(neg(coordinates(x)));
    }

   private:
    std::uint32_t _p;
    std::uint64_t _inv2;
    std::uint64_t _inv6;
  };

  // How binomial coefficients with arbitrary integer upper argument are read.
  enum class BinomialReading {
    // C(n,2) = n(n-1)/2, C(n,3) = n(n-1)(n-2)/6 over Z_p; C(r, r-3) = C(r, 3).
    kPolynomial,
    // The piecewise integer convention: n!/(k!(n-k)!) for 0 <= k <= n, and 0
    // otherwise, evaluated on the unreduced integer arguments.
    kLiteral,
  };

  struct IdentityResult {
    std::string name;       // e.g. "swap-ba"
    std::string statement;  // the identity, in the a/b/c/d notation
    std::vector<std::string> parameters;
    // Required identities must hold under the polynomial reading for the
    // suite to pass; the others are recorded for information.
    bool                     required = true;
    std::string              note;
    std::uint64_t            tuples   = 0;
    // Indexed by BinomialReading.
    std::array<bool, 2>                                     holds{};
    std::array<std::optional<std::vector<std::int64_t>>, 2> witness;
  };

  struct IdentitySuiteReport {
    std::uint32_t               prime = 0;
    std::vector<IdentityResult> identities;

    bool passed() const noexcept;
  };

  // Evaluates each collection identity for every parameter tuple in [0, p),
  // both sides computed with pcgroup collection in H1(p), under both binomial
  // readings.
  IdentitySuiteReport check_identity_suite(std::uint32_t p);

  struct EquivalenceReport {
    std::uint32_t prime      = 0;
    bool          exhaustive = false;
    std::uint64_t seed       = 0;
    std::uint64_t add_pairs  = 0;
    std::uint64_t neg_checks = 0;
    std::uint64_t smul_checks = 0;
    std::optional<std::array<Elem, 2>> add_witness;
    std::optional<Elem>                neg_witness;
    // (element, r)
    std::optional<std::array<Elem, 2>> smul_witness;

    bool passed() const noexcept {
      return !add_witness && !neg_witness && !smul_witness;
    }
  };

  // Compares the closed forms with pcgroup collection: every pair when
  // p^4 <= exhaustive_cap, otherwise `samples` seeded random pairs (and
  // random (x, r) for smul).
  EquivalenceReport check_h1_equivalence(std::uint32_t p,
                                         std::uint64_t samples = 1'000'000,
                                         std::uint64_t seed    = 1,
                                         unsigned      parallel = 1,
                                         std::size_t   exhaustive_cap = 625);

}  // namespace lnr
