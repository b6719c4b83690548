#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lnr {

  // Canonical element index. For a group with generators g1..gn and relative
  // orders p, the element x1*g1 + ... + xn*gn has index
  // x1*p^(n-1) + ... + xn, so g1 is the most significant digit.
  using Elem = std::uint32_t;

  // Dense tables (addition, multiplication, endomorphism images) store
  // element indices in 16 bits; every tabulated group here has at most
  // 2401 elements.
  using TableEntry = std::uint16_t;

  inline constexpr std::size_t kMaxGens = 4;

  // Exponent vector of a normal form word x1*g1 + x2*g2 + x3*g3 + x4*g4.
  // Entries past ngens() are always zero.
  using Coordinates = std::array<std::uint32_t, kMaxGens>;

  // Bad arguments: non-prime p, p too small, unknown group names, malformed
  // input files. The CLI maps these to exit code 1.
  class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
  };

  // A size cap (table cap, endomorphism enumeration cap) was exceeded.
  class CapExceeded : public std::length_error {
   public:
    using std::length_error::length_error;
  };

  bool is_prime(std::uint64_t n) noexcept;

  // a mod p in [0, p) for any signed a.
  constexpr std::uint32_t mod(std::int64_t a, std::uint32_t p) noexcept {
    std::int64_t r = a % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
  }

  // Inverse of a modulo prime p; a must be nonzero mod p.
  std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

  std::string to_string(Coordinates const& x, std::size_t ngens = kMaxGens);

}  // namespace lnr
