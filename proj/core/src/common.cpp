#include "lnr/common.hpp"

#include <sstream>

namespace lnr {

  bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) {
      return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        return false;
      }
    }
    return true;
  }

  std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p, new_r = a % p;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      t -= q * new_t;
      std::swap(t, new_t);
      r -= q * new_r;
      std::swap(r, new_r);
    }
    if (r != 1) {
      throw UsageError("inverse_mod: " + std::to_string(a)
                       + " is not invertible modulo " + std::to_string(p));
    }
    return mod(t, p);
  }

  std::string to_string(Coordinates const& x, std::size_t ngens) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < ngens; ++i) {
      out << (i == 0 ? "" : ",") << x[i];
    }
    out << ')';
    return out.str();
  }

}  // namespace lnr
