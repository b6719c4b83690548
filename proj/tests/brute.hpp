#pragma once

// Independent reference computations used by the tests: everything here works
// from full addition tables only.

#include <cstdint>
#include <map>
#include <vector>

#include "lnr/nearring.hpp"

namespace lnr::brute {

  inline std::vector<std::uint32_t> order_histogram(AdditiveGroup const& g) {
    std::map<std::uint64_t, std::uint32_t> h;
    for (Elem x = 0; x < g.order(); ++x) {
      ++h[g.element_order(x)];
    }
    std::vector<std::uint32_t> out;
    for (auto [order, count] : h) {
      out.push_back(static_cast<std::uint32_t>(order));
      out.push_back(count);
    }
    return out;
  }

  // Endomorphisms of a group generated by its first two pc generators:
  // for each choice of images (a, b), extend along a spanning tree and check
  // every pair.
  inline std::size_t count_endomorphisms_2gen(AdditiveGroup const& g) {
    std::size_t const n  = g.order();
    Elem const        g1 = g.generator(0);
    Elem const        g2 = g.generator(1);
    std::size_t       count = 0;
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) {
        std::vector<std::int64_t> phi(n, -1);
        phi[0] = 0;
        std::vector<Elem> stack{0};
        bool              ok = true;
        while (!stack.empty() && ok) {
          Elem x = stack.back();
          stack.pop_back();
          for (auto [gen, img] : {std::pair{g1, a}, std::pair{g2, b}}) {
            Elem const y = g.add(x, gen);
            Elem const v = g.add(static_cast<Elem>(phi[x]), img);
            if (phi[y] < 0) {
              phi[y] = v;
              stack.push_back(y);
            } else if (phi[y] != v) {
              ok = false;
            }
          }
        }
        for (Elem x = 0; ok && x < n; ++x) {
          for (Elem y = 0; ok && y < n; ++y) {
            ok = phi[g.add(x, y)] == g.add(static_cast<Elem>(phi[x]), static_cast<Elem>(phi[y]));
          }
        }
        count += ok;
      }
    }
    return count;
  }

  // Integer value of an element of the cyclic group of order 16 on the pc
  // generators 1, 2, 4, 8.
  inline unsigned c16_value(AdditiveGroup const& g, Elem x) {
    auto const c = g.coordinates(x);
    return c[0] + 2 * c[1] + 4 * c[2] + 8 * c[3];
  }

}  // namespace lnr::brute
