#include "lnr/pcgroup.hpp"

#include <atomic>
#include <numeric>

#include "lnr/parallel.hpp"

namespace lnr {

  namespace {

    struct NamedGroup {
      GroupId          id;
      std::string_view name;
    };

    constexpr std::array<NamedGroup, 12> kGroups{{
        {GroupId::kH1, "h1"},
        {GroupId::kH2, "h2"},
        {GroupId::kH3, "h3"},
        {GroupId::kH4, "h4"},
        {GroupId::kC16, "c16"},
        {GroupId::kD16, "d16"},
        {GroupId::kQD16, "qd16"},
        {GroupId::kQ16, "q16"},
        {GroupId::kG81_7, "g81-7"},
        {GroupId::kG81_8, "g81-8"},
        {GroupId::kG81_9, "g81-9"},
        {GroupId::kG81_10, "g81-10"},
    }};

    Coordinates word(std::uint32_t x1,
                     std::uint32_t x2,
                     std::uint32_t x3,
                     std::uint32_t x4) {
      return {x1, x2, x3, x4};
    }

    // Generators a, b, c = [a,b] and a fourth generator, which is
    // d = [a,c] for H1 and a^p for H2..H4. With [x,y] = -x-y+x+y:
    //
    //   [a,b] = c        <=>  b + a = a + b - c
    //   [a,c] = w        <=>  c + a = a + c - w
    //   [b,c] = w        <=>  c + b = b + c - w
    //
    // and the fourth generator is central in all four groups.
    PcPresentation h_family(GroupId id, std::uint32_t p, std::string name) {
      PcPresentation pres(std::move(name), p, 4);
      pres.set_commutator_tail(1, 0, word(0, 0, p - 1, 0));
      switch (id) {
        case GroupId::kH1:
          // a^p = b^p = c^p = d^p = e, [a,c] = d, [b,c] = e
          pres.set_commutator_tail(2, 0, word(0, 0, 0, p - 1));
          break;
        case GroupId::kH2:
          // a^(p^2) = b^p = e, [a,[a,b]] = a^p, [b,[a,b]] = e
          pres.set_power(0, word(0, 0, 0, 1));
          pres.set_commutator_tail(2, 0, word(0, 0, 0, p - 1));
          break;
        case GroupId::kH3:
          // [a,[a,b]] = e, [b,[a,b]] = a^p
          pres.set_power(0, word(0, 0, 0, 1));
          pres.set_commutator_tail(2, 1, word(0, 0, 0, p - 1));
          break;
        case GroupId::kH4:
          // [a,[a,b]] = e, [b,[a,b]] = a^(2p)
          pres.set_power(0, word(0, 0, 0, 1));
          pres.set_commutator_tail(2, 1, word(0, 0, 0, mod(-2, p)));
          break;
        default:
          throw UsageError("h_family: not an H group");
      }
      return pres;
    }

    // Order-16 groups on s, r, r^2, r^4 (C16 on 1, 2, 4, 8). The tail for
    // (r^k, s) is r^(-k) + (r^k)^s, read off from the action of s on <r>.
    PcPresentation order16(GroupId id) {
      switch (id) {
        case GroupId::kC16: {
          PcPresentation pres("c16", 2, 4);
          pres.set_power(0, word(0, 1, 0, 0));
          pres.set_power(1, word(0, 0, 1, 0));
          pres.set_power(2, word(0, 0, 0, 1));
          return pres;
        }
        case GroupId::kD16:
        case GroupId::kQ16: {
          // r^s = r^-1
          PcPresentation pres(id == GroupId::kD16 ? "d16" : "q16", 2, 4);
          if (id == GroupId::kQ16) {
            pres.set_power(0, word(0, 0, 0, 1));  // s^2 = r^4
          }
          pres.set_power(1, word(0, 0, 1, 0));
          pres.set_power(2, word(0, 0, 0, 1));
          pres.set_commutator_tail(1, 0, word(0, 0, 1, 1));  // r^-2 = r^6
          pres.set_commutator_tail(2, 0, word(0, 0, 0, 1));  // r^-4 = r^4
          return pres;
        }
        case GroupId::kQD16: {
          // r^s = r^3
          PcPresentation pres("qd16", 2, 4);
          pres.set_power(1, word(0, 0, 1, 0));
          pres.set_power(2, word(0, 0, 0, 1));
          pres.set_commutator_tail(1, 0, word(0, 0, 1, 0));  // r^2
          pres.set_commutator_tail(2, 0, word(0, 0, 0, 1));  // r^4
          return pres;
        }
        default:
          throw UsageError("order16: not an order-16 group");
      }
    }

    PcPresentation order81(GroupId id) {
      switch (id) {
        case GroupId::kG81_7:
          return h_family(GroupId::kH1, 3, "g81-7");
        case GroupId::kG81_8:
          return h_family(GroupId::kH4, 3, "g81-8");
        case GroupId::kG81_9:
          return h_family(GroupId::kH3, 3, "g81-9");
        case GroupId::kG81_10: {
          // a^9 = e, b^3 = a^3, [a,[a,b]] = e, [b,[a,b]] = a^3
          PcPresentation pres = h_family(GroupId::kH3, 3, "g81-10");
          pres.set_power(1, word(0, 0, 0, 1));
          return pres;
        }
        default:
          throw UsageError("order81: not an order-81 group");
      }
    }

    bool is_zero(Coordinates const& x) {
      return x == Coordinates{};
    }

  }  // namespace

  GroupId parse_group_id(std::string_view name) {
    for (auto const& g : kGroups) {
      if (g.name == name) {
        return g.id;
      }
    }
    throw UsageError("unknown group '" + std::string(name) + "'");
  }

  std::string_view group_name(GroupId id) noexcept {
    for (auto const& g : kGroups) {
      if (g.id == id) {
        return g.name;
      }
    }
    return "?";
  }

  bool needs_prime(GroupId id) noexcept {
    return id == GroupId::kH1 || id == GroupId::kH2 || id == GroupId::kH3
           || id == GroupId::kH4;
  }

  ////////////////////////////////////////////////////////////////////////
  // PcPresentation
  ////////////////////////////////////////////////////////////////////////

  PcPresentation::PcPresentation(std::string name,
                                 std::uint32_t p,
                                 std::size_t ngens)
      : _name(std::move(name)), _p(p), _ngens(ngens), _order(1) {
    if (!is_prime(p)) {
      throw UsageError("PcPresentation: " + std::to_string(p)
                       + " is not prime");
    }
    if (ngens == 0 || ngens > kMaxGens) {
      throw UsageError("PcPresentation: need 1 to 4 generators");
    }
    for (std::size_t i = 0; i < ngens; ++i) {
      _order *= p;
    }
    _steps = std::make_shared<Steps>();
  }

  void PcPresentation::set_power(std::size_t i, Coordinates const& w) {
    if (i >= _ngens || !is_valid(w)) {
      throw UsageError("set_power: bad generator or word");
    }
    for (std::size_t k = 0; k <= i; ++k) {
      if (w[k] != 0) {
        throw UsageError("set_power: word must only involve later generators");
      }
    }
    _power[i] = w;
    _steps    = std::make_shared<Steps>();
  }

  void PcPresentation::set_commutator_tail(std::size_t j,
                                           std::size_t i,
                                           Coordinates const& w) {
    if (i >= j || j >= _ngens || !is_valid(w)) {
      throw UsageError("set_commutator_tail: need i < j < ngens");
    }
    for (std::size_t k = 0; k <= j; ++k) {
      if (w[k] != 0) {
        throw UsageError(
            "set_commutator_tail: tail must only involve generators after j");
      }
    }
    _tail[j][i] = w;
    _steps      = std::make_shared<Steps>();
  }

  std::vector<Elem> const* PcPresentation::steps() const {
    if (_order > kStepTableCap) {
      return nullptr;
    }
    Steps& s = *_steps;
    std::call_once(s.once, [&] {
      s.next.resize(_ngens * _order);
      for (std::size_t i = 0; i < _ngens; ++i) {
        for (Elem e = 0; e < _order; ++e) {
          Coordinates x = coordinates(e);
          append_generator(x, i);
          s.next[i * _order + e] = index(x);
        }
      }
    });
    return &s.next;
  }

  Elem PcPresentation::index(Coordinates const& x) const noexcept {
    Elem idx = 0;
    for (std::size_t i = 0; i < _ngens; ++i) {
      idx = idx * _p + x[i];
    }
    return idx;
  }

  Coordinates PcPresentation::coordinates(Elem idx) const noexcept {
    Coordinates x{};
    for (std::size_t i = _ngens; i-- > 0;) {
      x[i] = idx % _p;
      idx /= _p;
    }
    return x;
  }

  Coordinates PcPresentation::generator(std::size_t i) const {
    if (i >= _ngens) {
      throw UsageError("generator: index out of range");
    }
    Coordinates g{};
    g[i] = 1;
    return g;
  }

  bool PcPresentation::is_valid(Coordinates const& x) const noexcept {
    for (std::size_t i = 0; i < kMaxGens; ++i) {
      if (i < _ngens ? x[i] >= _p : x[i] != 0) {
        return false;
      }
    }
    return true;
  }

  // e + gi where e is a normal form. Split e = u + t with t the part on
  // generators after gi; then t + gi = gi + t', where each letter gj of t is
  // replaced by gj + tail(j, i).
  void PcPresentation::append_generator(Coordinates& e, std::size_t i) const {
    Coordinates tail{};
    for (std::size_t j = i + 1; j < _ngens; ++j) {
      tail[j] = e[j];
      e[j]    = 0;
    }
    if (++e[i] == _p) {
      e[i] = 0;
      append_word(e, _power[i]);
    }
    for (std::size_t j = i + 1; j < _ngens; ++j) {
      for (std::uint32_t t = 0; t < tail[j]; ++t) {
        append_generator(e, j);
        append_word(e, _tail[j][i]);
      }
    }
  }

  void PcPresentation::append_word(Coordinates& e, Coordinates const& w) const {
    for (std::size_t k = 0; k < _ngens; ++k) {
      for (std::uint32_t t = 0; t < w[k]; ++t) {
        append_generator(e, k);
      }
    }
  }

  Coordinates PcPresentation::add(Coordinates const& x,
                                  Coordinates const& y) const {
    if (auto const* next = steps()) {
      std::size_t e = index(x);
      for (std::size_t k = 0; k < _ngens; ++k) {
        for (std::uint32_t t = 0; t < y[k]; ++t) {
          e = (*next)[k * _order + e];
        }
      }
      return coordinates(static_cast<Elem>(e));
    }
    Coordinates e = x;
    append_word(e, y);
    return e;
  }

  // Kill the coordinates of x one generator at a time; the generators added
  // form a normal form word y with x + y = 0.
  Coordinates PcPresentation::neg(Coordinates const& x) const {
    auto const* next = steps();
    Coordinates r    = x;
    Coordinates y{};
    for (std::size_t i = 0; i < _ngens; ++i) {
      std::uint32_t t = (_p - r[i]) % _p;
      y[i]            = t;
      if (next) {
        std::size_t e = index(r);
        for (std::uint32_t k = 0; k < t; ++k) {
          e = (*next)[i * _order + e];
        }
        r = coordinates(static_cast<Elem>(e));
        continue;
      }
      for (std::uint32_t k = 0; k < t; ++k) {
        append_generator(r, i);
      }
    }
    return y;
  }

  Coordinates PcPresentation::smul(Coordinates const& x, std::int64_t r) const {
    if (r < 0) {
      return neg(smul(x, -r));
    }
    Coordinates result{};
    Coordinates base = x;
    auto        n    = static_cast<std::uint64_t>(r);
    while (n != 0) {
      if (n & 1) {
        result = add(result, base);
      }
      n >>= 1;
      if (n != 0) {
        base = add(base, base);
      }
    }
    return result;
  }

  Coordinates PcPresentation::commutator(Coordinates const& x,
                                         Coordinates const& y) const {
    return add(add(neg(x), neg(y)), add(x, y));
  }

  std::uint64_t PcPresentation::element_order(Coordinates const& x) const {
    std::uint64_t n = 1;
    Coordinates   e = x;
    while (!is_zero(e)) {
      e = add(e, x);
      ++n;
    }
    return n;
  }

  std::uint64_t PcPresentation::exponent() const {
    std::uint64_t result = 1;
    for (Elem i = 0; i < _order; ++i) {
      result = std::lcm(result, element_order(coordinates(i)));
    }
    return result;
  }

  std::vector<TableEntry> PcPresentation::addition_table(std::size_t cap) const {
    if (_order > cap) {
      throw CapExceeded("addition_table: group of order "
                        + std::to_string(_order) + " exceeds cap "
                        + std::to_string(cap));
    }
    std::size_t const       n = _order;
    std::vector<TableEntry> table(n * n);
    for (Elem x = 0; x < n; ++x) {
      Coordinates const cx = coordinates(x);
      for (Elem y = 0; y < n; ++y) {
        table[x * n + y] = static_cast<TableEntry>(index(add(cx, coordinates(y))));
      }
    }
    return table;
  }

  PcPresentation build_presentation(GroupId id, std::uint32_t p) {
    switch (id) {
      case GroupId::kH1:
      case GroupId::kH2:
      case GroupId::kH3:
      case GroupId::kH4:
        if (!is_prime(p)) {
          throw UsageError("p = " + std::to_string(p) + " is not prime");
        }
        if (p <= 3) {
          throw UsageError("H1..H4 need a prime p > 3");
        }
        return h_family(id, p,
                        std::string(group_name(id)) + "(" + std::to_string(p)
                            + ")");
      case GroupId::kC16:
      case GroupId::kD16:
      case GroupId::kQD16:
      case GroupId::kQ16:
        return order16(id);
      default:
        return order81(id);
    }
  }

  PcPresentation build_presentation(std::string_view name, std::uint32_t p) {
    return build_presentation(parse_group_id(name), p);
  }

  ////////////////////////////////////////////////////////////////////////
  // Consistency
  ////////////////////////////////////////////////////////////////////////

  namespace {

    // Addition either through a dense table or through collection.
    class Adder {
     public:
      Adder(PcPresentation const& pres, std::size_t table_cap)
          : _pres(pres), _n(pres.order()) {
        if (_n <= table_cap) {
          _table = pres.addition_table(table_cap);
        }
      }

      Elem operator()(Elem x, Elem y) const {
        if (!_table.empty()) {
          return _table[static_cast<std::size_t>(x) * _n + y];
        }
        return _pres.index(_pres.add(_pres.coordinates(x), _pres.coordinates(y)));
      }

      bool tabulated() const noexcept {
        return !_table.empty();
      }
      std::vector<TableEntry> const& table() const noexcept {
        return _table;
      }

     private:
      PcPresentation const&   _pres;
      std::size_t             _n;
      std::vector<TableEntry> _table;
    };

    std::vector<bool> closure(std::size_t              n,
                              std::vector<Elem> const& gens,
                              Adder const&             add) {
      std::vector<bool> in(n, false);
      std::vector<Elem> frontier{0};
      in[0] = true;
      while (!frontier.empty()) {
        Elem x = frontier.back();
        frontier.pop_back();
        for (Elem g : gens) {
          Elem y = add(x, g);
          if (!in[y]) {
            in[y] = true;
            frontier.push_back(y);
          }
        }
      }
      return in;
    }

  }  // namespace

  ConsistencyReport check_consistency(PcPresentation const& pres,
                                      std::uint64_t         samples,
                                      std::uint64_t         seed,
                                      unsigned              parallel,
                                      std::size_t           exhaustive_cap) {
    ConsistencyReport report;
    report.group  = pres.name();
    report.prime  = pres.prime();
    report.order  = pres.order();
    std::size_t const n = pres.order();
    Adder const       add(pres, 2401);

    std::vector<Elem> gens;
    for (std::size_t i = 0; i < pres.ngens(); ++i) {
      gens.push_back(pres.index(pres.generator(i)));
    }
    auto const reached = closure(n, gens, add);
    report.normal_forms
        = static_cast<std::size_t>(std::count(reached.begin(), reached.end(), true));

    report.identity_ok = true;
    report.inverse_ok  = true;
    for (Elem x = 0; x < n; ++x) {
      if (add(0, x) != x || add(x, 0) != x) {
        report.identity_ok = false;
      }
      Elem nx = pres.index(pres.neg(pres.coordinates(x)));
      if (add(x, nx) != 0 || add(nx, x) != 0) {
        report.inverse_ok = false;
      }
    }

    unsigned const                    workers = worker_count(parallel);
    std::vector<FirstWitness<std::array<Elem, 3>>> found(workers);
    std::vector<std::uint64_t>        counts(workers, 0);

    if (n <= exhaustive_cap && add.tabulated()) {
      report.exhaustive = true;
      auto const& t     = add.table();
      parallel_blocks(n, workers, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
        std::uint64_t checked = 0;
        for (std::uint64_t x = b; x < e && !found[w].witness; ++x) {
          for (std::size_t y = 0; y < n && !found[w].witness; ++y) {
            std::size_t const xy = t[x * n + y];
            for (std::size_t z = 0; z < n; ++z) {
              if (t[xy * n + z] != t[x * n + t[y * n + z]]) {
                found[w].offer((x * n + y) * n + z,
                               {static_cast<Elem>(x), static_cast<Elem>(y),
                                static_cast<Elem>(z)});
                break;
              }
            }
            checked += n;
          }
        }
        counts[w] = checked;
      });
    } else {
      report.seed           = seed;
      std::uint64_t const chunks = (samples + kSampleChunk - 1) / kSampleChunk;
      parallel_blocks(chunks, workers, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t c = b; c < e; ++c) {
          auto                                 rng = chunk_rng(seed, c);
          std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
          std::uint64_t const first = c * kSampleChunk;
          std::uint64_t const last  = std::min(samples, first + kSampleChunk);
          for (std::uint64_t s = first; s < last; ++s) {
            Elem x = pick(rng), y = pick(rng), z = pick(rng);
            if (add(add(x, y), z) != add(x, add(y, z))) {
              found[w].offer(s, {x, y, z});
            }
          }
          counts[w] += last - first;
        }
      });
    }

    FirstWitness<std::array<Elem, 3>> first;
    for (unsigned w = 0; w < workers; ++w) {
      first.merge(found[w]);
      report.triples_checked += counts[w];
    }
    report.associative = !first.witness.has_value();
    report.witness     = first.witness;
    if (n <= PcPresentation::kStepTableCap) {
      report.exponent = pres.exponent();
    }
    return report;
  }

  unsigned nilpotency_class(PcPresentation const& pres) {
    std::size_t const n = pres.order();
    Adder const       add(pres, 2401);
    if (!add.tabulated()) {
      throw CapExceeded("nilpotency_class: group too large");
    }
    std::vector<Elem> neg(n);
    for (Elem x = 0; x < n; ++x) {
      neg[x] = pres.index(pres.neg(pres.coordinates(x)));
    }
    std::vector<bool> current(n, true);  // G_1 = G
    unsigned          cls = 0;
    while (std::count(current.begin(), current.end(), true) > 1) {
      std::vector<bool> is_gen(n, false);
      for (Elem x = 0; x < n; ++x) {
        for (Elem y = 0; y < n; ++y) {
          if (current[y]) {
            is_gen[add(add(neg[x], neg[y]), add(x, y))] = true;
          }
        }
      }
      std::vector<Elem> gens;
      for (Elem x = 0; x < n; ++x) {
        if (is_gen[x]) {
          gens.push_back(x);
        }
      }
      auto next = closure(n, gens, add);
      if (next == current) {
        throw UsageError("nilpotency_class: group is not nilpotent");
      }
      current = std::move(next);
      ++cls;
    }
    return cls;
  }

}  // namespace lnr
