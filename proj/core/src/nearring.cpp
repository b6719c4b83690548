#include "lnr/nearring.hpp"

#include <chrono>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "lnr/parallel.hpp"

namespace lnr {

  namespace {

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point start) {
      return std::chrono::duration<double>(Clock::now() - start).count();
    }

    void fail(LawCheck& law, std::vector<Elem> witness) {
      if (law.passed) {
        law.passed  = false;
        law.witness = std::move(witness);
      }
    }

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // AdditiveGroup
  ////////////////////////////////////////////////////////////////////////

  AdditiveGroup AdditiveGroup::from_presentation(PcPresentation pres,
                                                 std::size_t    table_cap) {
    AdditiveGroup g;
    g._name  = pres.name();
    g._p     = pres.prime();
    g._n     = pres.order();
    g._ngens = pres.ngens();
    g._pres  = std::make_shared<PcPresentation const>(std::move(pres));
    g.tabulate(table_cap);
    return g;
  }

  AdditiveGroup AdditiveGroup::h1(std::uint32_t p, std::size_t table_cap) {
    AdditiveGroup g;
    g._h1    = H1Arith(p);
    g._name  = "h1(" + std::to_string(p) + ")";
    g._p     = p;
    g._n     = g._h1->order();
    g._ngens = 4;
    g.tabulate(table_cap);
    return g;
  }

  void AdditiveGroup::tabulate(std::size_t cap) {
    if (_n > cap) {
      return;
    }
    std::vector<TableEntry> add(_n * _n);
    std::vector<TableEntry> neg(_n);
    for (Elem x = 0; x < _n; ++x) {
      for (Elem y = 0; y < _n; ++y) {
        add[x * _n + y] = static_cast<TableEntry>(this->add(x, y));
      }
    }
    _add = std::move(add);
    for (Elem x = 0; x < _n; ++x) {
      for (Elem y = 0; y < _n; ++y) {
        if (_add[x * _n + y] == 0) {
          neg[x] = static_cast<TableEntry>(y);
          break;
        }
      }
    }
    _neg = std::move(neg);
  }

  Coordinates AdditiveGroup::coordinates(Elem x) const noexcept {
    Coordinates c{};
    for (std::size_t i = _ngens; i-- > 0;) {
      c[i] = x % _p;
      x /= _p;
    }
    return c;
  }

  Elem AdditiveGroup::index(Coordinates const& x) const noexcept {
    Elem idx = 0;
    for (std::size_t i = 0; i < _ngens; ++i) {
      idx = idx * _p + x[i];
    }
    return idx;
  }

  Elem AdditiveGroup::generator(std::size_t i) const {
    if (i >= _ngens) {
      throw UsageError("generator: index out of range");
    }
    Coordinates c{};
    c[i] = 1;
    return index(c);
  }

  std::uint64_t AdditiveGroup::element_order(Elem x) const {
    std::uint64_t n = 1;
    for (Elem e = x; e != 0; e = add(e, x)) {
      ++n;
    }
    return n;
  }

  std::uint64_t AdditiveGroup::exponent() const {
    std::uint64_t result = 1;
    for (Elem x = 0; x < _n; ++x) {
      result = std::lcm(result, element_order(x));
    }
    return result;
  }

  std::vector<bool> AdditiveGroup::subgroup_closure(
      std::vector<Elem> const& gens) const {
    std::vector<bool> in(_n, false);
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

  ////////////////////////////////////////////////////////////////////////
  // NearringInstance
  ////////////////////////////////////////////////////////////////////////

  NearringInstance::NearringInstance(std::string   name,
                                     AdditiveGroup group,
                                     Elem          identity,
                                     MulFn         mul)
      : _name(std::move(name)),
        _group(std::move(group)),
        _identity(identity),
        _mul(std::move(mul)) {
    if (identity >= _group.order() || (identity == 0 && _group.order() > 1)) {
      throw UsageError("NearringInstance: identity must be a nonzero element");
    }
    if (!_mul) {
      throw UsageError("NearringInstance: empty multiplication");
    }
  }

  NearringInstance::NearringInstance(std::string             name,
                                     AdditiveGroup           group,
                                     Elem                    identity,
                                     std::vector<TableEntry> table)
      : _name(std::move(name)),
        _group(std::move(group)),
        _identity(identity),
        _table(std::move(table)) {
    std::size_t const n = _group.order();
    if (identity >= n || (identity == 0 && n > 1)) {
      throw UsageError("NearringInstance: identity must be a nonzero element");
    }
    if (_table.size() != n * n) {
      throw UsageError("NearringInstance: table has wrong size");
    }
    for (TableEntry e : _table) {
      if (e >= n) {
        throw UsageError("NearringInstance: table entry out of range");
      }
    }
  }

  void NearringInstance::tabulate(std::size_t cap) {
    if (!_table.empty()) {
      return;
    }
    std::size_t const n = _group.order();
    if (n > cap) {
      throw CapExceeded("tabulate: order " + std::to_string(n) + " exceeds cap "
                        + std::to_string(cap));
    }
    std::vector<TableEntry> table(n * n);
    for (Elem x = 0; x < n; ++x) {
      for (Elem y = 0; y < n; ++y) {
        table[x * n + y] = static_cast<TableEntry>(_mul(x, y));
      }
    }
    _table = std::move(table);
  }

  ////////////////////////////////////////////////////////////////////////
  // verify_axioms
  ////////////////////////////////////////////////////////////////////////

  std::string_view to_string(VerifyOptions::Mode mode) noexcept {
    return mode == VerifyOptions::Mode::kExhaustive ? "exhaustive" : "sampled";
  }

  namespace {

    struct TripleSweep {
      FirstWitness<std::array<Elem, 3>> assoc;
      FirstWitness<std::array<Elem, 3>> dist;
      std::uint64_t                     checks = 0;
    };

    template <typename Mul, typename Add>
    void exhaustive_triples(std::size_t n,
                            Mul const&  mul,
                            Add const&  add,
                            unsigned    workers,
                            TripleSweep& out) {
      std::vector<TripleSweep> partial(workers);
      parallel_blocks(n, workers, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
        TripleSweep& s = partial[w];
        for (std::uint64_t xx = b; xx < e; ++xx) {
          Elem const x = static_cast<Elem>(xx);
          for (Elem y = 0; y < n; ++y) {
            Elem const          xy   = mul(x, y);
            std::uint64_t const base = (xx * n + y) * n;
            for (Elem z = 0; z < n; ++z) {
              if (mul(xy, z) != mul(x, mul(y, z))) {
                s.assoc.offer(base + z, {x, y, z});
              }
              if (mul(x, add(y, z)) != add(xy, mul(x, z))) {
                s.dist.offer(base + z, {x, y, z});
              }
            }
            s.checks += n;
            if (s.assoc.witness && s.dist.witness) {
              return;
            }
          }
        }
      });
      for (auto const& s : partial) {
        out.assoc.merge(s.assoc);
        out.dist.merge(s.dist);
        out.checks += s.checks;
      }
    }

    template <typename Mul, typename Add>
    void sampled_triples(std::size_t   n,
                         Mul const&    mul,
                         Add const&    add,
                         std::uint64_t samples,
                         std::uint64_t seed,
                         unsigned      workers,
                         TripleSweep&  out) {
      std::vector<TripleSweep> partial(workers);
      std::uint64_t const      chunks = (samples + kSampleChunk - 1) / kSampleChunk;
      parallel_blocks(chunks, workers, [&](unsigned w, std::uint64_t b, std::uint64_t e) {
        TripleSweep& s = partial[w];
        for (std::uint64_t c = b; c < e; ++c) {
          auto                                 rng = chunk_rng(seed, c);
          std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
          std::uint64_t const first = c * kSampleChunk;
          std::uint64_t const last  = std::min(samples, first + kSampleChunk);
          for (std::uint64_t i = first; i < last; ++i) {
            Elem const x = pick(rng), y = pick(rng), z = pick(rng);
            Elem const xy = mul(x, y);
            if (mul(xy, z) != mul(x, mul(y, z))) {
              s.assoc.offer(i, {x, y, z});
            }
            if (mul(x, add(y, z)) != add(xy, mul(x, z))) {
              s.dist.offer(i, {x, y, z});
            }
          }
          s.checks += last - first;
        }
      });
      for (auto const& s : partial) {
        out.assoc.merge(s.assoc);
        out.dist.merge(s.dist);
        out.checks += s.checks;
      }
    }

  }  // namespace

  AxiomReport verify_axioms(NearringInstance const& nr, VerifyOptions const& options) {
    auto const  start = Clock::now();
    AxiomReport report;
    report.mode = options.mode;
    std::size_t const    n     = nr.order();
    AdditiveGroup const& group = nr.group();
    Elem const           i     = nr.identity();

    for (Elem x = 0; x < n; ++x) {
      if (nr.mul(i, x) != x) {
        fail(report.identity_left, {x});
      }
      if (nr.mul(x, i) != x) {
        fail(report.identity_right, {x});
      }
      if (nr.mul(x, 0) != 0) {
        fail(report.right_zero, {x});
      }
      if (nr.mul(0, x) != 0 && !report.zero_symmetry_witness) {
        report.zero_symmetry_witness = x;
      }
    }
    report.identity_left.checks  = n;
    report.identity_right.checks = n;
    report.right_zero.checks     = n;
    report.zero_symmetric        = !report.zero_symmetry_witness.has_value();

    unsigned const workers = worker_count(options.parallel);
    TripleSweep    sweep;
    auto const     run = [&](auto const& mul, auto const& add) {
      if (options.mode == VerifyOptions::Mode::kExhaustive) {
        exhaustive_triples(n, mul, add, workers, sweep);
      } else {
        report.seed = options.seed;
        sampled_triples(n, mul, add, options.samples, options.seed, workers, sweep);
      }
    };
    if (nr.tabulated() && group.tabulated()) {
      TableEntry const* m = nr.table().data();
      TableEntry const* a = group.add_table().data();
      run([m, n](Elem x, Elem y) -> Elem { return m[x * n + y]; },
          [a, n](Elem x, Elem y) -> Elem { return a[x * n + y]; });
    } else {
      run([&nr](Elem x, Elem y) { return nr.mul(x, y); },
          [&group](Elem x, Elem y) { return group.add(x, y); });
    }
    // A failed law counts the triples up to and including its first witness,
    // which does not depend on how the sweep was partitioned.
    std::uint64_t const total = options.mode == VerifyOptions::Mode::kExhaustive
                                    ? std::uint64_t{n} * n * n
                                    : options.samples;
    report.associativity.checks       = total;
    report.left_distributivity.checks = total;
    if (sweep.assoc.witness) {
      auto const& w = *sweep.assoc.witness;
      fail(report.associativity, {w[0], w[1], w[2]});
      report.associativity.checks = sweep.assoc.position + 1;
    }
    if (sweep.dist.witness) {
      auto const& w = *sweep.dist.witness;
      fail(report.left_distributivity, {w[0], w[1], w[2]});
      report.left_distributivity.checks = sweep.dist.position + 1;
    }
    report.elapsed_seconds = seconds_since(start);
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // units_and_locality
  ////////////////////////////////////////////////////////////////////////

  LocalStructure units_and_locality(NearringInstance const& nr) {
    auto const           start = Clock::now();
    std::size_t const    n     = nr.order();
    Elem const           i     = nr.identity();
    AdditiveGroup const& group = nr.group();
    LocalStructure       result;

    std::vector<bool> unit(n, false);
    for (Elem x = 0; x < n; ++x) {
      for (Elem y = 0; y < n; ++y) {
        if (nr.mul(x, y) == i) {
          unit[x] = nr.mul(y, x) == i;
          break;
        }
      }
      (unit[x] ? result.units : result.non_units).push_back(x);
    }
    result.l_order = result.non_units.size();

    result.l_is_subgroup = !result.non_units.empty() && !unit[0];
    for (Elem x : result.non_units) {
      if (!result.l_is_subgroup) {
        break;
      }
      for (Elem y : result.non_units) {
        if (unit[group.add(x, y)]) {
          result.l_is_subgroup      = false;
          result.l_subgroup_witness = {x, y};
          break;
        }
      }
    }
    if (result.l_is_subgroup) {
      for (Elem m : result.non_units) {
        if (group.element_order(m) == result.l_order) {
          result.l_cyclic = true;
          break;
        }
      }
    }

    // Closure of the units under multiplication: exhaustive when small,
    // otherwise a deterministic sample of pairs.
    result.units_closed            = true;
    std::size_t const        u     = result.units.size();
    constexpr std::uint64_t  kExhaustivePairs = 25'000'000;
    if (std::uint64_t{u} * u <= kExhaustivePairs) {
      for (Elem x : result.units) {
        for (Elem y : result.units) {
          if (!unit[nr.mul(x, y)]) {
            result.units_closed = false;
          }
        }
      }
    } else {
      auto                                       rng = chunk_rng(1, 0);
      std::uniform_int_distribution<std::size_t> pick(0, u - 1);
      for (int s = 0; s < 1'000'000; ++s) {
        if (!unit[nr.mul(result.units[pick(rng)], result.units[pick(rng)])]) {
          result.units_closed = false;
        }
      }
    }

    if (result.l_is_subgroup) {
      std::vector<Elem> coset;
      std::vector<bool> in_coset(n, false);
      for (Elem m : result.non_units) {
        Elem v = group.add(i, m);
        coset.push_back(v);
        in_coset[v] = true;
      }
      bool ok = std::all_of(coset.begin(), coset.end(), [&](Elem v) { return unit[v]; });
      for (std::size_t a = 0; ok && a < coset.size(); ++a) {
        for (Elem b : coset) {
          if (!in_coset[nr.mul(coset[a], b)]) {
            ok = false;
            break;
          }
        }
      }
      result.i_plus_l_is_subgroup_of_units = ok;
    }
    result.elapsed_seconds = seconds_since(start);
    return result;
  }

  ////////////////////////////////////////////////////////////////////////
  // Subgroups
  ////////////////////////////////////////////////////////////////////////

  std::vector<Subgroup> enumerate_subgroups(AdditiveGroup const& group) {
    std::size_t const n = group.order();
    if (n > 625) {
      throw CapExceeded("enumerate_subgroups: order above 625");
    }
    std::uint32_t const p = group.prime();

    auto key = [](std::vector<bool> const& in) {
      std::string k((in.size() + 7) / 8, '\0');
      for (std::size_t x = 0; x < in.size(); ++x) {
        if (in[x]) {
          k[x / 8] = static_cast<char>(k[x / 8] | (1 << (x % 8)));
        }
      }
      return k;
    };

    std::vector<Elem> p_multiple(n);
    for (Elem g = 0; g < n; ++g) {
      Elem m = 0;
      for (std::uint32_t k = 0; k < p; ++k) {
        m = group.add(m, g);
      }
      p_multiple[g] = m;
    }

    std::vector<Subgroup>                       result;
    std::vector<std::vector<bool>>              members;
    std::unordered_map<std::string, std::size_t> seen;

    std::vector<bool> trivial(n, false);
    trivial[0] = true;
    seen.emplace(key(trivial), 0);
    members.push_back(trivial);
    result.push_back({{0}, {}});

    // In a p-group every subgroup is reached from {0} through steps of
    // index p, and a step S < T of index p is T = <S, g> for any g in T \ S.
    for (std::size_t s = 0; s < result.size(); ++s) {
      std::vector<bool> const covered_init = members[s];
      std::vector<bool>       covered      = covered_init;
      std::size_t const       order        = result[s].elements.size();
      for (Elem g = 0; g < n; ++g) {
        if (covered[g] || !members[s][p_multiple[g]]) {
          continue;
        }
        std::vector<Elem> gens = result[s].generators;
        gens.push_back(g);
        auto        t    = group.subgroup_closure(gens);
        std::size_t size = static_cast<std::size_t>(std::count(t.begin(), t.end(), true));
        if (size != order * p) {
          continue;
        }
        for (Elem x = 0; x < n; ++x) {
          if (t[x]) {
            covered[x] = true;
          }
        }
        auto [it, inserted] = seen.emplace(key(t), result.size());
        if (inserted) {
          Subgroup sub;
          sub.generators = std::move(gens);
          for (Elem x = 0; x < n; ++x) {
            if (t[x]) {
              sub.elements.push_back(x);
            }
          }
          members.push_back(std::move(t));
          result.push_back(std::move(sub));
        }
      }
    }
    return result;
  }

  ////////////////////////////////////////////////////////////////////////
  // Structural properties
  ////////////////////////////////////////////////////////////////////////

  StructuralReport check_structural_properties(NearringInstance const& nr,
                                           LocalStructure const&   local,
                                           std::uint64_t           samples,
                                           std::uint64_t           seed) {
    auto const           start = Clock::now();
    StructuralReport     report;
    AdditiveGroup const& group = nr.group();
    std::size_t const    n     = nr.order();

    report.identity_order            = group.element_order(nr.identity());
    report.exponent                  = group.exponent();
    report.units_have_exponent_order = true;
    for (Elem u : local.units) {
      if (group.element_order(u) != report.exponent) {
        report.units_have_exponent_order = false;
        report.unit_order_witness        = u;
        break;
      }
    }

    std::vector<bool> in_l(n, false);
    for (Elem m : local.non_units) {
      in_l[m] = true;
    }
    std::vector<Elem> const& l = local.non_units;

    constexpr std::uint64_t kExhaustiveTriples = 100'000'000;
    if (std::uint64_t{n} * l.size() * n <= kExhaustiveTriples) {
      report.rr_mode = "exhaustive";
      for (Elem x = 0; x < n && report.rr_subgroup.passed; ++x) {
        for (Elem m : l) {
          Elem const xm = nr.mul(x, m);
          for (Elem y = 0; y < n; ++y) {
            if (!in_l[nr.mul(xm, y)]) {
              fail(report.rr_subgroup, {x, m, y});
              break;
            }
          }
          report.rr_subgroup.checks += n;
          if (!report.rr_subgroup.passed) {
            break;
          }
        }
      }
    } else {
      report.rr_mode = "generators+sampled";
      std::vector<Elem> gens;
      std::vector<bool> span(n, false);
      span[0] = true;
      for (Elem m : l) {
        if (!span[m]) {
          gens.push_back(m);
          span = group.subgroup_closure(gens);
        }
      }
      for (Elem m : gens) {
        for (Elem x = 0; x < n && report.rr_subgroup.passed; ++x) {
          Elem const xm = nr.mul(x, m);
          for (Elem y = 0; y < n; ++y) {
            if (!in_l[nr.mul(xm, y)]) {
              fail(report.rr_subgroup, {x, m, y});
              break;
            }
          }
          report.rr_subgroup.checks += n;
        }
      }
      if (!l.empty()) {
        auto                                       rng = chunk_rng(seed, 0);
        std::uniform_int_distribution<Elem>        pick(0, static_cast<Elem>(n - 1));
        std::uniform_int_distribution<std::size_t> pick_l(0, l.size() - 1);
        for (std::uint64_t s = 0; s < samples; ++s) {
          Elem const x = pick(rng), m = l[pick_l(rng)], y = pick(rng);
          if (!in_l[nr.mul(nr.mul(x, m), y)]) {
            fail(report.rr_subgroup, {x, m, y});
          }
        }
        report.rr_subgroup.checks += samples;
      }
    }

    if (n <= 625) {
      report.invariant_checked = true;
      report.invariant_in_l    = true;
      auto const subgroups     = enumerate_subgroups(group);
      report.subgroups_enumerated = subgroups.size();
      for (auto const& sub : subgroups) {
        if (sub.elements.size() == n) {
          continue;
        }
        std::vector<bool> in_sub(n, false);
        for (Elem x : sub.elements) {
          in_sub[x] = true;
        }
        // y -> r*y is an endomorphism, so generators suffice.
        bool invariant = true;
        for (Elem r : local.units) {
          for (Elem g : sub.generators) {
            if (!in_sub[nr.mul(r, g)]) {
              invariant = false;
              break;
            }
          }
          if (!invariant) {
            break;
          }
        }
        if (!invariant) {
          continue;
        }
        report.invariant_proper_orders.push_back(sub.elements.size());
        for (Elem x : sub.elements) {
          if (!in_l[x]) {
            report.invariant_in_l = false;
            if (!report.invariant_witness) {
              report.invariant_witness = x;
            }
          }
        }
      }
      std::sort(report.invariant_proper_orders.begin(),
                report.invariant_proper_orders.end());
    }
    report.elapsed_seconds = seconds_since(start);
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Tables
  ////////////////////////////////////////////////////////////////////////

  MulTable multiplication_table(NearringInstance const& nr, std::size_t cap) {
    std::size_t const n = nr.order();
    if (n > cap) {
      throw CapExceeded("multiplication_table: order " + std::to_string(n)
                        + " exceeds cap " + std::to_string(cap));
    }
    MulTable table;
    table.p        = nr.group().prime();
    table.n        = n;
    table.identity = nr.identity();
    if (nr.tabulated()) {
      table.entries = nr.table();
    } else {
      table.entries.resize(n * n);
      for (Elem x = 0; x < n; ++x) {
        for (Elem y = 0; y < n; ++y) {
          table.entries[x * n + y] = static_cast<TableEntry>(nr.mul(x, y));
        }
      }
    }
    return table;
  }

  void write_table_csv(std::ostream& out, MulTable const& table) {
    out << table.p << ',' << table.n << ',' << table.identity << '\n';
    std::string line;
    for (std::size_t x = 0; x < table.n; ++x) {
      line.clear();
      for (std::size_t y = 0; y < table.n; ++y) {
        if (y != 0) {
          line += ',';
        }
        line += std::to_string(table.entries[x * table.n + y]);
      }
      line += '\n';
      out << line;
    }
  }

  namespace {

    std::vector<std::uint64_t> parse_csv_line(std::string const& line,
                                              std::size_t        line_no) {
      std::vector<std::uint64_t> values;
      std::size_t                pos = 0;
      while (pos <= line.size()) {
        std::size_t end = line.find(',', pos);
        if (end == std::string::npos) {
          end = line.size();
        }
        std::string field = line.substr(pos, end - pos);
        if (!field.empty() && field.back() == '\r') {
          field.pop_back();
        }
        if (field.empty()
            || field.find_first_not_of("0123456789") != std::string::npos) {
          throw UsageError("table csv: bad field '" + field + "' on line "
                           + std::to_string(line_no));
        }
        values.push_back(std::stoull(field));
        pos = end + 1;
      }
      return values;
    }

  }  // namespace

  MulTable read_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
      throw UsageError("table csv: empty input");
    }
    auto const header = parse_csv_line(line, 1);
    if (header.size() != 3) {
      throw UsageError("table csv: header must be p,n,identity_idx");
    }
    MulTable table;
    table.p        = static_cast<std::uint32_t>(header[0]);
    table.n        = static_cast<std::size_t>(header[1]);
    table.identity = static_cast<Elem>(header[2]);
    if (table.n == 0 || table.n > 65536 || table.identity >= table.n) {
      throw UsageError("table csv: bad header values");
    }
    table.entries.reserve(table.n * table.n);
    for (std::size_t x = 0; x < table.n; ++x) {
      if (!std::getline(in, line)) {
        throw UsageError("table csv: expected " + std::to_string(table.n)
                         + " rows, got " + std::to_string(x));
      }
      auto const row = parse_csv_line(line, x + 2);
      if (row.size() != table.n) {
        throw UsageError("table csv: row " + std::to_string(x) + " has "
                         + std::to_string(row.size()) + " entries");
      }
      for (auto v : row) {
        if (v >= table.n) {
          throw UsageError("table csv: entry out of range in row "
                           + std::to_string(x));
        }
        table.entries.push_back(static_cast<TableEntry>(v));
      }
    }
    return table;
  }

}  // namespace lnr
