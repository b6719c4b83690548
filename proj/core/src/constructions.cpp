#include "lnr/constructions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <memory>
#include <istream>
#include <ostream>
#include <sstream>

#include "lnr/parallel.hpp"

namespace lnr {

  ////////////////////////////////////////////////////////////////////////
  // Maps
  ////////////////////////////////////////////////////////////////////////

  bool MapQuad::alpha_zero() const noexcept {
    return std::all_of(alpha.begin(), alpha.end(), [](std::uint32_t v) { return v == 0; });
  }

  namespace {

    MapQuad empty_maps(std::uint32_t p, std::string name) {
      H1Arith const h1(p);
      MapQuad       maps;
      maps.p    = p;
      maps.name = std::move(name);
      std::size_t const n = h1.order();
      maps.alpha.assign(n, 0);
      maps.beta.assign(n, 0);
      maps.gamma.assign(n, 0);
      maps.phi.assign(n, 0);
      return maps;
    }

  }  // namespace

  MapQuad example1_maps(std::uint32_t p) {
    MapQuad       maps = empty_maps(p, "example1");
    H1Arith const h1(p);
    for (Elem x = 0; x < maps.size(); ++x) {
      Coordinates const c = h1.coordinates(x);
      maps.beta[x]        = c[0] * c[0] % p;
      maps.phi[x]         = c[0] == 0 ? c[1] * c[1] % p : 0;
    }
    return maps;
  }

  MapQuad trivial_beta1_maps(std::uint32_t p) {
    MapQuad maps = empty_maps(p, "trivial-beta1");
    std::fill(maps.beta.begin(), maps.beta.end(), 1u);
    return maps;
  }

  MapQuad builtin_maps(std::string const& name, std::uint32_t p) {
    if (name == "example1") {
      return example1_maps(p);
    }
    if (name == "trivial-beta1") {
      return trivial_beta1_maps(p);
    }
    throw UsageError("unknown builtin maps '" + name + "'");
  }

  MapQuad read_maps_csv(std::istream& in, std::uint32_t p, std::string name) {
    MapQuad           maps = empty_maps(p, std::move(name));
    std::size_t const n    = maps.size();
    std::vector<bool> seen(n, false);
    std::string       line;
    std::size_t       line_no = 0;
    std::size_t       rows    = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') {
        line.pop_back();
      }
      if (line.empty()) {
        continue;
      }
      if (line_no == 1 && !std::isdigit(static_cast<unsigned char>(line[0]))) {
        continue;
      }
      std::array<std::int64_t, 5> v{};
      std::stringstream           fields(line);
      std::string                 field;
      std::size_t                 k = 0;
      while (std::getline(fields, field, ',')) {
        if (k == 5) {
          throw UsageError("maps csv: too many fields on line " + std::to_string(line_no));
        }
        std::size_t used = 0;
        try {
          v[k] = std::stoll(field, &used);
        } catch (std::exception const&) {
          used = 0;
        }
        if (used == 0 || used != field.size()) {
          throw UsageError("maps csv: bad field '" + field + "' on line "
                           + std::to_string(line_no));
        }
        ++k;
      }
      if (k != 5) {
        throw UsageError("maps csv: expected 5 fields on line " + std::to_string(line_no));
      }
      if (v[0] < 0 || static_cast<std::size_t>(v[0]) >= n) {
        throw UsageError("maps csv: element index out of range on line "
                         + std::to_string(line_no));
      }
      Elem const x = static_cast<Elem>(v[0]);
      if (seen[x]) {
        throw UsageError("maps csv: duplicate element " + std::to_string(x));
      }
      seen[x]       = true;
      maps.alpha[x] = mod(v[1], p);
      maps.beta[x]  = mod(v[2], p);
      maps.gamma[x] = mod(v[3], p);
      maps.phi[x]   = mod(v[4], p);
      ++rows;
    }
    if (rows != n) {
      throw UsageError("maps csv: expected " + std::to_string(n) + " rows, got "
                       + std::to_string(rows));
    }
    return maps;
  }

  void write_maps_csv(std::ostream& out, MapQuad const& maps) {
    out << "index,alpha,beta,gamma,phi\n";
    for (Elem x = 0; x < maps.size(); ++x) {
      out << x << ',' << maps.alpha[x] << ',' << maps.beta[x] << ',' << maps.gamma[x]
          << ',' << maps.phi[x] << '\n';
    }
  }

  void validate_maps(MapQuad const& maps) {
    H1Arith const     h1(maps.p);
    std::size_t const n = h1.order();
    if (maps.alpha.size() != n || maps.beta.size() != n || maps.gamma.size() != n
        || maps.phi.size() != n) {
      throw UsageError("maps: every table needs p^4 = " + std::to_string(n) + " entries");
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (maps.alpha[x] >= maps.p || maps.beta[x] >= maps.p || maps.gamma[x] >= maps.p
          || maps.phi[x] >= maps.p) {
        throw UsageError("maps: value not reduced mod p at element " + std::to_string(x));
      }
    }
    Elem const a = h1.index({1, 0, 0, 0});
    if (maps.at(a) != std::array<std::uint32_t, 4>{0, 1, 0, 0}) {
      throw MapRejected("maps: identity row violated, need (alpha,beta,gamma,phi)(a) = (0,1,0,0)");
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Multiplications
  ////////////////////////////////////////////////////////////////////////

  std::string_view to_string(GeneralFormula f) noexcept {
    return f == GeneralFormula::kTruncated ? "truncated" : "corrected";
  }

  Coordinates mul_general(H1Arith const&     h1,
                          MapQuad const&     maps,
                          GeneralFormula     formula,
                          Coordinates const& x,
                          Coordinates const& y) {
    std::int64_t const p  = h1.prime();
    auto const         m  = [p](std::int64_t v) { return v % p; };
    auto const         q  = maps.at(h1.index(x));
    std::int64_t const al = q[0], be = q[1], ga = q[2], ph = q[3];
    std::int64_t const x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    std::int64_t const y1 = y[0], y2 = y[1], y3 = y[2], y4 = y[3];
    std::int64_t const cy1 = h1.binom2(y1), cy2 = h1.binom2(y2), cx1 = h1.binom2(x1);
    std::int64_t const ca  = h1.binom2(al);

    std::int64_t c = x3 * y1 - m(x1 * x2) * cy1 - m(x2 * al) * m(y1 * y2) + ga * y2;
    if (formula == GeneralFormula::kCorrected) {
      c += -m(al * be) * cy2 + m(x1 * be) * y3 - m(x2 * al) * y3;
    }
    std::int64_t d = x4 * y1 + m(x2 * cx1) * cy1 - m(x1 * x3) * cy1
                     + m(m(x1 * x1) * x2) * h1.binom3(y1) + m(x2 * y1) * h1.binom2(al * y2)
                     - m(al * x3) * m(y1 * y2) + m(m(x1 * x2) * al) * m(cy1 * y2) + ph * y2
                     + m(be * ca) * cy2 - m(al * ga) * cy2 + m(m(al * al) * be) * h1.binom3(y2)
                     + m(x1 * ga) * y3 - m(be * cx1) * y3 + m(x2 * ca) * y3 - m(x3 * al) * y3
                     + m(m(x1 * x1) * be) * y4 - m(m(x1 * x2) * al) * y4;
    return {mod(x1 * y1 + al * y2, h1.prime()),
            mod(x2 * y1 + be * y2, h1.prime()),
            mod(c, h1.prime()),
            mod(d, h1.prime())};
  }

  Coordinates mul_local(H1Arith const&     h1,
                        MapQuad const&     maps,
                        Coordinates const& x,
                        Coordinates const& y) {
    std::int64_t const p  = h1.prime();
    auto const         m  = [p](std::int64_t v) { return v % p; };
    Elem const         xi = h1.index(x);
    std::int64_t const be = maps.beta[xi], ga = maps.gamma[xi], ph = maps.phi[xi];
    std::int64_t const x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    std::int64_t const y1 = y[0], y2 = y[1], y3 = y[2], y4 = y[3];
    std::int64_t const cy1 = h1.binom2(y1), cx1 = h1.binom2(x1);
    std::int64_t const c = x3 * y1 - m(x1 * x2) * cy1 + m(x1 * be) * y3 + ga * y2;
    std::int64_t const d = x4 * y1 + m(x2 * cx1) * cy1 - m(x1 * x3) * cy1
                           + m(m(x1 * x1) * x2) * h1.binom3(y1) + ph * y2 + m(x1 * ga) * y3
                           - m(be * cx1) * y3 + m(m(x1 * x1) * be) * y4;
    return {mod(x1 * y1, h1.prime()),
            mod(x2 * y1 + be * y2, h1.prime()),
            mod(c, h1.prime()),
            mod(d, h1.prime())};
  }

  Coordinates mul_by_distributivity(H1Arith const&     h1,
                                    MapQuad const&     maps,
                                    Coordinates const& x,
                                    Coordinates const& y) {
    auto const        q  = maps.at(h1.index(x));
    Coordinates const xb{q[0], q[1], q[2], q[3]};
    Coordinates const xc = h1.commutator(x, xb);
    Coordinates const xd = h1.commutator(x, xc);
    return h1.add(h1.add(h1.smul(x, y[0]), h1.smul(xb, y[1])),
                  h1.add(h1.smul(xc, y[2]), h1.smul(xd, y[3])));
  }

  FormulaSelection select_general_formula(MapQuad const& maps,
                                          std::uint64_t  samples,
                                          std::uint64_t  seed,
                                          std::uint64_t  exhaustive_pairs) {
    H1Arith const     h1(maps.p);
    std::size_t const n = h1.order();
    FormulaSelection  sel;
    auto const        check = [&](Elem x, Elem y) {
      Coordinates const cx = h1.coordinates(x), cy = h1.coordinates(y);
      Coordinates const want = mul_by_distributivity(h1, maps, cx, cy);
      for (int f = 0; f < 2; ++f) {
        if (mul_general(h1, maps, static_cast<GeneralFormula>(f), cx, cy) != want) {
          if (sel.mismatches[f]++ == 0) {
            sel.witness[f] = std::array<Elem, 2>{x, y};
          }
        }
      }
      ++sel.pairs;
    };
    if (std::uint64_t{n} * n <= exhaustive_pairs) {
      sel.exhaustive = true;
      for (Elem x = 0; x < n; ++x) {
        for (Elem y = 0; y < n; ++y) {
          check(x, y);
        }
      }
    } else {
      auto                                rng = chunk_rng(seed, 0);
      std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
      for (std::uint64_t s = 0; s < samples; ++s) {
        Elem const x = pick(rng);
        check(x, pick(rng));
      }
    }
    sel.chosen = sel.mismatches[0] < sel.mismatches[1] ? GeneralFormula::kTruncated
                                                       : GeneralFormula::kCorrected;
    return sel;
  }

  ////////////////////////////////////////////////////////////////////////
  // Conditions
  ////////////////////////////////////////////////////////////////////////

  bool ConditionReport::passed() const noexcept {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](ConditionCheck const& c) { return !c.required || c.passed; });
  }

  ConditionCheck const* ConditionReport::find(std::string_view name) const noexcept {
    for (auto const& c : conditions) {
      if (c.name == name) {
        return &c;
      }
    }
    return nullptr;
  }

  namespace {

    using Mul = std::function<Coordinates(Coordinates const&, Coordinates const&)>;

    // Everything a pairwise condition looks at.
    struct Pair {
      Coordinates                  x, y, xy;
      std::array<std::int64_t, 4>  mx, my, mxy;  // alpha, beta, gamma, phi
    };

    std::array<std::int64_t, 4> maps_at(MapQuad const& maps, Elem e) {
      auto const q = maps.at(e);
      return {q[0], q[1], q[2], q[3]};
    }

    struct PairCondition {
      ConditionCheck check;
      // returns nullopt when the condition does not apply to the pair
      std::function<std::optional<bool>(Pair const&)> eval;
    };

    // Statement (0) and the xc, xd closed forms, which depend on x only.
    void single_conditions(H1Arith const&                                   h1,
                           MapQuad const&                                   maps,
                           Mul const&                                       mul,
                           std::function<Coordinates(Coordinates const&)>   xc_closed,
                           std::function<Coordinates(Coordinates const&)>   xd_closed,
                           std::string const&                               xc_statement,
                           std::string const&                               xd_statement,
                           ConditionReport&                                 report) {
      std::size_t const n = h1.order();
      Coordinates const b{0, 1, 0, 0}, c{0, 0, 1, 0}, d{0, 0, 0, 1};

      ConditionCheck zero{"(0)", "0*b = 0 iff the maps vanish at 0, iff 0*x = 0 for all x"};
      bool zero_symmetric = true;
      Elem first_bad      = 0;
      for (Elem y = 0; y < n && zero_symmetric; ++y) {
        if (mul({0, 0, 0, 0}, h1.coordinates(y)) != Coordinates{}) {
          zero_symmetric = false;
          first_bad      = y;
        }
      }
      auto const m0         = maps.at(0);
      bool const maps_zero  = m0 == std::array<std::uint32_t, 4>{};
      bool const b_zero     = mul({0, 0, 0, 0}, b) == Coordinates{};
      zero.checks           = n;
      zero.passed           = zero_symmetric == maps_zero && b_zero == maps_zero;
      if (!zero.passed) {
        zero.witness = std::array<Elem, 2>{0, first_bad};
      }
      report.conditions.push_back(zero);

      ConditionCheck xc{"(1)", xc_statement};
      ConditionCheck xd{"(2)", xd_statement};
      for (Elem xi = 0; xi < n; ++xi) {
        Coordinates const x  = h1.coordinates(xi);
        Coordinates const xb = mul(x, b);
        Coordinates const cc = h1.commutator(x, xb);
        Coordinates const got_c = mul(x, c);
        if (xc.passed && (got_c != cc || xc_closed(x) != cc)) {
          xc.passed  = false;
          xc.witness = std::array<Elem, 2>{xi, h1.index(c)};
        }
        Coordinates const dd = h1.commutator(x, cc);
        if (xd.passed && (mul(x, d) != dd || xd_closed(x) != dd)) {
          xd.passed  = false;
          xd.witness = std::array<Elem, 2>{xi, h1.index(d)};
        }
      }
      xc.checks = xd.checks = n;
      report.conditions.push_back(xc);
      report.conditions.push_back(xd);
    }

    void sweep_pairs(H1Arith const&              h1,
                     MapQuad const&              maps,
                     Mul const&                  mul,
                     std::vector<PairCondition>& conds,
                     PairSweepOptions const&     options,
                     ConditionReport&            report) {
      std::size_t const n       = h1.order();
      unsigned const    workers = worker_count(options.parallel);
      std::size_t const k       = conds.size();
      std::vector<std::vector<FirstWitness<std::array<Elem, 2>>>> found(
          workers, std::vector<FirstWitness<std::array<Elem, 2>>>(k));
      std::vector<std::vector<std::uint64_t>> counts(workers, std::vector<std::uint64_t>(k));
      auto const visit = [&](unsigned w, Pair& pr, Elem xi, Elem yi, std::uint64_t pos) {
        pr.x   = h1.coordinates(xi);
        pr.mx  = maps_at(maps, xi);
        pr.y   = h1.coordinates(yi);
        pr.my  = maps_at(maps, yi);
        pr.xy  = mul(pr.x, pr.y);
        pr.mxy = maps_at(maps, h1.index(pr.xy));
        for (std::size_t c = 0; c < k; ++c) {
          auto const r = conds[c].eval(pr);
          if (!r) {
            continue;
          }
          ++counts[w][c];
          if (!*r) {
            found[w][c].offer(pos, {xi, yi});
          }
        }
      };
      report.exhaustive = std::uint64_t{n} * n <= options.exhaustive_pairs;
      if (report.exhaustive) {
        parallel_blocks(n, workers, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
          Pair pr;
          for (std::uint64_t xi = begin; xi < end; ++xi) {
            for (Elem yi = 0; yi < n; ++yi) {
              visit(w, pr, static_cast<Elem>(xi), yi, xi * n + yi);
            }
          }
        });
      } else {
        report.seed = options.seed;
        std::uint64_t const chunks = (options.samples + kSampleChunk - 1) / kSampleChunk;
        parallel_blocks(chunks, workers, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
          Pair pr;
          for (std::uint64_t c = begin; c < end; ++c) {
            auto                                rng = chunk_rng(options.seed, c);
            std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
            std::uint64_t const last = std::min(options.samples, (c + 1) * kSampleChunk);
            for (std::uint64_t s = c * kSampleChunk; s < last; ++s) {
              Elem const xi = pick(rng);
              visit(w, pr, xi, pick(rng), s);
            }
          }
        });
      }
      for (std::size_t c = 0; c < k; ++c) {
        FirstWitness<std::array<Elem, 2>> first;
        std::uint64_t                     total = 0;
        for (unsigned w = 0; w < workers; ++w) {
          first.merge(found[w][c]);
          total += counts[w][c];
        }
        ConditionCheck check = conds[c].check;
        check.checks         = total;
        check.passed         = !first.witness;
        check.witness        = first.witness;
        report.conditions.push_back(std::move(check));
      }
    }

  }  // namespace

  ConditionReport check_general_conditions(MapQuad const&          maps,
                                           GeneralFormula          formula,
                                           PairSweepOptions const& options) {
    validate_maps(maps);
    H1Arith const      h1(maps.p);
    std::int64_t const p = maps.p;
    ConditionReport    report;
    report.prime  = maps.p;
    report.family = "general";
    Mul const mul = [&](Coordinates const& x, Coordinates const& y) {
      return mul_general(h1, maps, formula, x, y);
    };
    auto const md = [p](std::int64_t v) { return mod(v, static_cast<std::uint32_t>(p)); };
    auto const c2 = [&](std::int64_t v) -> std::int64_t { return h1.binom2(v); };
    auto const c3 = [&](std::int64_t v) -> std::int64_t { return h1.binom3(v); };

    single_conditions(
        h1, maps, mul,
        [&](Coordinates const& x) {
          auto const [al, be, ga, ph] = maps_at(maps, h1.index(x));
          std::int64_t const x1 = x[0], x2 = x[1], x3 = x[2];
          return Coordinates{0, 0, md(x1 * be - x2 * al),
                             md(x1 * ga - be * c2(x1) + x2 * c2(al) - x3 * al)};
        },
        [&](Coordinates const& x) {
          auto const [al, be, ga, ph] = maps_at(maps, h1.index(x));
          std::int64_t const x1 = x[0], x2 = x[1];
          return Coordinates{0, 0, 0, md(x1 * x1 * be - x1 * x2 * al)};
        },
        "xc = c(x1 beta(x) - x2 alpha(x)) + d(x1 gamma(x) - beta(x)C(x1,2) + x2 C(alpha(x),2) - x3 alpha(x))",
        "xd = d(x1^2 beta(x) - x1 x2 alpha(x))", report);

    // (6) with its seventh term's last factor supplied by `last`.
    auto const phi_rhs = [&](Pair const& q, std::int64_t last) {
      auto const [ax, bx, gx, px] = q.mx;
      auto const [ay, by, gy, py] = q.my;
      std::int64_t const x1 = q.x[0], x2 = q.x[1], x3 = q.x[2], x4 = q.x[3];
      return md(x4 * ay + x2 * c2(x1) * c2(ay) - x1 * x3 * c2(ay) + x1 * x1 * x2 * c3(ay)
                + x2 * ay * c2(ax * by) - ax * x3 * ay * by + x1 * x2 * ax * c2(ay) % p * last
                + px * by + bx * c2(ax) * c2(by) - ax * gx * c2(by) + ax * ax * bx * c3(by)
                + x1 * gx * gy - bx * c2(x1) * gy + x2 * c2(ax) * gy - x3 * ax * gy
                + x1 * x1 * bx * py - x1 * x2 * ax * py);
    };

    std::vector<PairCondition> conds;
    conds.push_back({{"(3)", "alpha(xy) = x1 alpha(y) + alpha(x)beta(y)"}, [&](Pair const& q) {
                       return std::optional<bool>(
                           q.mxy[0] == md(q.x[0] * q.my[0] + q.mx[0] * q.my[1]));
                     }});
    conds.push_back({{"(4)", "beta(xy) = x2 alpha(y) + beta(x)beta(y)"}, [&](Pair const& q) {
                       return std::optional<bool>(
                           q.mxy[1] == md(q.x[1] * q.my[0] + q.mx[1] * q.my[1]));
                     }});
    conds.push_back(
        {{"(5)",
          "gamma(xy) = x3 alpha(y) - x1x2 C(alpha(y),2) - x2 alpha(x)alpha(y)beta(y) + "
          "gamma(x)beta(y) - alpha(x)beta(x)C(beta(y),2) + x1 beta(x)gamma(y) - x2 alpha(x)gamma(y)"},
         [&](Pair const& q) {
           auto const [ax, bx, gx, px] = q.mx;
           auto const [ay, by, gy, py] = q.my;
           std::int64_t const x1 = q.x[0], x2 = q.x[1], x3 = q.x[2];
           return std::optional<bool>(
               q.mxy[2]
               == md(x3 * ay - x1 * x2 * c2(ay) - x2 * ax * ay % p * by + gx * by
                     - ax * bx * c2(by) + x1 * bx * gy - x2 * ax * gy));
         }});
    ConditionCheck y2_six{"(6)-y2",
                            "phi(xy) with the factor y2 in x1x2 alpha(x)C(alpha(y),2)y2"};
    y2_six.required = false;
    conds.push_back({y2_six, [&](Pair const& q) {
                       return std::optional<bool>(q.mxy[3] == phi_rhs(q, q.y[1]));
                     }});
    conds.push_back({{"(6)", "phi(xy) with beta(y) in place of y2 in x1x2 alpha(x)C(alpha(y),2)y2"},
                     [&](Pair const& q) {
                       return std::optional<bool>(q.mxy[3] == phi_rhs(q, q.my[1]));
                     }});
    conds.push_back({{"x(yb)=(xy)b", "x(yb) = (xy)b by direct evaluation"}, [&](Pair const& q) {
                       auto const   my = q.my;
                       Coordinates const yb{static_cast<std::uint32_t>(my[0]),
                                            static_cast<std::uint32_t>(my[1]),
                                            static_cast<std::uint32_t>(my[2]),
                                            static_cast<std::uint32_t>(my[3])};
                       Coordinates const lhs = mul(q.x, yb);
                       return std::optional<bool>(
                           lhs[0] == q.mxy[0] && lhs[1] == q.mxy[1] && lhs[2] == q.mxy[2]
                           && lhs[3] == q.mxy[3]);
                     }});
    sweep_pairs(h1, maps, mul, conds, options, report);
    return report;
  }

  ConditionReport check_local_conditions(MapQuad const& maps, PairSweepOptions const& options) {
    validate_maps(maps);
    if (!maps.alpha_zero()) {
      throw UsageError("check_local_conditions: alpha must vanish identically");
    }
    H1Arith const      h1(maps.p);
    std::int64_t const p = maps.p;
    ConditionReport    report;
    report.prime  = maps.p;
    report.family = "local";
    Mul const mul = [&](Coordinates const& x, Coordinates const& y) {
      return mul_local(h1, maps, x, y);
    };
    auto const md = [p](std::int64_t v) { return mod(v, static_cast<std::uint32_t>(p)); };
    auto const c2 = [&](std::int64_t v) -> std::int64_t { return h1.binom2(v); };

    single_conditions(
        h1, maps, mul,
        [&](Coordinates const& x) {
          auto const q  = maps_at(maps, h1.index(x));
          std::int64_t const x1 = x[0];
          return Coordinates{0, 0, md(x1 * q[1]), md(x1 * q[2] - q[1] * c2(x1))};
        },
        [&](Coordinates const& x) {
          auto const q  = maps_at(maps, h1.index(x));
          std::int64_t const x1 = x[0];
          return Coordinates{0, 0, 0, md(x1 * x1 * q[1])};
        },
        "xc = c x1 beta(x) + d(x1 gamma(x) - beta(x)C(x1,2))", "xd = d x1^2 beta(x)", report);

    auto const cond3 = [&](Pair const& q) {
      auto const [ax, bx, gx, px] = q.mx;
      auto const [ay, by, gy, py] = q.my;
      std::int64_t const x1 = q.x[0];
      return q.mxy[3] == md(px * by + x1 * gx * gy - bx * c2(x1) * gy + x1 * x1 * bx * py);
    };
    std::vector<PairCondition> conds;
    conds.push_back({{"(1)", "beta(xy) = beta(x)beta(y)"}, [&](Pair const& q) {
                       return std::optional<bool>(q.mxy[1] == md(q.mx[1] * q.my[1]));
                     }});
    conds.push_back({{"(2)", "gamma(xy) = x1 beta(x)gamma(y)"}, [&](Pair const& q) {
                       return std::optional<bool>(q.mxy[2] == md(q.x[0] * q.mx[1] * q.my[2]));
                     }});
    conds.push_back(
        {{"(3)",
          "phi(xy) = phi(x)beta(y) + x1 gamma(x)gamma(y) - beta(x)C(x1,2)gamma(y) + x1^2 beta(x)phi(y)"},
         [&](Pair const& q) { return std::optional<bool>(cond3(q)); }});
    auto const by_case = [&](bool x1_zero, bool y1_zero) {
      return [&, x1_zero, y1_zero](Pair const& q) -> std::optional<bool> {
        if ((q.x[0] == 0) != x1_zero || (q.y[0] == 0) != y1_zero) {
          return std::nullopt;
        }
        return cond3(q);
      };
    };
    conds.push_back({{"(3) x1!=0,y1!=0", "condition (3) on pairs with x1y1 != 0"}, by_case(false, false)});
    conds.push_back({{"(3) x1=0,y1!=0", "condition (3) on pairs with x1 = 0, y1 != 0"}, by_case(true, false)});
    conds.push_back({{"(3) x1!=0,y1=0", "condition (3) on pairs with x1 != 0, y1 = 0"}, by_case(false, true)});
    conds.push_back({{"(3) x1=0,y1=0", "condition (3) on pairs with x1 = y1 = 0"}, by_case(true, true)});
    conds.push_back({{"x(yb)=(xy)b", "x(yb) = (xy)b by direct evaluation"}, [&](Pair const& q) {
                       Coordinates const yb{0, static_cast<std::uint32_t>(q.my[1]),
                                            static_cast<std::uint32_t>(q.my[2]),
                                            static_cast<std::uint32_t>(q.my[3])};
                       Coordinates const lhs = mul(q.x, yb);
                       return std::optional<bool>(lhs[0] == 0 && lhs[1] == q.mxy[1]
                                                  && lhs[2] == q.mxy[2] && lhs[3] == q.mxy[3]);
                     }});
    sweep_pairs(h1, maps, mul, conds, options, report);
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Instances
  ////////////////////////////////////////////////////////////////////////

  NearringInstance build_nearring(MapQuad const& maps,
                                  Family         family,
                                  GeneralFormula formula,
                                  std::size_t    table_cap) {
    validate_maps(maps);
    if (family == Family::kLocal && !maps.alpha_zero()) {
      throw UsageError("build_nearring: the local family needs alpha = 0");
    }
    AdditiveGroup group = AdditiveGroup::h1(maps.p, table_cap);
    auto const    h1    = std::make_shared<H1Arith const>(maps.p);
    auto const    shared_maps = std::make_shared<MapQuad const>(maps);
    MulFn         mul;
    if (family == Family::kLocal) {
      mul = [h1, shared_maps](Elem x, Elem y) {
        return h1->index(mul_local(*h1, *shared_maps, h1->coordinates(x), h1->coordinates(y)));
      };
    } else {
      mul = [h1, shared_maps, formula](Elem x, Elem y) {
        return h1->index(
            mul_general(*h1, *shared_maps, formula, h1->coordinates(x), h1->coordinates(y)));
      };
    }
    std::string name = maps.name + "(" + std::to_string(maps.p) + ")";
    NearringInstance nr(std::move(name), std::move(group), h1->index({1, 0, 0, 0}), std::move(mul));
    if (nr.order() <= table_cap) {
      nr.tabulate(table_cap);
    }
    return nr;
  }

  NearringInstance build_example_nearring(std::uint32_t p, std::size_t table_cap) {
    return build_nearring(example1_maps(p), Family::kLocal, GeneralFormula::kCorrected, table_cap);
  }

  std::string_view to_string(Verdict v) noexcept {
    switch (v) {
      case Verdict::kLocal:
        return "LOCAL";
      case Verdict::kNearringNotLocal:
        return "NEARRING-NOT-LOCAL";
      case Verdict::kNotANearring:
        break;
    }
    return "NOT-A-NEARRING";
  }

  ConstructReport construct_and_verify(MapQuad const& maps, ConstructOptions const& options) {
    validate_maps(maps);
    ConstructReport report;
    report.maps_name = maps.name;
    report.prime     = maps.p;
    report.family    = maps.alpha_zero() ? Family::kLocal : Family::kGeneral;

    GeneralFormula formula = GeneralFormula::kCorrected;
    if (report.family == Family::kGeneral) {
      report.selection = select_general_formula(maps, 1'000'000, options.verify.seed);
      formula          = report.selection->chosen;
      report.conditions = check_general_conditions(maps, formula, options.pairs);
    } else {
      report.conditions = check_local_conditions(maps, options.pairs);
    }

    NearringInstance const nr = build_nearring(maps, report.family, formula);
    VerifyOptions          verify = options.verify;
    if (nr.order() <= options.exhaustive_cap) {
      verify.mode = VerifyOptions::Mode::kExhaustive;
    }
    report.axioms = verify_axioms(nr, verify);
    if (!report.axioms.is_nearring_with_identity()) {
      report.verdict = Verdict::kNotANearring;
      return report;
    }
    report.local   = units_and_locality(nr);
    report.verdict = report.local->is_local() ? Verdict::kLocal : Verdict::kNearringNotLocal;
    if (options.structural && report.local->is_local()) {
      report.structural =
          check_structural_properties(nr, *report.local, verify.samples, verify.seed);
    }
    return report;
  }

}  // namespace lnr
