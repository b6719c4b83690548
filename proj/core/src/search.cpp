#include "lnr/search.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>
#include <unordered_map>

#include "lnr/nearring.hpp"
#include "lnr/parallel.hpp"

namespace lnr {

  using json = nlohmann::json;

  bool Endomorphism::is_bijective() const {
    std::vector<bool> hit(image.size(), false);
    for (TableEntry e : image) {
      if (hit[e]) {
        return false;
      }
      hit[e] = true;
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Endomorphisms
  ////////////////////////////////////////////////////////////////////////

  std::vector<Endomorphism> enumerate_endomorphisms(PcPresentation const& pres,
                                                    std::size_t           cap) {
    if (pres.order() > cap) {
      throw CapExceeded("enumerate_endomorphisms: order " + std::to_string(pres.order())
                        + " exceeds cap " + std::to_string(cap));
    }
    AdditiveGroup const group = AdditiveGroup::from_presentation(pres);
    std::size_t const   n     = group.order();
    std::size_t const   k     = group.ngens();
    std::uint32_t const p     = group.prime();

    std::vector<Elem> image(k, 0);
    // Image of a normal-form word whose generators all have images.
    auto const word_image = [&](Coordinates const& w) {
      Elem e = 0;
      for (std::size_t g = 0; g < k; ++g) {
        for (std::uint32_t t = 0; t < w[g]; ++t) {
          e = group.add(e, image[g]);
        }
      }
      return e;
    };

    std::vector<Endomorphism> result;
    auto const                emit = [&] {
      Endomorphism endo;
      endo.generator_images = image;
      endo.image.resize(n);
      for (Elem x = 0; x < n; ++x) {
        endo.image[x] = static_cast<TableEntry>(word_image(group.coordinates(x)));
      }
      result.push_back(std::move(endo));
    };

    auto const recurse = [&](auto const& self, std::size_t i) -> void {
      for (Elem v = 0; v < n; ++v) {
        image[i] = v;
        Elem pv  = 0;
        for (std::uint32_t t = 0; t < p; ++t) {
          pv = group.add(pv, v);
        }
        bool ok = pv == word_image(pres.power(i));
        for (std::size_t j = i + 1; ok && j < k; ++j) {
          Elem const lhs = group.add(image[j], v);
          Elem const rhs =
              group.add(group.add(v, image[j]), word_image(pres.commutator_tail(j, i)));
          ok = lhs == rhs;
        }
        if (!ok) {
          continue;
        }
        if (i == 0) {
          emit();
        } else {
          self(self, i - 1);
        }
      }
      image[i] = 0;
    };
    recurse(recurse, k - 1);

    std::sort(result.begin(), result.end(),
              [](Endomorphism const& a, Endomorphism const& b) { return a.image < b.image; });
    result.erase(std::unique(result.begin(), result.end(),
                             [](Endomorphism const& a, Endomorphism const& b) {
                               return a.image == b.image;
                             }),
                 result.end());
    return result;
  }

  std::vector<Elem> identity_candidates(PcPresentation const& pres) {
    AdditiveGroup const group    = AdditiveGroup::from_presentation(pres);
    std::uint64_t const exponent = group.exponent();
    std::vector<Elem>   result;
    for (Elem x = 0; x < group.order(); ++x) {
      if (group.element_order(x) == exponent) {
        result.push_back(x);
      }
    }
    return result;
  }

  std::string_view to_string(PruneMode m) noexcept {
    switch (m) {
      case PruneMode::kFull:
        return "full";
      case PruneMode::kClosureOnly:
        return "closure-only";
      case PruneMode::kGenerateAndTest:
        break;
    }
    return "generate-and-test";
  }

  PruneMode parse_prune_mode(std::string_view s) {
    for (auto m : {PruneMode::kFull, PruneMode::kClosureOnly, PruneMode::kGenerateAndTest}) {
      if (to_string(m) == s) {
        return m;
      }
    }
    throw UsageError("unknown prune mode '" + std::string(s) + "'");
  }

  std::string_view to_string(SearchStatus s) noexcept {
    return s == SearchStatus::kExhaustive ? "EXHAUSTIVE" : "INCONCLUSIVE";
  }

  ////////////////////////////////////////////////////////////////////////
  // Search
  ////////////////////////////////////////////////////////////////////////

  namespace {

    using Clock = std::chrono::steady_clock;

    // Shared, immutable data of one search.
    struct Universe {
      AdditiveGroup               group;
      std::size_t                 n = 0;
      std::size_t                 m = 0;
      std::vector<TableEntry>     img;   // img[e*n + y]
      std::vector<std::uint32_t>  comp;  // index of e o f at [e*m + f]
      std::vector<bool>           bij;
      std::uint32_t               identity_endo = 0;

      Elem apply(std::uint32_t e, Elem y) const {
        return img[e * n + y];
      }
    };

    struct Task {
      std::size_t   candidate = 0;  // index into identity candidates
      Elem          identity  = 0;
      Elem          first_var = 0;
      std::uint32_t first_endo = 0;
    };

    struct TaskResult {
      bool                       done     = false;
      bool                       restored = false;
      std::uint64_t              nodes    = 0;
      std::uint64_t              leaves   = 0;
      std::uint64_t              failures = 0;
      std::vector<FoundNearring> results;
    };

    constexpr std::int32_t kUnassigned = -1;
    // the composition table has kMaxEndomorphisms^2 entries at most
    constexpr std::size_t  kMaxEndomorphisms = 8192;

    class Engine {
     public:
      Engine(Universe const& u, SearchOptions const& options, Elem identity,
             Clock::time_point deadline, std::atomic<bool>& expired)
          : _u(u), _opt(options), _i(identity), _deadline(deadline), _expired(expired),
            _assign(u.n, kUnassigned), _domain(u.n),
            _locality_prune(options.prune == PruneMode::kFull && options.require_local) {
        for (std::uint32_t e = 0; e < u.m; ++e) {
          _domain[u.apply(e, identity)].push_back(e);
        }
        _can_be_unit.resize(u.n);
        _can_be_non_unit.resize(u.n);
        for (Elem x = 0; x < u.n; ++x) {
          for (auto e : _domain[x]) {
            (u.bij[e] ? _can_be_unit : _can_be_non_unit)[x] = true;
          }
        }
      }

      std::vector<std::uint32_t> const& domain(Elem x) const {
        return _domain[x];
      }

      // Root state: lambda_i = id. Returns false if that already conflicts.
      bool init() {
        std::vector<Elem> queue;
        return set(_i, _u.identity_endo, queue) && propagate(queue) && locality_ok();
      }

      // Unassigned element with fewest admissible candidates, lowest index on
      // ties; nullopt when everything is assigned.
      std::optional<Elem> choose() const {
        std::optional<Elem> best;
        std::size_t         best_count = SIZE_MAX;
        for (Elem x = 0; x < _u.n; ++x) {
          if (_assign[x] != kUnassigned) {
            continue;
          }
          std::size_t count = 0;
          for (auto e : _domain[x]) {
            count += admissible(x, e);
          }
          if (count < best_count) {
            best_count = count;
            best       = x;
          }
        }
        return best;
      }

      bool admissible(Elem x, std::uint32_t e) const {
        if (!_locality_prune || _in_s.size() != _u.n) {
          return true;
        }
        return _u.bij[e] ? !_in_s[x] : !_in_u[x];
      }

      // Tries lambda_x = e; on failure the state is rolled back.
      bool try_assign(Elem x, std::uint32_t e) {
        std::size_t const mark = _trail.size();
        std::vector<Elem> queue;
        bool ok = set(x, e, queue) && propagate(queue) && locality_ok();
        if (!ok) {
          undo(mark);
        }
        return ok;
      }

      void undo(std::size_t mark) {
        while (_trail.size() > mark) {
          _assign[_trail.back()] = kUnassigned;
          _trail.pop_back();
        }
        refresh_s();
      }

      std::size_t trail_size() const {
        return _trail.size();
      }

      void run(TaskResult& out) {
        if (_expired.load(std::memory_order_relaxed)) {
          _aborted = true;
          return;
        }
        if ((++out.nodes & 1023) == 0 && _deadline != Clock::time_point::max()
            && Clock::now() > _deadline) {
          _expired = true;
          _aborted = true;
          return;
        }
        auto const x = choose();
        if (!x) {
          leaf(out);
          return;
        }
        for (auto e : _domain[*x]) {
          if (!admissible(*x, e)) {
            continue;
          }
          std::size_t const mark = _trail.size();
          if (try_assign(*x, e)) {
            run(out);
            undo(mark);
          }
          if (_aborted) {
            return;
          }
        }
      }

      // Plain product over the domains of every x != i, in index order.
      void generate(TaskResult& out, Elem from) {
        if (_expired.load(std::memory_order_relaxed)) {
          _aborted = true;
          return;
        }
        if ((++out.nodes & 1023) == 0 && _deadline != Clock::time_point::max()
            && Clock::now() > _deadline) {
          _expired = true;
          _aborted = true;
          return;
        }
        Elem x = from;
        while (x < _u.n && _assign[x] != kUnassigned) {
          ++x;
        }
        if (x == _u.n) {
          for (Elem a = 0; a < _u.n; ++a) {
            for (Elem b = 0; b < _u.n; ++b) {
              auto const la = static_cast<std::uint32_t>(_assign[a]);
              auto const lb = static_cast<std::uint32_t>(_assign[b]);
              if (_assign[_u.apply(la, b)] != static_cast<std::int32_t>(_u.comp[la * _u.m + lb])) {
                ++out.leaves;
                return;
              }
            }
          }
          leaf(out);
          return;
        }
        for (auto e : _domain[x]) {
          _assign[x] = static_cast<std::int32_t>(e);
          generate(out, x + 1);
          _assign[x] = kUnassigned;
          if (_aborted) {
            return;
          }
        }
      }

      void force(Elem x, std::uint32_t e) {
        _assign[x] = static_cast<std::int32_t>(e);
      }

      bool aborted() const {
        return _aborted;
      }

     private:
      bool set(Elem x, std::uint32_t e, std::vector<Elem>& queue) {
        if (_assign[x] != kUnassigned) {
          return _assign[x] == static_cast<std::int32_t>(e);
        }
        if (_u.apply(e, _i) != x) {
          return false;
        }
        _assign[x] = static_cast<std::int32_t>(e);
        _trail.push_back(x);
        queue.push_back(x);
        return true;
      }

      bool propagate(std::vector<Elem>& queue) {
        if (_opt.prune == PruneMode::kGenerateAndTest) {
          return true;
        }
        while (!queue.empty()) {
          Elem const x = queue.back();
          queue.pop_back();
          auto const e = static_cast<std::uint32_t>(_assign[x]);
          for (std::size_t t = 0; t < _trail.size(); ++t) {
            Elem const y  = _trail[t];
            auto const ly = static_cast<std::uint32_t>(_assign[y]);
            if (!set(_u.apply(e, y), _u.comp[e * _u.m + ly], queue)
                || !set(_u.apply(ly, x), _u.comp[ly * _u.m + e], queue)) {
              return false;
            }
          }
        }
        return true;
      }

      // In a local nearring L is a subgroup, so the known non-units generate
      // a subgroup S inside L, and every known unit u gives units u + S and
      // S + u (u + s in L would put u in L). Elements whose candidates are
      // all (or none) bijective count as known units (non-units).
      bool locality_ok() {
        if (!_locality_prune) {
          return true;
        }
        refresh_s();
        for (Elem z = 0; z < _u.n; ++z) {
          if (_in_s[z] && _in_u[z]) {
            return false;
          }
          if (_assign[z] != kUnassigned) {
            bool const unit = _u.bij[static_cast<std::uint32_t>(_assign[z])];
            if ((_in_s[z] && unit) || (_in_u[z] && !unit)) {
              return false;
            }
          } else if ((_in_s[z] && !_can_be_non_unit[z]) || (_in_u[z] && !_can_be_unit[z])) {
            return false;
          }
        }
        return true;
      }

      void refresh_s() {
        if (!_locality_prune) {
          return;
        }
        std::vector<Elem> gens, units;
        for (Elem x = 0; x < _u.n; ++x) {
          bool const unit = _assign[x] != kUnassigned
                                ? _u.bij[static_cast<std::uint32_t>(_assign[x])]
                                : !_can_be_non_unit[x];
          bool const non_unit = _assign[x] != kUnassigned ? !unit : !_can_be_unit[x];
          if (unit) {
            units.push_back(x);
          } else if (non_unit) {
            gens.push_back(x);
          }
        }
        _in_s = _u.group.subgroup_closure(gens);
        std::vector<Elem> s;
        for (Elem x = 0; x < _u.n; ++x) {
          if (_in_s[x]) {
            s.push_back(x);
          }
        }
        _in_u.assign(_u.n, false);
        for (Elem v : units) {
          for (Elem m : s) {
            _in_u[_u.group.add(v, m)] = true;
            _in_u[_u.group.add(m, v)] = true;
          }
        }
      }

      void leaf(TaskResult& out) {
        ++out.leaves;
        std::size_t const       n = _u.n;
        std::vector<TableEntry> table(n * n);
        for (Elem x = 0; x < n; ++x) {
          auto const e = static_cast<std::uint32_t>(_assign[x]);
          for (Elem y = 0; y < n; ++y) {
            table[x * n + y] = _u.img[e * n + y];
          }
        }
        NearringInstance const nr("candidate", _u.group, _i, table);
        AxiomReport const      axioms = verify_axioms(nr);
        if (!axioms.is_nearring_with_identity()) {
          ++out.failures;
          return;
        }
        bool const local = units_and_locality(nr).is_local();
        if (_opt.require_local && !local) {
          return;
        }
        out.results.push_back({_i, std::move(table), true, local});
      }

      Universe const&           _u;
      SearchOptions const&      _opt;
      Elem                      _i;
      Clock::time_point         _deadline;
      std::atomic<bool>&        _expired;
      bool                      _aborted = false;
      std::vector<std::int32_t> _assign;
      std::vector<Elem>         _trail;
      std::vector<bool>         _in_s;
      std::vector<bool>         _in_u;
      std::vector<bool>         _can_be_unit;
      std::vector<bool>         _can_be_non_unit;
      std::vector<std::vector<std::uint32_t>> _domain;
      // only sound when non-local results are discarded anyway
      bool                      _locality_prune;
    };

    Universe make_universe(PcPresentation const& pres, std::size_t& endo_count) {
      auto const endos = enumerate_endomorphisms(pres, 81);
      Universe   u{AdditiveGroup::from_presentation(pres)};
      u.n = u.group.order();
      u.m = endos.size();
      endo_count = u.m;
      if (u.m > kMaxEndomorphisms) {
        throw CapExceeded("search: " + std::to_string(u.m)
                          + " endomorphisms exceed the composition table cap of "
                          + std::to_string(kMaxEndomorphisms));
      }
      // an endomorphism is determined by the images of the pc generators
      std::vector<Elem> gens;
      for (std::size_t k = 0; k < u.group.ngens(); ++k) {
        gens.push_back(u.group.generator(k));
      }
      auto const key = [&](auto&& image_of) {
        std::uint64_t h = 0;
        for (Elem g : gens) {
          h = h * u.n + image_of(g);
        }
        return h;
      };
      std::unordered_map<std::uint64_t, std::uint32_t> index;
      u.img.reserve(u.n * u.m);
      for (std::uint32_t e = 0; e < u.m; ++e) {
        index.emplace(key([&](Elem g) { return endos[e].image[g]; }), e);
        u.img.insert(u.img.end(), endos[e].image.begin(), endos[e].image.end());
        u.bij.push_back(endos[e].is_bijective());
      }
      u.identity_endo = index.at(key([](Elem g) { return g; }));
      u.comp.resize(u.m * u.m);
      for (std::uint32_t e = 0; e < u.m; ++e) {
        for (std::uint32_t f = 0; f < u.m; ++f) {
          u.comp[e * u.m + f] =
              index.at(key([&](Elem g) { return u.img[e * u.n + u.img[f * u.n + g]]; }));
        }
      }
      return u;
    }

    json checkpoint_header(SearchReport const& report) {
      return {{"group", report.group},
              {"prune", std::string(to_string(report.prune))},
              {"require_local", report.require_local},
              {"subtrees", report.subtrees_total}};
    }

    void write_checkpoint(std::string const&             path,
                          SearchReport const&            report,
                          std::vector<TaskResult> const& results) {
      json doc = checkpoint_header(report);
      json done = json::array();
      for (std::size_t t = 0; t < results.size(); ++t) {
        if (!results[t].done) {
          continue;
        }
        json found = json::array();
        for (auto const& r : results[t].results) {
          found.push_back({{"identity", r.identity}, {"local", r.local}, {"table", r.table}});
        }
        done.push_back({{"id", t},
                        {"nodes", results[t].nodes},
                        {"leaves", results[t].leaves},
                        {"failures", results[t].failures},
                        {"results", found}});
      }
      doc["done"] = done;
      std::string const tmp = path + ".tmp";
      {
        std::ofstream out(tmp);
        out << doc.dump() << '\n';
      }
      std::filesystem::rename(tmp, path);
    }

    void read_checkpoint(std::string const&       path,
                         SearchReport const&      report,
                         std::vector<TaskResult>& results) {
      std::ifstream in(path);
      if (!in) {
        return;
      }
      json doc;
      try {
        doc = json::parse(in);
      } catch (json::exception const& e) {
        throw UsageError("checkpoint " + path + ": " + e.what());
      }
      json const header = checkpoint_header(report);
      for (auto const& [key, value] : header.items()) {
        if (!doc.contains(key) || doc[key] != value) {
          throw UsageError("checkpoint " + path + " belongs to a different search (" + key + ")");
        }
      }
      for (auto const& t : doc.at("done")) {
        std::size_t const id = t.at("id");
        if (id >= results.size()) {
          throw UsageError("checkpoint " + path + ": subtree id out of range");
        }
        TaskResult& r = results[id];
        r.done        = true;
        r.restored    = true;
        r.nodes       = t.at("nodes");
        r.leaves      = t.at("leaves");
        r.failures    = t.at("failures");
        for (auto const& f : t.at("results")) {
          r.results.push_back({f.at("identity").get<Elem>(),
                               f.at("table").get<std::vector<TableEntry>>(), true,
                               f.at("local").get<bool>()});
        }
      }
    }

  }  // namespace

  SearchReport search_local_nearrings(PcPresentation const& pres, SearchOptions const& options) {
    auto const start = Clock::now();
    if (pres.order() > 81) {
      throw CapExceeded("search: groups above order 81 are not searched");
    }
    if (pres.order() > 16 && !options.allow_order81) {
      throw UsageError("search: groups above order 16 need the order-81 opt-in");
    }

    SearchReport report;
    report.group         = pres.name();
    report.order         = pres.order();
    report.prune         = options.prune;
    report.require_local = options.require_local;
    report.identity_candidates = identity_candidates(pres);
    Universe const u           = make_universe(pres, report.endo_count);

    Clock::time_point const deadline =
        options.budget.count() > 0 ? start + options.budget : Clock::time_point::max();
    std::atomic<bool> expired{false};

    // Split every candidate's tree below its first branching variable.
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < report.identity_candidates.size(); ++c) {
      Elem const i = report.identity_candidates[c];
      CandidateSummary summary{i};
      Engine engine(u, options, i, deadline, expired);
      if (options.prune == PruneMode::kGenerateAndTest) {
        std::uint64_t leaves = 1;
        for (Elem x = 0; x < u.n; ++x) {
          if (x != i) {
            leaves = std::min<std::uint64_t>(leaves * engine.domain(x).size(),
                                             options.generate_cap + 1);
          }
        }
        if (leaves > options.generate_cap) {
          throw CapExceeded("search: generate-and-test would visit more than "
                            + std::to_string(options.generate_cap) + " leaves");
        }
        Elem const first = i == 0 ? 1 : 0;
        for (auto e : engine.domain(first)) {
          tasks.push_back({c, i, first, e});
          ++summary.subtrees;
        }
      } else if (engine.init()) {
        if (auto x = engine.choose()) {
          for (auto e : engine.domain(*x)) {
            if (engine.admissible(*x, e)) {
              tasks.push_back({c, i, *x, e});
              ++summary.subtrees;
            }
          }
        } else {
          tasks.push_back({c, i, i, u.identity_endo});
          ++summary.subtrees;
        }
      }
      report.candidates.push_back(summary);
    }
    report.subtrees_total = tasks.size();

    std::vector<TaskResult> results(tasks.size());
    if (!options.checkpoint_path.empty()) {
      read_checkpoint(options.checkpoint_path, report, results);
    }
    std::mutex                 checkpoint_mutex;
    std::atomic<std::size_t>   next{0};
    unsigned const             workers = std::max(1u, std::min<unsigned>(
                                              worker_count(options.parallel),
                                              static_cast<unsigned>(std::max<std::size_t>(1, tasks.size()))));
    auto const work = [&] {
      for (;;) {
        std::size_t const t = next.fetch_add(1);
        if (t >= tasks.size() || expired.load()) {
          return;
        }
        if (results[t].done) {
          continue;
        }
        Task const& task = tasks[t];
        Engine      engine(u, options, task.identity, deadline, expired);
        TaskResult  r;
        if (options.prune == PruneMode::kGenerateAndTest) {
          engine.force(task.identity, u.identity_endo);
          engine.force(task.first_var, task.first_endo);
          engine.generate(r, 0);
        } else {
          bool const ok = engine.init();
          ++r.nodes;
          if (ok && engine.try_assign(task.first_var, task.first_endo)) {
            engine.run(r);
          }
        }
        if (engine.aborted()) {
          continue;
        }
        r.done     = true;
        results[t] = std::move(r);
        if (!options.checkpoint_path.empty()) {
          std::lock_guard lock(checkpoint_mutex);
          write_checkpoint(options.checkpoint_path, report, results);
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> threads;
      for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back(work);
      }
      for (auto& th : threads) {
        th.join();
      }
    }

    std::vector<FoundNearring> found;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      TaskResult const& r = results[t];
      if (!r.done) {
        continue;
      }
      ++report.subtrees_done;
      report.subtrees_from_checkpoint += r.restored;
      report.branches_explored += r.nodes;
      report.leaves += r.leaves;
      report.verification_failures += r.failures;
      auto& summary = report.candidates[tasks[t].candidate];
      summary.nodes += r.nodes;
      summary.results += r.results.size();
      found.insert(found.end(), r.results.begin(), r.results.end());
    }
    std::sort(found.begin(), found.end());
    report.result_count = found.size();
    if (found.size() > options.max_results) {
      found.resize(options.max_results);
      report.truncated = true;
    }
    report.results = std::move(found);
    report.status  = report.subtrees_done == report.subtrees_total ? SearchStatus::kExhaustive
                                                                   : SearchStatus::kInconclusive;
    report.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
  }

}  // namespace lnr
