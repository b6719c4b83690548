#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

#include "lnr/constructions.hpp"
#include "lnr/report.hpp"

namespace lnr::cli {

  namespace {

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t) {
      return std::chrono::duration<double>(Clock::now() - t).count();
    }

    struct Common {
      unsigned      parallel = 1;
      std::uint64_t seed     = 1;
      std::string   json_path;
    };

    void add_common(CLI::App* cmd, Common& c) {
      cmd->add_option("--parallel", c.parallel, "worker threads (0 = all cores)")
          ->capture_default_str();
      cmd->add_option("--seed", c.seed, "seed for every sampled sweep")->capture_default_str();
      cmd->add_option("--json", c.json_path, "also write the report to this file");
    }

    void emit(json const& doc, Common const& c, std::ostream& out) {
      std::string const text = doc.dump(2) + "\n";
      out << text;
      if (!c.json_path.empty()) {
        std::ofstream file(c.json_path);
        if (!file) {
          throw UsageError("cannot write " + c.json_path);
        }
        file << text;
      }
    }

    VerifyOptions::Mode resolve_mode(std::string const& mode, std::size_t n, std::size_t cap) {
      if (mode == "exhaustive") {
        if (n > cap) {
          throw UsageError("exhaustive mode refuses |R| = " + std::to_string(n)
                           + " above the cap " + std::to_string(cap));
        }
        return VerifyOptions::Mode::kExhaustive;
      }
      if (mode == "sampled") {
        return VerifyOptions::Mode::kSampled;
      }
      return n <= cap ? VerifyOptions::Mode::kExhaustive : VerifyOptions::Mode::kSampled;
    }

    // "90", "90s", "500ms", "30m", "2h"
    std::chrono::milliseconds parse_budget(std::string const& text) {
      static std::regex const re(R"(^\s*(\d+(?:\.\d+)?)\s*(ms|s|m|h)?\s*$)");
      std::smatch             m;
      if (!std::regex_match(text, m, re)) {
        throw UsageError("bad budget '" + text + "'");
      }
      double       value = std::stod(m[1]);
      std::string  unit  = m[2].matched ? m[2].str() : "s";
      double const ms    = unit == "ms" ? value
                           : unit == "s" ? value * 1e3
                           : unit == "m" ? value * 60e3
                                         : value * 3600e3;
      return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
    }

    MapQuad load_maps(std::string const& source, std::uint32_t p) {
      if (source == "example1" || source == "trivial-beta1") {
        return builtin_maps(source, p);
      }
      std::ifstream in(source);
      if (!in) {
        throw UsageError("maps '" + source + "' is neither a builtin nor a readable file");
      }
      return read_maps_csv(in, p, std::filesystem::path(source).filename().string());
    }

    bool l_is_first_coordinate_zero(LocalStructure const& local, AdditiveGroup const& group) {
      std::size_t count = 0;
      for (Elem x = 0; x < group.order(); ++x) {
        count += group.coordinates(x)[0] == 0;
      }
      return local.non_units.size() == count
             && std::all_of(local.non_units.begin(), local.non_units.end(),
                            [&](Elem m) { return group.coordinates(m)[0] == 0; });
    }

    ////////////////////////////////////////////////////////////////////////
    // oracle-check
    ////////////////////////////////////////////////////////////////////////

    struct OracleArgs {
      Common        common;
      std::string   group;
      std::uint32_t p       = 0;
      std::uint64_t samples = 1'000'000;
    };

    int oracle_check(OracleArgs const& a, std::ostream& out) {
      auto const           start = Clock::now();
      GroupId const        id    = parse_group_id(a.group);
      PcPresentation const pres  = build_presentation(id, a.p);
      json doc = {{"command", "oracle-check"},
                  {"config",
                   {{"group", a.group},
                    {"p", needs_prime(id) ? json(a.p) : json(nullptr)},
                    {"seed", a.common.seed},
                    {"samples", a.samples}}}};
      json timings;

      auto t = Clock::now();
      auto const consistency =
          check_consistency(pres, a.samples, a.common.seed, a.common.parallel);
      timings["consistency_seconds"] = seconds_since(t);
      doc["consistency"]             = to_json(consistency);
      bool passed                    = consistency.passed();
      if (pres.order() <= 2401) {
        doc["nilpotency_class"] = nilpotency_class(pres);
      }

      if (id == GroupId::kH1) {
        t                  = Clock::now();
        auto const equiv   = check_h1_equivalence(a.p, a.samples, a.common.seed, a.common.parallel);
        timings["equivalence_seconds"] = seconds_since(t);
        t                  = Clock::now();
        auto const suite    = check_identity_suite(a.p);
        timings["identities_seconds"] = seconds_since(t);
        doc["equivalence"] = to_json(equiv);
        doc["identities"]  = to_json(suite);
        passed             = passed && equiv.passed() && suite.passed();
      }
      doc["passed"]           = passed;
      timings["total_seconds"] = seconds_since(start);
      timings["parallel"]      = a.common.parallel;
      doc["timings"]           = timings;
      emit(doc, a.common, out);
      return passed ? kExitOk : kExitFailed;
    }

    ////////////////////////////////////////////////////////////////////////
    // verify-example / construct
    ////////////////////////////////////////////////////////////////////////

    struct VerifyArgs {
      Common        common;
      std::uint32_t p       = 5;
      std::string   mode    = "auto";
      std::uint64_t samples = 10'000'000;
      std::uint64_t pair_samples = 1'000'000;
      std::size_t   exhaustive_cap = 625;
      std::string   table_path;
      std::string   maps  = "example1";
      std::string   expect = "LOCAL";
    };

    ConstructOptions construct_options(VerifyArgs const& a, std::size_t n) {
      ConstructOptions opt;
      opt.verify.mode     = resolve_mode(a.mode, n, a.exhaustive_cap);
      opt.verify.samples  = a.samples;
      opt.verify.seed     = a.common.seed;
      opt.verify.parallel = a.common.parallel;
      opt.pairs.parallel  = a.common.parallel;
      opt.pairs.samples   = a.pair_samples;
      opt.pairs.seed      = a.common.seed;
      // the verification mode is decided by resolve_mode alone
      opt.exhaustive_cap = opt.verify.mode == VerifyOptions::Mode::kExhaustive ? n : 0;
      return opt;
    }

    json verify_config(std::string const& command, VerifyArgs const& a, ConstructOptions const& opt) {
      return {{"command", command},
              {"config",
               {{"p", a.p},
                {"maps", a.maps},
                {"mode", std::string(to_string(opt.verify.mode))},
                {"samples", opt.verify.mode == VerifyOptions::Mode::kSampled ? json(a.samples)
                                                                             : json(nullptr)},
                {"pair_samples", a.pair_samples},
                {"seed", a.common.seed}}}};
    }

    void export_table(NearringInstance const& nr, std::string const& path) {
      std::ofstream file(path);
      if (!file) {
        throw UsageError("cannot write " + path);
      }
      write_table_csv(file, multiplication_table(nr));
    }

    int verify_example(VerifyArgs const& a, std::ostream& out) {
      auto const    start = Clock::now();
      MapQuad const maps  = example1_maps(a.p);
      std::size_t const n = maps.size();
      ConstructOptions const opt = construct_options(a, n);
      json doc = verify_config("verify-example", a, opt);
      json timings;

      auto t = Clock::now();
      ConditionReport const conditions = check_local_conditions(maps, opt.pairs);
      timings["conditions_seconds"] = seconds_since(t);

      NearringInstance const nr = build_example_nearring(a.p);
      AxiomReport const      axioms = verify_axioms(nr, opt.verify);
      timings["axioms_seconds"] = axioms.elapsed_seconds;
      LocalStructure const local = units_and_locality(nr);
      timings["units_seconds"]   = local.elapsed_seconds;
      StructuralReport const structure =
          check_structural_properties(nr, local, a.samples, a.common.seed);
      timings["structure_seconds"] = structure.elapsed_seconds;

      bool const l_shape = l_is_first_coordinate_zero(local, nr.group());
      json const ul      = to_json(local, nr.group());
      doc["identity"]    = coordinates_json(nr.group(), nr.identity());
      doc["conditions"]  = to_json(conditions);
      doc["axioms"]      = to_json(axioms);
      doc["units"]       = ul["units"];
      doc["locality"]    = ul["locality"];
      doc["locality"]["l_is_x1_zero"] = l_shape;
      doc["structure"]   = to_json(structure);

      bool const passed = conditions.passed() && axioms.is_nearring_with_identity()
                          && local.is_local() && !local.l_cyclic && l_shape
                          && local.units_closed && local.i_plus_l_is_subgroup_of_units
                          && structure.passed();
      doc["verdict"] = passed ? "LOCAL" : "FAILED";
      doc["passed"]  = passed;
      if (!a.table_path.empty()) {
        export_table(nr, a.table_path);
        doc["table"] = a.table_path;
      }
      timings["total_seconds"] = seconds_since(start);
      timings["parallel"]      = a.common.parallel;
      doc["timings"]           = timings;
      emit(doc, a.common, out);
      return passed ? kExitOk : kExitFailed;
    }

    int construct(VerifyArgs const& a, std::ostream& out) {
      auto const       start = Clock::now();
      MapQuad const    maps  = load_maps(a.maps, a.p);
      std::size_t const n    = maps.size();
      ConstructOptions const opt = construct_options(a, n);
      json doc = verify_config("construct", a, opt);
      std::string verdict;
      try {
        ConstructReport const report = construct_and_verify(maps, opt);
        AdditiveGroup const   group  = AdditiveGroup::h1(a.p, 0);
        json const            body   = to_json(report, group);
        doc.update(body);
        if (report.local && report.local->is_local()) {
          doc["locality"]["l_is_x1_zero"] = l_is_first_coordinate_zero(*report.local, group);
        }
        doc["timings"] = {{"axioms_seconds", report.axioms.elapsed_seconds},
                          {"units_seconds", report.local ? report.local->elapsed_seconds : 0.0},
                          {"structure_seconds",
                           report.structural ? report.structural->elapsed_seconds : 0.0}};
        verdict = std::string(to_string(report.verdict));
      } catch (MapRejected const& e) {
        verdict         = std::string(to_string(Verdict::kNotANearring));
        doc["verdict"]  = verdict;
        doc["rejected"] = e.what();
        doc["timings"]  = json::object();
      }
      doc["timings"]["total_seconds"] = seconds_since(start);
      doc["timings"]["parallel"]      = a.common.parallel;
      bool const ok = a.expect == "any" || a.expect == verdict;
      doc["expected"] = a.expect;
      doc["passed"]   = ok;
      emit(doc, a.common, out);
      return ok ? kExitOk : kExitFailed;
    }

    int export_table_cmd(VerifyArgs const& a, std::ostream& out) {
      MapQuad const maps = load_maps(a.maps, a.p);
      validate_maps(maps);
      Family const           family = maps.alpha_zero() ? Family::kLocal : Family::kGeneral;
      NearringInstance const nr     = build_nearring(maps, family);
      MulTable const         table  = multiplication_table(nr);
      {
        std::ofstream file(a.table_path);
        if (!file) {
          throw UsageError("cannot write " + a.table_path);
        }
        write_table_csv(file, table);
      }
      std::ifstream in(a.table_path);
      bool const    roundtrip = read_table_csv(in) == table;
      json doc = {{"command", "export-table"},
                  {"config", {{"p", a.p}, {"maps", a.maps}}},
                  {"table", a.table_path},
                  {"n", table.n},
                  {"identity", table.identity},
                  {"roundtrip", roundtrip},
                  {"passed", roundtrip}};
      emit(doc, a.common, out);
      return roundtrip ? kExitOk : kExitFailed;
    }

    ////////////////////////////////////////////////////////////////////////
    // search
    ////////////////////////////////////////////////////////////////////////

    struct SearchArgs {
      Common      common;
      std::string group;
      std::string order81;
      std::string budget;
      std::string prune = "full";
      std::string out_dir;
      std::string checkpoint;
      bool        expect_none = false;
      bool        expect_some = false;
      bool        all_nearrings = false;
      std::size_t max_results = 1000;
    };

    int search(SearchArgs const& a, std::ostream& out) {
      if (a.group.empty() == a.order81.empty()) {
        throw UsageError("search needs exactly one of --group and --order81");
      }
      if (a.expect_none && a.expect_some) {
        throw UsageError("--expect-none and --expect-some exclude each other");
      }
      std::string const    name = a.group.empty() ? a.order81 : a.group;
      GroupId const        id   = parse_group_id(name);
      PcPresentation const pres = build_presentation(id, needs_prime(id) ? 5 : 0);
      if (!a.order81.empty() && pres.order() != 81) {
        throw UsageError("--order81 takes one of g81-7, g81-8, g81-9, g81-10");
      }
      SearchOptions opt;
      opt.require_local   = !a.all_nearrings;
      opt.max_results     = a.max_results;
      opt.parallel        = a.common.parallel;
      opt.prune           = parse_prune_mode(a.prune);
      opt.allow_order81   = !a.order81.empty();
      opt.checkpoint_path = a.checkpoint;
      if (!a.budget.empty()) {
        opt.budget = parse_budget(a.budget);
      }
      SearchReport const report = search_local_nearrings(pres, opt);

      std::vector<std::string> files;
      if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        AdditiveGroup const group = AdditiveGroup::from_presentation(pres);
        for (std::size_t k = 0; k < report.results.size(); ++k) {
          auto const&       f    = report.results[k];
          std::string const file = report.group + "-" + std::to_string(k) + ".csv";
          std::ofstream     csv(std::filesystem::path(a.out_dir) / file);
          write_table_csv(csv, {group.prime(), group.order(), f.identity, f.table});
          files.push_back(file);
        }
      }
      json doc = {{"command", "search"},
                  {"config",
                   {{"group", name},
                    {"prune", a.prune},
                    {"require_local", opt.require_local},
                    {"budget", a.budget.empty() ? json(nullptr) : json(a.budget)},
                    {"expect", a.expect_none ? "none" : a.expect_some ? "some" : "any"}}}};
      doc.update(to_json(report, files));
      doc["timings"] = {{"elapsed_seconds", report.elapsed_seconds},
                        {"parallel", a.common.parallel}};

      int code = kExitOk;
      if (report.status == SearchStatus::kInconclusive) {
        code = kExitInconclusive;
      } else if (report.verification_failures != 0
                 || (a.expect_none && report.result_count != 0)
                 || (a.expect_some && report.result_count == 0)) {
        code = kExitFailed;
      }
      doc["passed"] = code == kExitOk;
      if (!a.out_dir.empty()) {
        std::ofstream((std::filesystem::path(a.out_dir) / "search.json")) << doc.dump(2) << '\n';
      }
      emit(doc, a.common, out);
      return code;
    }

  }  // namespace

  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local nearrings on p-groups of order p^4 and class 3", "lnr"};
    app.require_subcommand(1);

    OracleArgs oracle;
    auto*      oc = app.add_subcommand("oracle-check", "pc-group consistency, closed forms, identities");
    oc->add_option("--group", oracle.group, "h1..h4, c16, d16, qd16, q16, g81-7..g81-10")
        ->required();
    oc->add_option("--p", oracle.p, "prime for h1..h4");
    oc->add_option("--samples", oracle.samples, "sampled pairs/triples above the exhaustive cap")
        ->capture_default_str();
    add_common(oc, oracle.common);

    VerifyArgs example;
    auto*      ve = app.add_subcommand("verify-example", "verify the example local nearring on H1(p)");
    ve->add_option("--p", example.p, "prime > 3")->capture_default_str();
    ve->add_option("--mode", example.mode, "exhaustive | sampled | auto")
        ->check(CLI::IsMember({"exhaustive", "sampled", "auto"}))
        ->capture_default_str();
    ve->add_option("--samples", example.samples, "sampled triples")->capture_default_str();
    ve->add_option("--pair-samples", example.pair_samples, "sampled pairs above p = 7")
        ->capture_default_str();
    ve->add_option("--exhaustive-cap", example.exhaustive_cap, "largest |R| swept exhaustively")
        ->capture_default_str();
    ve->add_option("--table", example.table_path, "export the multiplication table (CSV)");
    add_common(ve, example.common);

    VerifyArgs build;
    auto*      co = app.add_subcommand("construct", "build a nearring on H1(p) from coefficient maps");
    co->add_option("--p", build.p, "prime > 3")->capture_default_str();
    co->add_option("--maps", build.maps, "example1 | trivial-beta1 | CSV file")
        ->capture_default_str();
    co->add_option("--mode", build.mode, "exhaustive | sampled | auto")
        ->check(CLI::IsMember({"exhaustive", "sampled", "auto"}))
        ->capture_default_str();
    co->add_option("--samples", build.samples, "sampled triples")->capture_default_str();
    co->add_option("--pair-samples", build.pair_samples, "sampled pairs above p = 7")
        ->capture_default_str();
    co->add_option("--exhaustive-cap", build.exhaustive_cap, "largest |R| swept exhaustively")
        ->capture_default_str();
    co->add_option("--expect", build.expect, "LOCAL | NEARRING-NOT-LOCAL | NOT-A-NEARRING | any")
        ->check(CLI::IsMember({"LOCAL", "NEARRING-NOT-LOCAL", "NOT-A-NEARRING", "any"}))
        ->capture_default_str();
    add_common(co, build.common);

    SearchArgs find;
    auto*      se = app.add_subcommand("search", "exhaustive search for local nearrings");
    se->add_option("--group", find.group, "c16, d16, qd16, q16");
    se->add_option("--order81", find.order81, "opt in to an order-81 group: g81-7..g81-10");
    se->add_option("--budget", find.budget, "wall-clock budget, e.g. 90s, 30m, 2h");
    se->add_option("--prune", find.prune, "full | closure-only | generate-and-test")
        ->check(CLI::IsMember({"full", "closure-only", "generate-and-test"}))
        ->capture_default_str();
    se->add_option("--out-dir", find.out_dir, "write result tables and search.json here");
    se->add_option("--checkpoint", find.checkpoint, "checkpoint file (resumed if present)");
    se->add_option("--max-results", find.max_results, "stored results")->capture_default_str();
    se->add_flag("--expect-none", find.expect_none, "fail unless no nearring is found");
    se->add_flag("--expect-some", find.expect_some, "fail unless a nearring is found");
    se->add_flag("--all-nearrings", find.all_nearrings, "keep non-local nearrings too");
    add_common(se, find.common);

    VerifyArgs table;
    auto*      et = app.add_subcommand("export-table", "write a multiplication table as CSV");
    et->add_option("--p", table.p, "prime > 3")->capture_default_str();
    et->add_option("--maps", table.maps, "example1 | trivial-beta1 | CSV file")
        ->capture_default_str();
    et->add_option("--out", table.table_path, "output CSV")->required();
    add_common(et, table.common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (CLI::CallForHelp const&) {
      out << app.help();
      return kExitOk;
    } catch (CLI::CallForAllHelp const&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (CLI::ParseError const& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }

    try {
      if (oc->parsed()) {
        return oracle_check(oracle, out);
      }
      if (ve->parsed()) {
        return verify_example(example, out);
      }
      if (co->parsed()) {
        return construct(build, out);
      }
      if (se->parsed()) {
        return search(find, out);
      }
      return export_table_cmd(table, out);
    } catch (UsageError const& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (CapExceeded const& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }

}  // namespace lnr::cli
