#include "lnr/report.hpp"

namespace lnr {

  namespace {

    template <typename T>
    json optional_json(std::optional<T> const& v) {
      return v ? json(*v) : json(nullptr);
    }

  }  // namespace

  std::vector<std::uint32_t> coordinates_json(AdditiveGroup const& group, Elem x) {
    Coordinates const c = group.coordinates(x);
    return {c.begin(), c.begin() + static_cast<std::ptrdiff_t>(group.ngens())};
  }

  json to_json(ConsistencyReport const& r) {
    return {{"group", r.group},
            {"prime", r.prime},
            {"order", r.order},
            {"normal_forms", r.normal_forms},
            {"mode", r.exhaustive ? "exhaustive" : "sampled"},
            {"seed", r.exhaustive ? json(nullptr) : json(r.seed)},
            {"triples_checked", r.triples_checked},
            {"associative", r.associative},
            {"witness", optional_json(r.witness)},
            {"identity_ok", r.identity_ok},
            {"inverse_ok", r.inverse_ok},
            {"exponent", r.exponent},
            {"passed", r.passed()}};
  }

  json to_json(EquivalenceReport const& r) {
    return {{"prime", r.prime},
            {"mode", r.exhaustive ? "exhaustive" : "sampled"},
            {"seed", r.exhaustive ? json(nullptr) : json(r.seed)},
            {"add_pairs", r.add_pairs},
            {"neg_checks", r.neg_checks},
            {"smul_checks", r.smul_checks},
            {"add_witness", optional_json(r.add_witness)},
            {"neg_witness", optional_json(r.neg_witness)},
            {"smul_witness", optional_json(r.smul_witness)},
            {"passed", r.passed()}};
  }

  json to_json(IdentitySuiteReport const& r) {
    json ids = json::array();
    for (auto const& id : r.identities) {
      ids.push_back({{"name", id.name},
                     {"statement", id.statement},
                     {"parameters", id.parameters},
                     {"required", id.required},
                     {"note", id.note},
                     {"tuples", id.tuples},
                     {"polynomial", {{"holds", id.holds[0]}, {"witness", optional_json(id.witness[0])}}},
                     {"literal", {{"holds", id.holds[1]}, {"witness", optional_json(id.witness[1])}}}});
    }
    return {{"prime", r.prime}, {"identities", ids}, {"passed", r.passed()}};
  }

  json to_json(LawCheck const& r) {
    return {{"passed", r.passed}, {"checks", r.checks}, {"witness", optional_json(r.witness)}};
  }

  json to_json(AxiomReport const& r) {
    return {{"mode", std::string(to_string(r.mode))},
            {"seed", r.mode == VerifyOptions::Mode::kSampled ? json(r.seed) : json(nullptr)},
            {"associativity", to_json(r.associativity)},
            {"left_distributivity", to_json(r.left_distributivity)},
            {"identity_left", to_json(r.identity_left)},
            {"identity_right", to_json(r.identity_right)},
            {"right_zero", to_json(r.right_zero)},
            {"zero_symmetric", r.zero_symmetric},
            {"zero_symmetry_witness", optional_json(r.zero_symmetry_witness)},
            {"passed", r.is_nearring_with_identity()}};
  }

  json to_json(LocalStructure const& r, AdditiveGroup const& group) {
    json l_gens = json::array();
    // a generating set of L (greedy, in index order) keeps the report small
    if (r.l_is_subgroup) {
      std::vector<Elem> gens;
      std::vector<bool> span(group.order(), false);
      span[0] = true;
      for (Elem m : r.non_units) {
        if (!span[m]) {
          gens.push_back(m);
          span = group.subgroup_closure(gens);
        }
      }
      for (Elem g : gens) {
        l_gens.push_back(coordinates_json(group, g));
      }
    }
    json units = {{"units", r.units.size()},
                  {"non_units", r.non_units.size()},
                  {"units_closed", r.units_closed}};
    json locality = {{"l_is_subgroup", r.l_is_subgroup},
                     {"l_order", r.l_order},
                     {"l_cyclic", r.l_cyclic},
                     {"l_generators", l_gens},
                     {"l_subgroup_witness", optional_json(r.l_subgroup_witness)},
                     {"i_plus_l_is_subgroup_of_units", r.i_plus_l_is_subgroup_of_units},
                     {"local", r.is_local()}};
    return {{"units", units}, {"locality", locality}};
  }

  json to_json(StructuralReport const& r) {
    return {{"identity_order", r.identity_order},
            {"exponent", r.exponent},
            {"units_have_exponent_order", r.units_have_exponent_order},
            {"unit_order_witness", optional_json(r.unit_order_witness)},
            {"rr_subgroup", to_json(r.rr_subgroup)},
            {"rr_mode", r.rr_mode},
            {"invariant_checked", r.invariant_checked},
            {"subgroups_enumerated", r.subgroups_enumerated},
            {"invariant_proper_orders", r.invariant_proper_orders},
            {"invariant_in_l", r.invariant_in_l},
            {"invariant_witness", optional_json(r.invariant_witness)},
            {"passed", r.passed()}};
  }

  json to_json(ConditionReport const& r) {
    json conds = json::array();
    for (auto const& c : r.conditions) {
      conds.push_back({{"name", c.name},
                       {"statement", c.statement},
                       {"required", c.required},
                       {"checks", c.checks},
                       {"passed", c.passed},
                       {"witness", optional_json(c.witness)}});
    }
    return {{"prime", r.prime},
            {"family", r.family},
            {"mode", r.exhaustive ? "exhaustive" : "sampled"},
            {"seed", r.exhaustive ? json(nullptr) : json(r.seed)},
            {"conditions", conds},
            {"passed", r.passed()}};
  }

  json to_json(FormulaSelection const& r) {
    return {{"chosen", std::string(to_string(r.chosen))},
            {"mode", r.exhaustive ? "exhaustive" : "sampled"},
            {"pairs", r.pairs},
            {"mismatches",
             {{"truncated", r.mismatches[0]}, {"corrected", r.mismatches[1]}}},
            {"witness",
             {{"truncated", optional_json(r.witness[0])},
              {"corrected", optional_json(r.witness[1])}}}};
  }

  json to_json(ConstructReport const& r, AdditiveGroup const& group) {
    json out = {{"maps", r.maps_name},
                {"prime", r.prime},
                {"family", r.family == Family::kLocal ? "local" : "general"},
                {"formula", r.selection ? to_json(*r.selection) : json(nullptr)},
                {"conditions", to_json(r.conditions)},
                {"axioms", to_json(r.axioms)},
                {"units", r.local ? to_json(*r.local, group)["units"] : json(nullptr)},
                {"locality", r.local ? to_json(*r.local, group)["locality"] : json(nullptr)},
                {"structure", r.structural ? to_json(*r.structural) : json(nullptr)},
                {"verdict", std::string(to_string(r.verdict))}};
    return out;
  }

  json to_json(SearchReport const& r, std::vector<std::string> const& table_files) {
    json candidates = json::array();
    for (auto const& c : r.candidates) {
      candidates.push_back({{"identity", c.identity},
                            {"subtrees", c.subtrees},
                            {"nodes", c.nodes},
                            {"results", c.results}});
    }
    json results = json::array();
    for (std::size_t k = 0; k < r.results.size(); ++k) {
      auto const& f = r.results[k];
      results.push_back({{"identity", f.identity},
                         {"verified", f.verified},
                         {"local", f.local},
                         {"table", k < table_files.size() ? json(table_files[k]) : json(nullptr)}});
    }
    return {{"group", r.group},
            {"order", r.order},
            {"prune", std::string(to_string(r.prune))},
            {"require_local", r.require_local},
            {"identity_candidates", r.identity_candidates},
            {"endo_count", r.endo_count},
            {"branches_explored", r.branches_explored},
            {"leaves", r.leaves},
            {"result_count", r.result_count},
            {"verification_failures", r.verification_failures},
            {"candidates", candidates},
            {"results", results},
            {"truncated", r.truncated},
            {"subtrees_total", r.subtrees_total},
            {"subtrees_done", r.subtrees_done},
            {"subtrees_from_checkpoint", r.subtrees_from_checkpoint},
            {"status", std::string(to_string(r.status))}};
  }

}  // namespace lnr
