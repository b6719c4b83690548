#pragma once

#include <nlohmann/json.hpp>

#include "lnr/constructions.hpp"
#include "lnr/h1_arith.hpp"
#include "lnr/nearring.hpp"
#include "lnr/pcgroup.hpp"
#include "lnr/search.hpp"

// JSON views of the reports. None of them contain timing fields; callers
// collect those into a separate "timings" object.
namespace lnr {

  using json = nlohmann::json;

  json to_json(ConsistencyReport const& r);
  json to_json(EquivalenceReport const& r);
  json to_json(IdentitySuiteReport const& r);
  json to_json(LawCheck const& r);
  json to_json(AxiomReport const& r);
  // {"units": {...}, "locality": {...}}
  json to_json(LocalStructure const& r, AdditiveGroup const& group);
  json to_json(StructuralReport const& r);
  json to_json(ConditionReport const& r);
  json to_json(FormulaSelection const& r);
  json to_json(ConstructReport const& r, AdditiveGroup const& group);
  // Results are listed without their tables; `table_files`, when given,
  // names the exported table of each stored result.
  json to_json(SearchReport const& r, std::vector<std::string> const& table_files = {});

  std::vector<std::uint32_t> coordinates_json(AdditiveGroup const& group, Elem x);

}  // namespace lnr
