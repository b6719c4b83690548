#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lnr/common.hpp"
#include "lnr/pcgroup.hpp"

namespace lnr {

  // A group endomorphism, stored as its full image table.
  struct Endomorphism {
    std::vector<Elem>       generator_images;
    std::vector<TableEntry> image;

    bool is_bijective() const;
    bool operator==(Endomorphism const&) const = default;
  };

  // All endomorphisms of a group of order <= 81, sorted by image table.
  // Generator images are chosen from the last generator backwards, and each
  // power and commutator relation is checked as soon as its generators have
  // images.
  std::vector<Endomorphism> enumerate_endomorphisms(PcPresentation const& pres,
                                                    std::size_t cap = 81);

  // Elements whose additive order equals the exponent.
  std::vector<Elem> identity_candidates(PcPresentation const& pres);

  enum class PruneMode {
    // closure propagation and the locality prune
    kFull,
    // closure propagation only; locality decided at the leaves
    kClosureOnly,
    // every combination of candidate left multipliers, tested at the leaves
    kGenerateAndTest,
  };
  std::string_view to_string(PruneMode m) noexcept;
  PruneMode        parse_prune_mode(std::string_view s);

  struct SearchOptions {
    bool          require_local = true;
    // Results beyond this many are counted but not stored.
    std::size_t   max_results   = 1000;
    unsigned      parallel      = 1;
    // Wall-clock budget; zero means unlimited.
    std::chrono::milliseconds budget{0};
    PruneMode     prune         = PruneMode::kFull;
    bool          allow_order81 = false;
    // JSON file of finished subtrees, read on start and rewritten as subtrees
    // finish. Empty disables checkpointing.
    std::string   checkpoint_path;
    // Cap on the leaf count of a generate-and-test run.
    std::uint64_t generate_cap  = 50'000'000;
  };

  struct FoundNearring {
    Elem                    identity = 0;
    std::vector<TableEntry> table;  // row-major x*y
    bool                    verified = false;
    bool                    local    = false;

    auto operator<=>(FoundNearring const&) const = default;
  };

  enum class SearchStatus { kExhaustive, kInconclusive };
  std::string_view to_string(SearchStatus s) noexcept;

  struct CandidateSummary {
    Elem          identity = 0;
    std::uint64_t subtrees = 0;
    std::uint64_t nodes    = 0;
    std::uint64_t results  = 0;
  };

  struct SearchReport {
    std::string                   group;
    std::size_t                   order = 0;
    PruneMode                     prune = PruneMode::kFull;
    bool                          require_local = true;
    std::vector<Elem>             identity_candidates;
    std::size_t                   endo_count = 0;
    std::uint64_t                 branches_explored = 0;
    std::uint64_t                 leaves = 0;
    std::uint64_t                 result_count = 0;
    // completed assignments rejected by full verification (never expected)
    std::uint64_t                 verification_failures = 0;
    std::vector<CandidateSummary> candidates;
    std::vector<FoundNearring>    results;  // sorted, at most max_results
    bool                          truncated = false;
    std::size_t                   subtrees_total = 0;
    std::size_t                   subtrees_done  = 0;
    std::size_t                   subtrees_from_checkpoint = 0;
    SearchStatus                  status = SearchStatus::kInconclusive;
    double                        elapsed_seconds = 0;
  };

  // Backtracking over x -> lambda_x with lambda_x(i) = x, enforcing
  // lambda_{lambda_x(y)} = lambda_x o lambda_y. Every completed assignment is
  // checked with verify_axioms and units_and_locality before it is reported.
  SearchReport search_local_nearrings(PcPresentation const& pres,
                                      SearchOptions const&  options = {});

}  // namespace lnr
