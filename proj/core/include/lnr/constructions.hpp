#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lnr/common.hpp"
#include "lnr/h1_arith.hpp"
#include "lnr/nearring.hpp"

namespace lnr {

  // Coefficient maps of x*b = a alpha(x) + b beta(x) + c gamma(x) + d phi(x),
  // indexed by element index. All values lie in [0, p).
  struct MapQuad {
    std::uint32_t              p = 0;
    std::string                name;
    std::vector<std::uint32_t> alpha;
    std::vector<std::uint32_t> beta;
    std::vector<std::uint32_t> gamma;
    std::vector<std::uint32_t> phi;

    std::size_t size() const noexcept {
      return beta.size();
    }
    bool alpha_zero() const noexcept;
    std::array<std::uint32_t, 4> at(Elem x) const {
      return {alpha[x], beta[x], gamma[x], phi[x]};
    }
  };

  // alpha = gamma = 0, beta(x) = x1^2, phi(x) = x2^2 if x1 = 0 else 0.
  MapQuad example1_maps(std::uint32_t p);
  // alpha = gamma = phi = 0, beta = 1.
  MapQuad trivial_beta1_maps(std::uint32_t p);
  // "example1" or "trivial-beta1".
  MapQuad builtin_maps(std::string const& name, std::uint32_t p);

  // One line per element: index,alpha,beta,gamma,phi. A leading header line
  // is skipped if it does not start with a digit.
  MapQuad read_maps_csv(std::istream& in, std::uint32_t p, std::string name = "file");
  void    write_maps_csv(std::ostream& out, MapQuad const& maps);

  // The identity row a*b = b fails: (alpha, beta, gamma, phi)(a) != (0,1,0,0).
  class MapRejected : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Throws UsageError when the tables are malformed and MapRejected when the
  // identity row is wrong.
  void validate_maps(MapQuad const& maps);

  ////////////////////////////////////////////////////////////////////////
  // Multiplications
  ////////////////////////////////////////////////////////////////////////

  // Two readings of the general product. kTruncated stops the c-coefficient at
  // gamma(x)y2, where a parenthesis closes; kCorrected keeps
  // -alpha beta C(y2,2) + x1 beta y3 - x2 alpha y3 inside it.
  enum class GeneralFormula { kTruncated, kCorrected };
  std::string_view to_string(GeneralFormula f) noexcept;

  Coordinates mul_general(H1Arith const&       h1,
                          MapQuad const&       maps,
                          GeneralFormula       formula,
                          Coordinates const&   x,
                          Coordinates const&   y);

  // alpha = 0 specialization:
  //   xy = a(x1y1) + b(x2y1 + beta y2)
  //        + c(x3y1 - x1x2 C(y1,2) + x1 beta y3 + gamma y2)
  //        + d(x4y1 + x2 C(x1,2) C(y1,2) - x1x3 C(y1,2) + x1^2 x2 C(y1,3)
  //            + phi y2 + x1 gamma y3 - beta C(x1,2) y3 + x1^2 beta y4)
  Coordinates mul_local(H1Arith const&     h1,
                        MapQuad const&     maps,
                        Coordinates const& x,
                        Coordinates const& y);

  // x*y = x y1 + (xb) y2 + (xc) y3 + (xd) y4 with xc = -x - xb + x + xb and
  // xd = -x - xc + x + xc, all in the group. Independent of both closed forms.
  Coordinates mul_by_distributivity(H1Arith const&     h1,
                                    MapQuad const&     maps,
                                    Coordinates const& x,
                                    Coordinates const& y);

  struct FormulaSelection {
    GeneralFormula             chosen = GeneralFormula::kCorrected;
    bool                       exhaustive = false;
    std::uint64_t              pairs = 0;
    // mismatches against mul_by_distributivity, indexed by GeneralFormula
    std::array<std::uint64_t, 2> mismatches{};
    std::array<std::optional<std::array<Elem, 2>>, 2> witness;
  };

  // Compares both readings with mul_by_distributivity on every pair when
  // p^8 <= exhaustive_pairs, otherwise on `samples` seeded pairs, and picks
  // the reading with fewer mismatches (kCorrected on ties).
  FormulaSelection select_general_formula(MapQuad const& maps,
                                          std::uint64_t  samples = 1'000'000,
                                          std::uint64_t  seed    = 1,
                                          std::uint64_t  exhaustive_pairs = 6'000'000);

  ////////////////////////////////////////////////////////////////////////
  // Map conditions
  ////////////////////////////////////////////////////////////////////////

  struct ConditionCheck {
    std::string                        name;
    std::string                        statement;
    bool                               required = true;
    std::uint64_t                      checks   = 0;
    bool                               passed   = true;
    std::optional<std::array<Elem, 2>> witness;
  };

  struct ConditionReport {
    std::uint32_t               prime = 0;
    std::string                 family;  // "general" or "local"
    bool                        exhaustive = true;
    std::uint64_t               seed       = 0;
    std::vector<ConditionCheck> conditions;

    bool passed() const noexcept;
    ConditionCheck const* find(std::string_view name) const noexcept;
  };

  // Pairwise sweeps cover every pair when p^8 <= exhaustive_pairs and
  // `samples` seeded random pairs otherwise.
  struct PairSweepOptions {
    unsigned      parallel         = 1;
    std::uint64_t samples          = 1'000'000;
    std::uint64_t seed             = 1;
    std::uint64_t exhaustive_pairs = 6'000'000;
  };

  // Statements (0)-(6) for the general product, checked on every pair.
  // (6) is checked both with y2 in its seventh term (informational)
  // and with beta(y) in that place. Also checks x(yb) = (xy)b directly.
  ConditionReport check_general_conditions(MapQuad const&          maps,
                                           GeneralFormula          formula = GeneralFormula::kCorrected,
                                           PairSweepOptions const& options = {});

  // Conditions (0)-(3) of the alpha = 0 family on every pair, the case split
  // of the example maps by whether x1 and y1 vanish, and x(yb) = (xy)b.
  ConditionReport check_local_conditions(MapQuad const& maps, PairSweepOptions const& options = {});

  ////////////////////////////////////////////////////////////////////////
  // Instances
  ////////////////////////////////////////////////////////////////////////

  enum class Family { kLocal, kGeneral };

  // Identity is a = (1,0,0,0), index p^3.
  NearringInstance build_nearring(MapQuad const& maps,
                                  Family         family,
                                  GeneralFormula formula = GeneralFormula::kCorrected,
                                  std::size_t    table_cap = kDefaultTableCap);
  NearringInstance build_example_nearring(std::uint32_t p,
                                          std::size_t table_cap = kDefaultTableCap);

  enum class Verdict { kLocal, kNearringNotLocal, kNotANearring };
  std::string_view to_string(Verdict v) noexcept;

  struct ConstructOptions {
    VerifyOptions    verify;  // mode is overridden to exhaustive when |R| <= exhaustive_cap
    PairSweepOptions pairs;
    std::size_t      exhaustive_cap = 625;
    bool          structural     = true;
  };

  struct ConstructReport {
    std::string                     maps_name;
    std::uint32_t                   prime = 0;
    Family                          family = Family::kLocal;
    std::optional<FormulaSelection> selection;
    ConditionReport                 conditions;
    AxiomReport                     axioms;
    std::optional<LocalStructure>   local;
    std::optional<StructuralReport> structural;
    Verdict                         verdict = Verdict::kNotANearring;
  };

  // Screens the maps, builds the instance and verifies it in full. The
  // verdict is decided by the axiom sweep and the unit scan alone.
  ConstructReport construct_and_verify(MapQuad const& maps, ConstructOptions const& options);

}  // namespace lnr
