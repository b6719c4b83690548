#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lnr/common.hpp"
#include "lnr/h1_arith.hpp"
#include "lnr/pcgroup.hpp"

namespace lnr {

  inline constexpr std::size_t kDefaultTableCap = 2401;

  // Handle on the additive group of a nearring: either a pc presentation
  // (collection) or the H1 closed forms, tabulated when small enough.
  class AdditiveGroup {
   public:
    static AdditiveGroup from_presentation(PcPresentation pres,
                                           std::size_t table_cap = kDefaultTableCap);
    static AdditiveGroup h1(std::uint32_t p,
                            std::size_t   table_cap = kDefaultTableCap);

    std::string const& name() const noexcept {
      return _name;
    }
    std::uint32_t prime() const noexcept {
      return _p;
    }
    std::size_t order() const noexcept {
      return _n;
    }
    std::size_t ngens() const noexcept {
      return _ngens;
    }
    bool tabulated() const noexcept {
      return !_add.empty();
    }
    std::vector<TableEntry> const& add_table() const noexcept {
      return _add;
    }

    Elem add(Elem x, Elem y) const {
      if (!_add.empty()) {
        return _add[static_cast<std::size_t>(x) * _n + y];
      }
      return _h1 ? _h1->add(x, y)
                 : _pres->index(_pres->add(_pres->coordinates(x), _pres->coordinates(y)));
    }
    Elem neg(Elem x) const {
      if (!_neg.empty()) {
        return _neg[x];
      }
      return _h1 ? _h1->neg(x) : _pres->index(_pres->neg(_pres->coordinates(x)));
    }

    Coordinates coordinates(Elem x) const noexcept;
    Elem        index(Coordinates const& x) const noexcept;
    Elem        generator(std::size_t i) const;

    std::uint64_t element_order(Elem x) const;
    std::uint64_t exponent() const;

    // Additive closure of a set of elements (the subgroup they generate), as
    // a membership vector.
    std::vector<bool> subgroup_closure(std::vector<Elem> const& gens) const;

   private:
    AdditiveGroup() = default;
    void tabulate(std::size_t cap);

    std::string                           _name;
    std::uint32_t                         _p     = 0;
    std::size_t                           _n     = 0;
    std::size_t                           _ngens = 0;
    std::shared_ptr<PcPresentation const> _pres;
    std::optional<H1Arith>                _h1;
    std::vector<TableEntry>               _add;
    std::vector<TableEntry>               _neg;
  };

  using MulFn = std::function<Elem(Elem, Elem)>;

  // Additive group, multiplication and designated identity.
  class NearringInstance {
   public:
    NearringInstance(std::string name, AdditiveGroup group, Elem identity, MulFn mul);
    NearringInstance(std::string             name,
                     AdditiveGroup           group,
                     Elem                    identity,
                     std::vector<TableEntry> table);

    std::string const& name() const noexcept {
      return _name;
    }
    AdditiveGroup const& group() const noexcept {
      return _group;
    }
    std::size_t order() const noexcept {
      return _group.order();
    }
    Elem identity() const noexcept {
      return _identity;
    }
    bool tabulated() const noexcept {
      return !_table.empty();
    }
    std::vector<TableEntry> const& table() const noexcept {
      return _table;
    }

    Elem mul(Elem x, Elem y) const {
      if (!_table.empty()) {
        return _table[static_cast<std::size_t>(x) * _group.order() + y];
      }
      return _mul(x, y);
    }

    // Materializes the multiplication table; throws CapExceeded above `cap`.
    void tabulate(std::size_t cap = kDefaultTableCap);

   private:
    std::string             _name;
    AdditiveGroup           _group;
    Elem                    _identity;
    MulFn                   _mul;
    std::vector<TableEntry> _table;
  };

  ////////////////////////////////////////////////////////////////////////
  // Axioms
  ////////////////////////////////////////////////////////////////////////

  struct VerifyOptions {
    enum class Mode { kExhaustive, kSampled };
    Mode          mode     = Mode::kExhaustive;
    std::uint64_t samples  = 10'000'000;
    std::uint64_t seed     = 1;
    unsigned      parallel = 1;
  };

  std::string_view to_string(VerifyOptions::Mode mode) noexcept;

  // Outcome of one law. A failed law always carries a witness (element
  // indices, in the order the law quantifies over them).
  struct LawCheck {
    bool                             passed = true;
    std::uint64_t                    checks = 0;
    std::optional<std::vector<Elem>> witness;
  };

  struct AxiomReport {
    VerifyOptions::Mode mode    = VerifyOptions::Mode::kExhaustive;
    std::uint64_t       seed    = 0;
    LawCheck            associativity;        // (xy)z = x(yz)
    LawCheck            left_distributivity;  // x(y+z) = xy + xz
    LawCheck            identity_left;        // i x = x
    LawCheck            identity_right;       // x i = x
    LawCheck            right_zero;           // x 0 = 0
    // 0 x = 0 for all x; reported, not required.
    bool                zero_symmetric = false;
    std::optional<Elem> zero_symmetry_witness;
    double              elapsed_seconds = 0;

    bool is_nearring_with_identity() const noexcept {
      return associativity.passed && left_distributivity.passed
             && identity_left.passed && identity_right.passed && right_zero.passed;
    }
  };

  AxiomReport verify_axioms(NearringInstance const& nr,
                            VerifyOptions const&    options = {});

  ////////////////////////////////////////////////////////////////////////
  // Units and locality
  ////////////////////////////////////////////////////////////////////////

  struct LocalStructure {
    std::vector<Elem> units;
    std::vector<Elem> non_units;
    bool              l_is_subgroup = false;
    std::size_t       l_order       = 0;
    bool              l_cyclic      = false;
    // x, y in L with x + y (or -x when x == y) outside L
    std::optional<std::array<Elem, 2>> l_subgroup_witness;
    bool              units_closed  = false;
    // i + L is a subgroup of the multiplicative group
    bool              i_plus_l_is_subgroup_of_units = false;
    double            elapsed_seconds = 0;

    bool is_local() const noexcept {
      return l_is_subgroup;
    }
  };

  // x is a unit iff some y has xy = yx = i, found by scanning.
  LocalStructure units_and_locality(NearringInstance const& nr);

  struct StructuralReport {
    // Additive order of i equals the exponent, and every unit has that order.
    std::uint64_t       identity_order = 0;
    std::uint64_t       exponent       = 0;
    bool                units_have_exponent_order = false;
    std::optional<Elem> unit_order_witness;

    // x m y in L for m in L.
    LawCheck    rr_subgroup;
    std::string rr_mode;

    // Proper R*-invariant subgroups of R+ lie in L. Subgroups are enumerated
    // only when |R| <= 625.
    bool                     invariant_checked = false;
    std::size_t              subgroups_enumerated = 0;
    std::vector<std::size_t> invariant_proper_orders;
    bool                     invariant_in_l = false;
    // an element of a proper invariant subgroup outside L
    std::optional<Elem>      invariant_witness;
    double                   elapsed_seconds = 0;

    bool passed() const noexcept {
      return identity_order == exponent && units_have_exponent_order
             && rr_subgroup.passed && (!invariant_checked || invariant_in_l);
    }
  };

  StructuralReport check_structural_properties(NearringInstance const& nr,
                                           LocalStructure const&   local,
                                           std::uint64_t samples = 10'000'000,
                                           std::uint64_t seed    = 1);

  // All subgroups of a group with at most 625 elements, as sorted element
  // lists, together with a small generating set each.
  struct Subgroup {
    std::vector<Elem> elements;
    std::vector<Elem> generators;
  };
  std::vector<Subgroup> enumerate_subgroups(AdditiveGroup const& group);

  ////////////////////////////////////////////////////////////////////////
  // Tables
  ////////////////////////////////////////////////////////////////////////

  struct MulTable {
    std::uint32_t           p        = 0;
    std::size_t             n        = 0;
    Elem                    identity = 0;
    std::vector<TableEntry> entries;  // row-major, entries[x*n + y] = x*y

    bool operator==(MulTable const&) const = default;
  };

  MulTable multiplication_table(NearringInstance const& nr,
                                std::size_t cap = kDefaultTableCap);

  // First line "p,n,identity_idx", then n lines of n comma-separated indices.
  void     write_table_csv(std::ostream& out, MulTable const& table);
  MulTable read_table_csv(std::istream& in);

}  // namespace lnr
