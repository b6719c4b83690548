#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lnr/common.hpp"

namespace lnr {

  // The named groups the engine knows about. H1..H4 need a prime p > 3; the
  // others have a fixed prime.
  enum class GroupId {
    kH1,
    kH2,
    kH3,
    kH4,
    kC16,
    kD16,
    kQD16,
    kQ16,
    kG81_7,
    kG81_8,
    kG81_9,
    kG81_10,
  };

  // Accepts the CLI spellings: h1, h2, h3, h4, c16, d16, qd16, q16, g81-7,
  // g81-8, g81-9, g81-10.
  GroupId          parse_group_id(std::string_view name);
  std::string_view group_name(GroupId id) noexcept;
  bool             needs_prime(GroupId id) noexcept;

  // A power-commutator presentation of a finite p-group on at most four
  // polycyclic generators g1..gn, each of relative order p:
  //
  //   p*gi       = power(i)           (a word in g(i+1)..gn)
  //   gj + gi    = gi + gj + tail(j,i) for j > i (a word in g(j+1)..gn)
  //
  // Groups are written additively; every word is stored as the exponent
  // vector of its normal form. Arithmetic is by collection, which is slow but
  // independent of any closed form, and serves as the oracle for the rest of
  // the engine. Up to kStepTableCap elements, the maps e -> e + gi are
  // collected once and cached, so add costs at most ngens*(p-1) lookups.
  class PcPresentation {
   public:
    static constexpr std::size_t kStepTableCap = std::size_t{1} << 20;

    PcPresentation(std::string name, std::uint32_t p, std::size_t ngens);

    void set_power(std::size_t i, Coordinates const& word);
    void set_commutator_tail(std::size_t j, std::size_t i,
                             Coordinates const& tail);

    std::string const& name() const noexcept {
      return _name;
    }
    std::uint32_t prime() const noexcept {
      return _p;
    }
    std::size_t ngens() const noexcept {
      return _ngens;
    }
    std::size_t order() const noexcept {
      return _order;
    }
    Coordinates const& power(std::size_t i) const {
      return _power.at(i);
    }
    Coordinates const& commutator_tail(std::size_t j, std::size_t i) const {
      return _tail.at(j).at(i);
    }

    Elem        index(Coordinates const& x) const noexcept;
    Coordinates coordinates(Elem idx) const noexcept;
    Coordinates generator(std::size_t i) const;
    bool        is_valid(Coordinates const& x) const noexcept;

    Coordinates add(Coordinates const& x, Coordinates const& y) const;
    Coordinates neg(Coordinates const& x) const;
    // r-fold sum; negative r gives neg(smul(x, -r)).
    Coordinates smul(Coordinates const& x, std::int64_t r) const;
    // -x - y + x + y
    Coordinates commutator(Coordinates const& x, Coordinates const& y) const;

    std::uint64_t element_order(Coordinates const& x) const;
    std::uint64_t exponent() const;

    // Row-major |G| x |G| table of index(add(x, y)). Throws CapExceeded above
    // `cap` elements.
    std::vector<TableEntry> addition_table(std::size_t cap = 2401) const;

   private:
    struct Steps {
      std::once_flag          once;
      std::vector<Elem>       next;  // next[i * order + e] = e + gi
    };

    void append_generator(Coordinates& e, std::size_t i) const;
    void append_word(Coordinates& e, Coordinates const& word) const;
    std::vector<Elem> const* steps() const;

    std::string                                       _name;
    std::uint32_t                                     _p;
    std::size_t                                       _ngens;
    std::size_t                                       _order;
    std::array<Coordinates, kMaxGens>                 _power{};
    std::array<std::array<Coordinates, kMaxGens>, kMaxGens> _tail{};
    // shared by copies; replaced whenever a relation changes
    std::shared_ptr<Steps>                            _steps;
  };

  // Builds one of the named groups. `p` is required (prime, > 3) for H1..H4
  // and ignored otherwise.
  PcPresentation build_presentation(GroupId id, std::uint32_t p = 0);
  PcPresentation build_presentation(std::string_view name, std::uint32_t p = 0);

  struct ConsistencyReport {
    std::string                        group;
    std::uint32_t                      prime        = 0;
    std::size_t                        order        = 0;
    // Size of the closure of {0} under adding generators.
    std::size_t                        normal_forms = 0;
    bool                               exhaustive   = false;
    std::uint64_t                      seed         = 0;
    std::uint64_t                      triples_checked = 0;
    bool                               associative  = false;
    std::optional<std::array<Elem, 3>> witness;
    bool                               identity_ok  = false;
    bool                               inverse_ok   = false;
    std::uint64_t                      exponent     = 0;

    bool passed() const noexcept {
      return associative && identity_ok && inverse_ok && normal_forms == order;
    }
  };

  // Exhaustive associativity over all |G|^3 triples when |G| <= exhaustive_cap,
  // otherwise `samples` seeded random triples.
  ConsistencyReport check_consistency(PcPresentation const& pres,
                                      std::uint64_t         samples = 1'000'000,
                                      std::uint64_t         seed    = 1,
                                      unsigned              parallel = 1,
                                      std::size_t exhaustive_cap = 625);

  // Length of the lower central series, computed by closing commutator sets.
  // Only for groups of at most 2401 elements.
  unsigned nilpotency_class(PcPresentation const& pres);

}  // namespace lnr
