#pragma once

// Milnor mu-bar invariants of closures: integer mu of a string link reduced
// modulo the indeterminacy Delta(I).

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "linkhom/indexing.hpp"
#include "linkhom/stringlink.hpp"

namespace linkhom {

/// modulus 0 means the value is an honest integer.
struct MuResidue {
  IndexSequence index;
  Integer value;
  Integer modulus;

  friend bool operator==(const MuResidue&, const MuResidue&) = default;
};

using MuTable = std::map<IndexSequence, Integer>;

/// Sequences obtained from I by deleting at least one entry (keeping length
/// >= 2) and rotating cyclically; sorted, without duplicates.
std::vector<IndexSequence> indeterminacy_sequences(const IndexSequence& index);
/// gcd of the table values over indeterminacy_sequences(I); InputError if one is missing.
Integer delta(const IndexSequence& index, const MuTable& table);

MuResidue mubar(const StringLink& sl, const IndexSequence& index);
MuResidue mubar(const CanonicalForm& y, const IndexSequence& index);
std::vector<MuResidue> mubar_all(const StringLink& sl, std::span<const IndexSequence> indices);

struct MuComparison {
  bool equal = true;
  std::optional<IndexSequence> first_difference;
  std::vector<MuResidue> left;
  std::vector<MuResidue> right;
};

/// Compares residues over comparison_indices(n).
MuComparison mu_compare(const CanonicalForm& y, const CanonicalForm& y_prime);

}  // namespace linkhom
