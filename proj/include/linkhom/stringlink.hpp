#pragma once

// Homotopy string links, stored as longitude tuples in the reduced Magnus
// algebra. Longitude i never involves X_i.

#include <span>
#include <vector>

#include "linkhom/indexing.hpp"
#include "linkhom/magnus.hpp"

namespace linkhom {

class StringLink {
 public:
  static StringLink trivial(int n);
  /// Checks that each longitude avoids its own variable and that the induced
  /// map fixes x_1...x_n; throws InputError otherwise.
  static StringLink from_longitudes(std::vector<GroupElement> longitudes);

  int n() const { return static_cast<int>(longitudes_.size()); }
  const std::vector<GroupElement>& longitudes() const { return longitudes_; }
  /// Longitude of strand i (1-based).
  const GroupElement& longitude(int i) const { return longitudes_.at(i - 1); }
  bool is_trivial() const;

  /// Images X_r -> lambda_r X_r lambda_r^{-1} of the induced automorphism.
  std::vector<AlgebraElement> meridian_images() const;
  bool realizable() const;

  friend bool operator==(const StringLink&, const StringLink&) = default;

 private:
  friend struct StringLinkAccess;
  explicit StringLink(std::vector<GroupElement> longitudes) : longitudes_(std::move(longitudes)) {}

  std::vector<GroupElement> longitudes_;
};

/// When enabled, every string link produced by the operations below is
/// re-checked for realizability (InvariantError on failure). Off by default.
void set_realizability_checks(bool enabled);
bool realizability_checks();

/// String link of a pure braid word on n strands: entry +k is sigma_k, -k its inverse.
StringLink braid_string_link(std::span<const int> word, int n);
/// Pure braid generator A_ij, i < j, with mu(ij) = 1.
StringLink elementary(int i, int j, int n);
/// Canonical generator G_I for a basis index I; cached per n.
const StringLink& generator(const IndexSequence& index, int n);
/// G_I^e, using the cached inverse for negative e.
StringLink generator_power(const IndexSequence& index, int n, const Integer& e);

/// Stacks a below b.
StringLink compose(const StringLink& a, const StringLink& b);
StringLink inverse(const StringLink& a);
StringLink power(const StringLink& a, const Integer& e);
/// a b a^-1 b^-1
StringLink commutator(const StringLink& a, const StringLink& b);

/// Coefficient of X_{i1}..X_{i(k-1)} in lambda_{ik}.
Integer mu(const StringLink& sl, const IndexSequence& index);

StringLink from_canonical(const CanonicalForm& y);
/// Coordinates by stripping generators degree by degree; InvariantError if
/// the stripping does not end at the trivial string link.
CanonicalForm to_canonical(const StringLink& sl);

}  // namespace linkhom
