#pragma once

// Partial conjugations and their action on string links and coordinates.

#include <string>
#include <vector>

#include "linkhom/indexing.hpp"
#include "linkhom/stringlink.hpp"

namespace linkhom {

/// Partial conjugation of component i by x_j^power. letter == 0 (or power
/// == 0) is the trivial conjugator.
struct PartialConj {
  int component = 1;
  int letter = 0;
  long long power = 0;

  bool is_trivial() const { return letter == 0 || power == 0; }
  PartialConj inverse() const { return {component, letter, -power}; }
  /// "x2", "x2^-1", "x2^3" or "1".
  std::string conjugator_string() const;
  /// Parses conjugator_string output.
  static PartialConj parse(int component, const std::string& conjugator);

  friend bool operator==(const PartialConj&, const PartialConj&) = default;
};

std::string to_string(const PartialConj& m);

/// The 2n(n-1) moves PC(i, x_j^{+-1}), i != j, ordered by i, then j, then +1 before -1.
std::vector<PartialConj> elementary_moves(int n);
/// The n(n-1) moves PC(i, x_j).
std::vector<PartialConj> positive_moves(int n);

/// Throws InputError unless the move is well formed for n components.
void validate(const PartialConj& m, int n);

/// sigma -> a sigma s^-1 a^-1 s, with a = A_{ij}^power (indices sorted) and s
/// the canonical product of the factors of sigma not involving strand i.
StringLink pc_apply(const PartialConj& m, const StringLink& sl);
/// Same, reusing the known coordinates y = to_canonical(sl).
StringLink pc_apply(const PartialConj& m, const StringLink& sl, const CanonicalForm& y);
/// Coordinates of the moved link.
CanonicalForm pc_apply(const PartialConj& m, const CanonicalForm& y);

/// Blockwise a - b.
CanonicalForm difference(const CanonicalForm& a, const CanonicalForm& b);
/// to_canonical(pc_apply(m, from_canonical(y))) - y; block Y1 is always zero.
CanonicalForm pc_displacement(const PartialConj& m, const CanonicalForm& y);

}  // namespace linkhom
