#pragma once

// Coordinate systems: basis index sequences per degree, the fixed block
// orders of the canonical form, and the distinguishing mu-bar index sets.

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkhom/integer.hpp"
#include "linkhom/magnus.hpp"

namespace linkhom {

/// Ordered sequence of distinct component indices in 1..5, length >= 2.
class IndexSequence {
 public:
  IndexSequence(std::initializer_list<int> entries);
  explicit IndexSequence(std::span<const int> entries);
  /// Digit string such as "1324".
  static IndexSequence parse(std::string_view text);

  int size() const { return size_; }
  int operator[](int k) const { return entries_[k]; }
  int front() const { return entries_[0]; }
  int back() const { return entries_[size_ - 1]; }
  std::vector<int> entries() const { return {entries_.begin(), entries_.begin() + size_}; }
  unsigned mask() const;
  bool contains(int i) const { return (mask() >> i) & 1u; }
  int max_entry() const;
  std::string to_string() const;

  friend bool operator==(const IndexSequence&, const IndexSequence&) = default;
  friend std::strong_ordering operator<=>(const IndexSequence& a, const IndexSequence& b);

 private:
  std::array<std::uint8_t, kMaxComponents> entries_{};
  int size_ = 0;
};

/// Basis indices of length k in the fixed canonical order (2 <= k <= n <= 5).
const std::vector<IndexSequence>& basis_indices(int n, int k);
/// Same set produced by the combinatorial rule: for every k-subset S, first
/// entry min(S \ max S), last entry max S, middle any permutation (lex order).
std::vector<IndexSequence> generated_basis_indices(int n, int k);
/// All basis indices, degree ascending, in canonical order.
std::vector<IndexSequence> all_basis_indices(int n);
/// Sizes of the blocks Y_1..Y_{n-1}.
std::vector<int> block_sizes(int n);
int coordinate_count(int n);
/// Mu-bar indices that determine link-homotopy (n = 4, 5 only).
const std::vector<IndexSequence>& distinguishing_indices(int n);
/// distinguishing_indices extended to n = 3 by Milnor's classification
/// (12, 13, 23, 123); used for cross-validation.
const std::vector<IndexSequence>& comparison_indices(int n);

/// Canonical coordinates: blocks Y_1..Y_{n-1}, block k holding the
/// exponents y_I for the length-(k+1) basis indices.
class CanonicalForm {
 public:
  using Block = std::vector<Integer>;

  static CanonicalForm zero(int n);
  /// Validates block count and lengths; InputError names the offending block.
  CanonicalForm(int n, std::vector<Block> blocks);
  static CanonicalForm from_flat(int n, std::span<const Integer> values);

  int n() const { return n_; }
  /// Block k in 1..n-1.
  const Block& block(int k) const { return blocks_.at(k - 1); }
  Block& block(int k) { return blocks_.at(k - 1); }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::vector<Integer> flat() const;

  const Integer& operator[](const IndexSequence& index) const;
  Integer& operator[](const IndexSequence& index);

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;

 private:
  int n_;
  std::vector<Block> blocks_;
};

std::string to_string(const CanonicalForm& y);

}  // namespace linkhom
