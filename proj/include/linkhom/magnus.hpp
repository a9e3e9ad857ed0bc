#pragma once

// Reduced Magnus algebra: integer polynomials in non-commuting X_1..X_n modulo
// the ideal spanned by monomials with a repeated variable. Its group of units
// with constant term 1 is a faithful model of Milnor's reduced free group.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "linkhom/integer.hpp"

namespace linkhom {

inline constexpr int kMaxComponents = 5;

using MonomialId = std::uint16_t;

/// A word of distinct variable indices (1-based). The empty word is the unit.
class IndexedMonomial {
 public:
  IndexedMonomial() = default;
  IndexedMonomial(std::initializer_list<int> letters);
  explicit IndexedMonomial(std::span<const int> letters);

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }
  int operator[](int k) const { return letters_[k]; }
  std::vector<int> letters() const { return {letters_.begin(), letters_.begin() + size_}; }
  /// Bit r set iff variable r occurs.
  unsigned mask() const;

  friend bool operator==(const IndexedMonomial&, const IndexedMonomial&) = default;

 private:
  std::array<std::uint8_t, kMaxComponents> letters_{};
  int size_ = 0;
};

/// Enumeration of all repeat-free monomials on n variables in canonical order
/// (degree first, then lexicographic), with a precomputed product table.
/// Tables are built once per n and are read-only afterwards.
class MonomialTable {
 public:
  static const MonomialTable& get(int n);

  int n() const { return n_; }
  std::size_t size() const { return words_.size(); }
  const IndexedMonomial& word(MonomialId id) const { return words_[id]; }
  int degree(MonomialId id) const { return words_[id].size(); }
  unsigned mask(MonomialId id) const { return masks_[id]; }
  /// Id of the product of two monomials, or -1 when they share a variable.
  int concat(MonomialId a, MonomialId b) const { return concat_[a * words_.size() + b]; }
  /// Id of the word with its last letter removed (id must be non-unit).
  MonomialId prefix(MonomialId id) const { return prefix_[id]; }
  int last_letter(MonomialId id) const { return words_[id][words_[id].size() - 1]; }
  /// Throws InputError if the word uses a letter outside 1..n.
  MonomialId id_of(const IndexedMonomial& w) const;
  MonomialId unit() const { return 0; }
  MonomialId variable(int i) const { return static_cast<MonomialId>(i); }

 private:
  explicit MonomialTable(int n);

  int n_;
  std::vector<IndexedMonomial> words_;
  std::vector<unsigned> masks_;
  std::vector<std::int16_t> concat_;
  std::vector<MonomialId> prefix_;
  std::vector<std::int16_t> lookup_;  // base-(n+1) encoding of a word -> id
};

/// Element of the reduced Magnus algebra in normal form: terms sorted by
/// monomial id, no zero coefficients. Structural equality is value equality.
class AlgebraElement {
 public:
  using Term = std::pair<MonomialId, Integer>;

  /// The zero element on n variables.
  explicit AlgebraElement(int n);
  /// Builds from arbitrary terms; merges duplicates and drops zeros.
  /// Monomials with a repeated variable are zero in the quotient and dropped.
  static AlgebraElement from_terms(int n, std::span<const std::pair<std::vector<int>, Integer>> terms);
  static AlgebraElement one(int n);
  static AlgebraElement variable(int i, int n);

  int n() const { return n_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Integer coefficient(const IndexedMonomial& m) const;
  Integer coefficient(MonomialId id) const;
  Integer constant_term() const { return coefficient(MonomialId{0}); }

  /// Image under X_i -> 0.
  AlgebraElement without_letter(int i) const;
  /// Drops every term whose monomial meets the given variable mask.
  AlgebraElement filtered(unsigned forbidden_mask) const;

  AlgebraElement operator-() const;
  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(const Integer& c, const AlgebraElement& a);
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

  /// Terms in canonical order as `c*Xi1..Xik`, unit monomial written as `c`.
  std::string to_string() const;

 private:
  friend struct AlgebraAccess;
  AlgebraElement(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {}

  int n_;
  std::vector<Term> terms_;
};

/// Product with every monomial meeting `forbidden_mask` discarded. Since those
/// monomials span a two-sided ideal this equals filtering the full product.
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, unsigned forbidden_mask = 0);

/// Algebra endomorphism X_r -> images[r-1], applied to `a`. The images must
/// map the repeated-variable ideal into itself (true whenever each image of X_r
/// lies in the ideal generated by a single variable and r -> that variable is
/// injective).
AlgebraElement apply_endomorphism(std::span<const AlgebraElement> images, const AlgebraElement& a,
                                  unsigned forbidden_mask = 0);

/// Unit of the algebra with constant term exactly 1.
class GroupElement {
 public:
  static GroupElement identity(int n);
  /// Magnus image 1 + X_i of the meridian x_i.
  static GroupElement meridian(int i, int n);
  /// Throws InputError unless the constant term is 1.
  static GroupElement from_series(AlgebraElement series);

  int n() const { return series_.n(); }
  const AlgebraElement& series() const { return series_; }
  bool is_identity() const;

  GroupElement inverse() const;
  GroupElement pow(long long e) const;
  /// Image under x_i -> 1.
  GroupElement without_letter(int i) const;

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);
  friend bool operator==(const GroupElement& a, const GroupElement& b) = default;

  std::string to_string() const { return series_.to_string(); }

 private:
  explicit GroupElement(AlgebraElement s) : series_(std::move(s)) {}
  AlgebraElement series_;
};

GroupElement meridian(int i, int n);
GroupElement commutator(const GroupElement& a, const GroupElement& b);

/// The endomorphism X_i -> w X_i w^{-1}, X_j -> X_j (j != i), applied to `a`.
AlgebraElement substitute(int i, const GroupElement& w, const AlgebraElement& a);

/// Number of repeat-free monomials on n variables (including the unit).
std::size_t monomial_count(int n);

}  // namespace linkhom
