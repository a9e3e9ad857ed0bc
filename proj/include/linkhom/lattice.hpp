#pragma once

// Exact integer linear algebra: column Hermite normal form, Smith invariants,
// integer solutions of A x = b and lattice membership.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linkhom/integer.hpp"

namespace linkhom {

using IntVector = std::vector<Integer>;

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  static IntMatrix identity(int n);
  /// Matrix whose columns are the given vectors (all of length `rows`).
  static IntMatrix from_columns(int rows, std::span<const IntVector> columns);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Integer& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Integer& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  IntVector column(int c) const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, std::span<const Integer> x);
std::string to_string(const IntMatrix& a);

/// A U = H with U unimodular. H is in column Hermite form: pivot of column k
/// sits in row pivot_rows[k], strictly below the previous pivot, is positive,
/// and the entries left of it in its row lie in [0, pivot). Columns k >= rank
/// of H are zero.
struct HnfResult {
  IntMatrix h;
  IntMatrix u;
  std::vector<int> pivot_rows;
  int rank() const { return static_cast<int>(pivot_rows.size()); }
};

HnfResult hnf(const IntMatrix& a);

/// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& a);

/// Nonzero invariant factors d_1 | d_2 | ... of the Smith normal form.
std::vector<Integer> smith_invariants(const IntMatrix& a);

struct IntegerSolution {
  IntVector particular;
  std::vector<IntVector> null_basis;
};

/// Some x with A x = b plus a basis of {x : A x = 0}, or nullopt if no
/// integer solution exists. The result is re-verified before returning.
std::optional<IntegerSolution> solve_integer(const IntMatrix& a, std::span<const Integer> b);

/// Whether v is an integer combination of gens.
bool in_lattice(std::span<const Integer> v, std::span<const IntVector> gens);

}  // namespace linkhom
