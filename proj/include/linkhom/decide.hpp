#pragma once

// Staged link-homotopy decision over canonical coordinates, certificates and
// their independent verification.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linkhom/indexing.hpp"
#include "linkhom/lattice.hpp"
#include "linkhom/moves.hpp"

namespace linkhom {

/// v -> m v + t
struct AffineMap {
  IntMatrix m;
  IntVector t;

  int dim() const { return m.rows(); }
  IntVector apply(std::span<const Integer> v) const;
  bool is_translation() const;
};

/// second after first
AffineMap then(const AffineMap& first, const AffineMap& second);
AffineMap inverse(const AffineMap& f);
AffineMap power(const AffineMap& f, long long e);

/// A word in the positive moves: (index into positive_moves(n), exponent).
struct Run {
  int move;
  long long power;
  friend bool operator==(const Run&, const Run&) = default;
};
using Word = std::vector<Run>;

/// Appends with free reduction (adjacent runs of one move merge).
void append(Word& w, const Run& r);
void append(Word& w, const Word& tail);
Word inverse(const Word& w);
/// Number of unit moves.
long long length(const Word& w);
std::vector<PartialConj> unit_moves(const Word& w, int n);

/// With Y1 fixed, every partial conjugation acts on the remaining coordinates
/// (Y2..Y_{n-1} flattened) by an integer affine map. The maps are read off the
/// string-link engine at Y1 and at unit vectors; columns of block k are probed
/// on demand. Rows of a block k are exact once the columns of blocks < k exist.
class MoveModel {
 public:
  MoveModel(int n, CanonicalForm::Block y1);

  int n() const { return n_; }
  int dim() const { return dim_; }
  const CanonicalForm::Block& y1() const { return y1_; }
  /// Offset of block k (2..n-1) inside the flattened vector.
  int offset(int k) const { return offsets_.at(k); }
  int block_size(int k) const { return offsets_.at(k + 1) - offsets_.at(k); }

  /// Probes the columns of blocks 2..k that are still missing.
  void ensure_columns(int k);
  int probed_through() const { return probed_; }

  const AffineMap& forward(int move) const { return forward_.at(move); }
  const AffineMap& backward(int move) const { return backward_.at(move); }
  IntVector apply(const Word& w, IntVector v) const;

  IntVector vector_of(const CanonicalForm& y) const;
  CanonicalForm form_of(std::span<const Integer> v) const;

 private:
  int n_;
  int dim_ = 0;
  CanonicalForm::Block y1_;
  std::vector<int> offsets_;
  int probed_ = 1;
  std::vector<PartialConj> moves_;
  std::vector<AffineMap> forward_;
  std::vector<AffineMap> backward_;
};

struct Verdict {
  bool homotopic = false;
  /// Terminating step (1..n-1) of a negative verdict.
  int step = 0;
  std::vector<PartialConj> certificate;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct DecideOptions {
  /// Passes per stage before giving up with InvariantError.
  int max_passes = 8;
  /// Re-run verify_certificate on positive verdicts.
  bool verify = false;
  std::function<void(std::string_view)> log;
};

Verdict decide(const CanonicalForm& y, const CanonicalForm& y_prime, const DecideOptions& options = {});

/// Applies the moves to from_canonical(y) and compares coordinates with y_prime.
bool verify_certificate(const CanonicalForm& y, const CanonicalForm& y_prime, std::span<const PartialConj> certificate);

/// Applies the moves with pc_apply, merging runs PC(i, x_j^a) PC(i, x_j^b) into PC(i, x_j^(a+b)).
StringLink apply_moves(const StringLink& sl, std::span<const PartialConj> moves);

struct BatchResult {
  std::optional<Verdict> verdict;
  std::string error;
  /// 2 for input errors, 3 for internal ones; 0 when verdict is set.
  int error_code = 0;
};

/// Element-wise decide on up to `jobs` threads; results keep input order.
std::vector<BatchResult> decide_batch(std::span<const std::pair<CanonicalForm, CanonicalForm>> pairs, int jobs = 1,
                                      const DecideOptions& options = {});

}  // namespace linkhom
