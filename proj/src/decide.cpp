#include "linkhom/decide.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <tuple>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "linkhom/errors.hpp"

namespace linkhom {

// ---------------------------------------------------------------- affine maps

IntVector AffineMap::apply(std::span<const Integer> v) const {
  IntVector out = t;
  const int d = dim();
  for (int c = 0; c < d; ++c) {
    if (v[c].is_zero()) continue;
    for (int r = 0; r < d; ++r) {
      if (!m(r, c).is_zero()) out[r].add_mul(m(r, c), v[c]);
    }
  }
  return out;
}

bool AffineMap::is_translation() const { return m == IntMatrix::identity(dim()); }

AffineMap then(const AffineMap& first, const AffineMap& second) {
  return {second.m * first.m, second.apply(first.t)};
}

AffineMap inverse(const AffineMap& f) {
  const int d = f.dim();
  // m is unipotent: m^-1 = sum (-N)^k with N = m - 1 nilpotent
  IntMatrix n = f.m;
  for (int i = 0; i < d; ++i) n(i, i) -= 1;
  IntMatrix inv = IntMatrix::identity(d);
  IntMatrix term = IntMatrix::identity(d);
  for (int k = 1; k <= d; ++k) {
    term = term * n;
    if (term == IntMatrix(d, d)) break;
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        if (k % 2) inv(r, c) -= term(r, c);
        else inv(r, c) += term(r, c);
      }
    }
  }
  if (!(inv * f.m == IntMatrix::identity(d))) throw InvariantError("move action is not unipotent");
  IntVector t = inv * std::span<const Integer>(f.t);
  for (auto& x : t) x = -x;
  return {inv, t};
}

AffineMap power(const AffineMap& f, long long e) {
  AffineMap base = e < 0 ? inverse(f) : f;
  unsigned long long k = e < 0 ? 0ull - static_cast<unsigned long long>(e) : static_cast<unsigned long long>(e);
  AffineMap acc{IntMatrix::identity(f.dim()), IntVector(f.dim())};
  while (k) {
    if (k & 1) acc = then(acc, base);
    k >>= 1;
    if (k) base = then(base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------- words

void append(Word& w, const Run& r) {
  if (r.power == 0) return;
  if (!w.empty() && w.back().move == r.move) {
    w.back().power += r.power;
    if (w.back().power == 0) w.pop_back();
    return;
  }
  w.push_back(r);
}

void append(Word& w, const Word& tail) {
  for (const auto& r : tail) append(w, r);
}

Word inverse(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) append(out, {it->move, -it->power});
  return out;
}

long long length(const Word& w) {
  long long s = 0;
  for (const auto& r : w) s += r.power < 0 ? -r.power : r.power;
  return s;
}

std::vector<PartialConj> unit_moves(const Word& w, int n) {
  const auto moves = positive_moves(n);
  std::vector<PartialConj> out;
  for (const auto& r : w) {
    PartialConj m = moves.at(r.move);
    m.power = r.power > 0 ? 1 : -1;
    for (long long k = 0; k < (r.power < 0 ? -r.power : r.power); ++k) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------- model

namespace {

// Probed column blocks of the move maps, shared across decisions. A block is
// memoized per Y1; once enough distinct Y1 have been seen, its entries are
// fitted as integer affine functions of Y1 (over-determined, so the fit itself
// checks the law) and later models are filled in without probing.
class ColumnCache {
 public:
  using Slab = IntVector;  // moves x dim x width, row-major

  static ColumnCache& instance() {
    static ColumnCache cache;
    return cache;
  }

  std::optional<Slab> lookup(int n, int j, const CanonicalForm::Block& y1) {
    std::lock_guard lock(mu_);
    Entry& e = entries_[{n, j}];
    if (auto it = e.exact.find(y1); it != e.exact.end()) return it->second;
    if (!e.fit) return std::nullopt;
    const std::size_t params = y1.size() + 1;
    Slab out(e.fit->size() / params);
    for (std::size_t x = 0; x < out.size(); ++x) {
      Integer s = (*e.fit)[x * params];
      for (std::size_t i = 0; i < y1.size(); ++i) s.add_mul(y1[i], (*e.fit)[x * params + 1 + i]);
      out[x] = s;
    }
    return out;
  }

  void record(int n, int j, const CanonicalForm::Block& y1, const Slab& slab) {
    std::lock_guard lock(mu_);
    Entry& e = entries_[{n, j}];
    if (e.rejected || e.fit || !e.exact.emplace(y1, slab).second) return;
    if (e.exact.size() < y1.size() + 3) return;
    fit(e, y1.size());
  }

 private:
  struct Entry {
    std::map<CanonicalForm::Block, Slab> exact;
    std::optional<IntVector> fit;  // per slab entry: constant, then one slope per Y1 coordinate
    bool rejected = false;
  };

  static void fit(Entry& e, std::size_t y1_size) {
    const std::size_t params = y1_size + 1;
    const int samples = static_cast<int>(e.exact.size());
    IntMatrix a(samples, static_cast<int>(params));
    int row = 0;
    for (const auto& [y1, slab] : e.exact) {
      a(row, 0) = 1;
      for (std::size_t i = 0; i < y1_size; ++i) a(row, static_cast<int>(i) + 1) = y1[i];
      ++row;
    }
    const std::size_t entries = e.exact.begin()->second.size();
    IntVector theta(entries * params);
    IntVector b(samples);
    for (std::size_t x = 0; x < entries; ++x) {
      bool all_zero = true;
      row = 0;
      for (const auto& kv : e.exact) {
        b[row++] = kv.second[x];
        if (!kv.second[x].is_zero()) all_zero = false;
      }
      if (all_zero) continue;
      auto sol = solve_integer(a, b);
      if (!sol || !sol->null_basis.empty()) {
        e.rejected = !sol.has_value();
        return;
      }
      std::copy(sol->particular.begin(), sol->particular.end(), theta.begin() + static_cast<long>(x * params));
    }
    e.fit = std::move(theta);
  }

  std::mutex mu_;
  std::map<std::pair<int, int>, Entry> entries_;
};

}  // namespace

MoveModel::MoveModel(int n, CanonicalForm::Block y1) : n_(n), y1_(std::move(y1)), moves_(positive_moves(n)) {
  const auto sizes = block_sizes(n);
  if (static_cast<int>(y1_.size()) != sizes.at(0)) throw InputError("block Y1 has the wrong length");
  // offsets_[k] = total size of blocks 2..k-1
  offsets_.assign(n + 1, 0);
  for (int k = 3; k <= n; ++k) offsets_[k] = offsets_[k - 1] + sizes[k - 2];
  dim_ = offsets_[n];

  const CanonicalForm base = form_of(IntVector(dim_));
  const StringLink sl = from_canonical(base);
  for (const auto& m : moves_) {
    IntVector t = vector_of(to_canonical(pc_apply(m, sl, base)));
    forward_.push_back({IntMatrix::identity(dim_), std::move(t)});
  }
  backward_.clear();
  for (const auto& f : forward_) backward_.push_back(inverse(f));
}

void MoveModel::ensure_columns(int k) {
  const int upto = std::min(k, n_ - 2);
  if (upto <= probed_) return;
  auto& cache = ColumnCache::instance();
  for (int j = probed_ + 1; j <= upto; ++j) {
    const int width = offsets_[j + 1] - offsets_[j];
    const auto moves = static_cast<int>(moves_.size());
    auto slab = cache.lookup(n_, j, y1_);
    if (!slab) {
      slab.emplace(static_cast<std::size_t>(moves) * dim_ * width);
      for (int c = 0; c < width; ++c) {
        IntVector e(dim_);
        e[offsets_[j] + c] = 1;
        const CanonicalForm point = form_of(e);
        const StringLink sl = from_canonical(point);
        for (int m = 0; m < moves; ++m) {
          IntVector image = vector_of(to_canonical(pc_apply(moves_[m], sl, point)));
          for (int r = 0; r < dim_; ++r) (*slab)[(m * dim_ + r) * width + c] = image[r] - forward_[m].t[r];
        }
      }
      cache.record(n_, j, y1_, *slab);
    }
    for (int m = 0; m < moves; ++m) {
      for (int r = 0; r < dim_; ++r) {
        for (int c = 0; c < width; ++c) forward_[m].m(r, offsets_[j] + c) = (*slab)[(m * dim_ + r) * width + c];
      }
    }
  }
  probed_ = upto;
  for (std::size_t m = 0; m < moves_.size(); ++m) backward_[m] = inverse(forward_[m]);
}

IntVector MoveModel::apply(const Word& w, IntVector v) const {
  for (const auto& r : w) {
    const AffineMap& f = r.power > 0 ? forward_.at(r.move) : backward_.at(r.move);
    const long long k = r.power < 0 ? -r.power : r.power;
    if (k > 16) {
      v = linkhom::power(forward_.at(r.move), r.power).apply(v);
      continue;
    }
    for (long long i = 0; i < k; ++i) v = f.apply(v);
  }
  return v;
}

IntVector MoveModel::vector_of(const CanonicalForm& y) const {
  if (y.n() != n_) throw InputError("coordinates do not match the model");
  IntVector v;
  v.reserve(dim_);
  for (int k = 2; k < n_; ++k) v.insert(v.end(), y.block(k).begin(), y.block(k).end());
  return v;
}

CanonicalForm MoveModel::form_of(std::span<const Integer> v) const {
  std::vector<CanonicalForm::Block> blocks{y1_};
  for (int k = 2; k < n_; ++k) blocks.emplace_back(v.begin() + offsets_[k], v.begin() + offsets_[k + 1]);
  return CanonicalForm(n_, std::move(blocks));
}

// ------------------------------------------------------------------- stages

namespace {

// columns offered to the short-solution search per stage
constexpr std::size_t kWidth = 48;
constexpr long long kLengthCap = std::numeric_limits<long long>::max() / 4;
constexpr long long kMaxStageMoves = 10'000'000;

long long to_power(const Integer& x) {
  if (!x.fits_int64()) throw InvariantError("stage solution coefficient does not fit 64 bits");
  return x.to_int64();
}

long long saturating_add(long long a, long long b) { return std::min(kLengthCap, a + b); }
long long saturating_mul(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kLengthCap / b) return kLengthCap;
  return std::min(kLengthCap, a * b);
}

// Generators of the stabilizer chain, built from positive moves by products and
// commutators and evaluated on coordinate vectors through the move model.
class GeneratorPool {
 public:
  explicit GeneratorPool(const MoveModel& model) : model_(model) {}

  int add_move(int m) {
    Gen g;
    g.kind = Kind::kMove;
    g.move = m;
    g.length = 1;
    return push(std::move(g));
  }
  int add_product(std::vector<std::pair<int, long long>> factors) {
    Gen g;
    g.kind = Kind::kProduct;
    for (const auto& [f, p] : factors) {
      if (p != 0) g.length = saturating_add(g.length, saturating_mul(gens_.at(f).length, p < 0 ? -p : p));
    }
    std::erase_if(factors, [](const auto& fp) { return fp.second == 0; });
    g.factors = std::move(factors);
    return push(std::move(g));
  }
  int add_commutator(int a, int b) {
    Gen g;
    g.kind = Kind::kCommutator;
    g.left = a;
    g.right = b;
    g.length = saturating_mul(2, saturating_add(gens_.at(a).length, gens_.at(b).length));
    return push(std::move(g));
  }

  long long length(int g) const { return gens_.at(g).length; }

  IntVector image(int g, IntVector v, bool invert = false) const {
    const Gen& x = gens_.at(g);
    switch (x.kind) {
      case Kind::kMove:
        return (invert ? model_.backward(x.move) : model_.forward(x.move)).apply(v);
      case Kind::kProduct:
        if (!invert) {
          for (const auto& [f, p] : x.factors) v = image_power(f, p, std::move(v));
        } else {
          for (auto it = x.factors.rbegin(); it != x.factors.rend(); ++it) v = image_power(it->first, -it->second, std::move(v));
        }
        return v;
      case Kind::kCommutator: {
        // a b a^-1 b^-1, inverse b a b^-1 a^-1
        const int p = invert ? x.right : x.left;
        const int q = invert ? x.left : x.right;
        v = image(p, std::move(v));
        v = image(q, std::move(v));
        v = image(p, std::move(v), true);
        return image(q, std::move(v), true);
      }
    }
    return v;
  }

  IntVector image_power(int g, long long p, IntVector v) const {
    const long long k = p < 0 ? -p : p;
    if (k <= 16) {
      if (gens_.at(g).kind == Kind::kMove) {
        const AffineMap& f = p > 0 ? model_.forward(gens_[g].move) : model_.backward(gens_[g].move);
        for (long long i = 0; i < k; ++i) v = f.apply(v);
        return v;
      }
      for (long long i = 0; i < k; ++i) v = image(g, std::move(v), p < 0);
      return v;
    }
    return power(map(g), p).apply(v);
  }

  /// Full affine map, read off from images of 0 and unit vectors.
  AffineMap map(int g) const {
    const int d = model_.dim();
    AffineMap f{IntMatrix(d, d), image(g, IntVector(d))};
    for (int c = 0; c < d; ++c) {
      IntVector e(d);
      e[c] = 1;
      IntVector col = image(g, e);
      for (int r = 0; r < d; ++r) f.m(r, c) = col[r] - f.t[r];
    }
    return f;
  }

  void expand(int g, bool invert, Word& out) const {
    const Gen& x = gens_.at(g);
    switch (x.kind) {
      case Kind::kMove:
        append(out, {x.move, invert ? -1 : 1});
        return;
      case Kind::kProduct:
        if (!invert) {
          for (const auto& [f, p] : x.factors) expand_power(f, p, out);
        } else {
          for (auto it = x.factors.rbegin(); it != x.factors.rend(); ++it) expand_power(it->first, -it->second, out);
        }
        return;
      case Kind::kCommutator: {
        const int p = invert ? x.right : x.left;
        const int q = invert ? x.left : x.right;
        expand(p, false, out);
        expand(q, false, out);
        expand(p, true, out);
        expand(q, true, out);
        return;
      }
    }
  }

  void expand_power(int g, long long p, Word& out) const {
    if (gens_.at(g).kind == Kind::kMove) {
      append(out, {gens_[g].move, p});
      return;
    }
    for (long long i = 0; i < (p < 0 ? -p : p); ++i) expand(g, p < 0, out);
  }

 private:
  enum class Kind { kMove, kProduct, kCommutator };
  struct Gen {
    Kind kind = Kind::kMove;
    int move = -1;
    std::vector<std::pair<int, long long>> factors;
    int left = -1;
    int right = -1;
    long long length = 0;
  };

  int push(Gen g) {
    gens_.push_back(std::move(g));
    return static_cast<int>(gens_.size()) - 1;
  }

  const MoveModel& model_;
  std::vector<Gen> gens_;
};

IntVector slice(const IntVector& v, int begin, int end) { return IntVector(v.begin() + begin, v.begin() + end); }

bool is_zero(std::span<const Integer> v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x.is_zero(); });
}

// Weighted lattice reduction used only to keep certificates short. Floating
// point only steers the choice of multipliers; every update is exact, so the
// results stay valid however the rounding goes.
class Reducer {
 public:
  explicit Reducer(std::vector<long long> weights) : w_(std::move(weights)) {}

  // LLL (delta = 0.99) on linearly independent rows of b.
  void lll(std::vector<IntVector>& b) const {
    const std::size_t m = b.size();
    if (m < 2) return;
    std::vector<Vec> mu(m, Vec(m, 0));
    Vec big_b(m, 0);
    std::vector<Vec> star(m);
    auto gso = [&](std::size_t k) {
      const Vec bk = to_float(b[k]);
      star[k] = bk;
      for (std::size_t j = 0; j < k; ++j) {
        mu[k][j] = big_b[j] == 0 ? 0 : dot(bk, star[j]) / big_b[j];
        for (std::size_t t = 0; t < star[k].size(); ++t) star[k][t] -= mu[k][j] * star[j][t];
      }
      big_b[k] = dot(star[k], star[k]);
    };
    // size-reduces b[k]; a large multiplier leaves the float data stale, so
    // the row is re-orthogonalized and reduced again
    auto size_reduce = [&](std::size_t k) {
      for (int round = 0; round < 64; ++round) {
        bool large = false;
        for (std::size_t l = k; l-- > 0;) {
          if (std::fabs(mu[k][l]) <= 0.5L) continue;
          const long double q = std::round(mu[k][l]);
          const Integer qi = to_integer(q);
          for (std::size_t i = 0; i < b[k].size(); ++i) b[k][i].add_mul(-qi, b[l][i]);
          for (std::size_t i = 0; i < l; ++i) mu[k][i] -= q * mu[l][i];
          mu[k][l] -= q;
          large = large || std::fabs(q) > kExactFloat;
        }
        if (!large) return;
        gso(k);
      }
    };
    gso(0);
    std::size_t k = 1;
    for (long guard = 0; k < m && guard < 200000; ++guard) {
      gso(k);
      size_reduce(k);
      if (big_b[k] < (0.99L - mu[k][k - 1] * mu[k][k - 1]) * big_b[k - 1]) {
        std::swap(b[k], b[k - 1]);
        gso(k - 1);
        k = std::max<std::size_t>(k - 1, 1);
        continue;
      }
      ++k;
    }
  }

  // Babai nearest plane: x minus a nearby lattice vector.
  void nearest_plane(IntVector& x, const std::vector<IntVector>& b) const {
    if (b.empty()) return;
    std::vector<Vec> star(b.size());
    Vec big_b(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
      const Vec bk = to_float(b[k]);
      star[k] = bk;
      for (std::size_t j = 0; j < k; ++j) {
        const long double mu = big_b[j] == 0 ? 0 : dot(bk, star[j]) / big_b[j];
        for (std::size_t t = 0; t < star[k].size(); ++t) star[k][t] -= mu * star[j][t];
      }
      big_b[k] = dot(star[k], star[k]);
    }
    for (int round = 0; round < 64; ++round) {
      bool large = false;
      for (std::size_t j = b.size(); j-- > 0;) {
        if (big_b[j] == 0) continue;
        const long double q = std::round(dot(to_float(x), star[j]) / big_b[j]);
        if (q == 0) continue;
        const Integer qi = to_integer(q);
        for (std::size_t i = 0; i < x.size(); ++i) x[i].add_mul(-qi, b[j][i]);
        large = large || std::fabs(q) > kExactFloat;
      }
      if (!large) return;
    }
  }

 private:
  using Vec = std::vector<long double>;
  // multipliers above this may carry rounding error worth another round
  static constexpr long double kExactFloat = 1e9L;

  static long double approx(const Integer& x) {
    return x.fits_int64() ? static_cast<long double>(x.to_int64()) : static_cast<long double>(x.to_mpz().get_d());
  }
  static Integer to_integer(long double q) {
    if (std::fabs(q) < 9e18L) return Integer(static_cast<long long>(q));
    return Integer(mpz_class(static_cast<double>(q)));
  }
  static Vec to_float(const IntVector& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = approx(v[i]);
    return out;
  }
  long double dot(const Vec& a, const Vec& b) const {
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(w_[i]) * a[i] * b[i];
    return s;
  }

  std::vector<long long> w_;
};

struct StageSolution {
  bool solvable = false;
  std::vector<std::pair<int, long long>> combination;
  std::vector<int> lifts;
  std::size_t selected = 0;
};

class Decider {
 public:
  Decider(const CanonicalForm& y, const CanonicalForm& y_prime, const DecideOptions& options)
      : n_(y.n()), options_(options), model_(n_, y.block(1)), pool_(model_), start_(y), target_(y_prime),
        sl_(from_canonical(y)), cur_(y) {}

  Verdict run() {
    const int n = n_;
    std::vector<int> stage_gens;
    std::vector<int> moves;
    for (int m = 0; m < n * (n - 1); ++m) moves.push_back(pool_.add_move(m));
    stage_gens = moves;
    std::vector<int> central;   // pure top-block translations (n = 5)
    std::vector<int> lifts_prev;

    for (int k = 2; k <= n - 1; ++k) {
      model_.ensure_columns(k - 1);
      const bool last = k == n - 1;
      log("stage " + std::to_string(k) + ": " + std::to_string(stage_gens.size() + (last ? central.size() : 0)) + " generators");
      StageSolution first;
      bool matched = false;
      for (int pass = 1; pass <= options_.max_passes && !matched; ++pass) {
        IntVector v = model_.vector_of(cur_);
        std::vector<int> all = stage_gens;
        if (last) all.insert(all.end(), central.begin(), central.end());
        StageSolution sol = solve(k, all, v, !last && pass == 1, stage_gens.size());
        if (!sol.solvable) {
          confirm_model(k);
          log("stage " + std::to_string(k) + ": target outside the reachable lattice");
          return Verdict{false, k, {}};
        }
        if (pass == 1) first = sol;
        if (options_.log) {
          std::string d = "stage " + std::to_string(k) + " combination (length^power):";
          for (const auto& [g, p] : sol.combination) d += " " + std::to_string(pool_.length(g)) + "^" + std::to_string(p);
          log(d);
        }
        long long units = 0;
        for (const auto& [g, p] : sol.combination) units = saturating_add(units, saturating_mul(pool_.length(g), p < 0 ? -p : p));
        if (units > kMaxStageMoves) throw InvariantError("stage " + std::to_string(k) + " solution needs too many moves");
        Word w;
        for (const auto& [g, p] : sol.combination) pool_.expand_power(g, p, w);
        const IntVector predicted = model_.apply(w, v);
        realize(w);
        const IntVector actual = model_.vector_of(cur_);
        const int hi = model_.offset(k + 1);
        if (slice(predicted, 0, hi) != slice(actual, 0, hi)) {
          log("stage " + std::to_string(k) + ": model prediction differs from the engine");
        }
        matched = model_.form_of(actual).block(k) == target_.block(k);
        log("stage " + std::to_string(k) + " pass " + std::to_string(pass) + ": " + std::to_string(sol.selected) +
            " selected, " + std::to_string(length(w)) + " moves, " + (matched ? "confirmed" : "re-iterating"));
      }
      if (!matched) throw InvariantError("stage " + std::to_string(k) + " did not converge within the pass bound");
      if (last) break;

      // next generating set: kernel lifts plus commutators
      std::vector<int> next = first.lifts;
      if (k == 2) {
        for (std::size_t a = 0; a < moves.size(); ++a) {
          for (std::size_t b = a + 1; b < moves.size(); ++b) next.push_back(pool_.add_commutator(moves[a], moves[b]));
        }
        if (n >= 5) {
          for (std::size_t x = first.lifts.size(); x < next.size(); ++x) {
            for (int c : moves) central.push_back(pool_.add_commutator(next[x], c));
          }
        }
      } else {
        for (std::size_t a = 0; a < lifts_prev.size(); ++a) {
          for (std::size_t b = a + 1; b < lifts_prev.size(); ++b) {
            next.push_back(pool_.add_commutator(lifts_prev[a], lifts_prev[b]));
          }
        }
      }
      lifts_prev = first.lifts;
      stage_gens = std::move(next);
    }

    if (!(cur_ == target_)) throw InvariantError("certificate does not reach the target coordinates");
    Verdict verdict{true, 0, unit_moves(certificate_, n)};
    if (options_.verify) {
      if (!verify_certificate(start_, target_, verdict.certificate)) {
        throw InvariantError("certificate failed independent verification");
      }
      log("certificate verified");
    }
    return verdict;
  }

 private:
  void log(const std::string& s) const {
    if (options_.log) options_.log(s);
  }

  StageSolution solve(int k, const std::vector<int>& gens, const IntVector& v, bool want_lifts, std::size_t liftable) {
    const int lo = model_.offset(k), hi = model_.offset(k + 1);
    const int rows = hi - lo;
    std::vector<IntVector> deltas(gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) {
      IntVector img = pool_.image(gens[g], v);
      for (int r = 0; r < hi; ++r) img[r] -= v[r];
      if (!is_zero(std::span<const Integer>(img).first(lo))) {
        throw InvariantError("stage generator moves an already matched block");
      }
      deltas[g] = slice(img, lo, hi);
    }

    std::vector<std::size_t> order(gens.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pool_.length(gens[a]) < pool_.length(gens[b]); });

    // distinct nonzero displacements up to sign, shortest representative first
    std::map<IntVector, std::size_t> seen;
    std::vector<std::size_t> candidates;
    std::vector<std::pair<std::size_t, long long>> duplicate_of(gens.size(), {gens.size(), 0});
    for (std::size_t g : order) {
      if (is_zero(deltas[g])) continue;
      IntVector key = deltas[g];
      long long sign = 1;
      for (const auto& x : key) {
        if (x.is_zero()) continue;
        if (x.sign() < 0) sign = -1;
        break;
      }
      if (sign < 0) {
        for (auto& x : key) x = -x;
      }
      auto [it, fresh] = seen.emplace(std::move(key), g);
      if (fresh) {
        candidates.push_back(g);
      } else {
        const std::size_t rep = it->second;
        duplicate_of[g] = {rep, deltas[rep] == deltas[g] ? 1 : -1};
      }
    }

    // spanning subset, then widened for shorter solutions
    std::vector<std::size_t> span_set;
    std::vector<IntVector> span_cols;
    for (std::size_t g : candidates) {
      if (!span_cols.empty() && in_lattice(deltas[g], span_cols)) continue;
      span_set.push_back(g);
      span_cols.push_back(deltas[g]);
    }
    std::vector<std::size_t> chosen = span_set;
    std::vector<bool> is_chosen(gens.size(), false);
    for (std::size_t g : chosen) is_chosen[g] = true;
    for (std::size_t g : candidates) {
      if (chosen.size() >= kWidth) break;
      if (!is_chosen[g]) {
        chosen.push_back(g);
        is_chosen[g] = true;
      }
    }

    StageSolution out;
    out.selected = chosen.size();
    IntVector target(target_.block(k).begin(), target_.block(k).end());
    for (int r = 0; r < rows; ++r) target[r] -= v[lo + r];

    const std::size_t base = span_set.size(), wide = chosen.size();
    std::vector<long long> weights;
    for (std::size_t g : chosen) weights.push_back(std::max<long long>(1, pool_.length(gens[g])));
    const Reducer narrow_reducer(std::vector<long long>(weights.begin(), weights.begin() + base));
    const Reducer reducer(weights);
    const IntMatrix a = IntMatrix::from_columns(rows, span_cols);

    // kernel of the chosen columns: null vectors of the spanning part plus one
    // relation per extra column
    std::vector<IntVector> kernel;
    std::vector<IntVector> narrow_null;
    if (base > 0) {
      auto z = solve_integer(a, IntVector(rows));
      narrow_null = std::move(z->null_basis);
      narrow_reducer.lll(narrow_null);
      for (const auto& n0 : narrow_null) {
        IntVector e(wide);
        std::copy(n0.begin(), n0.end(), e.begin());
        kernel.push_back(std::move(e));
      }
    }
    auto express = [&](const IntVector& d) {
      auto c = solve_integer(a, d);
      if (!c) throw InvariantError("selected generators do not span the stage lattice");
      narrow_reducer.nearest_plane(c->particular, narrow_null);
      return std::move(c->particular);
    };
    for (std::size_t i = base; i < wide; ++i) {
      IntVector c = express(deltas[chosen[i]]);
      IntVector e(wide);
      for (std::size_t j = 0; j < base; ++j) e[j] = -c[j];
      e[i] = 1;
      kernel.push_back(std::move(e));
    }
    reducer.lll(kernel);

    if (base == 0) {
      out.solvable = is_zero(target);
    } else {
      auto sol = solve_integer(a, target);
      if (!sol) return out;
      out.solvable = true;
      IntVector x(wide);
      std::copy(sol->particular.begin(), sol->particular.end(), x.begin());
      reducer.nearest_plane(x, kernel);
      for (std::size_t i = 0; i < wide; ++i) {
        if (!x[i].is_zero()) out.combination.emplace_back(gens[chosen[i]], to_power(x[i]));
      }
      std::sort(out.combination.begin(), out.combination.end());
    }
    if (!out.solvable || !want_lifts) return out;

    // generators of the stage kernel on the liftable generators
    auto product = [&](const IntVector& x, std::vector<std::pair<int, long long>> factors) {
      for (std::size_t i = 0; i < wide; ++i) {
        if (!x[i].is_zero()) factors.emplace_back(gens[chosen[i]], to_power(x[i]));
      }
      return pool_.add_product(std::move(factors));
    };
    for (const auto& z : kernel) out.lifts.push_back(product(z, {}));
    for (std::size_t g = 0; g < liftable; ++g) {
      if (is_chosen[g]) continue;
      if (is_zero(deltas[g])) {
        out.lifts.push_back(gens[g]);
      } else if (duplicate_of[g].first < gens.size()) {
        const auto [rep, sign] = duplicate_of[g];
        out.lifts.push_back(pool_.add_product({{gens[g], 1}, {gens[rep], -sign}}));
      } else {
        IntVector c(wide);
        const IntVector narrow = express(deltas[g]);
        for (std::size_t j = 0; j < base; ++j) c[j] = -narrow[j];
        reducer.nearest_plane(c, kernel);
        out.lifts.push_back(product(c, {{gens[g], 1}}));
      }
    }
    std::stable_sort(out.lifts.begin(), out.lifts.end(),
                     [&](int a2, int b2) { return pool_.length(a2) < pool_.length(b2); });
    return out;
  }

  // Applies a word through the engine, tracking coordinates.
  void realize(const Word& w) {
    const auto moves = positive_moves(n_);
    for (const auto& r : w) {
      PartialConj m = moves.at(r.move);
      m.power = r.power;
      sl_ = pc_apply(m, sl_, cur_);
      cur_ = to_canonical(sl_);
    }
    append(certificate_, w);
  }

  // Before trusting a negative verdict, compare the model with the engine at
  // the current point on the blocks the stage looked at.
  void confirm_model(int k) {
    const IntVector v = model_.vector_of(cur_);
    const int hi = model_.offset(k + 1);
    const auto moves = positive_moves(n_);
    for (std::size_t m = 0; m < moves.size(); ++m) {
      const IntVector predicted = model_.forward(static_cast<int>(m)).apply(v);
      const IntVector actual = model_.vector_of(to_canonical(pc_apply(moves[m], sl_, cur_)));
      if (slice(predicted, 0, hi) != slice(actual, 0, hi)) {
        throw InvariantError("move " + to_string(moves[m]) + " does not act as the probed affine map");
      }
    }
  }

  int n_;
  const DecideOptions& options_;
  MoveModel model_;
  GeneratorPool pool_;
  CanonicalForm start_;
  CanonicalForm target_;
  StringLink sl_;
  CanonicalForm cur_;
  Word certificate_;
};

}  // namespace

Verdict decide(const CanonicalForm& y, const CanonicalForm& y_prime, const DecideOptions& options) {
  const int n = y.n();
  if (y_prime.n() != n) {
    throw InputError("links have different component counts (" + std::to_string(n) + " vs " +
                     std::to_string(y_prime.n()) + ")");
  }
  if (n < 2 || n > kMaxComponents) throw InputError("component count " + std::to_string(n) + " is not supported");
  if (y.block(1) != y_prime.block(1)) {
    if (options.log) options.log("stage 1: Y1 blocks differ");
    return Verdict{false, 1, {}};
  }
  if (n == 2) return Verdict{true, 0, {}};
  return Decider(y, y_prime, options).run();
}

StringLink apply_moves(const StringLink& sl, std::span<const PartialConj> moves) {
  const int n = sl.n();
  StringLink cur = sl;
  CanonicalForm y = to_canonical(cur);
  for (std::size_t p = 0; p < moves.size();) {
    validate(moves[p], n);
    PartialConj m = moves[p];
    std::size_t q = p + 1;
    for (; q < moves.size() && moves[q].component == m.component && moves[q].letter == m.letter; ++q) {
      validate(moves[q], n);
      if (!moves[q].is_trivial()) m.power += moves[q].power;
      if (m.letter == 0) m.letter = moves[q].letter;
    }
    p = q;
    if (m.is_trivial()) continue;
    cur = pc_apply(m, cur, y);
    y = to_canonical(cur);
  }
  return cur;
}

bool verify_certificate(const CanonicalForm& y, const CanonicalForm& y_prime, std::span<const PartialConj> certificate) {
  if (y.n() != y_prime.n()) return false;
  try {
    return to_canonical(apply_moves(from_canonical(y), certificate)) == y_prime;
  } catch (const Error&) {
    return false;
  }
}

std::vector<BatchResult> decide_batch(std::span<const std::pair<CanonicalForm, CanonicalForm>> pairs, int jobs,
                                      const DecideOptions& options) {
  std::vector<BatchResult> out(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      try {
        out[i].verdict = decide(pairs[i].first, pairs[i].second, options);
      } catch (const InputError& e) {
        out[i].error = e.what();
        out[i].error_code = 2;
      } catch (const std::exception& e) {
        out[i].error = e.what();
        out[i].error_code = 3;
      }
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(pairs.size())));
  if (jobs == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> threads;
  for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return out;
}

}  // namespace linkhom
