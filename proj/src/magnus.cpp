#include "linkhom/magnus.hpp"

#include <algorithm>
#include <mutex>
#include <optional>
#include <sstream>

#include "linkhom/errors.hpp"

namespace linkhom {

struct AlgebraAccess {
  static AlgebraElement make(int n, std::vector<AlgebraElement::Term> terms) {
    return AlgebraElement(n, std::move(terms));
  }
};

namespace {

void check_n(int n) {
  if (n < 1 || n > kMaxComponents) {
    throw InputError("component count " + std::to_string(n) + " outside 1.." +
                     std::to_string(kMaxComponents));
  }
}

void check_same(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.n() != b.n()) {
    throw InputError("ambient variable counts differ (" + std::to_string(a.n()) + " vs " +
                     std::to_string(b.n()) + ")");
  }
}

int encode(const IndexedMonomial& w, int n) {
  int code = 0;
  for (int k = 0; k < w.size(); ++k) code = code * (n + 1) + w[k];
  return code;
}

// Dense scratch accumulator, one per thread, reused across products.
class Accumulator {
 public:
  void reset(std::size_t size) {
    if (values_.size() < size) {
      values_.resize(size);
      seen_.resize(size, 0);
    }
    touched_.clear();
  }
  void add_mul(int id, const Integer& a, const Integer& b) {
    if (!seen_[id]) {
      seen_[id] = 1;
      touched_.push_back(static_cast<MonomialId>(id));
      values_[id] = Integer();
    }
    values_[id].add_mul(a, b);
  }
  void add(int id, const Integer& a) {
    if (!seen_[id]) {
      seen_[id] = 1;
      touched_.push_back(static_cast<MonomialId>(id));
      values_[id] = Integer();
    }
    values_[id] += a;
  }
  std::vector<AlgebraElement::Term> drain() {
    std::sort(touched_.begin(), touched_.end());
    std::vector<AlgebraElement::Term> out;
    out.reserve(touched_.size());
    for (MonomialId id : touched_) {
      seen_[id] = 0;
      if (!values_[id].is_zero()) out.emplace_back(id, std::move(values_[id]));
    }
    touched_.clear();
    return out;
  }

 private:
  std::vector<Integer> values_;
  std::vector<std::uint8_t> seen_;
  std::vector<MonomialId> touched_;
};

// Accumulator for the common case of small coefficients: 128-bit sums of
// products of entries below 2^40 cannot overflow at these sizes.
constexpr std::int64_t kNarrow = std::int64_t{1} << 40;

bool narrow(std::span<const AlgebraElement::Term> terms) {
  for (const auto& t : terms) {
    if (!t.second.is_small()) return false;
    const std::int64_t v = t.second.to_int64();
    if (v >= kNarrow || v <= -kNarrow) return false;
  }
  return true;
}

Integer from_int128(__int128 v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return Integer(static_cast<long long>(v));
  const bool negative = v < 0;
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class m(static_cast<unsigned long>(mag >> 64));
  m <<= 64;
  m += static_cast<unsigned long>(mag & ~std::uint64_t{0});
  return Integer(negative ? mpz_class(-m) : m);
}

class WideAccumulator {
 public:
  void reset(std::size_t size) {
    if (values_.size() < size) {
      values_.resize(size);
      seen_.resize(size, 0);
    }
    touched_.clear();
  }
  void add_mul(int id, std::int64_t a, std::int64_t b) {
    if (!seen_[id]) {
      seen_[id] = 1;
      touched_.push_back(static_cast<MonomialId>(id));
      values_[id] = 0;
    }
    values_[id] += static_cast<__int128>(a) * b;
  }
  std::vector<AlgebraElement::Term> drain() {
    std::sort(touched_.begin(), touched_.end());
    std::vector<AlgebraElement::Term> out;
    out.reserve(touched_.size());
    for (MonomialId id : touched_) {
      seen_[id] = 0;
      if (values_[id] != 0) out.emplace_back(id, from_int128(values_[id]));
    }
    touched_.clear();
    return out;
  }

 private:
  std::vector<__int128> values_;
  std::vector<std::uint8_t> seen_;
  std::vector<MonomialId> touched_;
};

WideAccumulator& wide_scratch() {
  thread_local WideAccumulator acc;
  return acc;
}

Accumulator& scratch() {
  thread_local Accumulator acc;
  return acc;
}

}  // namespace

IndexedMonomial::IndexedMonomial(std::initializer_list<int> letters)
    : IndexedMonomial(std::span<const int>(letters.begin(), letters.size())) {}

IndexedMonomial::IndexedMonomial(std::span<const int> letters) {
  if (letters.size() > static_cast<std::size_t>(kMaxComponents)) {
    throw InputError("monomial longer than " + std::to_string(kMaxComponents));
  }
  unsigned seen = 0;
  for (int l : letters) {
    if (l < 1 || l > kMaxComponents) throw InputError("variable index " + std::to_string(l) + " out of range");
    if (seen & (1u << l)) throw InputError("repeated variable X" + std::to_string(l) + " in monomial");
    seen |= 1u << l;
    letters_[size_++] = static_cast<std::uint8_t>(l);
  }
}

unsigned IndexedMonomial::mask() const {
  unsigned m = 0;
  for (int k = 0; k < size_; ++k) m |= 1u << letters_[k];
  return m;
}

MonomialTable::MonomialTable(int n) : n_(n) {
  std::vector<int> letters(n);
  for (int i = 0; i < n; ++i) letters[i] = i + 1;
  for (int deg = 0; deg <= n; ++deg) {
    // injective words of length deg in lexicographic order
    std::vector<int> word(deg);
    auto rec = [&](auto&& self, int pos, unsigned used) -> void {
      if (pos == deg) {
        words_.emplace_back(std::span<const int>(word));
        return;
      }
      for (int l = 1; l <= n; ++l) {
        if (used & (1u << l)) continue;
        word[pos] = l;
        self(self, pos + 1, used | (1u << l));
      }
    };
    rec(rec, 0, 0);
  }
  int codes = 1;
  for (int k = 0; k < n; ++k) codes *= (n + 1);
  lookup_.assign(codes, -1);
  masks_.resize(words_.size());
  prefix_.resize(words_.size());
  for (std::size_t id = 0; id < words_.size(); ++id) {
    lookup_[encode(words_[id], n)] = static_cast<std::int16_t>(id);
    masks_[id] = words_[id].mask();
  }
  for (std::size_t id = 1; id < words_.size(); ++id) {
    auto l = words_[id].letters();
    l.pop_back();
    prefix_[id] = static_cast<MonomialId>(lookup_[encode(IndexedMonomial(std::span<const int>(l)), n)]);
  }
  const std::size_t m = words_.size();
  concat_.assign(m * m, -1);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (masks_[a] & masks_[b]) continue;
      auto la = words_[a].letters();
      auto lb = words_[b].letters();
      la.insert(la.end(), lb.begin(), lb.end());
      concat_[a * m + b] = lookup_[encode(IndexedMonomial(std::span<const int>(la)), n)];
    }
  }
}

const MonomialTable& MonomialTable::get(int n) {
  check_n(n);
  static std::once_flag flags[kMaxComponents + 1];
  static const MonomialTable* tables[kMaxComponents + 1] = {};
  std::call_once(flags[n], [n] { tables[n] = new MonomialTable(n); });
  return *tables[n];
}

MonomialId MonomialTable::id_of(const IndexedMonomial& w) const {
  for (int k = 0; k < w.size(); ++k) {
    if (w[k] > n_) throw InputError("variable X" + std::to_string(w[k]) + " exceeds n=" + std::to_string(n_));
  }
  return static_cast<MonomialId>(lookup_[encode(w, n_)]);
}

std::size_t monomial_count(int n) { return MonomialTable::get(n).size(); }

AlgebraElement::AlgebraElement(int n) : n_(n) { check_n(n); }

AlgebraElement AlgebraElement::from_terms(int n, std::span<const std::pair<std::vector<int>, Integer>> terms) {
  const auto& table = MonomialTable::get(n);
  auto& acc = scratch();
  acc.reset(table.size());
  for (const auto& [letters, c] : terms) {
    unsigned seen = 0;
    bool repeated = false;
    for (int l : letters) {
      if (l < 1 || l > n) throw InputError("variable index " + std::to_string(l) + " out of range");
      if (seen & (1u << l)) repeated = true;
      seen |= 1u << l;
    }
    if (repeated) continue;
    acc.add(table.id_of(IndexedMonomial(std::span<const int>(letters))), c);
  }
  return AlgebraElement(n, acc.drain());
}

AlgebraElement AlgebraElement::one(int n) {
  check_n(n);
  return AlgebraElement(n, {{MonomialId{0}, Integer(1)}});
}

AlgebraElement AlgebraElement::variable(int i, int n) {
  check_n(n);
  if (i < 1 || i > n) throw InputError("variable index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
  return AlgebraElement(n, {{static_cast<MonomialId>(i), Integer(1)}});
}

Integer AlgebraElement::coefficient(MonomialId id) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                             [](const Term& t, MonomialId v) { return t.first < v; });
  if (it != terms_.end() && it->first == id) return it->second;
  return Integer();
}

Integer AlgebraElement::coefficient(const IndexedMonomial& m) const {
  return coefficient(MonomialTable::get(n_).id_of(m));
}

AlgebraElement AlgebraElement::filtered(unsigned forbidden_mask) const {
  if (forbidden_mask == 0) return *this;
  const auto& table = MonomialTable::get(n_);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!(table.mask(t.first) & forbidden_mask)) out.push_back(t);
  }
  return AlgebraElement(n_, std::move(out));
}

AlgebraElement AlgebraElement::without_letter(int i) const {
  if (i < 1 || i > n_) throw InputError("variable index " + std::to_string(i) + " out of range");
  return filtered(1u << i);
}

AlgebraElement AlgebraElement::operator-() const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.second = -t.second;
  return AlgebraElement(n_, std::move(out));
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  check_same(a, b);
  std::vector<AlgebraElement::Term> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.terms_.end() || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      Integer c = ia->second + ib->second;
      if (!c.is_zero()) out.emplace_back(ia->first, std::move(c));
      ++ia;
      ++ib;
    }
  }
  return AlgebraElement(a.n_, std::move(out));
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return a + (-b); }

AlgebraElement operator*(const Integer& c, const AlgebraElement& a) {
  if (c.is_zero()) return AlgebraElement(a.n_);
  std::vector<AlgebraElement::Term> out = a.terms_;
  for (auto& t : out) t.second *= c;
  return AlgebraElement(a.n_, std::move(out));
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b); }

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  return a.n_ == b.n_ && a.terms_ == b.terms_;
}

std::string AlgebraElement::to_string() const {
  if (terms_.empty()) return "0";
  const auto& table = MonomialTable::get(n_);
  std::ostringstream os;
  bool first = true;
  for (const auto& [id, c] : terms_) {
    Integer mag = abs(c);
    if (first) {
      if (c.sign() < 0) os << '-';
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    os << mag;
    const auto& w = table.word(id);
    if (!w.empty()) {
      os << '*';
      for (int k = 0; k < w.size(); ++k) os << 'X' << w[k];
    }
  }
  return os.str();
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, unsigned forbidden_mask) {
  check_same(a, b);
  const auto& table = MonomialTable::get(a.n());
  const auto at = a.terms();
  const auto bt = b.terms();
  if (narrow(at) && narrow(bt)) {
    auto& acc = wide_scratch();
    acc.reset(table.size());
    for (const auto& [ia, ca] : at) {
      if (table.mask(ia) & forbidden_mask) continue;
      const std::int64_t va = ca.to_int64();
      for (const auto& [ib, cb] : bt) {
        int id = table.concat(ia, ib);
        if (id < 0 || (table.mask(static_cast<MonomialId>(id)) & forbidden_mask)) continue;
        acc.add_mul(id, va, cb.to_int64());
      }
    }
    return AlgebraAccess::make(a.n(), acc.drain());
  }
  auto& acc = scratch();
  acc.reset(table.size());
  for (const auto& [ia, ca] : at) {
    if (table.mask(ia) & forbidden_mask) continue;
    for (const auto& [ib, cb] : bt) {
      int id = table.concat(ia, ib);
      if (id < 0 || (table.mask(static_cast<MonomialId>(id)) & forbidden_mask)) continue;
      acc.add_mul(id, ca, cb);
    }
  }
  return AlgebraAccess::make(a.n(), acc.drain());
}

AlgebraElement apply_endomorphism(std::span<const AlgebraElement> images, const AlgebraElement& a,
                                  unsigned forbidden_mask) {
  const int n = a.n();
  if (images.size() != static_cast<std::size_t>(n)) throw InputError("endomorphism needs one image per variable");
  for (const auto& img : images) check_same(img, a);
  const auto& table = MonomialTable::get(n);
  // Split each image as [X_r] + D_r and expand words letter by letter. A
  // letter present in every term of an image (X_r itself, for conjugation
  // type maps) lets a branch die as soon as it absorbs that letter early.
  std::array<std::vector<AlgebraElement::Term>, kMaxComponents + 1> pert;
  std::array<bool, kMaxComponents + 1> keeps_variable{};
  std::array<unsigned, kMaxComponents + 1> common{};
  for (int r = 1; r <= n; ++r) {
    common[r] = ~0u;
    for (const auto& t : images[r - 1].terms()) {
      common[r] &= table.mask(t.first);
      if (t.first == table.variable(r) && t.second.is_one()) {
        keeps_variable[r] = true;
      } else {
        pert[r].push_back(t);
      }
    }
  }
  auto& acc = scratch();
  acc.reset(table.size());
  std::array<unsigned, kMaxComponents + 1> rest{};
  auto expand = [&](auto&& self, const IndexedMonomial& w, int pos, int cur, const Integer& coef) -> void {
    if (pos == w.size()) {
      acc.add(cur, coef);
      return;
    }
    const int r = w[pos];
    const unsigned later = rest[pos + 1];
    int id = keeps_variable[r] ? table.concat(static_cast<MonomialId>(cur), table.variable(r)) : -1;
    if (id >= 0 && !(table.mask(static_cast<MonomialId>(id)) & (forbidden_mask | later))) {
      self(self, w, pos + 1, id, coef);
    }
    for (const auto& [did, dc] : pert[r]) {
      id = table.concat(static_cast<MonomialId>(cur), did);
      if (id < 0 || (table.mask(static_cast<MonomialId>(id)) & (forbidden_mask | later))) continue;
      self(self, w, pos + 1, id, coef * dc);
    }
  };
  unsigned active = 0;
  for (int r = 1; r <= n; ++r) {
    if (!keeps_variable[r] || !pert[r].empty()) active |= 1u << r;
  }
  for (const auto& [id, c] : a.terms()) {
    if (!(table.mask(id) & active)) {
      if (!(table.mask(id) & forbidden_mask)) acc.add(id, c);
      continue;
    }
    const IndexedMonomial& w = table.word(id);
    rest[w.size()] = 0;
    for (int p = w.size() - 1; p >= 0; --p) rest[p] = rest[p + 1] | common[w[p]];
    expand(expand, w, 0, 0, c);
  }
  return AlgebraAccess::make(n, acc.drain());
}

GroupElement GroupElement::identity(int n) { return GroupElement(AlgebraElement::one(n)); }

GroupElement GroupElement::meridian(int i, int n) {
  return GroupElement(AlgebraElement::one(n) + AlgebraElement::variable(i, n));
}

GroupElement meridian(int i, int n) { return GroupElement::meridian(i, n); }

GroupElement GroupElement::from_series(AlgebraElement series) {
  if (!series.constant_term().is_one()) {
    throw InputError("series is not group-like: constant term " + series.constant_term().to_string());
  }
  return GroupElement(std::move(series));
}

bool GroupElement::is_identity() const {
  return series_.terms().size() == 1 && series_.terms()[0].first == 0;
}

GroupElement GroupElement::inverse() const {
  // (1 + A)^{-1} = sum_k (-A)^k; A^k = 0 for k > n
  const int n = series_.n();
  AlgebraElement neg_aug = AlgebraElement::one(n) - series_;
  AlgebraElement power = AlgebraElement::one(n);
  AlgebraElement sum = AlgebraElement::one(n);
  for (int k = 1; k <= n; ++k) {
    power = multiply(power, neg_aug);
    if (power.is_zero()) break;
    sum = sum + power;
  }
  return GroupElement(std::move(sum));
}

GroupElement GroupElement::pow(long long e) const {
  GroupElement base = e < 0 ? inverse() : *this;
  unsigned long long k = e < 0 ? -static_cast<unsigned long long>(e) : static_cast<unsigned long long>(e);
  GroupElement result = identity(n());
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

GroupElement GroupElement::without_letter(int i) const { return GroupElement(series_.without_letter(i)); }

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return GroupElement(multiply(a.series_, b.series_));
}

GroupElement commutator(const GroupElement& a, const GroupElement& b) {
  return a * b * a.inverse() * b.inverse();
}

AlgebraElement substitute(int i, const GroupElement& w, const AlgebraElement& a) {
  const int n = a.n();
  if (i < 1 || i > n) throw InputError("component index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
  if (w.n() != n) throw InputError("conjugator lives on a different number of variables");
  std::vector<AlgebraElement> images;
  images.reserve(n);
  for (int r = 1; r <= n; ++r) images.push_back(AlgebraElement::variable(r, n));
  images[i - 1] = multiply(multiply(w.series(), images[i - 1]), w.inverse().series());
  return apply_endomorphism(images, a);
}

}  // namespace linkhom
