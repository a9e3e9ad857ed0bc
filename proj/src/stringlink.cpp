#include "linkhom/stringlink.hpp"

#include <atomic>
#include <map>
#include <mutex>

#include "linkhom/errors.hpp"

namespace linkhom {

struct StringLinkAccess {
  static StringLink make(std::vector<GroupElement> longitudes) {
    StringLink sl(std::move(longitudes));
    if (realizability_checks() && !sl.realizable()) {
      throw InvariantError("constructed string link violates the product condition");
    }
    return sl;
  }
};

namespace {

std::atomic<bool> g_checks{false};

void check_same(const StringLink& a, const StringLink& b) {
  if (a.n() != b.n()) {
    throw InputError("string links have different component counts (" + std::to_string(a.n()) + " vs " +
                     std::to_string(b.n()) + ")");
  }
}

unsigned letter(int i) { return 1u << i; }

// Braid automorphism images of X_1..X_n for sigma_k^{+-1}.
std::vector<AlgebraElement> sigma_images(int k, bool positive, int n) {
  std::vector<AlgebraElement> imgs;
  for (int r = 1; r <= n; ++r) imgs.push_back(AlgebraElement::variable(r, n));
  const AlgebraElement one = AlgebraElement::one(n);
  if (positive) {
    GroupElement c = meridian(k, n) * meridian(k + 1, n) * meridian(k, n).inverse();
    imgs[k - 1] = c.series() - one;
    imgs[k] = AlgebraElement::variable(k, n);
  } else {
    GroupElement c = meridian(k + 1, n).inverse() * meridian(k, n) * meridian(k + 1, n);
    imgs[k - 1] = AlgebraElement::variable(k + 1, n);
    imgs[k] = c.series() - one;
  }
  return imgs;
}

// Longitudes read off an automorphism of the form X_r -> lambda_r X_r lambda_r^{-1}.
std::vector<GroupElement> longitudes_of(const std::vector<AlgebraElement>& imgs) {
  const int n = static_cast<int>(imgs.size());
  const auto& table = MonomialTable::get(n);
  std::vector<GroupElement> out;
  for (int r = 1; r <= n; ++r) {
    std::vector<std::pair<std::vector<int>, Integer>> terms;
    for (const auto& [id, c] : imgs[r - 1].terms()) {
      if (id == 0 || table.last_letter(id) != r) continue;
      auto w = table.word(id).letters();
      w.pop_back();
      terms.emplace_back(std::move(w), c);
    }
    out.push_back(GroupElement::from_series(AlgebraElement::from_terms(n, terms).without_letter(r)));
  }
  return out;
}

// phi^{-1}(v) = sum_k (id - phi)^k v, the series terminating since id - phi raises degree.
AlgebraElement inverse_endomorphism(std::span<const AlgebraElement> images, const AlgebraElement& v,
                                    unsigned mask) {
  AlgebraElement term = v.filtered(mask);
  AlgebraElement total = term;
  for (int step = 0; step <= kMaxComponents && !term.is_zero(); ++step) {
    term = term - apply_endomorphism(images, term, mask);
    total = total + term;
  }
  return total;
}

// Coefficients of a^e are polynomials in e of degree <= n-1 (phi_a - id
// raises degree), so a^e = sum_t binom(e, t) D_t with D_t the forward
// differences of a^0..a^{n-1}.
struct PowerTable {
  std::vector<std::vector<AlgebraElement>> diffs;  // [t][strand]
};

Integer binomial(const Integer& e, int t) {
  Integer num(1);
  Integer den(1);
  for (int s = 0; s < t; ++s) {
    num *= e - Integer(s);
    den *= Integer(s + 1);
  }
  return floor_div(num, den);
}

PowerTable power_table(const StringLink& a) {
  const int n = a.n();
  std::vector<StringLink> powers{StringLink::trivial(n), a};
  while (static_cast<int>(powers.size()) < n) powers.push_back(compose(powers.back(), a));
  PowerTable pt;
  for (int t = 0; t < n; ++t) {
    std::vector<AlgebraElement> d(n, AlgebraElement(n));
    for (int s = 0; s <= t && s < static_cast<int>(powers.size()); ++s) {
      Integer c = binomial(Integer(t), s);
      if ((t - s) % 2) c = -c;
      for (int i = 0; i < n; ++i) d[i] = d[i] + c * powers[s].longitude(i + 1).series();
    }
    pt.diffs.push_back(std::move(d));
  }
  return pt;
}

StringLink evaluate_power(const PowerTable& pt, const Integer& e, int n) {
  std::vector<AlgebraElement> l(n, AlgebraElement(n));
  for (int t = 0; t < static_cast<int>(pt.diffs.size()); ++t) {
    Integer c = binomial(e, t);
    if (c.is_zero()) continue;
    for (int i = 0; i < n; ++i) l[i] = l[i] + c * pt.diffs[t][i];
  }
  std::vector<GroupElement> out;
  out.reserve(n);
  for (auto& x : l) out.push_back(GroupElement::from_series(std::move(x)));
  return StringLinkAccess::make(std::move(out));
}

struct GeneratorEntry {
  StringLink link;
  PowerTable powers;
};

const std::map<IndexSequence, GeneratorEntry>& generator_table(int n) {
  static std::once_flag flags[kMaxComponents + 1];
  static std::map<IndexSequence, GeneratorEntry>* tables[kMaxComponents + 1] = {};
  if (n < 2 || n > kMaxComponents) throw InputError("component count " + std::to_string(n) + " outside 2..5");
  std::call_once(flags[n], [n] {
    auto* t = new std::map<IndexSequence, GeneratorEntry>;
    for (const auto& index : all_basis_indices(n)) {
      const int k = index.back();
      StringLink g = elementary(index[0], k, n);
      for (int p = 1; p + 1 < index.size(); ++p) g = commutator(elementary(index[p], k, n), g);
      PowerTable pt = power_table(g);
      // spot-check the interpolation outside the sampled range
      if (!(evaluate_power(pt, Integer(-1), n) == inverse(g))) {
        throw InvariantError("power interpolation failed for generator " + index.to_string());
      }
      t->emplace(index, GeneratorEntry{std::move(g), std::move(pt)});
    }
    tables[n] = t;
  });
  return *tables[n];
}

}  // namespace

void set_realizability_checks(bool enabled) { g_checks.store(enabled); }
bool realizability_checks() { return g_checks.load(); }

StringLink StringLink::trivial(int n) {
  if (n < 1 || n > kMaxComponents) throw InputError("component count " + std::to_string(n) + " outside 1..5");
  return StringLink(std::vector<GroupElement>(n, GroupElement::identity(n)));
}

StringLink StringLink::from_longitudes(std::vector<GroupElement> longitudes) {
  const int n = static_cast<int>(longitudes.size());
  if (n < 1 || n > kMaxComponents) throw InputError("component count " + std::to_string(n) + " outside 1..5");
  for (int i = 1; i <= n; ++i) {
    if (longitudes[i - 1].n() != n) throw InputError("longitude " + std::to_string(i) + " has wrong variable count");
    if (!(longitudes[i - 1].without_letter(i) == longitudes[i - 1])) {
      throw InputError("longitude " + std::to_string(i) + " involves its own meridian");
    }
  }
  StringLink sl(std::move(longitudes));
  if (!sl.realizable()) throw InputError("longitudes do not fix the boundary product x1...xn");
  return sl;
}

bool StringLink::is_trivial() const {
  for (const auto& l : longitudes_) {
    if (!l.is_identity()) return false;
  }
  return true;
}

std::vector<AlgebraElement> StringLink::meridian_images() const {
  const int n = this->n();
  std::vector<AlgebraElement> imgs;
  imgs.reserve(n);
  for (int r = 1; r <= n; ++r) {
    const GroupElement& l = longitudes_[r - 1];
    imgs.push_back(multiply(multiply(l.series(), AlgebraElement::variable(r, n)), l.inverse().series()));
  }
  return imgs;
}

bool StringLink::realizable() const {
  const int n = this->n();
  const auto imgs = meridian_images();
  AlgebraElement boundary = AlgebraElement::one(n);
  AlgebraElement image = AlgebraElement::one(n);
  for (int r = 1; r <= n; ++r) {
    boundary = boundary * meridian(r, n).series();
    image = image * (AlgebraElement::one(n) + imgs[r - 1]);
  }
  return boundary == image;
}

StringLink braid_string_link(std::span<const int> word, int n) {
  std::vector<AlgebraElement> e;
  for (int r = 1; r <= n; ++r) e.push_back(AlgebraElement::variable(r, n));
  for (int s : word) {
    const int k = s > 0 ? s : -s;
    if (k < 1 || k >= n) throw InputError("braid letter " + std::to_string(s) + " out of range");
    const auto sig = sigma_images(k, s > 0, n);
    std::vector<AlgebraElement> next;
    for (int r = 0; r < n; ++r) next.push_back(apply_endomorphism(e, sig[r]));
    e = std::move(next);
  }
  auto sl = StringLinkAccess::make(longitudes_of(e));
  if (!sl.realizable()) throw InputError("braid word is not pure");
  return sl;
}

StringLink elementary(int i, int j, int n) {
  if (i == j) throw InputError("elementary generator needs distinct strands");
  if (i > j || i < 1 || j > n) {
    throw InputError("elementary generator A_" + std::to_string(i) + std::to_string(j) + " out of range");
  }
  // sigma_{j-1} ... sigma_{i+1} sigma_i^2 sigma_{i+1}^{-1} ... sigma_{j-1}^{-1}
  std::vector<int> word;
  for (int k = j - 1; k > i; --k) word.push_back(k);
  word.push_back(i);
  word.push_back(i);
  for (int k = i + 1; k < j; ++k) word.push_back(-k);
  return braid_string_link(word, n);
}

const StringLink& generator(const IndexSequence& index, int n) {
  const auto& t = generator_table(n);
  auto it = t.find(index);
  if (it == t.end()) throw InputError(index.to_string() + " is not a basis index for n=" + std::to_string(n));
  return it->second.link;
}

StringLink generator_power(const IndexSequence& index, int n, const Integer& e) {
  const auto& t = generator_table(n);
  auto it = t.find(index);
  if (it == t.end()) throw InputError(index.to_string() + " is not a basis index for n=" + std::to_string(n));
  if (e.is_zero()) return StringLink::trivial(n);
  if (e.is_one()) return it->second.link;
  return evaluate_power(it->second.powers, e, n);
}

StringLink compose(const StringLink& a, const StringLink& b) {
  check_same(a, b);
  if (a.is_trivial()) return b;
  if (b.is_trivial()) return a;
  const int n = a.n();
  const auto fa = a.meridian_images();
  std::vector<GroupElement> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) {
    AlgebraElement moved = apply_endomorphism(fa, b.longitude(i).series(), letter(i));
    out.push_back(GroupElement::from_series(multiply(moved, a.longitude(i).series(), letter(i))));
  }
  return StringLinkAccess::make(std::move(out));
}

StringLink inverse(const StringLink& a) {
  if (a.is_trivial()) return a;
  const int n = a.n();
  const auto fa = a.meridian_images();
  std::vector<GroupElement> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) {
    AlgebraElement v = inverse_endomorphism(fa, a.longitude(i).inverse().series(), letter(i));
    out.push_back(GroupElement::from_series(std::move(v)));
  }
  return StringLinkAccess::make(std::move(out));
}

StringLink power(const StringLink& a, const Integer& e) {
  if (e.is_zero() || a.is_trivial()) return StringLink::trivial(a.n());
  if (e.is_one()) return a;
  if (e == Integer(-1)) return inverse(a);
  return evaluate_power(power_table(a), e, a.n());
}

StringLink commutator(const StringLink& a, const StringLink& b) {
  return compose(compose(a, b), compose(inverse(a), inverse(b)));
}

Integer mu(const StringLink& sl, const IndexSequence& index) {
  if (index.max_entry() > sl.n()) {
    throw InputError("index " + index.to_string() + " exceeds n=" + std::to_string(sl.n()));
  }
  auto e = index.entries();
  e.pop_back();
  return sl.longitude(index.back()).series().coefficient(IndexedMonomial(std::span<const int>(e)));
}

StringLink from_canonical(const CanonicalForm& y) {
  // accumulate from the right: composing a sparse factor onto a dense
  // product is much cheaper than the reverse
  const int n = y.n();
  StringLink cur = StringLink::trivial(n);
  for (int k = n; k >= 2; --k) {
    const auto& basis = basis_indices(n, k);
    const auto& block = y.block(k - 1);
    for (std::size_t p = basis.size(); p-- > 0;) {
      if (block[p].is_zero()) continue;
      cur = compose(generator_power(basis[p], n, block[p]), cur);
    }
  }
  return cur;
}

CanonicalForm to_canonical(const StringLink& sl) {
  const int n = sl.n();
  CanonicalForm y = CanonicalForm::zero(n);
  StringLink cur = sl;
  for (int k = 2; k <= n; ++k) {
    const auto& basis = basis_indices(n, k);
    auto& block = y.block(k - 1);
    for (std::size_t p = 0; p < basis.size(); ++p) block[p] = mu(cur, basis[p]);
    for (std::size_t p = 0; p < basis.size(); ++p) {
      if (block[p].is_zero()) continue;
      cur = compose(generator_power(basis[p], n, -block[p]), cur);
    }
    for (const auto& index : basis) {
      if (!mu(cur, index).is_zero()) {
        throw InvariantError("coordinate stripping left mu(" + index.to_string() + ") nonzero");
      }
    }
  }
  if (!cur.is_trivial()) throw InvariantError("coordinate stripping did not reach the trivial string link");
  return y;
}

}  // namespace linkhom
