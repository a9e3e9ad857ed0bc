#include "linkhom/moves.hpp"

#include <algorithm>

#include "linkhom/errors.hpp"

namespace linkhom {

std::string PartialConj::conjugator_string() const {
  if (is_trivial()) return "1";
  std::string s = "x" + std::to_string(letter);
  if (power != 1) s += "^" + std::to_string(power);
  return s;
}

PartialConj PartialConj::parse(int component, const std::string& conjugator) {
  if (conjugator == "1") return {component, 0, 0};
  auto bad = [&] { return InputError("malformed conjugator '" + conjugator + "'"); };
  if (conjugator.size() < 2 || conjugator[0] != 'x') throw bad();
  std::size_t caret = conjugator.find('^');
  std::string letter = conjugator.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
  if (letter.size() != 1 || letter[0] < '1' || letter[0] > '9') throw bad();
  long long power = 1;
  if (caret != std::string::npos) {
    try {
      std::size_t used = 0;
      power = std::stoll(conjugator.substr(caret + 1), &used);
      if (used != conjugator.size() - caret - 1) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  return {component, letter[0] - '0', power};
}

std::string to_string(const PartialConj& m) {
  return "PC(" + std::to_string(m.component) + ", " + m.conjugator_string() + ")";
}

std::vector<PartialConj> elementary_moves(int n) {
  std::vector<PartialConj> out;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      out.push_back({i, j, 1});
      out.push_back({i, j, -1});
    }
  }
  return out;
}

std::vector<PartialConj> positive_moves(int n) {
  std::vector<PartialConj> out;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i != j) out.push_back({i, j, 1});
    }
  }
  return out;
}

void validate(const PartialConj& m, int n) {
  if (m.component < 1 || m.component > n) {
    throw InputError("move component " + std::to_string(m.component) + " out of range 1.." + std::to_string(n));
  }
  if (m.is_trivial()) return;
  if (m.letter < 1 || m.letter > n) {
    throw InputError("conjugator letter x" + std::to_string(m.letter) + " out of range");
  }
  if (m.letter == m.component) throw InputError("conjugator letter must differ from the moved component");
}

StringLink pc_apply(const PartialConj& m, const StringLink& sl) { return pc_apply(m, sl, to_canonical(sl)); }

StringLink pc_apply(const PartialConj& m, const StringLink& sl, const CanonicalForm& y) {
  const int n = sl.n();
  validate(m, n);
  if (y.n() != n) throw InputError("coordinates do not match the string link");
  if (m.is_trivial()) return sl;
  const int i = m.component;
  CanonicalForm rest = y;
  for (int k = 2; k <= n; ++k) {
    const auto& basis = basis_indices(n, k);
    for (std::size_t p = 0; p < basis.size(); ++p) {
      if (basis[p].contains(i)) rest.block(k - 1)[p] = Integer();
    }
  }
  const StringLink s = from_canonical(rest);
  const StringLink a = generator_power(IndexSequence{std::min(i, m.letter), std::max(i, m.letter)}, n, m.power);
  StringLink r = compose(a, sl);
  r = compose(r, inverse(s));
  r = compose(r, inverse(a));
  return compose(r, s);
}

CanonicalForm pc_apply(const PartialConj& m, const CanonicalForm& y) {
  return to_canonical(pc_apply(m, from_canonical(y), y));
}

CanonicalForm difference(const CanonicalForm& a, const CanonicalForm& b) {
  if (a.n() != b.n()) throw InputError("coordinate forms have different component counts");
  CanonicalForm d = a;
  for (int k = 1; k < a.n(); ++k) {
    for (std::size_t p = 0; p < d.block(k).size(); ++p) d.block(k)[p] -= b.block(k)[p];
  }
  return d;
}

CanonicalForm pc_displacement(const PartialConj& m, const CanonicalForm& y) {
  return difference(pc_apply(m, y), y);
}

}  // namespace linkhom
