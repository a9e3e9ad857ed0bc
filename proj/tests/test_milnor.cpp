#include <algorithm>
#include <set>

#include "doctest.h"
#include "linkhom/errors.hpp"
#include "linkhom/milnor.hpp"
#include "support.hpp"

using namespace linkhom;

namespace {

IndexSequence rotate(const IndexSequence& i, int by) {
  auto e = i.entries();
  std::rotate(e.begin(), e.begin() + by, e.end());
  return IndexSequence(e);
}

std::vector<IndexSequence> brute_indeterminacy(const IndexSequence& i) {
  const auto e = i.entries();
  const int k = static_cast<int>(e.size());
  std::set<IndexSequence> out;
  for (unsigned keep = 0; keep < (1u << k) - 1; ++keep) {
    std::vector<int> sub;
    for (int p = 0; p < k; ++p) {
      if (keep >> p & 1u) sub.push_back(e[p]);
    }
    if (sub.size() < 2) continue;
    for (std::size_t r = 0; r < sub.size(); ++r) {
      out.insert(IndexSequence(sub));
      std::rotate(sub.begin(), sub.begin() + 1, sub.end());
    }
  }
  return {out.begin(), out.end()};
}

MuTable zero_table(const IndexSequence& i) {
  MuTable t;
  for (const auto& s : brute_indeterminacy(i)) t[s] = 0;
  return t;
}

}  // namespace

TEST_CASE("indeterminacy sequences") {
  CHECK(indeterminacy_sequences(IndexSequence{1, 2}).empty());
  const auto s = indeterminacy_sequences(IndexSequence{1, 2, 3});
  CHECK(s.size() == 6);
  for (const char* text : {"1234", "1324", "12345", "21435", "41325"}) {
    const auto i = IndexSequence::parse(text);
    CHECK(indeterminacy_sequences(i) == brute_indeterminacy(i));
  }
}

TEST_CASE("delta") {
  CHECK(delta(IndexSequence{1, 2}, {}) == Integer(0));
  auto t = zero_table(IndexSequence{1, 2, 3, 4});
  t[IndexSequence{1, 2, 3}] = 1;
  t[IndexSequence{1, 2, 4}] = 1;
  CHECK(delta(IndexSequence{1, 2, 3, 4}, t) == Integer(1));
  CHECK(delta(IndexSequence{1, 3, 4, 5}, zero_table(IndexSequence{1, 3, 4, 5})) == Integer(0));
  auto u = zero_table(IndexSequence{1, 2, 3});
  u[IndexSequence{1, 2}] = 6;
  u[IndexSequence{3, 2}] = -4;
  CHECK(delta(IndexSequence{1, 2, 3}, u) == Integer(2));
  CHECK_THROWS_AS(delta(IndexSequence{1, 2, 3}, MuTable{}), InputError);
}

TEST_CASE("residues of the examples") {
  const auto e2 = testing::example(2, false);
  const auto r = mubar(e2, IndexSequence{1, 2, 4});
  CHECK(r.value == Integer(1));
  CHECK(r.modulus == Integer(0));
  const auto e3 = testing::example(3, false);
  for (const auto& i : distinguishing_indices(5)) {
    const auto x = mubar(e3, i);
    if (i.size() >= 3) {
      CHECK(x.modulus == Integer(1));
      CHECK(x.value == Integer(0));
    } else {
      CHECK(x.value == Integer(1));
    }
  }
  for (const auto& i : distinguishing_indices(5)) {
    const auto x = mubar(CanonicalForm::zero(5), i);
    CHECK(x.value == Integer(0));
    CHECK(x.modulus == Integer(0));
  }
}

TEST_CASE("linking numbers are the first block") {
  auto g = testing::rng(21);
  for (int n = 2; n <= 5; ++n) {
    const auto y = testing::random_form(g, n);
    const auto& pairs = basis_indices(n, 2);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto r = mubar(y, pairs[p]);
      CHECK(r.value == y.block(1)[p]);
      CHECK(r.modulus == Integer(0));
    }
  }
}

TEST_CASE("residues are normalized and invariant under cyclic rotation") {
  auto g = testing::rng(22);
  for (int t = 0; t < 10; ++t) {
    const int n = t % 2 ? 4 : 5;
    const auto y = testing::random_form(g, n, -2, 2);
    const auto sl = from_canonical(y);
    for (const auto& i : distinguishing_indices(n)) {
      const auto r = mubar(sl, i);
      CHECK(r.modulus.sign() >= 0);
      if (!r.modulus.is_zero()) CHECK(r.value < r.modulus);
      if (!r.modulus.is_zero()) CHECK(r.value.sign() >= 0);
      for (int by = 1; by < i.size(); ++by) CHECK(mubar(sl, rotate(i, by)) == MuResidue{rotate(i, by), r.value, r.modulus});
    }
  }
}

TEST_CASE("mu_compare") {
  for (int e = 1; e <= 3; ++e) {
    const auto report = mu_compare(testing::example(e, false), testing::example(e, true));
    CHECK(report.equal);
    CHECK_FALSE(report.first_difference.has_value());
    CHECK(report.left.size() == 42);
  }
  const auto report = mu_compare(testing::example(1, false), testing::example(2, false));
  CHECK_FALSE(report.equal);
  CHECK(report.first_difference == IndexSequence{1, 2});
  CHECK_THROWS_AS(mu_compare(testing::sample4(), testing::example(1, false)), InputError);
}

TEST_CASE("residues are invariant under partial conjugation") {
  auto g = testing::rng(23);
  for (int t = 0; t < 20; ++t) {
    const int n = t % 2 ? 4 : 5;
    const auto y = testing::random_form(g, n);
    const auto y2 = testing::moved(y, testing::random_moves(g, n, 3));
    CHECK(mu_compare(y, y2).equal);
  }
}
