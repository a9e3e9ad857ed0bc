#include "doctest.h"
#include "linkhom/errors.hpp"
#include "linkhom/stringlink.hpp"
#include "support.hpp"

using namespace linkhom;

TEST_CASE("trivial string link") {
  const auto t = StringLink::trivial(4);
  CHECK(t.is_trivial());
  CHECK(t.realizable());
  for (const auto& index : all_basis_indices(4)) CHECK(mu(t, index) == Integer(0));
  CHECK(to_canonical(t) == CanonicalForm::zero(4));
  CHECK(from_canonical(CanonicalForm::zero(5)) == StringLink::trivial(5));
}

TEST_CASE("elementary pure braids") {
  CHECK(mu(elementary(1, 2, 2), IndexSequence{1, 2}) == Integer(1));
  CHECK(mu(elementary(1, 2, 5), IndexSequence{1, 3}) == Integer(0));
  CHECK(elementary(1, 2, 2).realizable());
  for (int i = 1; i <= 5; ++i) {
    for (int j = i + 1; j <= 5; ++j) {
      const auto a = elementary(i, j, 5);
      CHECK(a.realizable());
      CHECK(mu(a, IndexSequence{i, j}) == Integer(1));
      CHECK(mu(a, IndexSequence{j, i}) == Integer(1));
    }
  }
  CHECK_THROWS_AS(elementary(2, 2, 3), InputError);
}

TEST_CASE("pure braid word oracle") {
  // sigma_1^2 is A_12
  const int word[] = {1, 1};
  CHECK(braid_string_link(word, 3) == elementary(1, 2, 3));
  const int inverse_word[] = {-1, -1};
  CHECK(braid_string_link(inverse_word, 3) == inverse(elementary(1, 2, 3)));
}

TEST_CASE("generators") {
  CHECK(mu(generator(IndexSequence{1, 2, 3}, 4), IndexSequence{1, 2, 3}) == Integer(1));
  CHECK(mu(generator(IndexSequence{1, 2, 3, 4}, 4), IndexSequence{1, 3, 2, 4}) == Integer(0));
  CHECK(mu(generator(IndexSequence{1, 2, 3}, 4), IndexSequence{1, 2}) == Integer(0));
  CHECK_THROWS_AS(generator(IndexSequence{2, 1, 3}, 4), InputError);
  auto y = CanonicalForm::zero(4);
  y[IndexSequence{1, 3, 2, 4}] = 1;
  CHECK(to_canonical(generator(IndexSequence{1, 3, 2, 4}, 4)) == y);
}

TEST_CASE("triangularity against every basis index") {
  for (int n = 2; n <= 5; ++n) {
    const auto all = all_basis_indices(n);
    for (const auto& i : all) {
      const auto& g = generator(i, n);
      CHECK(g.realizable());
      for (const auto& j : all) {
        if (j.size() > i.size()) continue;
        CHECK(mu(g, j) == Integer(i == j ? 1 : 0));
      }
    }
  }
}

TEST_CASE("composition") {
  auto g = testing::rng(11);
  const auto a = from_canonical(testing::random_form(g, 4));
  const auto b = from_canonical(testing::random_form(g, 4));
  const auto c = from_canonical(testing::random_form(g, 4));
  CHECK(compose(StringLink::trivial(4), a) == a);
  CHECK(compose(a, StringLink::trivial(4)) == a);
  CHECK(compose(a, inverse(a)).is_trivial());
  CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  CHECK(commutator(a, a).is_trivial());
  CHECK(power(a, 3) == compose(compose(a, a), a));
  CHECK(power(a, -2) == inverse(compose(a, a)));
  CHECK(generator_power(IndexSequence{1, 2, 4}, 4, -3) == power(generator(IndexSequence{1, 2, 4}, 4), -3));
  const auto g12 = generator(IndexSequence{1, 2}, 4);
  CHECK(mu(compose(g12, g12), IndexSequence{1, 2}) == Integer(2));
}

TEST_CASE("linking numbers add under composition") {
  auto g = testing::rng(12);
  for (int t = 0; t < 20; ++t) {
    const int n = t % 2 ? 4 : 5;
    const auto y = testing::random_form(g, n), yp = testing::random_form(g, n);
    const auto sum = to_canonical(compose(from_canonical(y), from_canonical(yp)));
    for (std::size_t p = 0; p < y.block(1).size(); ++p) CHECK(sum.block(1)[p] == y.block(1)[p] + yp.block(1)[p]);
  }
}

TEST_CASE("a sample tuple") {
  const auto sl = from_canonical(testing::sample4());
  CHECK(sl.realizable());
  CHECK(mu(sl, IndexSequence{1, 2}) == Integer(-2));
  CHECK(mu(sl, IndexSequence{1, 3}) == Integer(1));
  CHECK(to_canonical(sl) == testing::sample4());
}

TEST_CASE("example linking and triple numbers") {
  CHECK(mu(from_canonical(testing::example(1, false)), IndexSequence{1, 2}) == Integer(1));
  CHECK(mu(from_canonical(testing::example(2, false)), IndexSequence{1, 2, 3}) == Integer(1));
  CHECK(mu(from_canonical(testing::example(2, false)), IndexSequence{1, 2, 4}) == Integer(1));
}

TEST_CASE("roundtrip on random tuples") {
  auto g = testing::rng(13);
  for (int n = 2; n <= 5; ++n) {
    for (int t = 0; t < 50; ++t) {
      const auto y = testing::random_form(g, n, -4, 4);
      const auto sl = from_canonical(y);
      CHECK(sl.realizable());
      CHECK(to_canonical(sl) == y);
    }
  }
}

TEST_CASE("non-realizable longitudes are rejected") {
  std::vector<GroupElement> l{meridian(2, 3), GroupElement::identity(3), GroupElement::identity(3)};
  CHECK_THROWS_AS(StringLink::from_longitudes(l), InputError);
  std::vector<GroupElement> own{meridian(1, 2), GroupElement::identity(2)};
  CHECK_THROWS_AS(StringLink::from_longitudes(own), InputError);
}

TEST_CASE("realizability checks can be switched on") {
  set_realizability_checks(true);
  auto g = testing::rng(14);
  CHECK_NOTHROW(to_canonical(compose(from_canonical(testing::random_form(g, 5)), generator(IndexSequence{1, 2, 3}, 5))));
  set_realizability_checks(false);
  CHECK_FALSE(realizability_checks());
}
