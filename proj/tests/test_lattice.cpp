#include "doctest.h"
#include "linkhom/lattice.hpp"
#include "support.hpp"

using namespace linkhom;

namespace {

IntMatrix matrix(std::vector<std::vector<long long>> rows) {
  IntMatrix a(static_cast<int>(rows.size()), static_cast<int>(rows.at(0).size()));
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) a(r, c) = rows[r][c];
  }
  return a;
}

IntMatrix random_matrix(std::mt19937_64& g, int rows, int cols, long long lo, long long hi) {
  IntMatrix a(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) a(r, c) = testing::uniform(g, lo, hi);
  }
  return a;
}

IntVector random_vector(std::mt19937_64& g, int size, long long lo, long long hi) {
  IntVector v;
  for (int i = 0; i < size; ++i) v.emplace_back(testing::uniform(g, lo, hi));
  return v;
}

// cofactor expansion, independent of the Bareiss code
Integer laplace(const IntMatrix& a) {
  const int n = a.rows();
  if (n == 0) return 1;
  Integer det = 0;
  for (int c = 0; c < n; ++c) {
    IntMatrix minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      for (int k = 0, kk = 0; k < n; ++k) {
        if (k != c) minor(r - 1, kk++) = a(r, k);
      }
    }
    const Integer term = a(0, c) * laplace(minor);
    det += c % 2 ? -term : term;
  }
  return det;
}

bool is_zero_column(const IntMatrix& h, int c) {
  for (int r = 0; r < h.rows(); ++r) {
    if (!h(r, c).is_zero()) return false;
  }
  return true;
}

void check_hnf(const IntMatrix& a) {
  const auto res = hnf(a);
  CHECK(a * res.u == res.h);
  CHECK(abs(determinant(res.u)) == Integer(1));
  int prev = -1;
  for (int k = 0; k < res.rank(); ++k) {
    const int p = res.pivot_rows[k];
    CHECK(p > prev);
    CHECK(res.h(p, k).sign() > 0);
    for (int r = 0; r < p; ++r) CHECK(res.h(r, k).is_zero());
    for (int j = 0; j < k; ++j) {
      CHECK(res.h(p, j).sign() >= 0);
      CHECK(res.h(p, j) < res.h(p, k));
    }
    prev = p;
  }
  for (int k = res.rank(); k < a.cols(); ++k) CHECK(is_zero_column(res.h, k));
}

bool box_solvable(const IntMatrix& a, const IntVector& b, int bound) {
  const int n = a.cols();
  std::vector<long long> x(n, -bound);
  while (true) {
    IntVector xi(x.begin(), x.end());
    if (a * xi == b) return true;
    int p = 0;
    while (p < n && x[p] == bound) x[p++] = -bound;
    if (p == n) return false;
    ++x[p];
  }
}

}  // namespace

TEST_CASE("hnf small cases") {
  const auto one = hnf(matrix({{2}}));
  CHECK(one.h == matrix({{2}}));
  CHECK(one.u == matrix({{1}}));
  const auto res = hnf(matrix({{2, 4}, {6, 8}}));
  CHECK(abs(determinant(res.h)) == Integer(8));
  check_hnf(matrix({{2, 4}, {6, 8}}));
  const auto zero = hnf(IntMatrix(2, 3));
  CHECK(zero.h == IntMatrix(2, 3));
  CHECK(zero.u == IntMatrix::identity(3));
  CHECK(zero.rank() == 0);
}

TEST_CASE("hnf on random matrices") {
  auto g = testing::rng(41);
  for (int t = 0; t < 200; ++t) {
    const int rows = static_cast<int>(testing::uniform(g, 1, 7));
    const int cols = static_cast<int>(testing::uniform(g, 1, 9));
    check_hnf(random_matrix(g, rows, cols, -5, 5));
  }
  for (int t = 0; t < 5; ++t) check_hnf(random_matrix(g, 20, 40, -3, 3));
}

TEST_CASE("determinant agrees with cofactor expansion") {
  auto g = testing::rng(42);
  for (int t = 0; t < 100; ++t) {
    const int n = static_cast<int>(testing::uniform(g, 1, 6));
    const auto a = random_matrix(g, n, n, -9, 9);
    CHECK(determinant(a) == laplace(a));
  }
}

TEST_CASE("smith invariants") {
  CHECK(smith_invariants(matrix({{2, 4}, {6, 8}})) == std::vector<Integer>{2, 4});
  CHECK(smith_invariants(matrix({{2, 0}, {0, 3}})) == std::vector<Integer>{1, 6});
  CHECK(smith_invariants(IntMatrix(2, 2)).empty());
  auto g = testing::rng(43);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_matrix(g, 4, 4, -6, 6);
    const auto d = smith_invariants(a);
    Integer product = 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
      product *= d[i];
      if (i > 0) CHECK(divides(d[i - 1], d[i]));
    }
    if (d.size() == 4) CHECK(product == abs(determinant(a)));
    if (d.size() < 4) CHECK(determinant(a).is_zero());
  }
}

TEST_CASE("solve_integer small cases") {
  const auto s = solve_integer(matrix({{2}}), IntVector{4});
  REQUIRE(s.has_value());
  CHECK(s->particular == IntVector{2});
  CHECK(s->null_basis.empty());
  CHECK_FALSE(solve_integer(matrix({{2}}), IntVector{3}).has_value());
  const auto z = solve_integer(matrix({{1, 1}}), IntVector{0});
  REQUIRE(z.has_value());
  CHECK(z->null_basis.size() == 1);
}

TEST_CASE("solve_integer recovers planted solutions") {
  auto g = testing::rng(44);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_matrix(g, 6, 10, -4, 4);
    const auto x = random_vector(g, 10, -5, 5);
    const IntVector b = a * x;
    const auto s = solve_integer(a, b);
    REQUIRE(s.has_value());
    CHECK(a * s->particular == b);
    for (const auto& z : s->null_basis) CHECK(a * z == IntVector(6));
    const auto rank = hnf(a).rank();
    CHECK(static_cast<int>(s->null_basis.size()) == 10 - rank);
  }
}

TEST_CASE("solve_integer agrees with a box search") {
  auto g = testing::rng(45);
  int solvable = 0;
  for (int t = 0; t < 100; ++t) {
    const auto a = random_matrix(g, 3, 4, -3, 3);
    // plant in half the cases so both answers occur
    const IntVector b = t % 2 ? a * random_vector(g, 4, -3, 3) : random_vector(g, 3, -4, 4);
    const auto s = solve_integer(a, b);
    const bool boxed = box_solvable(a, b, 3);
    if (boxed) CHECK(s.has_value());
    if (s) {
      ++solvable;
      CHECK(a * s->particular == b);
    }
    if (!s) CHECK_FALSE(boxed);
  }
  CHECK(solvable > 0);
}

TEST_CASE("lattice membership") {
  const std::vector<IntVector> none;
  CHECK(in_lattice(IntVector{0, 0}, none));
  CHECK_FALSE(in_lattice(IntVector{1}, std::vector<IntVector>{{2}}));
  auto g = testing::rng(46);
  for (int t = 0; t < 50; ++t) {
    std::vector<IntVector> gens{random_vector(g, 5, -4, 4), random_vector(g, 5, -4, 4), random_vector(g, 5, -4, 4)};
    IntVector v(5);
    for (int i = 0; i < 5; ++i) v[i] = gens[0][i] + 3 * gens[1][i];
    CHECK(in_lattice(v, gens));
    IntVector doubled = gens[0];
    for (auto& x : doubled) x *= 2;
    const std::vector<IntVector> even{doubled};
    bool odd = false;
    for (const auto& x : gens[0]) odd = odd || !divides(Integer(2), x);
    if (odd) CHECK_FALSE(in_lattice(gens[0], even));
  }
}

TEST_CASE("results are deterministic") {
  auto g = testing::rng(47);
  const auto a = random_matrix(g, 5, 8, -5, 5);
  const auto b = random_vector(g, 5, -5, 5);
  const auto r1 = hnf(a), r2 = hnf(a);
  CHECK(r1.h == r2.h);
  CHECK(r1.u == r2.u);
  CHECK(to_string(r1.h) == to_string(r2.h));
  const auto s1 = solve_integer(a, b), s2 = solve_integer(a, b);
  CHECK(s1.has_value() == s2.has_value());
  if (s1) CHECK(s1->particular == s2->particular);
}
