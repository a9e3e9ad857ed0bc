#include "linkhom/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "linkhom/errors.hpp"

namespace linkhom {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(int rows, std::span<const IntVector> columns) {
  IntMatrix m(rows, static_cast<int>(columns.size()));
  for (int c = 0; c < m.cols(); ++c) {
    if (static_cast<int>(columns[c].size()) != rows) throw InputError("column length mismatch");
    for (int r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntVector IntMatrix::column(int c) const {
  IntVector v(rows_);
  for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const Integer& x = a(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols(); ++j) {
        if (!b(k, j).is_zero()) out(i, j).add_mul(x, b(k, j));
      }
    }
  }
  return out;
}

IntVector operator*(const IntMatrix& a, std::span<const Integer> x) {
  if (a.cols() != static_cast<int>(x.size())) throw InputError("matrix shape mismatch");
  IntVector out(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      if (!x[k].is_zero() && !a(i, k).is_zero()) out[i].add_mul(a(i, k), x[k]);
    }
  }
  return out;
}

std::string to_string(const IntMatrix& a) {
  std::ostringstream os;
  for (int r = 0; r < a.rows(); ++r) {
    os << '[';
    for (int c = 0; c < a.cols(); ++c) os << (c ? " " : "") << a(r, c);
    os << "]\n";
  }
  return os.str();
}

namespace {

// Column operations applied to H and U together.
struct ColumnOps {
  IntMatrix& h;
  IntMatrix& u;

  void swap(int a, int b) {
    if (a == b) return;
    for (int r = 0; r < h.rows(); ++r) std::swap(h(r, a), h(r, b));
    for (int r = 0; r < u.rows(); ++r) std::swap(u(r, a), u(r, b));
  }
  void negate(int a) {
    for (int r = 0; r < h.rows(); ++r) h(r, a) = -h(r, a);
    for (int r = 0; r < u.rows(); ++r) u(r, a) = -u(r, a);
  }
  // column dst -= q * column src
  void sub(int dst, int src, const Integer& q) {
    if (q.is_zero()) return;
    Integer mq = -q;
    for (int r = 0; r < h.rows(); ++r) {
      if (!h(r, src).is_zero()) h(r, dst).add_mul(mq, h(r, src));
    }
    for (int r = 0; r < u.rows(); ++r) {
      if (!u(r, src).is_zero()) u(r, dst).add_mul(mq, u(r, src));
    }
  }
};

}  // namespace

HnfResult hnf(const IntMatrix& a) {
  HnfResult res{a, IntMatrix::identity(a.cols()), {}};
  ColumnOps ops{res.h, res.u};
  IntMatrix& h = res.h;
  int k = 0;
  for (int r = 0; r < h.rows() && k < h.cols(); ++r) {
    // Euclid across columns k.. with the smallest nonzero entry as pivot
    for (;;) {
      int best = -1;
      for (int c = k; c < h.cols(); ++c) {
        if (h(r, c).is_zero()) continue;
        if (best < 0 || abs(h(r, c)) < abs(h(r, best))) best = c;
      }
      if (best < 0) break;
      ops.swap(k, best);
      bool done = true;
      for (int c = k + 1; c < h.cols(); ++c) {
        if (h(r, c).is_zero()) continue;
        ops.sub(c, k, floor_div(h(r, c), h(r, k)));
        if (!h(r, c).is_zero()) done = false;
      }
      if (done) break;
    }
    if (h(r, k).is_zero()) continue;
    if (h(r, k).sign() < 0) ops.negate(k);
    for (int c = 0; c < k; ++c) ops.sub(c, k, floor_div(h(r, c), h(r, k)));
    res.pivot_rows.push_back(r);
    ++k;
  }
  return res;
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("determinant of a non-square matrix");
  const int n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  int sign = 1;
  Integer prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      int p = k + 1;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return 0;
      for (int c = 0; c < n; ++c) std::swap(m(k, c), m(p, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k);
        v.add_mul(-m(i, k), m(k, j));
        m(i, j) = floor_div(v, prev);  // exact
      }
    }
    prev = m(k, k);
  }
  return sign < 0 ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

std::vector<Integer> smith_invariants(const IntMatrix& a) {
  IntMatrix m = a;
  const int rows = m.rows(), cols = m.cols();
  std::vector<Integer> diag;
  for (int t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      int br = -1, bc = -1;
      for (int r = t; r < rows; ++r) {
        for (int c = t; c < cols; ++c) {
          if (m(r, c).is_zero()) continue;
          if (br < 0 || abs(m(r, c)) < abs(m(br, bc))) br = r, bc = c;
        }
      }
      if (br < 0) goto finish;
      for (int c = 0; c < cols; ++c) std::swap(m(t, c), m(br, c));
      for (int r = 0; r < rows; ++r) std::swap(m(r, t), m(r, bc));
      bool clean = true;
      for (int r = t + 1; r < rows; ++r) {
        if (m(r, t).is_zero()) continue;
        Integer q = floor_div(m(r, t), m(t, t));
        for (int c = t; c < cols; ++c) m(r, c).add_mul(-q, m(t, c));
        if (!m(r, t).is_zero()) clean = false;
      }
      for (int c = t + 1; c < cols; ++c) {
        if (m(t, c).is_zero()) continue;
        Integer q = floor_div(m(t, c), m(t, t));
        for (int r = t; r < rows; ++r) m(r, c).add_mul(-q, m(r, t));
        if (!m(t, c).is_zero()) clean = false;
      }
      if (!clean) continue;
      // divisibility of the remaining block by the pivot
      int bad = -1;
      for (int r = t + 1; r < rows && bad < 0; ++r) {
        for (int c = t + 1; c < cols; ++c) {
          if (!divides(m(t, t), m(r, c))) {
            bad = r;
            break;
          }
        }
      }
      if (bad < 0) break;
      for (int c = t; c < cols; ++c) m(t, c) += m(bad, c);
    }
    diag.push_back(abs(m(t, t)));
  }
finish:
  return diag;
}

std::optional<IntegerSolution> solve_integer(const IntMatrix& a, std::span<const Integer> b) {
  if (static_cast<int>(b.size()) != a.rows()) throw InputError("right-hand side length mismatch");
  HnfResult f = hnf(a);
  const int rank = f.rank();
  IntVector y(a.cols());
  for (int k = 0; k < rank; ++k) {
    const int r = f.pivot_rows[k];
    Integer rest = b[r];
    for (int j = 0; j < k; ++j) rest.add_mul(-f.h(r, j), y[j]);
    if (!divides(f.h(r, k), rest)) return std::nullopt;
    y[k] = floor_div(rest, f.h(r, k));
  }
  IntegerSolution sol;
  sol.particular = f.u * std::span<const Integer>(y);
  if (a * std::span<const Integer>(sol.particular) != IntVector(b.begin(), b.end())) return std::nullopt;
  for (int k = rank; k < a.cols(); ++k) sol.null_basis.push_back(f.u.column(k));
  return sol;
}

bool in_lattice(std::span<const Integer> v, std::span<const IntVector> gens) {
  if (gens.empty()) return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x.is_zero(); });
  return solve_integer(IntMatrix::from_columns(static_cast<int>(v.size()), gens), v).has_value();
}

}  // namespace linkhom
