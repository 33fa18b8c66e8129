#include "slp/linalg.hpp"

#include <algorithm>

namespace slp {

ScalarMatrix ScalarMatrix::zero(const FieldPtr& f, int rows, int cols) {
  ScalarMatrix m;
  m.field = f;
  m.a.assign(static_cast<size_t>(rows), std::vector<Scalar>(static_cast<size_t>(cols), Scalar(f)));
  return m;
}

ScalarMatrix ScalarMatrix::identity(const FieldPtr& f, int n) {
  ScalarMatrix m = zero(f, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(f, Rational(1));
  return m;
}

ScalarMatrix multiply(const ScalarMatrix& x, const ScalarMatrix& y) {
  if (x.cols() != y.rows()) throw ParameterError("matrix product shape mismatch");
  ScalarMatrix r = ScalarMatrix::zero(x.field, x.rows(), y.cols());
  r.row_ids = x.row_ids;
  r.col_ids = y.col_ids;
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < x.cols(); ++k) {
      if (x.at(i, k).is_zero()) continue;
      for (int j = 0; j < y.cols(); ++j) {
        if (y.at(k, j).is_zero()) continue;
        r.at(i, j) += x.at(i, k) * y.at(k, j);
      }
    }
  return r;
}

ScalarMatrix transpose(const ScalarMatrix& x) {
  ScalarMatrix r = ScalarMatrix::zero(x.field, x.cols(), x.rows());
  r.row_ids = x.col_ids;
  r.col_ids = x.row_ids;
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) r.at(j, i) = x.at(i, j);
  return r;
}

std::vector<Scalar> matvec(const ScalarMatrix& m, const std::vector<Scalar>& v) {
  if (m.cols() != static_cast<int>(v.size())) throw ParameterError("matvec shape mismatch");
  std::vector<Scalar> r(static_cast<size_t>(m.rows()), Scalar(m.field));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (m.at(i, j).is_zero() || v[static_cast<size_t>(j)].is_zero()) continue;
      r[static_cast<size_t>(i)] += m.at(i, j) * v[static_cast<size_t>(j)];
    }
  return r;
}

bool equal_entries(const ScalarMatrix& x, const ScalarMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j)
      if (x.at(i, j) != y.at(i, j)) return false;
  return true;
}

Scalar determinant(const ScalarMatrix& m) {
  if (m.rows() != m.cols()) throw ParameterError("determinant of non-square matrix");
  int n = m.rows();
  Scalar one(m.field, Rational(1));
  if (n == 0) return one;
  auto a = m.a;
  // Bareiss: divisions by the previous pivot are exact.
  Scalar prev = one;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[static_cast<size_t>(k)][static_cast<size_t>(k)].is_zero()) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (!a[static_cast<size_t>(i)][static_cast<size_t>(k)].is_zero()) {
          p = i;
          break;
        }
      if (p < 0) return Scalar(m.field);  // singular
      std::swap(a[static_cast<size_t>(k)], a[static_cast<size_t>(p)]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            (a[static_cast<size_t>(i)][static_cast<size_t>(j)] * a[static_cast<size_t>(k)][static_cast<size_t>(k)] -
             a[static_cast<size_t>(i)][static_cast<size_t>(k)] * a[static_cast<size_t>(k)][static_cast<size_t>(j)]) /
            prev;
      }
    prev = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
  }
  Scalar det = a[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
  if (sign < 0) det = -det;
  return det;
}

namespace {

// Shared echelonization for rank/inverse/solve/nullspace: standard exact
// Gaussian elimination with full row reduction.
struct GaussResult {
  std::vector<std::vector<Scalar>> rows;
  std::vector<int> pivot_of_row;
  std::vector<int> row_of_col;  // -1 if column has no pivot
};

GaussResult gauss(std::vector<std::vector<Scalar>> rows, const FieldPtr& field, int ncols) {
  GaussResult g;
  g.row_of_col.assign(static_cast<size_t>(ncols), -1);
  for (auto& r : rows) {
    // reduce against existing pivots
    for (size_t k = 0; k < g.rows.size(); ++k) {
      int pc = g.pivot_of_row[k];
      if (!r[static_cast<size_t>(pc)].is_zero()) {
        Scalar f = r[static_cast<size_t>(pc)];
        for (int j = 0; j < ncols; ++j) r[static_cast<size_t>(j)] -= f * g.rows[k][static_cast<size_t>(j)];
      }
    }
    int pc = -1;
    for (int j = 0; j < ncols; ++j)
      if (!r[static_cast<size_t>(j)].is_zero()) {
        pc = j;
        break;
      }
    if (pc < 0) continue;
    Scalar inv = r[static_cast<size_t>(pc)].inverse();
    for (int j = 0; j < ncols; ++j) r[static_cast<size_t>(j)] *= inv;
    // back-substitute into earlier rows
    for (size_t k = 0; k < g.rows.size(); ++k) {
      if (!g.rows[k][static_cast<size_t>(pc)].is_zero()) {
        Scalar f = g.rows[k][static_cast<size_t>(pc)];
        for (int j = 0; j < ncols; ++j)
          g.rows[k][static_cast<size_t>(j)] -= f * r[static_cast<size_t>(j)];
      }
    }
    g.row_of_col[static_cast<size_t>(pc)] = static_cast<int>(g.rows.size());
    g.pivot_of_row.push_back(pc);
    g.rows.push_back(std::move(r));
  }
  (void)field;
  return g;
}

}  // namespace

int rank(const ScalarMatrix& m) {
  auto g = gauss(m.a, m.field, m.cols());
  return static_cast<int>(g.rows.size());
}

std::optional<ScalarMatrix> inverse(const ScalarMatrix& m) {
  if (m.rows() != m.cols()) throw ParameterError("inverse of non-square matrix");
  int n = m.rows();
  // augment with identity
  std::vector<std::vector<Scalar>> aug(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    aug[static_cast<size_t>(i)] = m.a[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j)
      aug[static_cast<size_t>(i)].push_back(i == j ? Scalar(m.field, Rational(1)) : Scalar(m.field));
  }
  auto g = gauss(std::move(aug), m.field, 2 * n);
  if (static_cast<int>(g.rows.size()) != n) return std::nullopt;
  ScalarMatrix inv = ScalarMatrix::zero(m.field, n, n);
  inv.row_ids = m.col_ids;
  inv.col_ids = m.row_ids;
  for (int i = 0; i < n; ++i) {
    int r = g.row_of_col[static_cast<size_t>(i)];
    if (r < 0) return std::nullopt;  // pivot landed right of column n: singular
    for (int j = 0; j < n; ++j) inv.at(i, j) = g.rows[static_cast<size_t>(r)][static_cast<size_t>(n + j)];
  }
  return inv;
}

std::optional<std::vector<Scalar>> solve(const ScalarMatrix& m, const std::vector<Scalar>& rhs) {
  if (m.rows() != static_cast<int>(rhs.size())) throw ParameterError("solve shape mismatch");
  int n = m.cols();
  std::vector<std::vector<Scalar>> aug(static_cast<size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) {
    aug[static_cast<size_t>(i)] = m.a[static_cast<size_t>(i)];
    aug[static_cast<size_t>(i)].push_back(rhs[static_cast<size_t>(i)]);
  }
  auto g = gauss(std::move(aug), m.field, n + 1);
  std::vector<Scalar> x(static_cast<size_t>(n), Scalar(m.field));
  for (size_t r = 0; r < g.rows.size(); ++r) {
    int pc = g.pivot_of_row[r];
    if (pc == n) return std::nullopt;  // inconsistent
    x[static_cast<size_t>(pc)] = g.rows[r][static_cast<size_t>(n)];
    // columns right of the pivot that are free must be zero for uniqueness;
    // callers use this on full-column-rank systems, so just check consistency.
  }
  // verify (covers the underdetermined case)
  for (int i = 0; i < m.rows(); ++i) {
    Scalar acc(m.field);
    for (int j = 0; j < n; ++j) acc += m.at(i, j) * x[static_cast<size_t>(j)];
    if (acc != rhs[static_cast<size_t>(i)]) return std::nullopt;
  }
  return x;
}

std::vector<std::vector<Scalar>> nullspace(const ScalarMatrix& m) {
  int n = m.cols();
  auto g = gauss(m.a, m.field, n);
  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (int pc : g.pivot_of_row) is_pivot[static_cast<size_t>(pc)] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[static_cast<size_t>(j)]) continue;
    std::vector<Scalar> v(static_cast<size_t>(n), Scalar(m.field));
    v[static_cast<size_t>(j)] = Scalar(m.field, Rational(1));
    for (size_t r = 0; r < g.rows.size(); ++r) {
      int pc = g.pivot_of_row[r];
      v[static_cast<size_t>(pc)] = -g.rows[r][static_cast<size_t>(j)];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Scalar> leading_principal_minors(const ScalarMatrix& m) {
  if (m.rows() != m.cols()) throw ParameterError("principal minors of non-square matrix");
  std::vector<Scalar> minors;
  for (int k = 1; k <= m.rows(); ++k) {
    ScalarMatrix sub = ScalarMatrix::zero(m.field, k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub.at(i, j) = m.at(i, j);
    minors.push_back(determinant(sub));
  }
  return minors;
}

bool is_positive_definite(const ScalarMatrix& m) {
  if (m.rows() != m.cols()) throw ParameterError("positive definiteness of non-square matrix");
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      if (m.at(i, j) != m.at(j, i)) throw PreconditionError("matrix is not symmetric");
  for (const Scalar& d : leading_principal_minors(m))
    if (d.sign() <= 0) return false;
  return true;
}

std::optional<std::vector<int>> simultaneous_permutation_match(const ScalarMatrix& x,
                                                               const ScalarMatrix& y) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows()) return std::nullopt;
  int n = x.rows();
  std::vector<int> perm(static_cast<size_t>(n), -1);
  std::vector<bool> used(static_cast<size_t>(n), false);
  // backtracking on p: x[p(i)][p(j)] == y[i][j]
  auto consistent = [&](int i, int pi) {
    if (x.at(pi, pi) != y.at(i, i)) return false;
    for (int j = 0; j < i; ++j) {
      int pj = perm[static_cast<size_t>(j)];
      if (x.at(pi, pj) != y.at(i, j)) return false;
      if (x.at(pj, pi) != y.at(j, i)) return false;
    }
    return true;
  };
  std::vector<int> stack_choice(static_cast<size_t>(n), 0);
  int i = 0;
  while (i >= 0) {
    if (i == n) return perm;
    bool advanced = false;
    for (int pi = stack_choice[static_cast<size_t>(i)]; pi < n; ++pi) {
      if (used[static_cast<size_t>(pi)] || !consistent(i, pi)) continue;
      perm[static_cast<size_t>(i)] = pi;
      used[static_cast<size_t>(pi)] = true;
      stack_choice[static_cast<size_t>(i)] = pi + 1;
      ++i;
      if (i < n) stack_choice[static_cast<size_t>(i)] = 0;
      advanced = true;
      break;
    }
    if (!advanced) {
      stack_choice[static_cast<size_t>(i)] = 0;
      --i;
      if (i >= 0) {
        used[static_cast<size_t>(perm[static_cast<size_t>(i)])] = false;
        perm[static_cast<size_t>(i)] = -1;
      }
    }
  }
  return std::nullopt;
}

Echelon row_reduce(std::vector<std::vector<Scalar>> rows, const FieldPtr& field) {
  int ncols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  auto g = gauss(std::move(rows), field, ncols);
  Echelon e;
  e.rows = std::move(g.rows);
  e.pivot_cols = std::move(g.pivot_of_row);
  return e;
}

std::vector<Scalar> reduce_against(const Echelon& e, std::vector<Scalar> v) {
  for (size_t k = 0; k < e.rows.size(); ++k) {
    int pc = e.pivot_cols[k];
    if (!v[static_cast<size_t>(pc)].is_zero()) {
      Scalar f = v[static_cast<size_t>(pc)];
      for (size_t j = 0; j < v.size(); ++j) v[j] -= f * e.rows[k][j];
    }
  }
  return v;
}

}  // namespace slp
