#pragma once

/*
 * Dense matrices over Scalar with exact elimination.  Verdicts (determinant
 * signs, ranks, positive definiteness) never touch floating point: they come
 * from fraction-free elimination plus the scalar sign oracle.
 */

#include <optional>
#include <vector>

#include "slp/scalar.hpp"

namespace slp {

struct ScalarMatrix {
  FieldPtr field = field_rationals();
  std::vector<long> row_ids;  // labels (e.g. poset node ids); may be empty
  std::vector<long> col_ids;
  std::vector<std::vector<Scalar>> a;  // a[i][j], rows() x cols()

  int rows() const { return static_cast<int>(a.size()); }
  int cols() const { return a.empty() ? 0 : static_cast<int>(a[0].size()); }

  static ScalarMatrix zero(const FieldPtr& f, int rows, int cols);
  static ScalarMatrix identity(const FieldPtr& f, int n);

  Scalar& at(int i, int j) { return a[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
  const Scalar& at(int i, int j) const { return a[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
};

ScalarMatrix multiply(const ScalarMatrix& x, const ScalarMatrix& y);
ScalarMatrix transpose(const ScalarMatrix& x);
bool equal_entries(const ScalarMatrix& x, const ScalarMatrix& y);
std::vector<Scalar> matvec(const ScalarMatrix& m, const std::vector<Scalar>& v);

// Determinant by fraction-free (Bareiss) elimination; square input.
Scalar determinant(const ScalarMatrix& m);

int rank(const ScalarMatrix& m);

// Gauss-Jordan inverse; nullopt when singular.
std::optional<ScalarMatrix> inverse(const ScalarMatrix& m);

// Solve m * x = rhs for one column vector.  Free coordinates are set to zero,
// so this picks a deterministic particular solution; nullopt if inconsistent.
std::optional<std::vector<Scalar>> solve(const ScalarMatrix& m, const std::vector<Scalar>& rhs);

// Basis of the right nullspace, each vector of length cols().
std::vector<std::vector<Scalar>> nullspace(const ScalarMatrix& m);

// Determinants of the leading principal k x k blocks, k = 1..n.
std::vector<Scalar> leading_principal_minors(const ScalarMatrix& m);

// Symmetric input; Sylvester criterion via the sign oracle.
bool is_positive_definite(const ScalarMatrix& m);

// Does a permutation p exist with x[p(i)][p(j)] == y[i][j] for all i, j?
// Returns one such p if so.
std::optional<std::vector<int>> simultaneous_permutation_match(const ScalarMatrix& x,
                                                               const ScalarMatrix& y);

// Row-reduced echelon data for reuse: pivot column per row, reduced rows.
struct Echelon {
  std::vector<std::vector<Scalar>> rows;  // reduced, pivots normalized to 1
  std::vector<int> pivot_cols;            // one per row, strictly increasing? no: per row order
};

// Echelonize a span of row vectors (destructive copy); pivots chosen left to
// right, rows fully reduced.  Used for ideal slices and complement picking.
Echelon row_reduce(std::vector<std::vector<Scalar>> rows, const FieldPtr& field);

// Reduce v against an echelon basis in place; returns the residue.
std::vector<Scalar> reduce_against(const Echelon& e, std::vector<Scalar> v);

}  // namespace slp
