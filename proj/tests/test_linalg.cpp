#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slp/errors.hpp"
#include "slp/linalg.hpp"

using namespace slp;

namespace {

ScalarMatrix from_longs(const std::vector<std::vector<long>>& rows) {
  ScalarMatrix m = ScalarMatrix::zero(field_rationals(), static_cast<int>(rows.size()),
                                      rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      m.at(i, j) = Scalar(Rational(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]));
  return m;
}

Scalar q(long num, long den = 1) { return Scalar(Rational(num, den)); }

}  // namespace

TEST_CASE("determinant basics") {
  CHECK(determinant(from_longs({{1, 2}, {3, 4}})) == q(-2));
  CHECK(determinant(ScalarMatrix::identity(field_rationals(), 5)) == q(1));
  CHECK(determinant(from_longs({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == q(0));
  CHECK(determinant(from_longs({{0, 1}, {1, 0}})) == q(-1));  // needs a pivot swap
  CHECK_THROWS_AS(determinant(from_longs({{1, 2, 3}, {4, 5, 6}})), ParameterError);
}

TEST_CASE("Hilbert 3x3 determinant") {
  ScalarMatrix h = ScalarMatrix::zero(field_rationals(), 3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h.at(i, j) = q(1, i + j + 1);
  CHECK(determinant(h) == q(1, 2160));
}

TEST_CASE("determinant over an irrational field") {
  FieldPtr f = field_quadratic(5);
  Scalar phi(f, {Rational(1, 2), Rational(1, 2)});
  ScalarMatrix m = ScalarMatrix::zero(f, 2, 2);
  m.at(0, 0) = phi;
  m.at(0, 1) = Scalar(f, Rational(1));
  m.at(1, 0) = Scalar(f, Rational(1));
  m.at(1, 1) = phi;
  CHECK(determinant(m) == phi * phi - Scalar(f, Rational(1)));
  CHECK(determinant(m) == phi);  // phi^2 - 1 = phi
}

TEST_CASE("rank and nullspace") {
  ScalarMatrix m = from_longs({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}});
  CHECK(rank(m) == 2);
  auto ns = nullspace(m);
  REQUIRE(ns.size() == 1);
  for (int i = 0; i < 3; ++i) {
    Scalar s = Scalar(m.field);
    for (int j = 0; j < 3; ++j) s += m.at(i, j) * ns[0][static_cast<size_t>(j)];
    CHECK(s.is_zero());
  }
  CHECK(rank(ScalarMatrix::zero(field_rationals(), 3, 4)) == 0);
  CHECK(nullspace(ScalarMatrix::identity(field_rationals(), 3)).empty());
}

TEST_CASE("inverse round trip and singular detection") {
  ScalarMatrix m = from_longs({{2, 1, 0}, {1, 2, 1}, {0, 1, 2}});
  auto inv = inverse(m);
  REQUIRE(inv.has_value());
  CHECK(equal_entries(multiply(m, *inv), ScalarMatrix::identity(field_rationals(), 3)));
  CHECK(equal_entries(multiply(*inv, m), ScalarMatrix::identity(field_rationals(), 3)));
  CHECK(!inverse(from_longs({{1, 2}, {2, 4}})).has_value());
}

TEST_CASE("solve: unique, overdetermined, underdetermined, inconsistent") {
  auto check_solves = [](const ScalarMatrix& m, const std::vector<Scalar>& rhs) {
    auto x = solve(m, rhs);
    REQUIRE(x.has_value());
    auto got = matvec(m, *x);
    for (size_t i = 0; i < rhs.size(); ++i) CHECK(got[i] == rhs[i]);
  };
  check_solves(from_longs({{2, 1}, {1, 3}}), {q(5), q(10)});
  // Overdetermined but consistent: columns (1,1,1) and (1,2,3).
  check_solves(from_longs({{1, 1}, {1, 2}, {1, 3}}), {q(3), q(5), q(7)});
  // Underdetermined: a particular solution is still exact.
  check_solves(from_longs({{1, 1, 1}}), {q(6)});
  CHECK(!solve(from_longs({{1, 1}, {1, 1}}), {q(0), q(1)}).has_value());
}

TEST_CASE("matvec shape check") {
  CHECK_THROWS_AS(matvec(from_longs({{1, 2}}), {q(1)}), ParameterError);
}

TEST_CASE("leading principal minors and positive definiteness") {
  ScalarMatrix m = from_longs({{2, 1}, {1, 2}});
  auto minors = leading_principal_minors(m);
  REQUIRE(minors.size() == 2);
  CHECK(minors[0] == q(2));
  CHECK(minors[1] == q(3));
  CHECK(is_positive_definite(m));
  CHECK(!is_positive_definite(from_longs({{1, 2}, {2, 1}})));
  CHECK(!is_positive_definite(from_longs({{0, 0}, {0, 1}})));
  CHECK_THROWS_AS(is_positive_definite(from_longs({{1, 2}, {0, 1}})), PreconditionError);
}

TEST_CASE("positive definiteness with irrational entries") {
  FieldPtr f = field_quadratic(5);
  Scalar phi(f, {Rational(1, 2), Rational(1, 2)});
  ScalarMatrix m = ScalarMatrix::zero(f, 2, 2);
  m.at(0, 0) = Scalar(f, Rational(2));
  m.at(0, 1) = phi;
  m.at(1, 0) = phi;
  m.at(1, 1) = Scalar(f, Rational(2));
  CHECK(is_positive_definite(m));  // 4 - phi^2 = 3 - phi > 0
  m.at(0, 1) = phi + Scalar(f, Rational(1));
  m.at(1, 0) = m.at(0, 1);
  CHECK(!is_positive_definite(m));  // 4 - (phi+1)^2 = 4 - phi - 2phi - 2 < 0
}

TEST_CASE("simultaneous permutation matching") {
  // y is x relabeled through the permutation p = (0 2 1): x[p(i)][p(j)] == y[i][j].
  ScalarMatrix x = from_longs({{2, 1, 0}, {1, 2, 5}, {0, 5, 2}});
  ScalarMatrix y = from_longs({{2, 5, 1}, {5, 2, 0}, {1, 0, 2}});
  auto p = simultaneous_permutation_match(x, y);
  REQUIRE(p.has_value());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(x.at((*p)[static_cast<size_t>(i)], (*p)[static_cast<size_t>(j)]) == y.at(i, j));
  CHECK(simultaneous_permutation_match(x, x).has_value());
  CHECK(!simultaneous_permutation_match(x, from_longs({{2, 1, 0}, {1, 2, 5}, {0, 5, 3}})).has_value());
  CHECK(!simultaneous_permutation_match(x, from_longs({{2, 1}, {1, 2}})).has_value());
}

TEST_CASE("row reduction and residues") {
  std::vector<std::vector<Scalar>> rows = {
      {q(1), q(2), q(3)},
      {q(2), q(4), q(6)},
      {q(0), q(1), q(1)},
  };
  Echelon e = row_reduce(rows, field_rationals());
  CHECK(e.rows.size() == 2);
  CHECK(reduce_against(e, {q(1), q(3), q(4)}) == std::vector<Scalar>{q(0), q(0), q(0)});
  auto res = reduce_against(e, {q(0), q(0), q(1)});
  bool nonzero = false;
  for (const auto& s : res) nonzero = nonzero || !s.is_zero();
  CHECK(nonzero);
}
