#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <string>
#include <vector>

#include "slp/deform.hpp"
#include "slp/errors.hpp"
#include "slp/lefschetz.hpp"

using namespace slp;

namespace {

Rational binom(long n, long k) {
  if (k < 0 || k > n) return Rational(0);
  mpz_class z;
  mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(z);
}

FibrationData fibration_of(const std::string& type, const std::vector<int>& idx) {
  RootSystem rs = build_root_system(CoxeterType::parse(type));
  return fibration_validate(rs, make_theta(rs, idx));
}

// The behavioral contract of a completed scan: every D_k(0) is nonzero, the
// chosen t0 is the smallest positive integer clearing every root, and the
// final element passes the direct check.
void check_scan(const FibrationData& fd, const DeformationReport& rep) {
  REQUIRE(!rep.dk.empty());
  FieldPtr f = fd.rs.field;
  for (const DeformationEntry& entry : rep.dk) {
    CHECK(!entry.at_zero.is_zero());
    CHECK(!entry.tensor_ratio.is_zero());
    CHECK(entry.at_zero == entry.coeffs[0]);
  }
  auto value = [&](const DeformationEntry& entry, long t) {
    Scalar acc(f);
    Scalar ts(f, Rational(t));
    for (size_t k = entry.coeffs.size(); k-- > 0;) acc = acc * ts + entry.coeffs[k];
    return acc;
  };
  REQUIRE(rep.t0 >= 1);
  for (const DeformationEntry& entry : rep.dk) CHECK(!value(entry, rep.t0).is_zero());
  for (long t = 1; t < rep.t0; ++t) {
    bool blocked = false;
    for (const DeformationEntry& entry : rep.dk)
      if (value(entry, t).is_zero()) blocked = true;
    CHECK(blocked);
  }
  CHECK(rep.composition_ok);
  CHECK(rep.change_of_base_ok);
  CHECK(rep.final_check.pass);
  CHECK(rep.pass);
}

}  // namespace

TEST_CASE("binomial matrix check") {
  FieldPtr q = field_rationals();

  BinomialCheck c = binomial_matrix_check(1, 1, 0);
  REQUIRE(c.matrix.rows() == 1);
  REQUIRE(c.matrix.cols() == 1);
  CHECK(c.matrix.at(0, 0) == Scalar(q, Rational(2)));
  CHECK(c.determinant == Scalar(q, Rational(2)));
  CHECK(c.nonzero);

  c = binomial_matrix_check(0, 5, 2);
  REQUIRE(c.matrix.rows() == 1);
  CHECK(c.matrix.at(0, 0) == Scalar(q, Rational(1)));
  CHECK(c.determinant == Scalar(q, Rational(1)));

  // entries follow the closed form in both index regimes
  c = binomial_matrix_check(3, 5, 2);  // i <= n: (i+1)^2 with binom(d-2i, n-i+j-k)
  REQUIRE(c.matrix.rows() == 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      CHECK(c.matrix.at(j, k) == Scalar(q, binom(4, 1 + j - k)));
  c = binomial_matrix_check(2, 6, 4);  // n < i: (n+1)^2 with binom(d-2i, j-k)
  REQUIRE(c.matrix.rows() == 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      CHECK(c.matrix.at(j, k) == Scalar(q, binom(0, j - k)));

  // every truncated bivariate line up to 8 has invertible Lefschetz maps;
  // the check itself compares the closed form against ring multiplication
  for (int n = 0; n <= 8; ++n)
    for (int m = n; m <= 8; ++m)
      for (int i = 0; 2 * i <= n + m; ++i) CHECK(binomial_matrix_check(n, m, i).nonzero);

  CHECK_THROWS_AS(binomial_matrix_check(3, 2, 0), ParameterError);
  CHECK_THROWS_AS(binomial_matrix_check(2, 3, 3), ParameterError);
  CHECK_THROWS_AS(binomial_matrix_check(-1, 2, 0), ParameterError);
}

TEST_CASE("tensor product of verified algebras") {
  FieldPtr q = field_rationals();
  Scalar one(q, Rational(1));
  GradedAlgebra p1 = truncated_line(q, 1);
  GradedAlgebra p2 = truncated_line(q, 2);
  GradedAlgebra p3 = truncated_line(q, 3);
  GradedAlgebra point = truncated_line(q, 0);

  TensorAlgebra t = tensor_product_algebra(p1, {one}, p1, {one});
  CHECK(t.algebra.dims == std::vector<int>{1, 2, 1});
  REQUIRE(t.strong.degrees.size() == 2);
  CHECK(t.strong.degrees[0].sign != 0);
  CHECK(t.strong.degrees[1].sign != 0);
  CHECK(t.strong.pass);

  t = tensor_product_algebra(p2, {one}, p3, {one});
  CHECK(t.algebra.dims == std::vector<int>{1, 2, 3, 3, 2, 1});
  CHECK(t.strong.pass);

  // tensoring with a point changes nothing
  t = tensor_product_algebra(p3, {one}, point, {});
  CHECK(t.algebra.dims == p3.dims);
  StrongReport direct = strong_lefschetz_on_algebra(p3, {one});
  REQUIRE(t.strong.degrees.size() == direct.degrees.size());
  for (size_t k = 0; k < direct.degrees.size(); ++k)
    CHECK(t.strong.degrees[k].determinant == direct.degrees[k].determinant);
  t = tensor_product_algebra(point, {}, p3, {one});
  CHECK(t.algebra.dims == p3.dims);

  // unverified factors are rejected up front
  Scalar zero(q);
  CHECK_THROWS_AS(tensor_product_algebra(p1, {zero}, p1, {one}), PreconditionError);
  CHECK_THROWS_AS(tensor_product_algebra(p1, {one}, p2, {zero}), PreconditionError);
}

TEST_CASE("tensor multiplication matches the binomial closed form") {
  FieldPtr q = field_rationals();
  Scalar one(q, Rational(1));
  for (int n = 0; n <= 4; ++n)
    for (int m = n; m <= 4; ++m) {
      GradedAlgebra pn = truncated_line(q, n);
      GradedAlgebra pm = truncated_line(q, m);
      TensorAlgebra t = tensor_product_algebra(pn, n > 0 ? std::vector<Scalar>{one}
                                                         : std::vector<Scalar>{},
                                               pm, m > 0 ? std::vector<Scalar>{one}
                                                         : std::vector<Scalar>{});
      int d = n + m;
      for (int i = 0; 2 * i <= d; ++i) {
        ScalarMatrix path = map_power(t.algebra, t.omega, i, d - 2 * i);
        ScalarMatrix closed = binomial_matrix_check(n, m, i).matrix;
        REQUIRE(path.rows() == closed.rows());
        REQUIRE(path.cols() == closed.cols());
        CHECK(equal_entries(path, closed));
      }
    }
}

TEST_CASE("parabolic classification") {
  RootSystem a3 = build_root_system(CoxeterType::parse("A3"));
  RootSystem b3 = build_root_system(CoxeterType::parse("B3"));
  RootSystem d4 = build_root_system(CoxeterType::parse("D4"));
  RootSystem d5 = build_root_system(CoxeterType::parse("D5"));
  RootSystem i27 = build_root_system(CoxeterType::parse("I2(7)"));

  CHECK(classify_parabolic(a3, {0}).type.name() == "A1");
  CHECK(classify_parabolic(a3, {0, 1}).type.name() == "A2");
  CHECK(classify_parabolic(a3, {0, 1}).order == std::vector<int>{0, 1});
  CHECK(classify_parabolic(a3, {1, 2}).type.name() == "A2");
  CHECK_THROWS_AS(classify_parabolic(a3, {0, 2}), UnsupportedError);

  CHECK(classify_parabolic(b3, {0, 1}).type.name() == "A2");
  CHECK(classify_parabolic(b3, {1, 2}).type.name() == "B2");
  CHECK(classify_parabolic(b3, {1, 2}).order == std::vector<int>{1, 2});
  CHECK(classify_parabolic(b3, {2}).type.name() == "A1");
  CHECK(classify_parabolic(b3, {0, 1, 2}).type.name() == "B3");
  CHECK(classify_parabolic(b3, {0, 1, 2}).order == std::vector<int>{0, 1, 2});

  CHECK(classify_parabolic(d4, {1, 2, 3}).type.name() == "A3");
  CHECK(classify_parabolic(d4, {0, 1, 2, 3}).type.name() == "D4");
  CHECK_THROWS_AS(classify_parabolic(d4, {0, 2, 3}), UnsupportedError);
  CHECK(classify_parabolic(d5, {1, 2, 3, 4}).type.name() == "D4");
  CHECK(classify_parabolic(d5, {1, 2, 3, 4}).order == std::vector<int>{1, 2, 3, 4});
  CHECK(classify_parabolic(d5, {0, 1, 2, 3, 4}).type.name() == "D5");
  CHECK(classify_parabolic(d5, {0, 1, 2, 3, 4}).order == std::vector<int>{0, 1, 2, 3, 4});

  CHECK(classify_parabolic(i27, {0}).type.name() == "A1");
  CHECK(classify_parabolic(i27, {0, 1}).type.name() == "I2(7)");

  CHECK_THROWS_AS(classify_parabolic(a3, {}), ParameterError);
  CHECK_THROWS_AS(classify_parabolic(a3, {5}), ParameterError);
  RootSystem h3 = build_root_system(CoxeterType::parse("H3"));
  CHECK_THROWS_AS(classify_parabolic(h3, {0, 1}), UnsupportedError);
}

TEST_CASE("fibration structure over a parabolic") {
  FibrationData fd = fibration_of("A2", {0});
  CHECK(fd.b_alg.dims == std::vector<int>{1, 1, 1});
  CHECK(fd.f_alg.dims == std::vector<int>{1, 1});
  CHECK(fd.e_alg.dims == std::vector<int>{1, 2, 2, 1});
  CHECK(fd.b_strong.pass);
  CHECK(fd.f_strong.pass);
  CHECK(fd.f_type.name() == "A1");

  // restriction kills positive-degree invariants and splits off the section
  int ftop = fd.f_alg.top();
  int b = fd.b_alg.top();
  for (int g = 1; g <= (b < ftop ? b : ftop); ++g) {
    ScalarMatrix prod = multiply(fd.iota[static_cast<size_t>(g)], fd.pi[static_cast<size_t>(g)]);
    for (int i = 0; i < prod.rows(); ++i)
      for (int j = 0; j < prod.cols(); ++j) CHECK(prod.at(i, j).is_zero());
  }
  for (int h = 0; h <= ftop; ++h) {
    ScalarMatrix comp =
        multiply(fd.iota[static_cast<size_t>(h)], fd.section[static_cast<size_t>(h)]);
    CHECK(equal_entries(comp, ScalarMatrix::identity(fd.rs.field, comp.rows())));
  }
  for (const ScalarMatrix& m : fd.module_change) CHECK(determinant(m).sign() != 0);

  FibrationData lng = fibration_of("B2", {0});
  CHECK(lng.b_alg.dims == std::vector<int>{1, 1, 1, 1});
  CHECK(lng.e_alg.dims == std::vector<int>{1, 2, 2, 2, 1});
  FibrationData sht = fibration_of("B2", {1});
  CHECK(sht.b_alg.dims == std::vector<int>{1, 1, 1, 1});
  CHECK(sht.f_alg.dims == std::vector<int>{1, 1});

  CHECK_THROWS_AS(fibration_of("F4", {0, 1, 2}), UnsupportedError);
  CHECK_THROWS_AS(fibration_of("H3", {0, 1}), UnsupportedError);
  CHECK_THROWS_AS(fibration_of("A5", {0, 1, 2, 3}), ParameterError);
  {
    RootSystem a2 = build_root_system(CoxeterType::parse("A2"));
    CHECK_THROWS_AS(fibration_validate(a2, make_theta(a2, {})), UnsupportedError);
  }
}

TEST_CASE("trivial fibration over the full subset") {
  FibrationData fd = fibration_of("A2", {0, 1});
  CHECK(fd.b_alg.dims == std::vector<int>{1});
  CHECK(fd.lambda_b.empty());
  DeformationReport rep = deformation_scan(fd);
  CHECK(rep.t0 == 1);
  for (const DeformationEntry& entry : rep.dk) CHECK(entry.coeffs.size() == 1);
  check_scan(fd, rep);
}

TEST_CASE("deformation scan certifies the coinvariant algebra" * doctest::timeout(120)) {
  struct Case {
    const char* type;
    std::vector<int> idx;
  };
  for (const Case& c : {Case{"A2", {0}}, Case{"A3", {0, 1}}, Case{"B2", {0}}, Case{"B2", {1}},
                        Case{"I2(5)", {0}}, Case{"B3", {1, 2}}}) {
    CAPTURE(c.type);
    FibrationData fd = fibration_of(c.type, c.idx);
    DeformationReport rep = deformation_scan(fd);
    check_scan(fd, rep);
    // the certified element really is pi(lambda) + t0 x
    StrongReport again = strong_lefschetz_on_algebra(fd.e_alg, rep.final_element);
    CHECK(again.pass);
  }

  FibrationData tampered = fibration_of("A2", {0});
  tampered.b_strong.pass = false;
  CHECK_THROWS_AS(deformation_scan(tampered), PreconditionError);
}
