#pragma once

/*
 * Exact arithmetic in small real algebraic number fields Q(theta).
 *
 * Three kinds of field are supported:
 *   - the rationals,
 *   - Q(sqrt(d)) for square-free d >= 2, generator theta = +sqrt(d),
 *   - Q(2cos(pi/m)) for m >= 3, generator theta = 2cos(pi/m), whose minimal
 *     polynomial is extracted from the 2m-th cyclotomic polynomial via the
 *     substitution theta = zeta + 1/zeta.
 *
 * A Scalar is a coefficient tuple (c0..c_{k-1}) representing
 * c0 + c1*theta + ... reduced modulo the minimal polynomial.  Since the powers
 * 1, theta, ..., theta^{k-1} are a Q-basis, a scalar is zero exactly when all
 * coefficients are zero; the sign of a nonzero scalar is decided by interval
 * arithmetic on the real embedding, doubling the working precision until the
 * interval excludes zero.  No floating point value ever enters a verdict.
 *
 * Rationals embed into every field; scalars of two distinct irrational fields
 * never mix (FieldMismatchError), even when their values happen to be rational.
 */

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "slp/errors.hpp"

namespace slp {

using Rational = mpq_class;

enum class FieldKind { Rational, Quadratic, Cosine };

struct FieldDescriptor;
using FieldPtr = std::shared_ptr<const FieldDescriptor>;

struct FieldDescriptor {
  FieldKind kind = FieldKind::Rational;
  long param = 0;  // d for Quadratic, m for Cosine, 0 for Rational

  // Monic minimal polynomial of theta, coefficients c[0] + c[1] x + ... + x^deg
  // (c.size() == deg, the leading 1 is implicit).
  std::vector<Rational> minpoly;

  // theta^k for k in [deg, 2*deg-2], expressed in the power basis; used to
  // reduce products without repeated polynomial division.
  std::vector<std::vector<Rational>> power_table;

  int degree() const { return static_cast<int>(minpoly.size()); }
  std::string tag() const;
};

// Field constructors return shared descriptors; the rational field is a
// singleton so that pointer identity can be used as a fast path.
FieldPtr field_rationals();
FieldPtr field_quadratic(long d);
FieldPtr field_cosine(long m);  // m == 3 collapses to the rationals
FieldPtr field_from_tag(const std::string& tag);
bool same_field(const FieldPtr& a, const FieldPtr& b);

// Minimal polynomial of 2cos(pi/m) as a monic integer polynomial (full
// coefficient vector including the leading 1).  Exposed for tests.
std::vector<Rational> cosine_minimal_polynomial(long m);

// Cyclotomic polynomial Phi_n, full coefficient vector, low degree first.
std::vector<Rational> cyclotomic_polynomial(long n);

class Scalar {
 public:
  Scalar() : field_(field_rationals()), c_(1, Rational(0)) {}
  explicit Scalar(FieldPtr f);                     // zero of f
  Scalar(FieldPtr f, const Rational& value);       // embedded rational
  Scalar(FieldPtr f, std::vector<Rational> coeffs);
  explicit Scalar(const Rational& value);          // rational field
  explicit Scalar(long value);

  static Scalar generator(const FieldPtr& f);  // theta itself

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;       // all coefficients above degree 0 vanish
  Rational rational_value() const;  // requires is_rational()

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar inverse() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Sign of the real embedding: -1, 0, +1.  Exact zero test first, then
  // interval refinement starting at `start_bits` (0 = configured default).
  int sign(int start_bits = 0) const;

  // Total order induced by the real embedding (valid within one field).
  int compare(const Scalar& o) const;
  bool operator<(const Scalar& o) const { return compare(o) < 0; }

  std::string str() const;  // canonical text form, round-trips through parse
  static Scalar parse(const FieldPtr& f, std::string_view text);

  // double approximation, for log/report output only
  double approx() const;

 private:
  void reduce_after_mul(std::vector<Rational>& prod);

  FieldPtr field_;
  std::vector<Rational> c_;  // size == field_->degree()
};

// Promote a/b to a common field if one of them is rational-field valued.
// Throws FieldMismatchError for two distinct irrational fields.
void unify_fields(Scalar& a, Scalar& b);

// Default starting precision of the sign oracle; reads SLP_PRECISION_BITS once.
int sign_oracle_default_bits();

std::string rational_to_string(const Rational& q);
Rational rational_from_string(std::string_view s);

}  // namespace slp
