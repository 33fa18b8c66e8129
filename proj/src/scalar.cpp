#include "slp/scalar.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>

namespace slp {

namespace {

// ---- integer polynomial helpers (dense, low degree first) ----

using Poly = std::vector<Rational>;

int pdeg(const Poly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

void ptrim(Poly& p) { p.resize(static_cast<size_t>(pdeg(p) + 1)); }

// Exact division, throws if not divisible.
Poly pdivexact(Poly num, const Poly& den) {
  int dn = pdeg(num), dd = pdeg(den);
  if (dd < 0) throw DivisionByZeroError("polynomial division by zero");
  Poly q(static_cast<size_t>(std::max(dn - dd + 1, 0)), Rational(0));
  while (dn >= dd) {
    Rational f = num[static_cast<size_t>(dn)] / den[static_cast<size_t>(dd)];
    q[static_cast<size_t>(dn - dd)] = f;
    for (int i = 0; i <= dd; ++i)
      num[static_cast<size_t>(dn - dd + i)] -= f * den[static_cast<size_t>(i)];
    dn = pdeg(num);
  }
  if (dn >= 0) throw InvariantViolation("inexact polynomial division");
  return q;
}

}  // namespace

std::vector<Rational> cyclotomic_polynomial(long n) {
  if (n < 1) throw ParameterError("cyclotomic index must be positive");
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
  Poly num(static_cast<size_t>(n + 1), Rational(0));
  num[0] = -1;
  num[static_cast<size_t>(n)] = 1;
  for (long d = 1; d < n; ++d) {
    if (n % d == 0) num = pdivexact(num, cyclotomic_polynomial(d));
  }
  return num;
}

std::vector<Rational> cosine_minimal_polynomial(long m) {
  if (m < 3) throw ParameterError("cosine field requires m >= 3");
  Poly phi = cyclotomic_polynomial(2 * m);
  int deg = pdeg(phi);
  if (deg % 2 != 0) throw InvariantViolation("cyclotomic degree not even");
  int k = deg / 2;
  // phi is palindromic; write phi(x)/x^k = psi(x + 1/x) and peel psi off from
  // the top: maintain Laurent coefficients b[-k..k] as b[0..2k].
  Poly b(phi.begin(), phi.end());  // b[i] = coeff of x^{i-k}
  Poly psi(static_cast<size_t>(k + 1), Rational(0));
  for (int j = k; j >= 0; --j) {
    Rational a = b[static_cast<size_t>(k + j)];
    psi[static_cast<size_t>(j)] = a;
    // subtract a * (x + 1/x)^j = a * sum_s binom(j,s) x^{j-2s}
    Rational binom(1);
    for (int s = 0; s <= j; ++s) {
      b[static_cast<size_t>(k + j - 2 * s)] -= a * binom;
      binom = binom * (j - s) / (s + 1);
    }
  }
  for (const auto& r : b)
    if (r != 0) throw InvariantViolation("cosine substitution left remainder");
  ptrim(psi);
  return psi;
}

// ---- field construction ----

namespace {

std::vector<std::vector<Rational>> build_power_table(const Poly& minpoly_low) {
  // minpoly_low holds c[0..deg-1] with implicit leading 1:
  // theta^deg = -sum c[i] theta^i.
  int deg = static_cast<int>(minpoly_low.size());
  std::vector<std::vector<Rational>> table;
  if (deg <= 1) return table;
  std::vector<Rational> cur(static_cast<size_t>(deg), Rational(0));
  for (int i = 0; i < deg; ++i) cur[static_cast<size_t>(i)] = -minpoly_low[static_cast<size_t>(i)];
  table.push_back(cur);  // theta^deg
  for (int k = deg + 1; k <= 2 * deg - 2; ++k) {
    std::vector<Rational> next(static_cast<size_t>(deg), Rational(0));
    // next = cur * theta
    Rational top = cur[static_cast<size_t>(deg - 1)];
    for (int i = deg - 1; i >= 1; --i) next[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
    for (int i = 0; i < deg; ++i)
      next[static_cast<size_t>(i)] += top * -minpoly_low[static_cast<size_t>(i)];
    table.push_back(next);
    cur = next;
  }
  return table;
}

FieldPtr make_field(FieldKind kind, long param, Poly minpoly_full) {
  auto fd = std::make_shared<FieldDescriptor>();
  fd->kind = kind;
  fd->param = param;
  int deg = pdeg(minpoly_full);
  // store without the monic leading coefficient
  fd->minpoly.assign(minpoly_full.begin(), minpoly_full.begin() + deg);
  fd->power_table = build_power_table(fd->minpoly);
  return fd;
}

bool is_square_free(long d) {
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

std::mutex field_cache_mutex;

}  // namespace

std::string FieldDescriptor::tag() const {
  switch (kind) {
    case FieldKind::Rational: return "Q";
    case FieldKind::Quadratic: return "Q(sqrt" + std::to_string(param) + ")";
    case FieldKind::Cosine: return "Q(cos" + std::to_string(param) + ")";
  }
  throw InvariantViolation("bad field kind");
}

FieldPtr field_rationals() {
  static FieldPtr q = [] {
    auto fd = std::make_shared<FieldDescriptor>();
    fd->kind = FieldKind::Rational;
    fd->minpoly = {Rational(0)};  // degree 1: x - 0, i.e. theta = 0 unused
    return FieldPtr(fd);
  }();
  return q;
}

FieldPtr field_quadratic(long d) {
  if (d < 2 || !is_square_free(d))
    throw ParameterError("quadratic field parameter must be square-free and >= 2");
  static std::map<long, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(field_cache_mutex);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  Poly mp = {Rational(-d), Rational(0), Rational(1)};  // x^2 - d
  auto f = make_field(FieldKind::Quadratic, d, mp);
  cache.emplace(d, f);
  return f;
}

FieldPtr field_cosine(long m) {
  if (m < 3) throw ParameterError("cosine field requires m >= 3");
  Poly mp = cosine_minimal_polynomial(m);
  if (pdeg(mp) == 1) return field_rationals();  // m == 3: theta = 1
  static std::map<long, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(field_cache_mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  auto f = make_field(FieldKind::Cosine, m, mp);
  cache.emplace(m, f);
  return f;
}

FieldPtr field_from_tag(const std::string& tag) {
  if (tag == "Q") return field_rationals();
  auto parse_param = [&](const std::string& prefix) -> long {
    if (tag.size() <= prefix.size() + 1 || tag.compare(0, prefix.size(), prefix) != 0 ||
        tag.back() != ')')
      return -1;
    std::string digits = tag.substr(prefix.size(), tag.size() - prefix.size() - 1);
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(ch); }))
      return -1;
    return std::stol(digits);
  };
  if (long d = parse_param("Q(sqrt"); d >= 0) return field_quadratic(d);
  if (long m = parse_param("Q(cos"); m >= 0) return field_cosine(m);
  throw ParseError("unknown field tag: " + tag);
}

bool same_field(const FieldPtr& a, const FieldPtr& b) {
  if (a.get() == b.get()) return true;
  return a->kind == b->kind && a->param == b->param;
}

// ---- Scalar ----

Scalar::Scalar(FieldPtr f) : field_(std::move(f)), c_(static_cast<size_t>(field_->degree()), Rational(0)) {}

Scalar::Scalar(FieldPtr f, const Rational& value) : Scalar(std::move(f)) { c_[0] = value; }

Scalar::Scalar(FieldPtr f, std::vector<Rational> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) {
  if (static_cast<int>(c_.size()) != field_->degree())
    throw ParameterError("coefficient tuple length does not match field degree");
  for (auto& q : c_) q.canonicalize();
}

Scalar::Scalar(const Rational& value) : Scalar(field_rationals(), value) {}
Scalar::Scalar(long value) : Scalar(field_rationals(), Rational(value)) {}

Scalar Scalar::generator(const FieldPtr& f) {
  if (f->degree() < 2) throw ParameterError("rational field has no generator");
  Scalar s(f);
  s.c_[1] = 1;
  return s;
}

bool Scalar::is_zero() const {
  for (const auto& q : c_)
    if (q != 0) return false;
  return true;
}

bool Scalar::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rational Scalar::rational_value() const {
  if (!is_rational()) throw PreconditionError("scalar is not rational-valued");
  return c_[0];
}

Scalar Scalar::operator-() const {
  Scalar r(*this);
  for (auto& q : r.c_) q = -q;
  return r;
}

void unify_fields(Scalar& a, Scalar& b) {
  if (same_field(a.field(), b.field())) return;
  if (a.field()->degree() == 1 && a.field()->kind == FieldKind::Rational) {
    a = Scalar(b.field(), a.coeffs()[0]);
    return;
  }
  if (b.field()->degree() == 1 && b.field()->kind == FieldKind::Rational) {
    b = Scalar(a.field(), b.coeffs()[0]);
    return;
  }
  throw FieldMismatchError("cannot combine scalars of fields " + a.field()->tag() + " and " +
                           b.field()->tag());
}

Scalar& Scalar::operator+=(const Scalar& o) {
  Scalar rhs(o);
  unify_fields(*this, rhs);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  Scalar rhs(o);
  unify_fields(*this, rhs);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

void Scalar::reduce_after_mul(std::vector<Rational>& prod) {
  // prod has length 2*deg-1; fold powers >= deg through the power table.
  int deg = field_->degree();
  for (int k = 2 * deg - 2; k >= deg; --k) {
    Rational coef = prod[static_cast<size_t>(k)];
    if (coef == 0) continue;
    const auto& row = field_->power_table[static_cast<size_t>(k - deg)];
    for (int i = 0; i < deg; ++i) prod[static_cast<size_t>(i)] += coef * row[static_cast<size_t>(i)];
    prod[static_cast<size_t>(k)] = 0;
  }
  prod.resize(static_cast<size_t>(deg));
}

Scalar& Scalar::operator*=(const Scalar& o) {
  Scalar rhs(o);
  unify_fields(*this, rhs);
  int deg = field_->degree();
  if (deg == 1) {
    c_[0] *= rhs.c_[0];
    return *this;
  }
  std::vector<Rational> prod(static_cast<size_t>(2 * deg - 1), Rational(0));
  for (int i = 0; i < deg; ++i) {
    if (c_[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < deg; ++j) {
      if (rhs.c_[static_cast<size_t>(j)] == 0) continue;
      prod[static_cast<size_t>(i + j)] += c_[static_cast<size_t>(i)] * rhs.c_[static_cast<size_t>(j)];
    }
  }
  reduce_after_mul(prod);
  c_ = std::move(prod);
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZeroError("inverse of zero scalar");
  int deg = field_->degree();
  if (deg == 1) {
    Scalar r(field_);
    r.c_[0] = 1 / c_[0];
    return r;
  }
  // Extended Euclid in Q[x] against the (irreducible) minimal polynomial:
  // the gcd is a nonzero constant, and the Bezout coefficient of this scalar
  // gives the inverse.
  Poly m(field_->minpoly);
  m.push_back(Rational(1));
  Poly a(c_);
  ptrim(a);
  Poly r0 = m, r1 = a;
  Poly t0 = {Rational(0)}, t1 = {Rational(1)};
  while (pdeg(r1) > 0) {
    // r0 = q*r1 + r2
    Poly q(static_cast<size_t>(pdeg(r0) - pdeg(r1) + 1), Rational(0));
    Poly rem = r0;
    while (pdeg(rem) >= pdeg(r1)) {
      int d = pdeg(rem) - pdeg(r1);
      Rational f = rem[static_cast<size_t>(pdeg(rem))] / r1[static_cast<size_t>(pdeg(r1))];
      q[static_cast<size_t>(d)] += f;
      for (int i = 0; i <= pdeg(r1); ++i)
        rem[static_cast<size_t>(d + i)] -= f * r1[static_cast<size_t>(i)];
      ptrim(rem);
      if (rem.empty()) break;
    }
    // t2 = t0 - q*t1
    Poly qt(static_cast<size_t>(std::max(pdeg(q) + pdeg(t1) + 1, 0)), Rational(0));
    for (int i = 0; i <= pdeg(q); ++i)
      for (int j = 0; j <= pdeg(t1); ++j)
        qt[static_cast<size_t>(i + j)] += q[static_cast<size_t>(i)] * t1[static_cast<size_t>(j)];
    Poly t2(std::max(t0.size(), qt.size()), Rational(0));
    for (size_t i = 0; i < t0.size(); ++i) t2[i] += t0[i];
    for (size_t i = 0; i < qt.size(); ++i) t2[i] -= qt[i];
    r0 = r1;
    r1 = rem.empty() ? Poly{} : rem;
    t0 = t1;
    t1 = t2;
    if (pdeg(r1) < 0) throw InvariantViolation("minimal polynomial not coprime to scalar");
  }
  Rational unit = r1[0];
  std::vector<Rational> inv(static_cast<size_t>(deg), Rational(0));
  for (int i = 0; i <= pdeg(t1) && i < deg; ++i) inv[static_cast<size_t>(i)] = t1[static_cast<size_t>(i)] / unit;
  return Scalar(field_, std::move(inv));
}

Scalar& Scalar::operator/=(const Scalar& o) {
  Scalar rhs(o);
  unify_fields(*this, rhs);
  return *this *= rhs.inverse();
}

bool Scalar::operator==(const Scalar& o) const {
  Scalar a(*this), b(o);
  unify_fields(a, b);
  return a.c_ == b.c_;
}

// ---- sign oracle ----

int sign_oracle_default_bits() {
  static int bits = [] {
    if (const char* env = std::getenv("SLP_PRECISION_BITS")) {
      int v = std::atoi(env);
      if (v >= 8) return v;
    }
    return 128;
  }();
  return bits;
}

namespace {

// Minimal interval wrapper over mpfr with directed rounding.
struct Interval {
  mpfr_t lo, hi;
  explicit Interval(mpfr_prec_t prec) {
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
  }
  ~Interval() {
    mpfr_clear(lo);
    mpfr_clear(hi);
  }
  Interval(const Interval&) = delete;
  Interval& operator=(const Interval&) = delete;
};

void interval_set_q(Interval& x, const Rational& q) {
  mpfr_set_q(x.lo, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(x.hi, q.get_mpq_t(), MPFR_RNDU);
}

// x = x * theta + q  (Horner step); theta in [tlo, thi], all quantities may
// be negative so take min/max over endpoint products.
void interval_horner_step(Interval& x, const Interval& theta, const Rational& q, mpfr_prec_t prec) {
  mpfr_t p[4];
  for (auto& v : p) mpfr_init2(v, prec);
  mpfr_t lo, hi;
  mpfr_init2(lo, prec);
  mpfr_init2(hi, prec);
  mpfr_mul(p[0], x.lo, theta.lo, MPFR_RNDD);
  mpfr_mul(p[1], x.lo, theta.hi, MPFR_RNDD);
  mpfr_mul(p[2], x.hi, theta.lo, MPFR_RNDD);
  mpfr_mul(p[3], x.hi, theta.hi, MPFR_RNDD);
  mpfr_min(lo, p[0], p[1], MPFR_RNDD);
  mpfr_min(lo, lo, p[2], MPFR_RNDD);
  mpfr_min(lo, lo, p[3], MPFR_RNDD);
  mpfr_mul(p[0], x.lo, theta.lo, MPFR_RNDU);
  mpfr_mul(p[1], x.lo, theta.hi, MPFR_RNDU);
  mpfr_mul(p[2], x.hi, theta.lo, MPFR_RNDU);
  mpfr_mul(p[3], x.hi, theta.hi, MPFR_RNDU);
  mpfr_max(hi, p[0], p[1], MPFR_RNDU);
  mpfr_max(hi, hi, p[2], MPFR_RNDU);
  mpfr_max(hi, hi, p[3], MPFR_RNDU);
  mpfr_t qlo, qhi;
  mpfr_init2(qlo, prec);
  mpfr_init2(qhi, prec);
  mpfr_set_q(qlo, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(qhi, q.get_mpq_t(), MPFR_RNDU);
  mpfr_add(x.lo, lo, qlo, MPFR_RNDD);
  mpfr_add(x.hi, hi, qhi, MPFR_RNDU);
  for (auto& v : p) mpfr_clear(v);
  mpfr_clear(lo);
  mpfr_clear(hi);
  mpfr_clear(qlo);
  mpfr_clear(qhi);
}

// Enclose the field generator at the given precision.
void enclose_theta(const FieldDescriptor& f, Interval& theta, mpfr_prec_t prec) {
  if (f.kind == FieldKind::Quadratic) {
    mpfr_set_si(theta.lo, f.param, MPFR_RNDD);
    mpfr_set_si(theta.hi, f.param, MPFR_RNDU);
    mpfr_sqrt(theta.lo, theta.lo, MPFR_RNDD);
    mpfr_sqrt(theta.hi, theta.hi, MPFR_RNDU);
  } else if (f.kind == FieldKind::Cosine) {
    // theta = 2cos(pi/m); cos is decreasing on [0, pi], so the lower endpoint
    // comes from the upper angle.
    mpfr_t alo, ahi;
    mpfr_init2(alo, prec);
    mpfr_init2(ahi, prec);
    mpfr_const_pi(alo, MPFR_RNDD);
    mpfr_const_pi(ahi, MPFR_RNDU);
    mpfr_div_si(alo, alo, f.param, MPFR_RNDD);
    mpfr_div_si(ahi, ahi, f.param, MPFR_RNDU);
    mpfr_cos(theta.lo, ahi, MPFR_RNDD);
    mpfr_cos(theta.hi, alo, MPFR_RNDU);
    mpfr_mul_si(theta.lo, theta.lo, 2, MPFR_RNDD);
    mpfr_mul_si(theta.hi, theta.hi, 2, MPFR_RNDU);
    mpfr_clear(alo);
    mpfr_clear(ahi);
  } else {
    throw InvariantViolation("no generator to enclose");
  }
}

}  // namespace

int Scalar::sign(int start_bits) const {
  if (is_zero()) return 0;
  if (is_rational()) return sgn(c_[0]);
  int bits = start_bits > 0 ? start_bits : sign_oracle_default_bits();
  for (;;) {
    mpfr_prec_t prec = bits;
    Interval theta(prec), acc(prec);
    enclose_theta(*field_, theta, prec);
    int deg = field_->degree();
    interval_set_q(acc, c_[static_cast<size_t>(deg - 1)]);
    for (int i = deg - 2; i >= 0; --i) interval_horner_step(acc, theta, c_[static_cast<size_t>(i)], prec);
    if (mpfr_sgn(acc.lo) > 0) return 1;
    if (mpfr_sgn(acc.hi) < 0) return -1;
    bits *= 2;
    if (bits > (1 << 24)) throw InvariantViolation("sign oracle failed to converge");
  }
}

int Scalar::compare(const Scalar& o) const {
  Scalar d(*this);
  d -= o;
  return d.sign();
}

double Scalar::approx() const {
  if (is_rational()) return c_[0].get_d();
  Interval theta(64), acc(64);
  enclose_theta(*field_, theta, 64);
  int deg = field_->degree();
  interval_set_q(acc, c_[static_cast<size_t>(deg - 1)]);
  for (int i = deg - 2; i >= 0; --i) interval_horner_step(acc, theta, c_[static_cast<size_t>(i)], 64);
  return (mpfr_get_d(acc.lo, MPFR_RNDN) + mpfr_get_d(acc.hi, MPFR_RNDN)) / 2;
}

// ---- text form ----

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational rational_from_string(std::string_view s) {
  if (s.empty()) throw ParseError("empty rational");
  std::string buf(s);
  size_t pos = buf[0] == '-' || buf[0] == '+' ? 1 : 0;
  bool seen_digit = false, seen_slash = false;
  for (size_t i = pos; i < buf.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(buf[i]))) {
      seen_digit = true;
    } else if (buf[i] == '/' && !seen_slash && seen_digit) {
      seen_slash = true;
      seen_digit = false;
    } else {
      throw ParseError("malformed rational: " + buf);
    }
  }
  if (!seen_digit) throw ParseError("malformed rational: " + buf);
  Rational q(buf);
  if (q.get_den() == 0) throw ParseError("zero denominator: " + buf);
  q.canonicalize();
  return q;
}

std::string Scalar::str() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Rational a = c_[i];
    bool neg = a < 0;
    if (first) {
      if (neg) out << "-";
      first = false;
    } else {
      out << (neg ? " - " : " + ");
    }
    Rational mag = abs(a);
    if (i == 0) {
      out << mag.get_str();
    } else {
      if (mag != 1) out << mag.get_str() << "*";
      out << "g";
      if (i > 1) out << "^" << i;
    }
  }
  return out.str();
}

Scalar Scalar::parse(const FieldPtr& f, std::string_view text) {
  std::vector<Rational> coeffs(static_cast<size_t>(f->degree()), Rational(0));
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("scalar parse error at position " + std::to_string(pos) + ": " + what);
  };
  skip_ws();
  if (pos >= text.size()) throw fail("empty input");
  bool expect_term = true;
  int sign = 1;
  if (text[pos] == '-') {
    sign = -1;
    ++pos;
  } else if (text[pos] == '+') {
    ++pos;
  }
  while (expect_term) {
    skip_ws();
    if (pos >= text.size()) throw fail("expected term");
    Rational coef(1);
    bool have_number = false;
    if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      std::string num(text.substr(start, pos - start));
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        size_t dstart = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (dstart == pos) throw fail("expected denominator");
        num += "/" + std::string(text.substr(dstart, pos - dstart));
      }
      coef = rational_from_string(num);
      have_number = true;
    }
    int power = 0;
    skip_ws();
    if (have_number && pos < text.size() && text[pos] == '*') {
      ++pos;
      skip_ws();
      if (pos >= text.size() || text[pos] != 'g') throw fail("expected generator after '*'");
    }
    if (pos < text.size() && text[pos] == 'g') {
      ++pos;
      power = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw fail("expected exponent");
        power = std::stoi(std::string(text.substr(start, pos - start)));
      }
    } else if (!have_number) {
      throw fail("expected rational or generator");
    }
    if (power >= f->degree())
      throw fail("generator power " + std::to_string(power) + " outside field of degree " +
                 std::to_string(f->degree()));
    coeffs[static_cast<size_t>(power)] += sign * coef;
    skip_ws();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      expect_term = true;
    } else {
      expect_term = false;
    }
  }
  skip_ws();
  if (pos != text.size()) throw fail("trailing input");
  return Scalar(f, std::move(coeffs));
}

}  // namespace slp
