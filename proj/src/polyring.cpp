#include "slp/polyring.hpp"

#include <algorithm>
#include <sstream>

#include "slp/errors.hpp"
#include "slp/linalg.hpp"
#include "slp/vec.hpp"

namespace slp {

namespace {

FieldPtr unified_field(const FieldPtr& a, const FieldPtr& b) {
  Scalar x(a), y(b);
  unify_fields(x, y);
  return x.field();
}

// Index of a simple root inside positive_roots.
int simple_positive_index(const RootSystem& rs, int simple) {
  if (simple < 0 || simple >= static_cast<int>(rs.simple_roots.size()))
    throw ParameterError("simple root index out of range: " + std::to_string(simple));
  auto idx = rs.root_index(rs.simple_roots[static_cast<size_t>(simple)]);
  if (!idx) throw InvariantViolation("simple root missing from the positive root list");
  return *idx;
}

void monomials_of_degree_rec(int nvars, int var, int left, Monomial& cur,
                             std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    cur[static_cast<size_t>(var)] = left;
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[static_cast<size_t>(var)] = e;
    monomials_of_degree_rec(nvars, var + 1, left - e, cur, out);
  }
}

std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
  std::vector<Monomial> out;
  Monomial cur(static_cast<size_t>(nvars), 0);
  monomials_of_degree_rec(nvars, 0, degree, cur, out);
  std::sort(out.begin(), out.end(), DegLexLess{});
  return out;
}

Rational binomial(long n, long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

Polynomial monomial_polynomial(const FieldPtr& f, const Monomial& m) {
  Polynomial p = Polynomial::zero(f, static_cast<int>(m.size()));
  p.add_term(m, Scalar(f, Rational(1)));
  return p;
}

}  // namespace

bool DegLexLess::operator()(const Monomial& a, const Monomial& b) const {
  int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da < db;
  return a < b;
}

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

Polynomial Polynomial::zero(const FieldPtr& f, int nvars) {
  Polynomial p;
  p.field = f;
  p.nvars = nvars;
  return p;
}

Polynomial Polynomial::constant(const FieldPtr& f, int nvars, const Scalar& c) {
  Polynomial p = zero(f, nvars);
  p.add_term(Monomial(static_cast<size_t>(nvars), 0), c);
  return p;
}

Polynomial Polynomial::variable(const FieldPtr& f, int nvars, int index) {
  if (index < 0 || index >= nvars)
    throw ParameterError("variable index out of range: " + std::to_string(index));
  Monomial m(static_cast<size_t>(nvars), 0);
  m[static_cast<size_t>(index)] = 1;
  Polynomial p = zero(f, nvars);
  p.add_term(m, Scalar(f, Rational(1)));
  return p;
}

Polynomial Polynomial::linear(const FieldPtr& f, const std::vector<Scalar>& coeffs) {
  Polynomial p = zero(f, static_cast<int>(coeffs.size()));
  for (size_t j = 0; j < coeffs.size(); ++j) {
    Monomial m(coeffs.size(), 0);
    m[j] = 1;
    p.add_term(m, coeffs[j]);
  }
  return p;
}

int Polynomial::degree() const {
  if (terms.empty()) return -1;
  return monomial_degree(terms.rbegin()->first);
}

bool Polynomial::is_homogeneous() const {
  if (terms.empty()) return true;
  int d = monomial_degree(terms.begin()->first);
  return d == degree();
}

Polynomial Polynomial::homogeneous_component(int d) const {
  Polynomial p = zero(field, nvars);
  for (const auto& [m, c] : terms)
    if (monomial_degree(m) == d) p.terms.emplace(m, c);
  return p;
}

Scalar Polynomial::coefficient(const Monomial& m) const {
  auto it = terms.find(m);
  if (it == terms.end()) return Scalar(field);
  return it->second;
}

Scalar Polynomial::constant_term() const {
  return coefficient(Monomial(static_cast<size_t>(nvars), 0));
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
  if (static_cast<int>(m.size()) != nvars)
    throw ParameterError("monomial length does not match the variable count");
  if (c.is_zero()) return;
  auto [it, fresh] = terms.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

std::string Polynomial::str() const {
  if (terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (!first) out << " + ";
    first = false;
    std::string c = it->second.str();
    bool compound = c.find_first_of("+-") != std::string::npos && c.size() > 1;
    if (monomial_degree(it->first) == 0) {
      out << c;
      continue;
    }
    out << (compound ? "(" + c + ")" : c);
    for (size_t j = 0; j < it->first.size(); ++j) {
      int e = it->first[j];
      if (e == 0) continue;
      out << "*x" << j;
      if (e > 1) out << "^" << e;
    }
  }
  return out.str();
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (nvars != o.nvars) return false;
  if (terms.size() != o.terms.size()) return false;
  auto a = terms.begin();
  auto b = o.terms.begin();
  for (; a != terms.end(); ++a, ++b) {
    if (a->first != b->first) return false;
    if (a->second != b->second) return false;
  }
  return true;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.nvars != b.nvars) throw ParameterError("polynomial variable counts differ");
  Polynomial r = Polynomial::zero(unified_field(a.field, b.field), a.nvars);
  for (const auto& [m, c] : a.terms) r.add_term(m, c);
  for (const auto& [m, c] : b.terms) r.add_term(m, c);
  return r;
}

Polynomial operator-(const Polynomial& a) {
  Polynomial r = Polynomial::zero(a.field, a.nvars);
  for (const auto& [m, c] : a.terms) r.terms.emplace(m, -c);
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars != b.nvars) throw ParameterError("polynomial variable counts differ");
  Polynomial r = Polynomial::zero(unified_field(a.field, b.field), a.nvars);
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      Monomial m = ma;
      for (size_t j = 0; j < m.size(); ++j) m[j] += mb[j];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Polynomial operator*(const Scalar& c, const Polynomial& a) {
  Polynomial r = Polynomial::zero(unified_field(c.field(), a.field), a.nvars);
  for (const auto& [m, cc] : a.terms) r.add_term(m, c * cc);
  return r;
}

Polynomial poly_pow(const Polynomial& a, int e) {
  if (e < 0) throw ParameterError("negative polynomial power");
  Polynomial r = Polynomial::constant(a.field, a.nvars, Scalar(a.field, Rational(1)));
  for (int k = 0; k < e; ++k) r = r * a;
  return r;
}

Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images) {
  if (static_cast<int>(images.size()) != f.nvars)
    throw ParameterError("substitution needs one image per variable");
  int out_vars = images.empty() ? f.nvars : images[0].nvars;
  FieldPtr out_field = f.field;
  for (const Polynomial& g : images) out_field = unified_field(out_field, g.field);

  // memoized powers per variable
  std::vector<int> max_exp(static_cast<size_t>(f.nvars), 0);
  for (const auto& [m, c] : f.terms)
    for (size_t j = 0; j < m.size(); ++j) max_exp[j] = std::max(max_exp[j], m[j]);
  std::vector<std::vector<Polynomial>> pows(static_cast<size_t>(f.nvars));
  for (size_t j = 0; j < pows.size(); ++j) {
    pows[j].push_back(Polynomial::constant(out_field, out_vars, Scalar(out_field, Rational(1))));
    for (int e = 1; e <= max_exp[j]; ++e) pows[j].push_back(pows[j].back() * images[j]);
  }

  Polynomial r = Polynomial::zero(out_field, out_vars);
  for (const auto& [m, c] : f.terms) {
    Polynomial t = Polynomial::constant(out_field, out_vars, c);
    for (size_t j = 0; j < m.size(); ++j)
      if (m[j] > 0) t = t * pows[j][static_cast<size_t>(m[j])];
    r = r + t;
  }
  return r;
}

std::vector<Scalar> delta_coordinates(const RootSystem& rs, const Vec& v) {
  int n = rs.type.rank;
  ScalarMatrix k = ScalarMatrix::zero(rs.field, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k.at(i, j) = rs.inner(rs.simple_roots[static_cast<size_t>(i)],
                            rs.simple_roots[static_cast<size_t>(j)]);
  std::vector<Scalar> b(static_cast<size_t>(n), Scalar(rs.field));
  for (int i = 0; i < n; ++i) b[static_cast<size_t>(i)] = rs.inner(rs.simple_roots[static_cast<size_t>(i)], v);
  auto coords = solve(k, b);
  if (!coords) throw InvariantViolation("simple-root Gram matrix is singular");

  Vec rebuilt = vec_zero(rs.field, rs.ambient_dim);
  for (int j = 0; j < n; ++j)
    rebuilt = vec_add(rebuilt, vec_scale((*coords)[static_cast<size_t>(j)],
                                         rs.simple_roots[static_cast<size_t>(j)]));
  if (!vec_eq(rebuilt, v))
    throw PreconditionError("vector lies outside the span of the simple roots");
  return *coords;
}

Polynomial vector_polynomial(const RootSystem& rs, const Vec& v) {
  return Polynomial::linear(rs.field, delta_coordinates(rs, v));
}

Polynomial act_reflection(const RootSystem& rs, int root_index, const Polynomial& f) {
  if (root_index < 0 || root_index >= static_cast<int>(rs.positive_roots.size()))
    throw ParameterError("positive root index out of range: " + std::to_string(root_index));
  const Vec& gamma = rs.positive_roots[static_cast<size_t>(root_index)];
  const Vec& gcoords = rs.delta_coords[static_cast<size_t>(root_index)];
  Polynomial gamma_poly = Polynomial::linear(rs.field, gcoords);

  int n = rs.type.rank;
  std::vector<Polynomial> images;
  images.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    Scalar c = rs.coroot_eval(gamma, rs.simple_roots[static_cast<size_t>(j)]);
    images.push_back(Polynomial::variable(rs.field, n, j) - c * gamma_poly);
  }
  return substitute(f, images);
}

Polynomial act(const RootSystem& rs, const std::vector<int>& word, const Polynomial& f) {
  Polynomial r = f;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    r = act_reflection(rs, simple_positive_index(rs, *it), r);
  return r;
}

std::vector<int> element_word(const CosetNode& node) {
  std::vector<int> w(node.witness_word.rbegin(), node.witness_word.rend());
  return w;
}

Vec apply_element(const RootSystem& rs, const CosetNode& node, const Vec& v) {
  Vec r = v;
  for (int i : node.witness_word) r = rs.reflect(rs.simple_roots[static_cast<size_t>(i)], r);
  return r;
}

Polynomial divided_difference(const RootSystem& rs, int root_index, const Polynomial& f) {
  if (root_index < 0 || root_index >= static_cast<int>(rs.positive_roots.size()))
    throw ParameterError("positive root index out of range: " + std::to_string(root_index));
  const Vec& gcoords = rs.delta_coords[static_cast<size_t>(root_index)];
  Polynomial gamma_poly = Polynomial::linear(rs.field, gcoords);

  int pivot = -1;
  for (size_t j = 0; j < gcoords.size(); ++j)
    if (!gcoords[j].is_zero()) {
      pivot = static_cast<int>(j);
      break;
    }
  if (pivot < 0) throw InvariantViolation("positive root with zero simple-root coordinates");
  Scalar ginv = gcoords[static_cast<size_t>(pivot)].inverse();

  Polynomial r = f - act_reflection(rs, root_index, f);
  Polynomial q = Polynomial::zero(r.field, r.nvars);
  while (!r.is_zero()) {
    // cancel a term of maximal pivot exponent; everything it adds back sits
    // strictly lower, so this terminates
    auto best = r.terms.end();
    int best_e = -1;
    for (auto it = r.terms.begin(); it != r.terms.end(); ++it) {
      int e = it->first[static_cast<size_t>(pivot)];
      if (e > best_e) {
        best_e = e;
        best = it;
      }
    }
    if (best_e <= 0)
      throw InvariantViolation("divided difference: numerator not divisible by the root");
    Monomial mq = best->first;
    mq[static_cast<size_t>(pivot)] -= 1;
    Scalar cq = best->second * ginv;
    q.add_term(mq, cq);
    Polynomial t = Polynomial::zero(r.field, r.nvars);
    t.add_term(mq, cq);
    r = r - t * gamma_poly;
  }
  return q;
}

Polynomial bgg_apply(const RootSystem& rs, const std::vector<int>& word, const Polynomial& f) {
  Polynomial r = f;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    r = divided_difference(rs, simple_positive_index(rs, *it), r);
  return r;
}

namespace {

// The ambient coordinate functions restricted to span(Delta), as functions
// of the simple-root coefficients: X_i(c) = sum_j (alpha_j)_i c_j.  These
// live in the function picture (coordinates of the argument), not in the
// variables-are-roots picture the group action uses; function_to_tensor
// converts below.
std::vector<Polynomial> restricted_coordinates(const RootSystem& rs) {
  int n = rs.type.rank;
  std::vector<Polynomial> x;
  x.reserve(static_cast<size_t>(rs.ambient_dim));
  for (int i = 0; i < rs.ambient_dim; ++i) {
    std::vector<Scalar> coeffs(static_cast<size_t>(n), Scalar(rs.field));
    for (int j = 0; j < n; ++j)
      coeffs[static_cast<size_t>(j)] = rs.simple_roots[static_cast<size_t>(j)][static_cast<size_t>(i)];
    x.push_back(Polynomial::linear(rs.field, coeffs));
  }
  return x;
}

// Degree-1 elements y_j with <y_j, v> = c_j for v = sum c_k alpha_k: the
// columns of the inverse simple-root Gram matrix.  Substituting them turns a
// polynomial in the coefficient functions c_j into the same function written
// as an element of Sym(V), where the reflection action operates.
std::vector<Polynomial> coefficient_functionals(const RootSystem& rs) {
  int n = rs.type.rank;
  ScalarMatrix k = ScalarMatrix::zero(rs.field, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k.at(i, j) = rs.inner(rs.simple_roots[static_cast<size_t>(i)],
                            rs.simple_roots[static_cast<size_t>(j)]);
  auto kinv = inverse(k);
  if (!kinv) throw InvariantViolation("simple-root Gram matrix is singular");
  std::vector<Polynomial> ys;
  ys.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::vector<Scalar> col(static_cast<size_t>(n), Scalar(rs.field));
    for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = kinv->at(i, j);
    ys.push_back(Polynomial::linear(rs.field, col));
  }
  return ys;
}

// Elementary symmetric polynomials e_1..e_k of the given list.
std::vector<Polynomial> elementary_symmetric(const FieldPtr& f, int nvars,
                                             const std::vector<Polynomial>& items, int k) {
  Polynomial one = Polynomial::constant(f, nvars, Scalar(f, Rational(1)));
  std::vector<Polynomial> e(static_cast<size_t>(k) + 1, Polynomial::zero(f, nvars));
  e[0] = one;
  for (size_t i = 0; i < items.size(); ++i) {
    int hi = std::min<int>(static_cast<int>(i) + 1, k);
    for (int j = hi; j >= 1; --j)
      e[static_cast<size_t>(j)] = e[static_cast<size_t>(j)] + items[i] * e[static_cast<size_t>(j) - 1];
  }
  return std::vector<Polynomial>(e.begin() + 1, e.end());
}

// Degree-m dihedral invariant in the alpha-basis.  With alpha_0 placed along
// the first orthonormal axis, the reflection lines of I2(m) sit at angles
// pi/2 + k pi/m, so the invariant is the real part of ((-i)(x + iy))^m; the
// even/odd split below is that expansion with the irrational prefactors
// divided out (they are global, so the span is unchanged).
Polynomial dihedral_harmonic(const RootSystem& rs) {
  const FieldPtr& f = rs.field;
  long m = rs.type.m;
  Scalar theta = -rs.inner(rs.simple_roots[0], rs.simple_roots[1]);
  Scalar half(f, Rational(1, 2));
  Polynomial x0 = Polynomial::variable(f, 2, 0);
  Polynomial x1 = Polynomial::variable(f, 2, 1);
  // first orthonormal coordinate over sqrt(2), and sin^2 of the bond angle
  Polynomial xt = x0 - (theta * half) * x1;
  Scalar s2 = Scalar(f, Rational(1)) - theta * theta * Scalar(f, Rational(1, 4));
  Polynomial u = s2 * (x1 * x1);

  Polynomial h = Polynomial::zero(f, 2);
  if (m % 2 == 0) {
    for (long j = 0; 2 * j <= m; ++j) {
      Scalar c(f, (j % 2 == 0 ? binomial(m, 2 * j) : -binomial(m, 2 * j)));
      h = h + c * (poly_pow(xt, static_cast<int>(m - 2 * j)) * poly_pow(u, static_cast<int>(j)));
    }
  } else {
    for (long j = 0; 2 * j + 1 <= m; ++j) {
      Scalar c(f, (j % 2 == 0 ? binomial(m, 2 * j + 1) : -binomial(m, 2 * j + 1)));
      h = h + c * (poly_pow(xt, static_cast<int>(m - 2 * j - 1)) * x1 * poly_pow(u, static_cast<int>(j)));
    }
  }
  return h;
}

std::vector<long> poincare_coefficients(const CoxeterType& type) {
  std::vector<long> p{1};
  for (int d : type.fundamental_degrees()) {
    std::vector<long> q(p.size() + static_cast<size_t>(d) - 1, 0);
    for (size_t i = 0; i < p.size(); ++i)
      for (int j = 0; j < d; ++j) q[i + static_cast<size_t>(j)] += p[i];
    p = std::move(q);
  }
  return p;
}

}  // namespace

std::vector<Polynomial> invariant_generators(const RootSystem& rs) {
  const FieldPtr& f = rs.field;
  int n = rs.type.rank;
  // built in the function picture first, converted at the end
  std::vector<Polynomial> gens;
  switch (rs.type.family) {
    case Family::A: {
      std::vector<Polynomial> x = restricted_coordinates(rs);
      for (int k = 2; k <= n + 1; ++k) {
        Polynomial p = Polynomial::zero(f, n);
        for (const Polynomial& xi : x) p = p + poly_pow(xi, k);
        gens.push_back(p);
      }
      break;
    }
    case Family::B: {
      std::vector<Polynomial> sq;
      for (const Polynomial& xi : restricted_coordinates(rs)) sq.push_back(xi * xi);
      gens = elementary_symmetric(f, n, sq, n);
      break;
    }
    case Family::D: {
      std::vector<Polynomial> x = restricted_coordinates(rs);
      std::vector<Polynomial> sq;
      for (const Polynomial& xi : x) sq.push_back(xi * xi);
      gens = elementary_symmetric(f, n, sq, n - 1);
      Polynomial prod = Polynomial::constant(f, n, Scalar(f, Rational(1)));
      for (const Polynomial& xi : x) prod = prod * xi;
      gens.push_back(prod);
      break;
    }
    case Family::I2: {
      Polynomial q = Polynomial::zero(f, 2);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          Monomial m(2, 0);
          m[static_cast<size_t>(j)] += 1;
          m[static_cast<size_t>(k)] += 1;
          q.add_term(m, rs.inner(rs.simple_roots[static_cast<size_t>(j)],
                                 rs.simple_roots[static_cast<size_t>(k)]));
        }
      gens.push_back(q);
      gens.push_back(dihedral_harmonic(rs));
      break;
    }
    default:
      throw UnsupportedError("no closed-form invariants for type " + rs.type.name() +
                             "; the quotient poset route serves it");
  }

  std::vector<Polynomial> ys = coefficient_functionals(rs);
  for (Polynomial& g : gens) g = substitute(g, ys);
  std::stable_sort(gens.begin(), gens.end(),
                   [](const Polynomial& a, const Polynomial& b) { return a.degree() < b.degree(); });

  std::vector<int> degrees = rs.type.fundamental_degrees();
  if (gens.size() != degrees.size())
    throw InvariantViolation("invariant generator count does not match the fundamental degrees");
  for (size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].degree() != degrees[g] || !gens[g].is_homogeneous())
      throw InvariantViolation("invariant generator degree mismatch for " + rs.type.name());
    for (int i = 0; i < n; ++i)
      if (act_reflection(rs, simple_positive_index(rs, i), gens[g]) != gens[g])
        throw InvariantViolation("invariant generator not fixed by simple reflection " +
                                 std::to_string(i) + " in type " + rs.type.name());
  }
  return gens;
}

CoinvariantPresentation coinvariant_presentation(const RootSystem& rs) {
  CoinvariantPresentation pres;
  pres.type = rs.type;
  pres.field = rs.field;
  pres.nvars = rs.type.rank;
  pres.top = static_cast<int>(rs.positive_roots.size());
  pres.generators = invariant_generators(rs);

  std::vector<long> poincare = poincare_coefficients(rs.type);
  if (static_cast<int>(poincare.size()) != pres.top + 1)
    throw InvariantViolation("Poincare polynomial degree disagrees with the positive root count");

  long total = 0;
  for (int i = 0; i <= pres.top; ++i) {
    DegreeSlice slice;
    slice.monomials = monomials_of_degree(pres.nvars, i);
    std::map<Monomial, int, DegLexLess> index;
    for (size_t k = 0; k < slice.monomials.size(); ++k)
      index.emplace(slice.monomials[k], static_cast<int>(k));

    std::vector<std::vector<Scalar>> rows;
    for (const Polynomial& g : pres.generators) {
      int dg = g.degree();
      if (dg > i) continue;
      for (const Monomial& m : monomials_of_degree(pres.nvars, i - dg)) {
        std::vector<Scalar> row(slice.monomials.size(), Scalar(pres.field));
        for (const auto& [gm, gc] : g.terms) {
          Monomial prod = gm;
          for (size_t j = 0; j < prod.size(); ++j) prod[j] += m[j];
          row[static_cast<size_t>(index.at(prod))] += gc;
        }
        rows.push_back(std::move(row));
      }
    }
    slice.ideal = row_reduce(std::move(rows), pres.field);

    std::vector<bool> is_pivot(slice.monomials.size(), false);
    for (int p : slice.ideal.pivot_cols) is_pivot[static_cast<size_t>(p)] = true;
    for (size_t k = 0; k < slice.monomials.size(); ++k)
      if (!is_pivot[k]) slice.complement.push_back(static_cast<int>(k));

    int dim = static_cast<int>(slice.complement.size());
    if (dim != static_cast<int>(poincare[static_cast<size_t>(i)]))
      throw InvariantViolation("coinvariant dimension mismatch in " + rs.type.name() +
                               " at degree " + std::to_string(i) + ": got " + std::to_string(dim) +
                               ", Poincare says " + std::to_string(poincare[static_cast<size_t>(i)]));
    total += dim;
    pres.dims.push_back(dim);
    pres.slices.push_back(std::move(slice));
  }

  if (total != rs.type.group_order())
    throw InvariantViolation("coinvariant total dimension differs from the group order");
  return pres;
}

std::vector<Polynomial> coinvariant_basis(const CoinvariantPresentation& pres, int degree) {
  if (degree < 0) throw ParameterError("negative degree");
  std::vector<Polynomial> basis;
  if (degree > pres.top) return basis;
  const DegreeSlice& slice = pres.slices[static_cast<size_t>(degree)];
  for (int k : slice.complement)
    basis.push_back(monomial_polynomial(pres.field, slice.monomials[static_cast<size_t>(k)]));
  return basis;
}

std::vector<Scalar> complement_coordinates(const CoinvariantPresentation& pres,
                                           const Polynomial& f, int degree) {
  if (degree < 0) throw ParameterError("negative degree");
  if (f.nvars != pres.nvars)
    throw PreconditionError("polynomial variable count differs from the presentation");
  for (const auto& [m, c] : f.terms)
    if (monomial_degree(m) != degree)
      throw PreconditionError("complement coordinates need a homogeneous polynomial of degree " +
                              std::to_string(degree));
  if (degree > pres.top) return {};

  const DegreeSlice& slice = pres.slices[static_cast<size_t>(degree)];
  std::vector<Scalar> v(slice.monomials.size(), Scalar(pres.field));
  std::map<Monomial, int, DegLexLess> index;
  for (size_t k = 0; k < slice.monomials.size(); ++k)
    index.emplace(slice.monomials[k], static_cast<int>(k));
  for (const auto& [m, c] : f.terms) v[static_cast<size_t>(index.at(m))] += c;

  std::vector<Scalar> residue = reduce_against(slice.ideal, std::move(v));
  for (int p : slice.ideal.pivot_cols)
    if (!residue[static_cast<size_t>(p)].is_zero())
      throw InvariantViolation("ideal reduction left a pivot coordinate");
  std::vector<Scalar> coords;
  coords.reserve(slice.complement.size());
  for (int k : slice.complement) coords.push_back(residue[static_cast<size_t>(k)]);
  return coords;
}

Polynomial normal_form(const CoinvariantPresentation& pres, const Polynomial& f) {
  Polynomial r = Polynomial::zero(pres.field, pres.nvars);
  for (int d = 0; d <= f.degree(); ++d) {
    Polynomial comp = f.homogeneous_component(d);
    if (comp.is_zero() || d > pres.top) continue;
    std::vector<Scalar> coords = complement_coordinates(pres, comp, d);
    const DegreeSlice& slice = pres.slices[static_cast<size_t>(d)];
    for (size_t k = 0; k < coords.size(); ++k)
      r.add_term(slice.monomials[static_cast<size_t>(slice.complement[k])], coords[k]);
  }
  return r;
}

SchubertDualBasis schubert_duals(const RootSystem& rs, const QuotientPoset& full,
                                 const CoinvariantPresentation& pres) {
  if (!full.theta.empty())
    throw ParameterError("Schubert duals need the full quotient (empty Theta)");
  if (!(full.type == rs.type) || !(pres.type == rs.type))
    throw ParameterError("Schubert duals need matching types");
  if (full.r != pres.top)
    throw InvariantViolation("full quotient top degree differs from the positive root count");

  SchubertDualBasis duals;
  for (int i = 0; i <= pres.top; ++i) {
    std::vector<long> ids = full.by_degree[static_cast<size_t>(i)];
    std::vector<Polynomial> basis = coinvariant_basis(pres, i);
    if (ids.size() != basis.size())
      throw InvariantViolation("length histogram differs from the coinvariant dimension at degree " +
                               std::to_string(i));
    int n = static_cast<int>(ids.size());
    ScalarMatrix evals = ScalarMatrix::zero(pres.field, n, n);
    evals.row_ids = ids;
    for (int v = 0; v < n; ++v) {
      std::vector<int> word = element_word(full.node(ids[static_cast<size_t>(v)]));
      for (int k = 0; k < n; ++k) {
        Polynomial val = bgg_apply(rs, word, basis[static_cast<size_t>(k)]);
        if (val.degree() > 0)
          throw InvariantViolation("length-many divided differences left positive degree");
        evals.at(v, k) = val.constant_term();
      }
    }
    auto coords = inverse(evals);
    if (!coords)
      throw InvariantViolation("singular Schubert evaluation matrix at degree " + std::to_string(i));
    coords->col_ids = ids;
    duals.elements.push_back(std::move(ids));
    duals.coords.push_back(std::move(*coords));
    duals.evals.push_back(std::move(evals));
  }
  return duals;
}

Polynomial schubert_class(const CoinvariantPresentation& pres, const SchubertDualBasis& duals,
                          const QuotientPoset& full, long node_id) {
  const CosetNode& node = full.node(node_id);
  int i = node.degree;
  const std::vector<long>& ids = duals.elements[static_cast<size_t>(i)];
  auto pos = std::find(ids.begin(), ids.end(), node_id);
  if (pos == ids.end()) throw InvariantViolation("node missing from its degree layer");
  int u = static_cast<int>(pos - ids.begin());

  const DegreeSlice& slice = pres.slices[static_cast<size_t>(i)];
  Polynomial x = Polynomial::zero(pres.field, pres.nvars);
  for (size_t k = 0; k < slice.complement.size(); ++k)
    x.add_term(slice.monomials[static_cast<size_t>(slice.complement[k])],
               duals.coords[static_cast<size_t>(i)].at(static_cast<int>(k), u));
  return x;
}

long full_node_of(const RootSystem& rs, const QuotientPoset& full, const CosetNode& rel_node) {
  Vec target = apply_element(rs, rel_node, rs.rho());
  for (long id : full.by_degree[static_cast<size_t>(rel_node.degree)])
    if (vec_eq(full.node(id).vector, target)) return id;
  throw InvariantViolation("relative coset representative missing from the full quotient");
}

bool schubert_theta_invariant(const RootSystem& rs, const QuotientPoset& full,
                              const QuotientPoset& relative,
                              const CoinvariantPresentation& pres,
                              const SchubertDualBasis& duals) {
  for (const CosetNode& rel : relative.nodes) {
    long full_id = full_node_of(rs, full, rel);
    Polynomial x = schubert_class(pres, duals, full, full_id);
    for (int a : relative.theta) {
      // invariance holds in the quotient ring, so reduce the image first
      Polynomial moved = act_reflection(rs, simple_positive_index(rs, a), x);
      if (normal_form(pres, moved) != x) return false;
    }
  }
  return true;
}

std::vector<CoverExpansion> chevalley_multiply(const RootSystem& rs, const QuotientPoset& poset,
                                               long node_id, const Vec& chi) {
  const CosetNode& node = poset.node(node_id);
  Vec uchi = apply_element(rs, node, chi);
  std::vector<CoverExpansion> out;
  for (int idx : poset.out_edges[static_cast<size_t>(node_id)]) {
    const WeightedEdge& e = poset.edges[static_cast<size_t>(idx)];
    out.push_back({e.dst, rs.coroot_eval(rs.positive_roots[static_cast<size_t>(e.root)], uchi)});
  }
  return out;
}

ScalarMatrix schubert_one_step(const RootSystem& rs, const QuotientPoset& full,
                               const CoinvariantPresentation& pres,
                               const SchubertDualBasis& duals, const Vec& chi, int degree) {
  if (degree < 0 || degree >= pres.top)
    throw ParameterError("one-step degree out of range: " + std::to_string(degree));
  Polynomial chi_poly = vector_polynomial(rs, chi);
  const std::vector<long>& lo = duals.elements[static_cast<size_t>(degree)];
  const std::vector<long>& hi = duals.elements[static_cast<size_t>(degree) + 1];
  ScalarMatrix m = ScalarMatrix::zero(pres.field, static_cast<int>(hi.size()),
                                      static_cast<int>(lo.size()));
  m.row_ids = hi;
  m.col_ids = lo;
  for (size_t u = 0; u < lo.size(); ++u) {
    Polynomial prod = chi_poly * schubert_class(pres, duals, full, lo[u]);
    std::vector<Scalar> comp = complement_coordinates(pres, prod, degree + 1);
    std::vector<Scalar> y = matvec(duals.evals[static_cast<size_t>(degree) + 1], comp);
    for (size_t v = 0; v < hi.size(); ++v) m.at(static_cast<int>(v), static_cast<int>(u)) = y[v];
  }
  return m;
}

GradedAlgebra algebra_of_presentation(const CoinvariantPresentation& pres) {
  GradedAlgebra alg;
  alg.field = pres.field;
  alg.dims = pres.dims;

  const DegreeSlice& deg1 = pres.slices[1];
  std::vector<int> vars;
  for (int k : deg1.complement) {
    const Monomial& m = deg1.monomials[static_cast<size_t>(k)];
    for (size_t j = 0; j < m.size(); ++j)
      if (m[j] == 1) vars.push_back(static_cast<int>(j));
  }

  for (int var : vars) {
    std::vector<ScalarMatrix> steps;
    for (int i = 0; i < pres.top; ++i) {
      const DegreeSlice& slice = pres.slices[static_cast<size_t>(i)];
      ScalarMatrix m = ScalarMatrix::zero(pres.field, pres.dims[static_cast<size_t>(i) + 1],
                                          pres.dims[static_cast<size_t>(i)]);
      for (size_t c = 0; c < slice.complement.size(); ++c) {
        Monomial mono = slice.monomials[static_cast<size_t>(slice.complement[c])];
        mono[static_cast<size_t>(var)] += 1;
        Polynomial p = monomial_polynomial(pres.field, mono);
        std::vector<Scalar> coords = complement_coordinates(pres, p, i + 1);
        for (size_t r = 0; r < coords.size(); ++r)
          m.at(static_cast<int>(r), static_cast<int>(c)) = coords[r];
      }
      steps.push_back(std::move(m));
    }
    alg.gen_mult.push_back(std::move(steps));
  }
  return alg;
}

GradedAlgebra truncated_line(const FieldPtr& f, int n) {
  if (n < 0) throw ParameterError("negative truncation order");
  GradedAlgebra alg;
  alg.field = f;
  alg.dims.assign(static_cast<size_t>(n) + 1, 1);
  std::vector<ScalarMatrix> steps;
  for (int i = 0; i < n; ++i) {
    ScalarMatrix m = ScalarMatrix::zero(f, 1, 1);
    m.at(0, 0) = Scalar(f, Rational(1));
    steps.push_back(std::move(m));
  }
  alg.gen_mult.push_back(std::move(steps));
  return alg;
}

ScalarMatrix one_step(const GradedAlgebra& alg, const std::vector<Scalar>& l, int i) {
  if (alg.dims.size() < 2 || static_cast<int>(l.size()) != alg.dims[1])
    throw ParameterError("degree-1 coefficient count does not match the algebra");
  if (i < 0 || i >= alg.top()) throw ParameterError("one-step degree out of range");
  ScalarMatrix m = ScalarMatrix::zero(alg.field, alg.dims[static_cast<size_t>(i) + 1],
                                      alg.dims[static_cast<size_t>(i)]);
  for (size_t g = 0; g < alg.gen_mult.size(); ++g) {
    const ScalarMatrix& step = alg.gen_mult[g][static_cast<size_t>(i)];
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) m.at(r, c) += l[g] * step.at(r, c);
  }
  return m;
}

ScalarMatrix map_power(const GradedAlgebra& alg, const std::vector<Scalar>& l, int i, int k) {
  if (i < 0 || i > alg.top() || k < 0) throw ParameterError("map power degrees out of range");
  if (k == 0) return ScalarMatrix::identity(alg.field, alg.dims[static_cast<size_t>(i)]);
  if (i + k > alg.top()) return ScalarMatrix::zero(alg.field, 1, alg.dims[static_cast<size_t>(i)]);
  ScalarMatrix m = one_step(alg, l, i);
  for (int s = 1; s < k; ++s) m = multiply(one_step(alg, l, i + s), m);
  return m;
}

StrongReport strong_lefschetz_on_algebra(const GradedAlgebra& alg, const std::vector<Scalar>& l) {
  StrongReport report;
  report.pass = true;
  int r = alg.top();
  for (int i = 0; i + i <= r; ++i) {
    ScalarMatrix m = map_power(alg, l, i, r - 2 * i);
    StrongDegree d;
    d.degree = i;
    d.rows = m.rows();
    d.cols = m.cols();
    if (m.rows() != m.cols()) {
      d.determinant = Scalar(alg.field, Rational(0));
      d.sign = 0;
      d.pass = false;
    } else {
      d.determinant = determinant(m);
      d.sign = d.determinant.sign();
      d.pass = d.sign != 0;
    }
    if (!d.pass) report.pass = false;
    report.degrees.push_back(std::move(d));
  }
  if (report.pass) {
    report.message = "all Lefschetz maps invertible";
  } else {
    report.message = "candidate failed at degree";
    for (const StrongDegree& d : report.degrees)
      if (!d.pass) report.message += " " + std::to_string(d.degree);
  }
  return report;
}

PrimitiveDecomposition primitive_decomposition(const GradedAlgebra& alg,
                                               const std::vector<Scalar>& l) {
  StrongReport strong = strong_lefschetz_on_algebra(alg, l);
  if (!strong.pass)
    throw PreconditionError("primitive decomposition needs a Lefschetz element; " + strong.message);

  int r = alg.top();
  PrimitiveDecomposition dec;
  for (int i = 0; i + i <= r; ++i) {
    ScalarMatrix power = map_power(alg, l, i, r - 2 * i + 1);
    std::vector<std::vector<Scalar>> kernel = nullspace(power);
    ScalarMatrix basis = ScalarMatrix::zero(alg.field, alg.dims[static_cast<size_t>(i)],
                                            static_cast<int>(kernel.size()));
    for (size_t c = 0; c < kernel.size(); ++c)
      for (size_t rr = 0; rr < kernel[c].size(); ++rr)
        basis.at(static_cast<int>(rr), static_cast<int>(c)) = kernel[c][rr];
    dec.p_dims.push_back(static_cast<int>(kernel.size()));
    dec.bases.push_back(std::move(basis));
  }

  long translates = 0, total = 0;
  for (size_t i = 0; i < dec.p_dims.size(); ++i)
    translates += static_cast<long>(dec.p_dims[i]) * (r - 2 * static_cast<long>(i) + 1);
  for (int d : alg.dims) total += d;
  if (translates != total)
    throw InvariantViolation("primitive dimensions do not sum to the algebra dimension");

  for (int d = 0; d <= r; ++d) {
    std::vector<std::vector<Scalar>> cols;
    for (int i = 0; i + i <= r && i <= d; ++i) {
      if (d - i > r - 2 * i) continue;  // l^{d-i} pushes P^i past its last translate
      const ScalarMatrix& basis = dec.bases[static_cast<size_t>(i)];
      if (basis.cols() == 0) continue;
      ScalarMatrix shift = map_power(alg, l, i, d - i);
      for (int c = 0; c < basis.cols(); ++c) {
        std::vector<Scalar> p(static_cast<size_t>(basis.rows()), Scalar(alg.field));
        for (int rr = 0; rr < basis.rows(); ++rr) p[static_cast<size_t>(rr)] = basis.at(rr, c);
        cols.push_back(matvec(shift, p));
      }
    }
    int want = alg.dims[static_cast<size_t>(d)];
    ScalarMatrix m = ScalarMatrix::zero(alg.field, want, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
      for (int rr = 0; rr < want; ++rr) m.at(rr, static_cast<int>(c)) = cols[c][static_cast<size_t>(rr)];
    if (static_cast<int>(cols.size()) != want || rank(m) != want)
      throw InvariantViolation("primitive translates fail to fill degree " + std::to_string(d));
  }
  return dec;
}

}  // namespace slp
