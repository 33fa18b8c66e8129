#pragma once

/*
 * Explicit polynomial backend for coinvariant rings, the independent oracle
 * for the path-sum machinery.
 *
 * Polynomials are written over the simple roots: variable x_j stands for
 * alpha_j as a degree-1 element of Sym(V), so a reflection acts by
 * substituting linear forms for the variables.  Working in the alpha-basis
 * keeps every family over its natural scalar field; I2(m) in particular has
 * no orthonormal realization over Q(2cos(pi/m)), so ambient coordinates
 * would not do.
 *
 * The coinvariant ring is presented degree by degree: all monomials of that
 * degree, an echelonized spanning set of the ideal slice, and a greedy
 * deg-lex complement which descends to a basis of the quotient.  Closed-form
 * invariant generators exist here for types A, B, D, I2; E, F, H are served
 * by the poset route instead, and requesting them raises UnsupportedError.
 * Every complement dimension is checked against the Poincare polynomial of
 * the group, so a wrong generator set cannot produce a quiet misbuild.
 *
 * Divided differences A_gamma(f) = (f - s_gamma(f)) / gamma are exact: the
 * numerator is always divisible by gamma, and a nonzero remainder raises
 * InvariantViolation since it can only mean an arithmetic bug.  Schubert
 * classes are obtained by duality alone: evaluate every length-i operator on
 * the degree-i complement basis and invert that matrix.
 */

#include <map>
#include <string>
#include <vector>

#include "slp/lefschetz.hpp"
#include "slp/quotient.hpp"
#include "slp/rootsystem.hpp"

namespace slp {

using Monomial = std::vector<int>;  // exponent per variable

// Total degree first, then lexicographic on the exponent tuple.
struct DegLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

int monomial_degree(const Monomial& m);

struct Polynomial {
  FieldPtr field = field_rationals();
  int nvars = 0;
  std::map<Monomial, Scalar, DegLexLess> terms;  // no zero coefficients stored

  static Polynomial zero(const FieldPtr& f, int nvars);
  static Polynomial constant(const FieldPtr& f, int nvars, const Scalar& c);
  static Polynomial variable(const FieldPtr& f, int nvars, int index);
  static Polynomial linear(const FieldPtr& f, const std::vector<Scalar>& coeffs);

  bool is_zero() const { return terms.empty(); }
  int degree() const;  // total degree of the leading term; -1 for zero
  bool is_homogeneous() const;
  Polynomial homogeneous_component(int d) const;
  Scalar coefficient(const Monomial& m) const;
  Scalar constant_term() const;
  void add_term(const Monomial& m, const Scalar& c);  // accumulates, drops zeros
  std::string str() const;

  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Scalar& c, const Polynomial& a);
Polynomial poly_pow(const Polynomial& a, int e);

// Substitute images[j] for x_j; images must supply one polynomial per
// variable of f, all over a common variable count.
Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images);

// Coordinates of v over the simple roots; PreconditionError when v does not
// lie in their span.
std::vector<Scalar> delta_coordinates(const RootSystem& rs, const Vec& v);

// v as a degree-1 polynomial.
Polynomial vector_polynomial(const RootSystem& rs, const Vec& v);

// Action of the reflection in positive_roots[root_index].
Polynomial act_reflection(const RootSystem& rs, int root_index, const Polynomial& f);

// Action of the element s_{word[0]} s_{word[1]} ... (simple-root indices);
// the rightmost letter acts first.
Polynomial act(const RootSystem& rs, const std::vector<int>& word, const Polynomial& f);

// Reduced word, left to right, for the coset representative reaching a node.
std::vector<int> element_word(const CosetNode& node);

// Apply that representative to an ambient vector.
Vec apply_element(const RootSystem& rs, const CosetNode& node, const Vec& v);

// A_gamma(f) = (f - s_gamma(f)) / gamma for gamma = positive_roots[root_index].
Polynomial divided_difference(const RootSystem& rs, int root_index, const Polynomial& f);

// Composite A_{word[0]} o ... o A_{word[back]} of simple divided differences;
// the rightmost operator applies first.  Non-reduced words give the zero
// operator; no reducedness check is made or needed.
Polynomial bgg_apply(const RootSystem& rs, const std::vector<int>& word, const Polynomial& f);

struct DegreeSlice {
  std::vector<Monomial> monomials;  // every monomial of this degree, deg-lex
  Echelon ideal;                    // reduced spanning set of the ideal slice
  std::vector<int> complement;      // indices into monomials: the quotient basis
};

struct CoinvariantPresentation {
  CoxeterType type;
  FieldPtr field = field_rationals();
  int nvars = 0;
  int top = 0;  // number of positive roots
  std::vector<Polynomial> generators;
  std::vector<DegreeSlice> slices;  // degrees 0..top
  std::vector<int> dims;            // complement sizes per degree
};

// Closed-form fundamental invariants; types A, B, D, I2 only, each checked
// to be fixed by every simple reflection.
std::vector<Polynomial> invariant_generators(const RootSystem& rs);

// Full presentation with per-degree dimensions verified against the Poincare
// polynomial of the fundamental degrees.
CoinvariantPresentation coinvariant_presentation(const RootSystem& rs);

// The chosen monomial basis of the quotient in one degree (empty above top).
std::vector<Polynomial> coinvariant_basis(const CoinvariantPresentation& pres, int degree);

// Coordinates of a homogeneous f over the complement basis of its degree;
// empty above the top degree.
std::vector<Scalar> complement_coordinates(const CoinvariantPresentation& pres,
                                           const Polynomial& f, int degree);

// Canonical representative of f in the quotient, component by component.
Polynomial normal_form(const CoinvariantPresentation& pres, const Polynomial& f);

struct SchubertDualBasis {
  std::vector<std::vector<long>> elements;  // node ids of the full poset, per degree
  std::vector<ScalarMatrix> coords;  // per degree: column u = X_u over the complement basis
  std::vector<ScalarMatrix> evals;   // per degree: row w = values of the length-w functional
};

// Dual basis of the graded quotient: invert the evaluation matrix of the
// degree-i operators on the degree-i complement basis.  `full` must be the
// quotient poset with empty Theta over the same type.
SchubertDualBasis schubert_duals(const RootSystem& rs, const QuotientPoset& full,
                                 const CoinvariantPresentation& pres);

// X_w as a polynomial, w given by its full-poset node id.
Polynomial schubert_class(const CoinvariantPresentation& pres, const SchubertDualBasis& duals,
                          const QuotientPoset& full, long node_id);

// Node of the full quotient carrying the same group element as a relative
// coset representative (matched through the rho orbit).
long full_node_of(const RootSystem& rs, const QuotientPoset& full, const CosetNode& rel_node);

// Do all classes X_w for w in the relative quotient stay fixed under every
// simple reflection of its Theta?
bool schubert_theta_invariant(const RootSystem& rs, const QuotientPoset& full,
                              const QuotientPoset& relative,
                              const CoinvariantPresentation& pres,
                              const SchubertDualBasis& duals);

struct CoverExpansion {
  long dst = 0;
  Scalar coeff;
};

// chi . X_u = sum over covers u -> v of (beta-check of u(chi)) X_v; empty for
// the top element.
std::vector<CoverExpansion> chevalley_multiply(const RootSystem& rs, const QuotientPoset& poset,
                                               long node_id, const Vec& chi);

// Multiplication by the class of chi in the Schubert basis, degree -> degree+1,
// computed by explicit polynomial multiplication and base change.
ScalarMatrix schubert_one_step(const RootSystem& rs, const QuotientPoset& full,
                               const CoinvariantPresentation& pres,
                               const SchubertDualBasis& duals, const Vec& chi, int degree);

// Finite graded algebra with a chosen basis per degree: enough structure to
// iterate multiplication by a degree-1 element.
struct GradedAlgebra {
  FieldPtr field = field_rationals();
  std::vector<int> dims;  // degrees 0..top
  // gen_mult[g][i]: multiplication by the g-th degree-1 basis element as a
  // dims[i+1] x dims[i] matrix, for 0 <= i < top.
  std::vector<std::vector<ScalarMatrix>> gen_mult;

  int top() const { return static_cast<int>(dims.size()) - 1; }
};

GradedAlgebra algebra_of_presentation(const CoinvariantPresentation& pres);

// k[x] / (x^{n+1}) with basis 1, x, ..., x^n.
GradedAlgebra truncated_line(const FieldPtr& f, int n);

// Multiplication by sum_g l[g] basis_g as a map degree i -> i + 1.
ScalarMatrix one_step(const GradedAlgebra& alg, const std::vector<Scalar>& l, int i);

// l^k as a map degree i -> i + k; chains that leave the grading are the zero
// map (returned with a single zero row).
ScalarMatrix map_power(const GradedAlgebra& alg, const std::vector<Scalar>& l, int i, int k);

// Determinants of l^{top - 2i} from degree i to top - i, same report shape
// and wording as the poset route.
StrongReport strong_lefschetz_on_algebra(const GradedAlgebra& alg, const std::vector<Scalar>& l);

struct PrimitiveDecomposition {
  std::vector<int> p_dims;          // dim P^i for i = 0..floor(top/2)
  std::vector<ScalarMatrix> bases;  // columns: basis of P^i in degree-i coordinates
};

// P^i = kernel of l^{top - 2i + 1} on degree i.  Requires l to pass the
// strong check first (PreconditionError naming the failing degree otherwise)
// and verifies that the translates l^j P^i exactly fill every degree.
PrimitiveDecomposition primitive_decomposition(const GradedAlgebra& alg,
                                               const std::vector<Scalar>& l);

}  // namespace slp
