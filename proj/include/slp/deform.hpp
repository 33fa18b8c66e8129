#pragma once

/*
 * Deformation engine for fibered Lefschetz verification.
 *
 * Given a coinvariant algebra E fibered over its ring of parabolic
 * invariants B with fiber the parabolic coinvariant algebra F, the strong
 * Lefschetz property of E follows from those of (B, lambda) and (F, tau):
 * a one-parameter family A_t of B-linear degree-1 endomorphisms connects
 * multiplication by a lift x of tau (at t = 1) to the block structure of the
 * tensor product B (x) F (at t = 0), where the property holds by the
 * binomial-determinant argument for truncated polynomial lines.  Each
 * determinant D_k(t) = det((Lambda + A_t)^{e-2k}) is an exact polynomial in
 * t, nonzero at t = 0, so a concrete integer t0 avoiding every root makes
 * pi(lambda) + t0 x a strong Lefschetz element of E, which is then checked
 * directly.
 *
 * Everything here is exact: A_t is recovered coefficient-by-coefficient from
 * evaluations at small integers (with surplus evaluations confirming the
 * degree bound), D_k by Lagrange interpolation of determinant values, and
 * the module bases, sections, and change-of-base identities are asserted as
 * matrix identities, not assumed.
 */

#include <array>
#include <vector>

#include "slp/linalg.hpp"
#include "slp/polyring.hpp"
#include "slp/quotient.hpp"
#include "slp/rootsystem.hpp"

namespace slp {

struct BinomialCheck {
  ScalarMatrix matrix;  // binomial entries, rows/cols the monomial bases
  Scalar determinant;
  bool nonzero = false;
};

// The Lefschetz map (X+Y)^{n+m-2i} on degree i of k[X,Y]/(X^{n+1}, Y^{m+1})
// has the closed-form binomial matrix; both routes are computed and must
// agree, and the determinant must be nonzero.  Requires 0 <= n <= m and
// 0 <= i <= (n+m)/2.
BinomialCheck binomial_matrix_check(int n, int m, int i);

struct TensorAlgebra {
  GradedAlgebra algebra;
  // basis label per degree: (p, a, b) = degree-p factor index a of the left
  // algebra times index b of the right one, p ascending, b fastest
  std::vector<std::vector<std::array<int, 3>>> labels;
  std::vector<Scalar> omega;  // mu (x) 1 + 1 (x) nu in degree-1 coordinates
  StrongReport strong;        // verification of omega
};

// Tensor product of two verified Lefschetz algebras; the summed element is
// again Lefschetz and is verified by exact determinants before returning.
TensorAlgebra tensor_product_algebra(const GradedAlgebra& u, const std::vector<Scalar>& mu,
                                     const GradedAlgebra& v, const std::vector<Scalar>& nu);

struct ParabolicClass {
  CoxeterType type;        // abstract type of the parabolic subgroup
  std::vector<int> order;  // theta indices matched to the simple roots of that type
};

// Classify a subset of simple roots as a parabolic of type A, B, D, or I2.
// Disconnected subsets and families outside those are unsupported.
ParabolicClass classify_parabolic(const RootSystem& rs, const std::vector<int>& indices);

// One basis vector x^j * stilde(p) of the free-module frame: p indexes the
// primitive basis of F^i, and coords live in degree i+j of E.
struct ModuleVector {
  int i = 0;
  int j = 0;
  int p = 0;
  std::vector<Scalar> coords;
};

struct FibrationData {
  RootSystem rs;
  ThetaSubset theta;
  CoxeterType f_type;

  CoinvariantPresentation pres_e;  // coinvariants of rs
  CoinvariantPresentation pres_f;  // coinvariants of the parabolic type
  GradedAlgebra e_alg;
  GradedAlgebra b_alg;  // parabolic invariants of E, relative Schubert basis
  GradedAlgebra f_alg;

  std::vector<ScalarMatrix> pi;       // per degree g: E-coordinates of the B basis
  std::vector<ScalarMatrix> iota;     // per degree d <= f-top: restriction E -> F
  std::vector<ScalarMatrix> section;  // per degree h <= f-top: corrected section F -> E

  std::vector<Scalar> lambda_b;  // B^1 coordinates of the rho-bar class
  std::vector<Scalar> tau_f;     // F^1 coordinates of the parabolic rho class
  std::vector<Scalar> x_e;       // E^1 lift of tau along iota

  std::vector<std::vector<ModuleVector>> ftilde;           // per E-degree
  std::vector<ScalarMatrix> module_change;                 // per E-degree d: columns pi(b)*u
  std::vector<std::vector<std::array<int, 3>>> module_labels;  // (g, a, kappa) per column

  StrongReport b_strong;
  StrongReport f_strong;
};

// Build and validate the fibration carried by a parabolic subgroup: the
// relative Schubert basis of B, the parabolic quotient F with its variable
// matching, freeness of E over B degree by degree, the corrected section
// with image spanned by x-powers of primitive lifts, and the Lefschetz
// verification of both B (cross-checked against the weighted path matrices
// of the coset poset) and F.  Hypothesis failures throw InvariantViolation
// naming the degree.
FibrationData fibration_validate(const RootSystem& rs, const ThetaSubset& theta);

struct DeformationEntry {
  int k = 0;
  std::vector<Scalar> coeffs;  // D_k(t), ascending powers of t
  Scalar at_zero;              // D_k(0)
  Scalar tensor_ratio;         // D_k(0) over the tensor-product determinant
};

struct DeformationReport {
  std::vector<DeformationEntry> dk;
  long t0 = 0;
  bool composition_ok = false;     // chi_t . phi_t = t^deg at sampled t
  bool change_of_base_ok = false;  // chi_t . A_t . chi_{1/t} = t x at sampled t
  std::vector<Scalar> final_element;  // E^1 coordinates of pi(lambda) + t0 x
  StrongReport final_check;
  bool pass = false;
};

// Run the deformation: recover each A_t exactly, interpolate the determinant
// polynomials D_k, assert D_k(0) matches the tensor route through the module
// basis, pick the smallest positive integer t0 with every D_k(t0) nonzero,
// and verify pi(lambda) + t0 x directly on E.
DeformationReport deformation_scan(const FibrationData& fd);

}  // namespace slp
