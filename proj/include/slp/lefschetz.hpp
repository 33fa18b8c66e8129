#pragma once

/*
 * Weighted-path Lefschetz analysis on a graded quotient poset.
 *
 * The multiplication map l^(j-i) between graded pieces is the weighted path
 * matrix: entry (v, u) sums the products of edge weights over all directed
 * paths u -> v.  Its determinant equals the signed sum over path systems
 * (Leibniz), and equals the signed sum over vertex-disjoint systems alone
 * (Lindstrom/Gessel-Viennot); both are enumerated exactly under a cap so the
 * identities can be checked literally on small posets.
 *
 * For odd top degree r the full Lefschetz matrix factors as A^t B A through
 * the two middle layers, with B the one-step middle matrix symmetrized by the
 * antiautomorphism.  Positive definiteness of B together with full column
 * rank of every one-step map below the middle is then equivalent to the
 * strong property, which is how the big quotients are settled.
 *
 * All verdicts come from exact elimination and the scalar sign oracle; no
 * floating point.
 */

#include <optional>
#include <string>
#include <vector>

#include "slp/linalg.hpp"
#include "slp/quotient.hpp"
#include "slp/rootsystem.hpp"

namespace slp {

// Weighted path matrix between degrees i <= j: rows indexed by V^j, columns
// by V^i in node-id order; computed by multiplying one-step cover matrices.
ScalarMatrix path_matrix(const QuotientPoset& poset, int i, int j);

struct PathSystem {
  std::vector<int> sigma;                // source slot -> target slot
  std::vector<std::vector<long>> paths;  // node-id sequences, one per source
  int sign = 1;                          // sgn(sigma)
  Scalar weight;                         // product of all edge weights
  bool vertex_disjoint = false;
};

struct PathSystemSummary {
  int degree_low = 0;
  int degree_high = 0;
  bool vertex_disjoint_mode = false;
  std::vector<long> sources;  // node ids, ascending
  std::vector<long> targets;

  // When overflow is set the enumeration hit the cap: count is still exact
  // in all-systems mode (permanent of the path-count matrix) but signed_sum,
  // sign data and the materialized list are not trustworthy and callers fall
  // back to the path-matrix determinant.
  bool overflow = false;
  long cap = 0;
  Rational count = 0;
  Scalar signed_sum;
  bool sign_uniform = false;  // all enumerated systems share one permutation sign
  int shared_sign = 0;        // that sign; 0 when empty or not uniform
  std::vector<PathSystem> systems;  // first `keep` systems, deterministic order
};

// Enumeration cap: SLP_PATH_CAP from the environment, else 10^6.
long path_system_cap();

// Path systems from `sources` (degree_low) to `targets` (degree_high); the
// defaults are the full layers.  Source/target counts must agree.
PathSystemSummary enumerate_path_systems(const QuotientPoset& poset, int degree_low,
                                         int degree_high, bool vertex_disjoint,
                                         std::vector<long> sources = {},
                                         std::vector<long> targets = {}, long cap = -1,
                                         long keep = 4096);

// Complementary layers V^i -> V^(r-i).
PathSystemSummary enumerate_path_systems(const QuotientPoset& poset, int degree,
                                         bool vertex_disjoint, long cap = -1);

// Signed sum over vertex-disjoint systems V^i -> V^(r-i); equals the path
// matrix determinant.  nullopt when the enumeration overflows the cap.
std::optional<Scalar> lgv_determinant(const QuotientPoset& poset, int degree, long cap = -1);

struct StrongDegree {
  int degree = 0;
  int rows = 0;
  int cols = 0;
  Scalar determinant;
  int sign = 0;
  bool pass = false;
};

struct StrongReport {
  bool pass = false;
  std::string message;
  std::vector<StrongDegree> degrees;
};

// Determinant of path_matrix(i, r-i) for every 0 <= i <= r/2; pass means all
// nonzero.  A failure is reported against the candidate element, since the
// property quantifies existentially over degree-one elements.
StrongReport strong_lefschetz_report(const QuotientPoset& poset);

struct WeakStep {
  int degree = 0;
  int rank = 0;
  int required = 0;  // |V^degree|, full column rank target
  bool full_rank = false;
};

struct WeakReport {
  bool pass = false;
  std::vector<WeakStep> steps;
};

// Rank of the one-step matrix V^i -> V^(i+1) for every 0 <= i < floor(r/2).
WeakReport weak_lefschetz_report(const QuotientPoset& poset);

struct MiddleForm {
  ScalarMatrix form;  // symmetrized one-step middle matrix, rows/cols = V^m ids
  bool positive_definite = false;
  WeakReport weak;
  bool strong_verdict = false;  // positive_definite and weak.pass
};

// Middle-form reduction for odd r: B(u, v) = one-step weight sum from v to
// the antiautomorphism image of u.  Symmetry is a theorem and is asserted.
MiddleForm middle_form_reduce(const RootSystem& rs, const QuotientPoset& poset);

// Does path_matrix(i, r-i) equal its relabeling through the antiautomorphism,
// entry (v, u) against entry (alpha(u), alpha(v))?
bool symmetry_check(const RootSystem& rs, const QuotientPoset& poset, int degree);

}  // namespace slp
