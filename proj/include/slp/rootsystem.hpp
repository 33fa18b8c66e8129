#pragma once

/*
 * Finite (crystallographic and non-crystallographic) root systems with exact
 * coordinates.  Families: A(n>=1), B(n>=2), D(n>=4), E(6..8), F(4), H(3,4),
 * I2(m>=3).  A, B, D, E, F use the standard orthonormal ambient embeddings
 * (E6/E7 as subsystems of the E8 realization in R^8); H3/H4 live over
 * Q(sqrt5) with identity Gram; I2(m) is realized in simple-root coordinates
 * over Q(2cos(pi/m)) with the Coxeter Gram matrix, since no orthonormal
 * realization exists over that field.
 *
 * The full root set is generated from the simple roots by closing under
 * simple reflections.  Positive roots are ordered degree-lexicographically by
 * their coefficient tuples in the simple-root basis; that order fixes root
 * indices everywhere else in the library.
 */

#include <optional>
#include <string>
#include <vector>

#include "slp/linalg.hpp"
#include "slp/vec.hpp"

namespace slp {

enum class Family { A, B, D, E, F, H, I2 };

struct CoxeterType {
  Family family = Family::A;
  int rank = 1;
  long m = 0;  // bond label, I2 only

  std::string name() const;           // "A3", "I2(7)", ...
  static CoxeterType parse(const std::string& text);
  bool operator==(const CoxeterType& o) const {
    return family == o.family && rank == o.rank && m == o.m;
  }
  // Degrees of the fundamental invariants, lowest first.
  std::vector<int> fundamental_degrees() const;
  long group_order() const;
};

struct RootSystem {
  CoxeterType type;
  FieldPtr field;
  int ambient_dim = 0;
  std::vector<Vec> simple_roots;
  std::vector<Vec> positive_roots;  // deg-lex order in the simple-root basis
  std::vector<std::vector<Scalar>> gram;  // ambient inner product matrix

  // Delta-basis coefficients of each positive root, parallel to positive_roots.
  std::vector<Vec> delta_coords;

  Scalar inner(const Vec& x, const Vec& y) const;
  Scalar coroot_eval(const Vec& beta, const Vec& x) const;  // 2<x,beta>/<beta,beta>
  Vec reflect(const Vec& beta, const Vec& x) const;         // s_beta(x)

  Scalar height(int root_index) const;  // sum of Delta coefficients
  int highest_root_index() const;       // maximizes height

  // Index of v in positive_roots; nullopt if v is not a positive root.
  std::optional<int> root_index(const Vec& v) const;

  std::vector<Vec> all_roots() const;  // positives then their negatives

  Vec rho() const;  // half sum of positive roots

  // Longest element of W as an ambient matrix (computed at construction,
  // verified to send rho to -rho).
  const ScalarMatrix& w0_matrix() const { return w0_; }

 private:
  ScalarMatrix w0_;
  friend RootSystem build_root_system(const CoxeterType& type);
};

RootSystem build_root_system(const CoxeterType& type);

// A parabolic subset Theta of the simple roots (0-based indices into
// simple_roots) together with the derived data used by quotients.
struct ThetaSubset {
  std::vector<int> indices;            // sorted, 0-based
  std::vector<int> theta_positive;     // positive roots lying in span(Theta)
  Vec rho_theta;                       // half sum of those
  Vec rho_bar;                         // rho - rho_theta
};

ThetaSubset make_theta(const RootSystem& rs, std::vector<int> indices);

// The parabolic subset used in the inductive verification for each type
// (A_{n-1} in A_n, B_{n-1} in B_n, D_{n-1} in D_n, A1 in I2(m), I2(5) in H3,
// H3 in H4, B3 in F4, D5 in E6, E6 in E7, E7 in E8).  0-based indices.
std::vector<int> designated_theta(const CoxeterType& type);

// Parse a Theta option: either a comma-separated index list ("0,2,3", 0-based)
// or a type name resolved against the designated subsets ("B3", "E7", ...).
// An empty string means the empty subset.
std::vector<int> parse_theta_spec(const RootSystem& rs, const std::string& spec);

struct RhoVectors {
  Vec rho, rho_theta, rho_bar;
};
RhoVectors rho_vectors(const RootSystem& rs, const ThetaSubset& theta);

}  // namespace slp
