#pragma once

/*
 * Graded cover graph on the minimal coset representatives W^Theta.
 *
 * Nodes are the vectors of the W-orbit of rho_bar: the stabilizer of rho_bar
 * is exactly W_Theta (rho_bar lies on precisely the Theta-walls), so orbit
 * vectors label cosets faithfully and W(E8) never has to be materialized.
 * The degree of a node is its inversion count #{beta in Phi+ : beta-check of
 * the vector is negative}, which equals the length of the minimal coset
 * representative; the breadth-first depth must agree and is asserted.
 *
 * Edges are Bruhat covers u -> s_beta(u) rising one degree, weighted by
 * omega(e) = beta-check(u.vector) > 0.  Ids and edge order are deterministic:
 * nodes sorted by (degree, vector), edges by (src id, root index).
 */

#include <string>
#include <vector>

#include "slp/rootsystem.hpp"

namespace slp {

struct CosetNode {
  long id = 0;
  Vec vector;
  int degree = 0;
  std::vector<int> witness_word;  // reduced word reaching this coset in the orbit
};

struct WeightedEdge {
  long src = 0;  // lower node id
  long dst = 0;  // upper node id, degree src+1
  int root = 0;  // index into positive_roots
  Scalar weight;
};

struct QuotientPoset {
  CoxeterType type;
  std::vector<int> theta;
  FieldPtr field = field_rationals();
  int r = 0;  // top degree
  std::vector<CosetNode> nodes;  // indexed by id
  std::vector<WeightedEdge> edges;

  std::vector<std::vector<long>> by_degree;  // node ids per degree 0..r
  std::vector<std::vector<int>> out_edges;   // per node id, indices into edges
  std::vector<std::vector<int>> in_edges;

  const CosetNode& node(long id) const { return nodes[static_cast<size_t>(id)]; }

  // Rebuild by_degree / out_edges / in_edges from nodes and edges (used after
  // deserialization).
  void reindex();
};

QuotientPoset enumerate_quotient(const RootSystem& rs, const ThetaSubset& theta);

std::vector<int> degree_histogram(const QuotientPoset& poset);

// The involution on node ids induced by v -> w0(v); maps V^i onto V^{r-i} and
// reverses covers.
std::vector<long> antiautomorphism(const RootSystem& rs, const QuotientPoset& poset);

struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // empty when passing
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass = true;

  void add(const std::string& name, bool pass, const std::string& detail = "");
};

// Structural checks; failures are reported, never thrown.  A failed report
// marks the poset unusable downstream.
ValidationReport validate(const RootSystem& rs, const QuotientPoset& poset);

// Scale every node vector and edge weight by a positive factor (weights are
// linear in the vectors, so the recomputation invariant survives).
QuotientPoset rescale(const QuotientPoset& poset, const Scalar& factor);

// If all edge weights agree, that single value.
std::optional<Scalar> uniform_edge_weight(const QuotientPoset& poset);

}  // namespace slp
