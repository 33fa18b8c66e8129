#include "slp/quotient.hpp"

#include <algorithm>
#include <map>

#include "slp/errors.hpp"

namespace slp {

void ValidationReport::add(const std::string& name, bool pass, const std::string& detail) {
  checks.push_back({name, pass, pass ? std::string() : detail});
  all_pass = all_pass && pass;
}

void QuotientPoset::reindex() {
  by_degree.assign(static_cast<size_t>(r) + 1, {});
  out_edges.assign(nodes.size(), {});
  in_edges.assign(nodes.size(), {});
  for (const CosetNode& n : nodes) by_degree[static_cast<size_t>(n.degree)].push_back(n.id);
  for (size_t e = 0; e < edges.size(); ++e) {
    out_edges[static_cast<size_t>(edges[e].src)].push_back(static_cast<int>(e));
    in_edges[static_cast<size_t>(edges[e].dst)].push_back(static_cast<int>(e));
  }
}

namespace {

int inversion_count(const RootSystem& rs, const Vec& v) {
  int count = 0;
  for (const Vec& beta : rs.positive_roots)
    if (rs.coroot_eval(beta, v).sign() < 0) ++count;
  return count;
}

}  // namespace

QuotientPoset enumerate_quotient(const RootSystem& rs, const ThetaSubset& theta) {
  QuotientPoset poset;
  poset.type = rs.type;
  poset.theta = theta.indices;
  poset.field = rs.field;

  // Breadth-first orbit of rho_bar under the simple reflections.
  struct OrbitEntry {
    int depth = 0;
    std::vector<int> word;
  };
  std::map<Vec, OrbitEntry, VecLess> orbit;
  std::vector<Vec> frontier{theta.rho_bar};
  orbit.emplace(theta.rho_bar, OrbitEntry{});
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (const Vec& v : frontier) {
      const OrbitEntry& cur = orbit.at(v);
      for (int i = 0; i < static_cast<int>(rs.simple_roots.size()); ++i) {
        Vec u = rs.reflect(rs.simple_roots[static_cast<size_t>(i)], v);
        if (vec_eq(u, v)) continue;
        auto [it, inserted] = orbit.emplace(u, OrbitEntry{});
        if (inserted) {
          it->second.depth = cur.depth + 1;
          it->second.word = cur.word;
          it->second.word.push_back(i);
          next.push_back(u);
        }
      }
    }
    frontier = std::move(next);
  }

  // Degrees by inversion count; breadth-first depth must agree.
  struct Pending {
    Vec vector;
    int degree = 0;
    std::vector<int> word;
  };
  std::vector<Pending> pending;
  pending.reserve(orbit.size());
  for (auto& [v, entry] : orbit) {
    int deg = inversion_count(rs, v);
    if (deg != entry.depth)
      throw InvariantViolation("inversion count differs from orbit depth");
    pending.push_back({v, deg, std::move(entry.word)});
  }
  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return vec_compare(a.vector, b.vector) < 0;
  });

  std::map<Vec, long, VecLess> id_of;
  for (size_t k = 0; k < pending.size(); ++k) {
    CosetNode n;
    n.id = static_cast<long>(k);
    n.vector = pending[k].vector;
    n.degree = pending[k].degree;
    n.witness_word = std::move(pending[k].word);
    id_of.emplace(n.vector, n.id);
    poset.r = std::max(poset.r, n.degree);
    poset.nodes.push_back(std::move(n));
  }

  if (poset.nodes.empty() || poset.nodes.front().degree != 0 ||
      (poset.nodes.size() > 1 && poset.nodes[1].degree == 0))
    throw InvariantViolation("orbit does not have a unique bottom node");

  // Covers: apply every positive-root reflection to every node; keep pairs
  // one degree apart.  The skipped fixed points are exactly the Theta-roots
  // of the coset.
  for (const CosetNode& n : poset.nodes) {
    for (int b = 0; b < static_cast<int>(rs.positive_roots.size()); ++b) {
      const Vec& beta = rs.positive_roots[static_cast<size_t>(b)];
      Vec u = rs.reflect(beta, n.vector);
      if (vec_eq(u, n.vector)) continue;
      auto it = id_of.find(u);
      if (it == id_of.end()) throw InvariantViolation("reflection left the orbit");
      const CosetNode& m = poset.node(it->second);
      if (m.degree != n.degree + 1) continue;
      Scalar w = rs.coroot_eval(beta, n.vector);
      if (w.sign() <= 0) throw InvariantViolation("cover edge with non-positive weight");
      poset.edges.push_back({n.id, m.id, b, std::move(w)});
    }
  }
  std::sort(poset.edges.begin(), poset.edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.src != b.src) return a.src < b.src;
    return a.root < b.root;
  });

  poset.reindex();
  return poset;
}

std::vector<int> degree_histogram(const QuotientPoset& poset) {
  std::vector<int> h(static_cast<size_t>(poset.r) + 1, 0);
  for (const CosetNode& n : poset.nodes) ++h[static_cast<size_t>(n.degree)];
  return h;
}

std::vector<long> antiautomorphism(const RootSystem& rs, const QuotientPoset& poset) {
  std::map<Vec, long, VecLess> id_of;
  for (const CosetNode& n : poset.nodes) id_of.emplace(n.vector, n.id);
  const ScalarMatrix& w0 = rs.w0_matrix();
  std::vector<long> alpha(poset.nodes.size(), -1);
  for (const CosetNode& n : poset.nodes) {
    Vec img = matvec(w0, n.vector);
    auto it = id_of.find(img);
    if (it == id_of.end()) throw InvariantViolation("w0 image is not an orbit vector");
    alpha[static_cast<size_t>(n.id)] = it->second;
  }
  return alpha;
}

ValidationReport validate(const RootSystem& rs, const QuotientPoset& poset) {
  ValidationReport rep;
  auto hist = degree_histogram(poset);

  rep.add("single bottom node", hist.empty() ? false : hist.front() == 1);
  rep.add("single top node", hist.empty() ? false : hist.back() == 1);

  bool symmetric = true;
  for (size_t i = 0; i < hist.size(); ++i)
    symmetric = symmetric && hist[i] == hist[hist.size() - 1 - i];
  rep.add("degree histogram is symmetric", symmetric);

  bool distinct = poset.nodes.size() == [&] {
    std::map<Vec, char, VecLess> s;
    for (const CosetNode& n : poset.nodes) s.emplace(n.vector, 1);
    return s.size();
  }();
  rep.add("node vectors pairwise distinct", distinct);

  bool steps = true, positive = true, recomputed = true;
  for (const WeightedEdge& e : poset.edges) {
    const CosetNode& u = poset.node(e.src);
    const CosetNode& v = poset.node(e.dst);
    steps = steps && v.degree == u.degree + 1;
    positive = positive && e.weight.sign() > 0;
    const Vec& beta = rs.positive_roots[static_cast<size_t>(e.root)];
    recomputed = recomputed && rs.coroot_eval(beta, u.vector) == e.weight &&
                 vec_eq(rs.reflect(beta, u.vector), v.vector);
  }
  rep.add("covers rise one degree", steps);
  rep.add("edge weights strictly positive", positive);
  rep.add("edge weights equal recomputed coroot values", recomputed);

  bool outgoing = true, incoming = true;
  for (const CosetNode& n : poset.nodes) {
    if (n.degree < poset.r) outgoing = outgoing && !poset.out_edges[static_cast<size_t>(n.id)].empty();
    if (n.degree > 0) incoming = incoming && !poset.in_edges[static_cast<size_t>(n.id)].empty();
  }
  rep.add("every non-top node has an outgoing cover", outgoing);
  rep.add("every non-bottom node has an incoming cover", incoming);

  bool involution = true, degree_flip = true, reverses = true;
  try {
    auto alpha = antiautomorphism(rs, poset);
    for (const CosetNode& n : poset.nodes) {
      long a = alpha[static_cast<size_t>(n.id)];
      involution = involution && alpha[static_cast<size_t>(a)] == n.id;
      degree_flip = degree_flip && poset.node(a).degree == poset.r - n.degree;
    }
    // each cover u -> v maps to a cover alpha(v) -> alpha(u)
    std::map<std::pair<long, long>, char> has_edge;
    for (const WeightedEdge& e : poset.edges) has_edge.emplace(std::make_pair(e.src, e.dst), 1);
    for (const WeightedEdge& e : poset.edges) {
      long asrc = alpha[static_cast<size_t>(e.dst)];
      long adst = alpha[static_cast<size_t>(e.src)];
      reverses = reverses && has_edge.count({asrc, adst}) > 0;
    }
  } catch (const Error&) {
    involution = degree_flip = reverses = false;
  }
  rep.add("antiautomorphism is an involution", involution);
  rep.add("antiautomorphism maps V^i onto V^(r-i)", degree_flip);
  rep.add("antiautomorphism reverses covers", reverses);

  auto uniform = uniform_edge_weight(poset);
  if (uniform)
    rep.add("edge weights uniform", true,
            "single value " + uniform->str());
  return rep;
}

QuotientPoset rescale(const QuotientPoset& poset, const Scalar& factor) {
  if (factor.sign() <= 0) throw ParameterError("rescale factor must be positive");
  QuotientPoset p = poset;
  for (CosetNode& n : p.nodes)
    for (Scalar& c : n.vector) c *= factor;
  for (WeightedEdge& e : p.edges) e.weight *= factor;
  return p;
}

std::optional<Scalar> uniform_edge_weight(const QuotientPoset& poset) {
  if (poset.edges.empty()) return std::nullopt;
  const Scalar& w = poset.edges.front().weight;
  for (const WeightedEdge& e : poset.edges)
    if (e.weight != w) return std::nullopt;
  return w;
}

}  // namespace slp
