#include "slp/lefschetz.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "slp/errors.hpp"
#include "slp/quotient.hpp"

namespace slp {

namespace {

int layer_slot(const std::vector<long>& ids, long id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) throw InvariantViolation("node id missing from its layer");
  return static_cast<int>(it - ids.begin());
}

ScalarMatrix one_step_matrix(const QuotientPoset& poset, int d) {
  const std::vector<long>& lo = poset.by_degree[static_cast<size_t>(d)];
  const std::vector<long>& up = poset.by_degree[static_cast<size_t>(d) + 1];
  ScalarMatrix m = ScalarMatrix::zero(poset.field, static_cast<int>(up.size()),
                                      static_cast<int>(lo.size()));
  m.row_ids = up;
  m.col_ids = lo;
  for (long u : lo)
    for (int ei : poset.out_edges[static_cast<size_t>(u)]) {
      const WeightedEdge& e = poset.edges[static_cast<size_t>(ei)];
      m.at(layer_slot(up, e.dst), layer_slot(lo, u)) += e.weight;
    }
  return m;
}

}  // namespace

ScalarMatrix path_matrix(const QuotientPoset& poset, int i, int j) {
  if (i < 0 || j < i || j > poset.r)
    throw ParameterError("path_matrix degrees out of range: i=" + std::to_string(i) +
                         " j=" + std::to_string(j) + " r=" + std::to_string(poset.r));
  const std::vector<long>& lo = poset.by_degree[static_cast<size_t>(i)];
  ScalarMatrix m = ScalarMatrix::identity(poset.field, static_cast<int>(lo.size()));
  m.row_ids = lo;
  m.col_ids = lo;
  for (int d = i; d < j; ++d) {
    m = multiply(one_step_matrix(poset, d), m);
    m.row_ids = poset.by_degree[static_cast<size_t>(d) + 1];
    m.col_ids = lo;
  }
  return m;
}

long path_system_cap() {
  static const long cap = [] {
    if (const char* s = std::getenv("SLP_PATH_CAP")) {
      long v = std::atol(s);
      if (v > 0) return v;
    }
    return 1000000L;
  }();
  return cap;
}

namespace {

// All directed paths from src up to degree hi that end in `wanted`, grouped
// by endpoint; each path is the full node-id sequence.  Recording counts
// against `budget`.
struct PathCollector {
  const QuotientPoset& poset;
  int hi;
  long budget;
  const std::vector<long>& wanted;  // sorted target ids
  bool overflow = false;
  std::map<long, std::vector<std::vector<long>>> by_target;
  std::vector<long> current;

  void dfs(long u) {
    if (overflow) return;
    current.push_back(u);
    if (poset.node(u).degree == hi) {
      if (std::binary_search(wanted.begin(), wanted.end(), u)) {
        if (budget <= 0)
          overflow = true;
        else {
          --budget;
          by_target[u].push_back(current);
        }
      }
    } else {
      for (int ei : poset.out_edges[static_cast<size_t>(u)]) {
        dfs(poset.edges[static_cast<size_t>(ei)].dst);
        if (overflow) break;
      }
    }
    current.pop_back();
  }
};

Scalar path_weight(const QuotientPoset& poset, const std::vector<long>& path) {
  Scalar w(poset.field, Rational(1));
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    bool found = false;
    for (int ei : poset.out_edges[static_cast<size_t>(path[k])]) {
      const WeightedEdge& e = poset.edges[static_cast<size_t>(ei)];
      if (e.dst == path[k + 1]) {
        w *= e.weight;
        found = true;
        break;
      }
    }
    if (!found) throw InvariantViolation("path step is not a cover");
  }
  return w;
}

int permutation_sign(const std::vector<int>& sigma) {
  int inversions = 0;
  for (size_t a = 0; a < sigma.size(); ++a)
    for (size_t b = a + 1; b < sigma.size(); ++b)
      if (sigma[a] > sigma[b]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// Permanent of a nonnegative integer matrix, expansion over the first
// unprocessed row with column mask recursion.
Rational permanent(const std::vector<std::vector<Rational>>& c, size_t row, unsigned used,
                   std::map<unsigned, Rational>& memo) {
  size_t n = c.size();
  if (row == n) return 1;
  auto it = memo.find(used);
  if (it != memo.end()) return it->second;
  Rational total = 0;
  for (size_t col = 0; col < n; ++col)
    if (!(used & (1u << col)) && c[row][col] != 0)
      total += c[row][col] * permanent(c, row + 1, used | (1u << col), memo);
  memo.emplace(used, total);
  return total;
}

bool all_vertex_disjoint(const std::vector<std::vector<long>>& paths) {
  std::map<long, int> seen;
  for (const auto& p : paths)
    for (long v : p)
      if (++seen[v] > 1) return false;
  return true;
}

void record_system(PathSystemSummary& s, const QuotientPoset& poset, std::vector<int> sigma,
                   std::vector<std::vector<long>> paths, bool vertex_disjoint, long keep) {
  int sign = permutation_sign(sigma);
  Scalar w(poset.field, Rational(1));
  for (const auto& p : paths) w *= path_weight(poset, p);
  s.count += 1;
  if (sign > 0)
    s.signed_sum += w;
  else
    s.signed_sum -= w;
  if (s.shared_sign == 0 && s.sign_uniform)
    s.shared_sign = sign;
  else if (s.shared_sign != sign)
    s.sign_uniform = false, s.shared_sign = 0;
  if (static_cast<long>(s.systems.size()) < keep) {
    PathSystem ps;
    ps.sigma = std::move(sigma);
    ps.paths = std::move(paths);
    ps.sign = sign;
    ps.weight = w;
    ps.vertex_disjoint = vertex_disjoint || all_vertex_disjoint(ps.paths);
    s.systems.push_back(std::move(ps));
  }
}

// Backtracking over source slots; targets and candidate paths visited in
// deterministic ascending order.  Returning false aborts the whole search
// because the cap was hit.
struct DisjointSearch {
  const QuotientPoset& poset;
  PathSystemSummary& summary;
  const std::vector<std::vector<std::vector<std::vector<long>>>>& paths;  // [src][tgt] -> list
  long cap;
  long keep;
  std::vector<char> used_target;
  std::vector<char> used_vertex;
  std::vector<int> sigma;
  std::vector<std::vector<long>> chosen;

  bool go(size_t slot) {
    size_t n = summary.sources.size();
    if (slot == n) {
      if (summary.count >= cap) {
        summary.overflow = true;
        return false;
      }
      record_system(summary, poset, sigma, chosen, true, keep);
      return true;
    }
    for (size_t t = 0; t < n; ++t) {
      if (used_target[t]) continue;
      for (const std::vector<long>& path : paths[slot][t]) {
        bool free = true;
        for (long v : path)
          if (used_vertex[static_cast<size_t>(v)]) {
            free = false;
            break;
          }
        if (!free) continue;
        for (long v : path) used_vertex[static_cast<size_t>(v)] = 1;
        used_target[t] = 1;
        sigma[slot] = static_cast<int>(t);
        chosen[slot] = path;
        bool keep_going = go(slot + 1);
        used_target[t] = 0;
        for (long v : path) used_vertex[static_cast<size_t>(v)] = 0;
        if (!keep_going) return false;
      }
    }
    return true;
  }
};

}  // namespace

PathSystemSummary enumerate_path_systems(const QuotientPoset& poset, int degree_low,
                                         int degree_high, bool vertex_disjoint,
                                         std::vector<long> sources, std::vector<long> targets,
                                         long cap, long keep) {
  if (degree_low < 0 || degree_high < degree_low || degree_high > poset.r)
    throw ParameterError("path system degrees out of range");
  if (cap < 0) cap = path_system_cap();
  if (sources.empty()) sources = poset.by_degree[static_cast<size_t>(degree_low)];
  if (targets.empty()) targets = poset.by_degree[static_cast<size_t>(degree_high)];
  std::sort(sources.begin(), sources.end());
  std::sort(targets.begin(), targets.end());
  for (long id : sources)
    if (poset.node(id).degree != degree_low)
      throw ParameterError("source node degree mismatch");
  for (long id : targets)
    if (poset.node(id).degree != degree_high)
      throw ParameterError("target node degree mismatch");
  if (sources.size() != targets.size())
    throw ParameterError("path system layers differ in size: " +
                         std::to_string(sources.size()) + " sources vs " +
                         std::to_string(targets.size()) + " targets");

  PathSystemSummary s;
  s.degree_low = degree_low;
  s.degree_high = degree_high;
  s.vertex_disjoint_mode = vertex_disjoint;
  s.sources = sources;
  s.targets = targets;
  s.cap = cap;
  s.signed_sum = Scalar(poset.field, Rational(0));
  s.sign_uniform = true;
  size_t n = sources.size();
  if (n == 0) {  // empty layers: the unique empty system
    s.count = 1;
    s.signed_sum = Scalar(poset.field, Rational(1));
    s.shared_sign = 1;
    s.systems.push_back(PathSystem{{}, {}, 1, Scalar(poset.field, Rational(1)), true});
    return s;
  }

  // Count paths per (source, target) pair by dynamic programming first, so
  // an oversized enumeration is detected before materializing anything.
  std::vector<std::vector<Rational>> counts(n, std::vector<Rational>(n, Rational(0)));
  Rational inventory = 0;
  for (size_t a = 0; a < n; ++a) {
    std::vector<Rational> ways(poset.nodes.size(), Rational(0));
    ways[static_cast<size_t>(sources[a])] = 1;
    for (int d = degree_low; d < degree_high; ++d)
      for (long u : poset.by_degree[static_cast<size_t>(d)]) {
        if (ways[static_cast<size_t>(u)] == 0) continue;
        for (int ei : poset.out_edges[static_cast<size_t>(u)])
          ways[static_cast<size_t>(poset.edges[static_cast<size_t>(ei)].dst)] +=
              ways[static_cast<size_t>(u)];
      }
    for (size_t t = 0; t < n; ++t) {
      counts[a][t] = ways[static_cast<size_t>(targets[t])];
      inventory += counts[a][t];
    }
  }
  if (n > 12 || inventory > Rational(cap)) {
    // too many candidate paths to materialize (or the permanent mask below
    // would not fit); callers fall back to the path matrix determinant
    s.overflow = true;
    s.sign_uniform = false;
    if (!vertex_disjoint && n <= 12) {
      std::map<unsigned, Rational> memo;
      s.count = permanent(counts, 0, 0u, memo);  // exact even though nothing is enumerated
    }
    return s;
  }

  Rational total = 0;
  if (!vertex_disjoint) {
    std::map<unsigned, Rational> memo;
    total = permanent(counts, 0, 0u, memo);
    if (total > Rational(cap)) {
      s.count = total;  // exact even though nothing is enumerated
      s.overflow = true;
      s.sign_uniform = false;
      return s;
    }
  }

  // Materialize the per-pair path lists; the inventory bound keeps this small.
  std::vector<std::vector<std::vector<std::vector<long>>>> paths(
      n, std::vector<std::vector<std::vector<long>>>(n));
  for (size_t a = 0; a < n; ++a) {
    PathCollector pc{poset, degree_high, cap, targets};
    pc.dfs(sources[a]);
    if (pc.overflow) throw InvariantViolation("path inventory exceeded its own pre-count");
    for (size_t t = 0; t < n; ++t) {
      auto it = pc.by_target.find(targets[t]);
      if (it != pc.by_target.end()) {
        if (Rational(static_cast<long>(it->second.size())) != counts[a][t])
          throw InvariantViolation("path count disagrees with its pre-count");
        paths[a][t] = std::move(it->second);
      } else if (counts[a][t] != 0) {
        throw InvariantViolation("path count disagrees with its pre-count");
      }
    }
  }

  if (!vertex_disjoint) {
    std::vector<int> sigma(n);
    for (size_t a = 0; a < n; ++a) sigma[a] = static_cast<int>(a);
    std::sort(sigma.begin(), sigma.end());
    do {
      bool feasible = true;
      for (size_t a = 0; a < n && feasible; ++a)
        feasible = !paths[a][static_cast<size_t>(sigma[a])].empty();
      if (!feasible) continue;
      std::vector<size_t> odo(n, 0);  // which path per source
      while (true) {
        std::vector<std::vector<long>> tuple(n);
        for (size_t a = 0; a < n; ++a) tuple[a] = paths[a][static_cast<size_t>(sigma[a])][odo[a]];
        record_system(s, poset, sigma, std::move(tuple), false, keep);
        size_t k = 0;
        while (k < n && ++odo[k] == paths[k][static_cast<size_t>(sigma[k])].size()) odo[k++] = 0;
        if (k == n) break;
      }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    if (s.count != total) throw InvariantViolation("path system count disagrees with permanent");
    if (s.count == 0) s.sign_uniform = true, s.shared_sign = 0;
    return s;
  }

  DisjointSearch search{poset,
                        s,
                        paths,
                        cap,
                        keep,
                        std::vector<char>(n, 0),
                        std::vector<char>(poset.nodes.size(), 0),
                        std::vector<int>(n, 0),
                        std::vector<std::vector<long>>(n)};
  search.go(0);
  if (s.overflow) s.sign_uniform = false, s.shared_sign = 0;
  if (s.count == 0) s.sign_uniform = true, s.shared_sign = 0;
  return s;
}

PathSystemSummary enumerate_path_systems(const QuotientPoset& poset, int degree,
                                         bool vertex_disjoint, long cap) {
  if (degree < 0 || degree > poset.r - degree)
    throw ParameterError("complementary path systems need 0 <= i <= r - i");
  return enumerate_path_systems(poset, degree, poset.r - degree, vertex_disjoint, {}, {}, cap);
}

std::optional<Scalar> lgv_determinant(const QuotientPoset& poset, int degree, long cap) {
  PathSystemSummary s = enumerate_path_systems(poset, degree, true, cap);
  if (s.overflow) return std::nullopt;
  return s.signed_sum;
}

StrongReport strong_lefschetz_report(const QuotientPoset& poset) {
  StrongReport report;
  report.pass = true;
  for (int i = 0; i + i <= poset.r; ++i) {
    ScalarMatrix m = path_matrix(poset, i, poset.r - i);
    StrongDegree d;
    d.degree = i;
    d.rows = m.rows();
    d.cols = m.cols();
    if (m.rows() != m.cols()) {
      d.determinant = Scalar(poset.field, Rational(0));
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

WeakReport weak_lefschetz_report(const QuotientPoset& poset) {
  WeakReport report;
  report.pass = true;
  for (int i = 0; i < poset.r / 2; ++i) {
    ScalarMatrix m = one_step_matrix(poset, i);
    WeakStep step;
    step.degree = i;
    step.rank = rank(m);
    step.required = m.cols();
    step.full_rank = step.rank == step.required;
    if (!step.full_rank) report.pass = false;
    report.steps.push_back(step);
  }
  return report;
}

MiddleForm middle_form_reduce(const RootSystem& rs, const QuotientPoset& poset) {
  if (poset.r % 2 == 0)
    throw UnsupportedError("middle form reduction needs odd top degree, got r=" +
                           std::to_string(poset.r));
  int m = poset.r / 2;
  ScalarMatrix step = path_matrix(poset, m, m + 1);
  std::vector<long> alpha = antiautomorphism(rs, poset);
  const std::vector<long>& mid = poset.by_degree[static_cast<size_t>(m)];
  int n = static_cast<int>(mid.size());
  MiddleForm out;
  out.form = ScalarMatrix::zero(poset.field, n, n);
  out.form.row_ids = mid;
  out.form.col_ids = mid;
  for (int p = 0; p < n; ++p) {
    long image = alpha[static_cast<size_t>(mid[static_cast<size_t>(p)])];
    int row = layer_slot(step.row_ids, image);
    for (int q = 0; q < n; ++q) out.form.at(p, q) = step.at(row, q);
  }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      if (!(out.form.at(p, q) == out.form.at(q, p)))
        throw InvariantViolation("middle form is not symmetric");
  out.positive_definite = is_positive_definite(out.form);
  out.weak = weak_lefschetz_report(poset);
  out.strong_verdict = out.positive_definite && out.weak.pass;
  return out;
}

bool symmetry_check(const RootSystem& rs, const QuotientPoset& poset, int degree) {
  if (degree < 0 || degree > poset.r - degree)
    throw ParameterError("symmetry check needs 0 <= i <= r - i");
  ScalarMatrix m = path_matrix(poset, degree, poset.r - degree);
  if (m.rows() != m.cols()) return false;
  std::vector<long> alpha = antiautomorphism(rs, poset);
  for (int b = 0; b < m.rows(); ++b)
    for (int a = 0; a < m.cols(); ++a) {
      long u = m.col_ids[static_cast<size_t>(a)];
      long v = m.row_ids[static_cast<size_t>(b)];
      int row = layer_slot(m.row_ids, alpha[static_cast<size_t>(u)]);
      int col = layer_slot(m.col_ids, alpha[static_cast<size_t>(v)]);
      if (!(m.at(b, a) == m.at(row, col))) return false;
    }
  return true;
}

}  // namespace slp
