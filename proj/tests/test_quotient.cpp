#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "slp/errors.hpp"
#include "slp/quotient.hpp"

using namespace slp;

namespace {

QuotientPoset quotient_of(const std::string& type, const std::string& theta_spec) {
  RootSystem rs = build_root_system(CoxeterType::parse(type));
  ThetaSubset th = make_theta(rs, parse_theta_spec(rs, theta_spec));
  return enumerate_quotient(rs, th);
}

// Independent histogram oracle: coefficients of W(t) / W_Theta(t) where
// W(t) = prod (1 + t + ... + t^(d_i - 1)) over the fundamental degrees.
std::vector<long> poincare_polynomial(const CoxeterType& type) {
  std::vector<long> p{1};
  for (int d : type.fundamental_degrees()) {
    std::vector<long> q(p.size() + static_cast<size_t>(d) - 1, 0);
    for (size_t i = 0; i < p.size(); ++i)
      for (int k = 0; k < d; ++k) q[i + static_cast<size_t>(k)] += p[i];
    p = std::move(q);
  }
  return p;
}

std::vector<long> poincare_quotient(const std::string& type, const std::string& sub) {
  std::vector<long> num = poincare_polynomial(CoxeterType::parse(type));
  if (sub.empty()) return num;
  std::vector<long> den = poincare_polynomial(CoxeterType::parse(sub));
  // exact polynomial division, low degree first
  std::vector<long> q(num.size() - den.size() + 1, 0);
  for (size_t i = 0; i < q.size(); ++i) {
    long c = num[i] / den[0];
    q[i] = c;
    for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
  }
  for (long c : num) REQUIRE(c == 0);
  return q;
}

std::vector<long> as_longs(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Order of the group generated by the simple reflections, enumerated as
// permutations of the full root list.  Independent of any orbit reasoning.
long order_by_permutations(const RootSystem& rs, const std::vector<int>& generator_indices) {
  std::vector<Vec> roots = rs.all_roots();
  int n = static_cast<int>(roots.size());
  auto index_of = [&](const Vec& v) {
    for (int k = 0; k < n; ++k)
      if (vec_eq(roots[static_cast<size_t>(k)], v)) return k;
    throw InvariantViolation("reflection image is not a root");
  };
  std::vector<std::vector<int>> gens;
  for (int gi : generator_indices) {
    std::vector<int> perm(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
      perm[static_cast<size_t>(k)] =
          index_of(rs.reflect(rs.simple_roots[static_cast<size_t>(gi)], roots[static_cast<size_t>(k)]));
    gens.push_back(std::move(perm));
  }
  std::vector<int> id(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) id[static_cast<size_t>(k)] = k;
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        std::vector<int> q(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) q[static_cast<size_t>(k)] = g[static_cast<size_t>(p[static_cast<size_t>(k)])];
        if (seen.insert(q).second) next.push_back(std::move(q));
      }
    frontier = std::move(next);
  }
  return static_cast<long>(seen.size());
}

}  // namespace

TEST_CASE("histograms match the Poincare quotient oracle") {
  const std::tuple<const char*, const char*, const char*> cases[] = {
      // type, theta spec, parabolic type for the oracle
      {"A2", "A1", "A1"},     {"A3", "A2", "A2"},       {"A4", "A3", "A3"},
      {"A5", "A4", "A4"},     {"B2", "A1", "A1"},       {"B3", "B2", "B2"},
      {"B4", "B3", "B3"},     {"D4", "A3", "A3"},       {"D5", "D4", "D4"},
      {"I2(5)", "A1", "A1"},  {"I2(6)", "A1", "A1"},    {"I2(7)", "A1", "A1"},
      {"I2(12)", "A1", "A1"}, {"H3", "I2(5)", "I2(5)"}, {"H4", "H3", "H3"},
      {"F4", "B3", "B3"},     {"E6", "D5", "D5"},       {"E7", "E6", "E6"},
      {"A2", "", ""},         {"A3", "", ""},           {"B2", "", ""},
      {"B3", "", ""},         {"I2(5)", "", ""},        {"I2(7)", "", ""},
  };
  for (const auto& [type, theta, sub] : cases) {
    QuotientPoset p = quotient_of(type, theta);
    CHECK_MESSAGE(as_longs(degree_histogram(p)) == poincare_quotient(type, sub),
                  type << " / " << (sub[0] ? sub : "empty"));
  }
}

TEST_CASE("frozen shapes of the large quotients") {
  QuotientPoset h4 = quotient_of("H4", "H3");
  CHECK(h4.nodes.size() == 120);
  CHECK(h4.r == 45);
  CHECK(degree_histogram(h4)[22] == 4);
  CHECK(degree_histogram(h4)[23] == 4);
  CHECK(as_longs(degree_histogram(h4)) == poincare_quotient("H4", "H3"));

  QuotientPoset e8 = quotient_of("E8", "E7");
  CHECK(e8.nodes.size() == 240);
  CHECK(e8.r == 57);
  CHECK(degree_histogram(e8)[28] == 8);
  CHECK(degree_histogram(e8)[29] == 8);
  CHECK(as_longs(degree_histogram(e8)) == poincare_quotient("E8", "E7"));

  QuotientPoset e6 = quotient_of("E6", "D5");
  CHECK(e6.nodes.size() == 27);
  CHECK(e6.r == 16);
  QuotientPoset e7 = quotient_of("E7", "E6");
  CHECK(e7.nodes.size() == 56);
  CHECK(e7.r == 27);
  QuotientPoset f4 = quotient_of("F4", "B3");
  CHECK(f4.nodes.size() == 24);
  CHECK(f4.r == 15);
  QuotientPoset h3 = quotient_of("H3", "I2(5)");
  CHECK(h3.nodes.size() == 12);
  CHECK(h3.r == 10);
  CHECK(as_longs(degree_histogram(h3)) == std::vector<long>{1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1});
}

TEST_CASE("A2 full quotient is the S3 Bruhat order") {
  QuotientPoset p = quotient_of("A2", "");
  CHECK(p.nodes.size() == 6);
  CHECK(p.r == 3);
  CHECK(as_longs(degree_histogram(p)) == std::vector<long>{1, 2, 2, 1});
  CHECK(p.edges.size() == 8);  // covers of the S3 Bruhat order
  // no two edges share (src, dst): the cover root is unique
  std::set<std::pair<long, long>> pairs;
  for (const WeightedEdge& e : p.edges) CHECK(pairs.insert({e.src, e.dst}).second);
}

TEST_CASE("witness words are reduced: length equals degree") {
  for (const char* type : {"A3", "B3", "H3"}) {
    QuotientPoset p = quotient_of(type, "");
    for (const CosetNode& n : p.nodes)
      CHECK(static_cast<int>(n.witness_word.size()) == n.degree);
  }
  QuotientPoset p = quotient_of("E6", "D5");
  for (const CosetNode& n : p.nodes)
    CHECK(static_cast<int>(n.witness_word.size()) == n.degree);
}

TEST_CASE("orbit size times parabolic order equals group order") {
  const char* types[] = {"A4", "B4", "D4", "F4", "H3", "H4", "I2(7)", "I2(12)"};
  for (const char* name : types) {
    RootSystem rs = build_root_system(CoxeterType::parse(name));
    std::vector<int> all(static_cast<size_t>(rs.type.rank));
    for (int i = 0; i < rs.type.rank; ++i) all[static_cast<size_t>(i)] = i;
    long w_order = order_by_permutations(rs, all);
    CHECK(w_order == rs.type.group_order());
    auto theta_idx = designated_theta(rs.type);
    long sub_order = order_by_permutations(rs, theta_idx);
    QuotientPoset p = enumerate_quotient(rs, make_theta(rs, theta_idx));
    CHECK_MESSAGE(static_cast<long>(p.nodes.size()) * sub_order == w_order, name);
  }
}

TEST_CASE("E7 over E6 has one uniform edge weight") {
  QuotientPoset p = quotient_of("E7", "E6");
  auto w = uniform_edge_weight(p);
  REQUIRE(w.has_value());
  CHECK(*w == Scalar(Rational(9)));                    // half-sum normalization
  CHECK(*w + *w == Scalar(Rational(18)));              // root-sum normalization
  CHECK(!uniform_edge_weight(quotient_of("A2", "")).has_value());
}

TEST_CASE("E8 over E7 rescaled to the highest root") {
  RootSystem rs = build_root_system(CoxeterType::parse("E8"));
  ThetaSubset th = make_theta(rs, designated_theta(rs.type));
  QuotientPoset p = enumerate_quotient(rs, th);
  // rho_bar = (29/2) theta, so 2/29 rescales the bottom vector to theta itself
  QuotientPoset q = rescale(p, Scalar(Rational(2, 29)));
  Vec theta_root = rs.positive_roots[static_cast<size_t>(rs.highest_root_index())];
  CHECK(vec_eq(q.node(0).vector, theta_root));
  Scalar one(Rational(1)), two(Rational(2));
  for (const WeightedEdge& e : q.edges) {
    bool is_one = e.weight == one, is_two = e.weight == two;
    CHECK((is_one || is_two));
    if (is_two) CHECK(q.node(e.src).degree == 28);  // only out of the middle layer
  }
  // weight 2 does occur
  bool saw_two = false;
  for (const WeightedEdge& e : q.edges) saw_two = saw_two || e.weight == two;
  CHECK(saw_two);
  // the rescaled poset still validates (weights recompute from vectors)
  CHECK(validate(rs, q).all_pass);
  CHECK_THROWS_AS(rescale(p, Scalar(Rational(-1))), ParameterError);
}

TEST_CASE("antiautomorphism structure") {
  for (const char* name : {"F4", "H3"}) {
    RootSystem rs = build_root_system(CoxeterType::parse(name));
    ThetaSubset th = make_theta(rs, designated_theta(rs.type));
    QuotientPoset p = enumerate_quotient(rs, th);
    auto alpha = antiautomorphism(rs, p);
    for (const CosetNode& n : p.nodes) {
      CHECK(alpha[static_cast<size_t>(alpha[static_cast<size_t>(n.id)])] == n.id);
      CHECK(p.node(alpha[static_cast<size_t>(n.id)]).degree == p.r - n.degree);
    }
    CHECK(alpha[0] == static_cast<long>(p.nodes.size()) - 1);  // bottom to top

    // edge u ->(beta) v maps to alpha(v) ->(-w0 beta) alpha(u)
    std::map<std::pair<long, long>, int> root_of;
    for (const WeightedEdge& e : p.edges) root_of[{e.src, e.dst}] = e.root;
    const ScalarMatrix& w0 = rs.w0_matrix();
    for (const WeightedEdge& e : p.edges) {
      long asrc = alpha[static_cast<size_t>(e.dst)];
      long adst = alpha[static_cast<size_t>(e.src)];
      auto it = root_of.find({asrc, adst});
      REQUIRE(it != root_of.end());
      Vec mapped = vec_neg(matvec(w0, rs.positive_roots[static_cast<size_t>(e.root)]));
      auto idx = rs.root_index(mapped);
      REQUIRE(idx.has_value());
      CHECK(it->second == *idx);
    }
  }
}

TEST_CASE("validation passes on the paper quotients") {
  for (const auto& [type, theta] : std::vector<std::pair<const char*, const char*>>{
           {"A3", "A2"}, {"B3", "B2"}, {"D4", "A3"}, {"F4", "B3"},
           {"H3", "I2(5)"}, {"E6", "D5"}, {"A2", ""}, {"B2", ""}}) {
    RootSystem rs = build_root_system(CoxeterType::parse(type));
    ThetaSubset th = make_theta(rs, parse_theta_spec(rs, theta));
    QuotientPoset p = enumerate_quotient(rs, th);
    ValidationReport rep = validate(rs, p);
    for (const ValidationCheck& c : rep.checks) CHECK_MESSAGE(c.pass, type << ": " << c.name);
    CHECK(rep.all_pass);
  }
}

TEST_CASE("validation negative controls") {
  RootSystem rs = build_root_system(CoxeterType::parse("B3"));
  ThetaSubset th = make_theta(rs, designated_theta(rs.type));
  QuotientPoset good = enumerate_quotient(rs, th);

  QuotientPoset zeroed = good;
  zeroed.edges[0].weight = Scalar(rs.field);
  ValidationReport rep = validate(rs, zeroed);
  CHECK(!rep.all_pass);
  bool positivity_failed = false;
  for (const ValidationCheck& c : rep.checks)
    if (c.name == "edge weights strictly positive") positivity_failed = !c.pass;
  CHECK(positivity_failed);

  QuotientPoset perturbed = good;
  perturbed.edges[0].weight *= Scalar(Rational(2));
  rep = validate(rs, perturbed);
  CHECK(!rep.all_pass);
  bool recompute_failed = false, positivity_ok = true;
  for (const ValidationCheck& c : rep.checks) {
    if (c.name == "edge weights equal recomputed coroot values") recompute_failed = !c.pass;
    if (c.name == "edge weights strictly positive") positivity_ok = c.pass;
  }
  CHECK(recompute_failed);
  CHECK(positivity_ok);
}

TEST_CASE("full parabolic gives the one-point poset") {
  RootSystem rs = build_root_system(CoxeterType::parse("B3"));
  ThetaSubset th = make_theta(rs, {0, 1, 2});
  QuotientPoset p = enumerate_quotient(rs, th);
  CHECK(p.nodes.size() == 1);
  CHECK(p.r == 0);
  CHECK(p.edges.empty());
  CHECK(validate(rs, p).all_pass);
}
