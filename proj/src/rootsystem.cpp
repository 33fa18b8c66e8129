/*
 * Root system construction.  One closure algorithm serves every family: seed
 * the simple roots in explicit coordinates, generate the full root set by
 * repeatedly applying simple reflections, then classify and sort.
 *
 * Several independent invariants are checked at construction time and raise
 * InvariantViolation on failure: the simple roots span a subspace of the
 * declared rank, |Phi+| equals the sum of (d_i - 1) over the fundamental
 * degrees, every root has Delta-coefficients of one sign, and the longest
 * element found by the descent walk sends rho to -rho.
 */

#include "slp/rootsystem.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "slp/errors.hpp"

namespace slp {

namespace {

void validate_type(const CoxeterType& t) {
  switch (t.family) {
    case Family::A:
      if (t.rank < 1) throw ParameterError("type A requires rank >= 1");
      break;
    case Family::B:
      if (t.rank < 2) throw ParameterError("type B requires rank >= 2");
      break;
    case Family::D:
      if (t.rank < 4) throw ParameterError("type D requires rank >= 4");
      break;
    case Family::E:
      if (t.rank < 6 || t.rank > 8) throw ParameterError("type E requires rank in {6,7,8}");
      break;
    case Family::F:
      if (t.rank != 4) throw ParameterError("type F requires rank 4");
      break;
    case Family::H:
      if (t.rank != 3 && t.rank != 4) throw ParameterError("type H requires rank in {3,4}");
      break;
    case Family::I2:
      if (t.rank != 2 || t.m < 3) throw ParameterError("type I2(m) requires m >= 3");
      break;
  }
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::string CoxeterType::name() const {
  switch (family) {
    case Family::A: return "A" + std::to_string(rank);
    case Family::B: return "B" + std::to_string(rank);
    case Family::D: return "D" + std::to_string(rank);
    case Family::E: return "E" + std::to_string(rank);
    case Family::F: return "F" + std::to_string(rank);
    case Family::H: return "H" + std::to_string(rank);
    case Family::I2: return "I2(" + std::to_string(m) + ")";
  }
  throw InvariantViolation("unhandled family");
}

CoxeterType CoxeterType::parse(const std::string& text) {
  CoxeterType t;
  if (text.rfind("I2(", 0) == 0 && text.size() > 4 && text.back() == ')') {
    std::string inner = text.substr(3, text.size() - 4);
    if (!all_digits(inner)) throw ParameterError("bad I2 parameter in '" + text + "'");
    t.family = Family::I2;
    t.rank = 2;
    t.m = std::stol(inner);
  } else if (text.size() >= 2) {
    std::string digits = text.substr(1);
    if (!all_digits(digits)) throw ParameterError("unrecognized Coxeter type '" + text + "'");
    switch (text[0]) {
      case 'A': t.family = Family::A; break;
      case 'B': t.family = Family::B; break;
      case 'D': t.family = Family::D; break;
      case 'E': t.family = Family::E; break;
      case 'F': t.family = Family::F; break;
      case 'H': t.family = Family::H; break;
      default: throw ParameterError("unrecognized Coxeter family in '" + text + "'");
    }
    t.rank = std::stoi(digits);
  } else {
    throw ParameterError("unrecognized Coxeter type '" + text + "'");
  }
  validate_type(t);
  return t;
}

std::vector<int> CoxeterType::fundamental_degrees() const {
  std::vector<int> d;
  switch (family) {
    case Family::A:
      for (int k = 2; k <= rank + 1; ++k) d.push_back(k);
      break;
    case Family::B:
      for (int k = 1; k <= rank; ++k) d.push_back(2 * k);
      break;
    case Family::D:
      for (int k = 1; k < rank; ++k) d.push_back(2 * k);
      d.push_back(rank);
      break;
    case Family::E:
      if (rank == 6) d = {2, 5, 6, 8, 9, 12};
      else if (rank == 7) d = {2, 6, 8, 10, 12, 14, 18};
      else d = {2, 8, 12, 14, 18, 20, 24, 30};
      break;
    case Family::F:
      d = {2, 6, 8, 12};
      break;
    case Family::H:
      if (rank == 3) d = {2, 6, 10};
      else d = {2, 12, 20, 30};
      break;
    case Family::I2:
      d = {2, static_cast<int>(m)};
      break;
  }
  std::sort(d.begin(), d.end());
  return d;
}

long CoxeterType::group_order() const {
  long order = 1;
  for (int d : fundamental_degrees()) order *= d;
  return order;
}

Scalar RootSystem::inner(const Vec& x, const Vec& y) const {
  size_t n = gram.size();
  if (x.size() != n || y.size() != n) throw ParameterError("inner product dimension mismatch");
  Scalar s(field);
  for (size_t i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    Scalar row(field);
    for (size_t j = 0; j < n; ++j) {
      if (gram[i][j].is_zero() || y[j].is_zero()) continue;
      row += gram[i][j] * y[j];
    }
    s += x[i] * row;
  }
  return s;
}

Scalar RootSystem::coroot_eval(const Vec& beta, const Vec& x) const {
  Scalar len = inner(beta, beta);
  if (len.is_zero()) throw ParameterError("coroot of a zero-length vector");
  return Scalar(field, Rational(2)) * inner(x, beta) / len;
}

Vec RootSystem::reflect(const Vec& beta, const Vec& x) const {
  return vec_sub(x, vec_scale(coroot_eval(beta, x), beta));
}

Scalar RootSystem::height(int root_index) const {
  const Vec& c = delta_coords.at(static_cast<size_t>(root_index));
  Scalar h(field);
  for (const auto& x : c) h += x;
  return h;
}

int RootSystem::highest_root_index() const {
  int best = 0;
  Scalar hb = height(0);
  for (int k = 1; k < static_cast<int>(positive_roots.size()); ++k) {
    Scalar h = height(k);
    if (hb.compare(h) < 0) {
      best = k;
      hb = h;
    }
  }
  return best;
}

std::optional<int> RootSystem::root_index(const Vec& v) const {
  for (size_t k = 0; k < positive_roots.size(); ++k)
    if (vec_eq(positive_roots[k], v)) return static_cast<int>(k);
  return std::nullopt;
}

std::vector<Vec> RootSystem::all_roots() const {
  std::vector<Vec> all = positive_roots;
  for (const Vec& v : positive_roots) all.push_back(vec_neg(v));
  return all;
}

Vec RootSystem::rho() const {
  Vec s = vec_zero(field, ambient_dim);
  for (const Vec& v : positive_roots) s = vec_add(s, v);
  return vec_scale(Scalar(field, Rational(1, 2)), s);
}

namespace {

Vec rational_vec(const FieldPtr& f, const std::vector<Rational>& coords) {
  Vec v;
  v.reserve(coords.size());
  for (const auto& q : coords) v.emplace_back(f, q);
  return v;
}

std::vector<std::vector<Scalar>> identity_gram(const FieldPtr& f, int n) {
  std::vector<std::vector<Scalar>> g(static_cast<size_t>(n),
                                     std::vector<Scalar>(static_cast<size_t>(n), Scalar(f)));
  for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)][static_cast<size_t>(i)] = Scalar(f, Rational(1));
  return g;
}

// e_i - e_{i+1} for i = 0..count-1 in ambient dimension n (0-based).
void push_chain_roots(std::vector<Vec>& simple, const FieldPtr& f, int n, int count) {
  for (int i = 0; i < count; ++i) {
    std::vector<Rational> c(static_cast<size_t>(n), Rational(0));
    c[static_cast<size_t>(i)] = 1;
    c[static_cast<size_t>(i + 1)] = -1;
    simple.push_back(rational_vec(f, c));
  }
}

void seed_simple_system(const CoxeterType& type, RootSystem& rs) {
  const Rational h(1, 2);
  switch (type.family) {
    case Family::A: {
      rs.field = field_rationals();
      rs.ambient_dim = type.rank + 1;
      push_chain_roots(rs.simple_roots, rs.field, rs.ambient_dim, type.rank);
      break;
    }
    case Family::B: {
      rs.field = field_rationals();
      rs.ambient_dim = type.rank;
      push_chain_roots(rs.simple_roots, rs.field, rs.ambient_dim, type.rank - 1);
      std::vector<Rational> last(static_cast<size_t>(type.rank), Rational(0));
      last.back() = 1;
      rs.simple_roots.push_back(rational_vec(rs.field, last));
      break;
    }
    case Family::D: {
      rs.field = field_rationals();
      rs.ambient_dim = type.rank;
      push_chain_roots(rs.simple_roots, rs.field, rs.ambient_dim, type.rank - 1);
      std::vector<Rational> last(static_cast<size_t>(type.rank), Rational(0));
      last[static_cast<size_t>(type.rank - 2)] = 1;
      last[static_cast<size_t>(type.rank - 1)] = 1;
      rs.simple_roots.push_back(rational_vec(rs.field, last));
      break;
    }
    case Family::E: {
      // E6 and E7 are the subsystems spanned by the first 6 and 7 of the
      // eight E8 simple roots, kept in the ambient R^8.
      rs.field = field_rationals();
      rs.ambient_dim = 8;
      std::vector<std::vector<Rational>> e8 = {
          {h, -h, -h, -h, -h, -h, -h, h},
          {1, 1, 0, 0, 0, 0, 0, 0},
          {-1, 1, 0, 0, 0, 0, 0, 0},
          {0, -1, 1, 0, 0, 0, 0, 0},
          {0, 0, -1, 1, 0, 0, 0, 0},
          {0, 0, 0, -1, 1, 0, 0, 0},
          {0, 0, 0, 0, -1, 1, 0, 0},
          {0, 0, 0, 0, 0, -1, 1, 0},
      };
      for (int i = 0; i < type.rank; ++i)
        rs.simple_roots.push_back(rational_vec(rs.field, e8[static_cast<size_t>(i)]));
      break;
    }
    case Family::F: {
      rs.field = field_rationals();
      rs.ambient_dim = 4;
      rs.simple_roots.push_back(rational_vec(rs.field, {0, 1, -1, 0}));
      rs.simple_roots.push_back(rational_vec(rs.field, {0, 0, 1, -1}));
      rs.simple_roots.push_back(rational_vec(rs.field, {0, 0, 0, 1}));
      rs.simple_roots.push_back(rational_vec(rs.field, {h, -h, -h, -h}));
      break;
    }
    case Family::H: {
      // Simple system over Q(sqrt5) with the ambient dot product; all roots
      // have squared length 4 and consecutive angles pi/5, pi/3 (, pi/3).
      rs.field = field_quadratic(5);
      rs.ambient_dim = type.rank;
      FieldPtr f = rs.field;
      Scalar phi(f, {Rational(1, 2), Rational(1, 2)});       // (1+sqrt5)/2
      Scalar phi1(f, {Rational(-1, 2), Rational(1, 2)});     // phi - 1
      Scalar zero(f), one(f, Rational(1)), two(f, Rational(2));
      if (type.rank == 3) {
        rs.simple_roots.push_back({two, zero, zero});
        rs.simple_roots.push_back({-phi, phi1, -one});
        rs.simple_roots.push_back({zero, zero, two});
      } else {
        rs.simple_roots.push_back({two, zero, zero, zero});
        rs.simple_roots.push_back({-phi, phi1, -one, zero});
        rs.simple_roots.push_back({zero, zero, two, zero});
        rs.simple_roots.push_back({zero, -phi, -one, phi1});
      }
      break;
    }
    case Family::I2: {
      // Coordinates in the simple-root basis itself; the geometry lives in
      // the Gram matrix [[2,-t],[-t,2]], t = 2cos(pi/m).  No orthonormal
      // realization exists over Q(2cos(pi/m)).
      rs.field = field_cosine(type.m);
      rs.ambient_dim = 2;
      FieldPtr f = rs.field;
      Scalar zero(f), one(f, Rational(1)), two(f, Rational(2));
      Scalar t = type.m == 3 ? one : Scalar::generator(f);
      rs.simple_roots.push_back({one, zero});
      rs.simple_roots.push_back({zero, one});
      rs.gram = {{two, -t}, {-t, two}};
      return;
    }
  }
  rs.gram = identity_gram(rs.field, rs.ambient_dim);
}

}  // namespace

RootSystem build_root_system(const CoxeterType& type) {
  validate_type(type);
  RootSystem rs;
  rs.type = type;
  seed_simple_system(type, rs);
  const int rank = static_cast<int>(rs.simple_roots.size());

  {
    ScalarMatrix s = ScalarMatrix::zero(rs.field, rank, rs.ambient_dim);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rs.ambient_dim; ++j)
        s.at(i, j) = rs.simple_roots[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (rank != type.rank || slp::rank(s) != rank)
      throw InvariantViolation("simple roots do not span rank " + std::to_string(type.rank));
  }

  // Closure: the W-orbit of the simple roots under simple reflections is Phi.
  std::map<Vec, char, VecLess> seen;
  std::vector<Vec> work;
  for (const Vec& a : rs.simple_roots)
    if (seen.emplace(a, 1).second) work.push_back(a);
  while (!work.empty()) {
    Vec v = std::move(work.back());
    work.pop_back();
    for (const Vec& alpha : rs.simple_roots) {
      Vec u = rs.reflect(alpha, v);
      if (seen.emplace(u, 1).second) work.push_back(u);
    }
  }

  // Delta-basis coordinates via the Gram matrix of the simple system:
  // c = C^{-1} (<alpha_i, v>)_i, verified against the ambient vector.
  ScalarMatrix c_gram = ScalarMatrix::zero(rs.field, rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      c_gram.at(i, j) = rs.inner(rs.simple_roots[static_cast<size_t>(i)],
                                 rs.simple_roots[static_cast<size_t>(j)]);
  auto c_inv = inverse(c_gram);
  if (!c_inv) throw InvariantViolation("singular simple-root Gram matrix");
  auto delta_of = [&](const Vec& v) {
    std::vector<Scalar> b(static_cast<size_t>(rank), Scalar(rs.field));
    for (int i = 0; i < rank; ++i) b[static_cast<size_t>(i)] = rs.inner(rs.simple_roots[static_cast<size_t>(i)], v);
    Vec c = matvec(*c_inv, b);
    Vec check = vec_zero(rs.field, rs.ambient_dim);
    for (int i = 0; i < rank; ++i)
      check = vec_add(check, vec_scale(c[static_cast<size_t>(i)], rs.simple_roots[static_cast<size_t>(i)]));
    if (!vec_eq(check, v)) throw InvariantViolation("root outside the span of the simple roots");
    return c;
  };

  struct Positive {
    Vec root, coords;
    Scalar h;
  };
  std::vector<Positive> pos;
  for (const auto& [v, tag] : seen) {
    (void)tag;
    Vec c = delta_of(v);
    bool has_pos = false, has_neg = false;
    Scalar h(rs.field);
    for (const Scalar& x : c) {
      int s = x.sign();
      if (s > 0) has_pos = true;
      if (s < 0) has_neg = true;
      h += x;
    }
    if (has_pos == has_neg) throw InvariantViolation("root with mixed-sign Delta coefficients");
    if (has_pos) pos.push_back({v, std::move(c), std::move(h)});
  }

  long expected = 0;
  for (int d : type.fundamental_degrees()) expected += d - 1;
  if (static_cast<long>(pos.size()) != expected)
    throw InvariantViolation("positive root count " + std::to_string(pos.size()) +
                             " does not match the fundamental degrees of " + type.name());

  // deg-lex in the Delta basis: by height, ties lexicographically.
  std::sort(pos.begin(), pos.end(), [](const Positive& x, const Positive& y) {
    int c = x.h.compare(y.h);
    if (c != 0) return c < 0;
    return vec_compare(x.coords, y.coords) < 0;
  });
  for (auto& p : pos) {
    rs.positive_roots.push_back(std::move(p.root));
    rs.delta_coords.push_back(std::move(p.coords));
  }

  // Longest element: walk -rho into the dominant chamber by simple descents.
  const Vec rho = rs.rho();
  const Vec neg_rho = vec_neg(rho);
  std::vector<int> word;
  Vec x = neg_rho;
  while (!vec_eq(x, rho)) {
    bool moved = false;
    for (int i = 0; i < rank; ++i) {
      const Vec& alpha = rs.simple_roots[static_cast<size_t>(i)];
      if (rs.coroot_eval(alpha, x).sign() < 0) {
        x = rs.reflect(alpha, x);
        word.push_back(i);
        moved = true;
        break;
      }
    }
    if (!moved) throw InvariantViolation("descent walk stalled before reaching rho");
  }
  if (word.size() != rs.positive_roots.size())
    throw InvariantViolation("longest element length differs from |Phi+|");

  ScalarMatrix m = ScalarMatrix::zero(rs.field, rs.ambient_dim, rs.ambient_dim);
  for (int j = 0; j < rs.ambient_dim; ++j) {
    Vec v = vec_zero(rs.field, rs.ambient_dim);
    v[static_cast<size_t>(j)] = Scalar(rs.field, Rational(1));
    for (int t = static_cast<int>(word.size()) - 1; t >= 0; --t)
      v = rs.reflect(rs.simple_roots[static_cast<size_t>(word[t])], v);
    for (int i = 0; i < rs.ambient_dim; ++i) m.at(i, j) = v[static_cast<size_t>(i)];
  }
  if (!vec_eq(matvec(m, rho), neg_rho)) throw InvariantViolation("w0 does not send rho to -rho");
  rs.w0_ = std::move(m);

  return rs;
}

ThetaSubset make_theta(const RootSystem& rs, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  const int rank = static_cast<int>(rs.simple_roots.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= rank)
      throw ParameterError("theta index " + std::to_string(indices[i]) + " out of range");
    if (i > 0 && indices[i] == indices[i - 1])
      throw ParameterError("duplicate theta index " + std::to_string(indices[i]));
  }

  ThetaSubset th;
  th.indices = std::move(indices);
  std::vector<char> in_theta(static_cast<size_t>(rank), 0);
  for (int i : th.indices) in_theta[static_cast<size_t>(i)] = 1;
  for (size_t k = 0; k < rs.positive_roots.size(); ++k) {
    bool supported = true;
    for (int j = 0; j < rank && supported; ++j)
      if (!in_theta[static_cast<size_t>(j)] && !rs.delta_coords[k][static_cast<size_t>(j)].is_zero())
        supported = false;
    if (supported) th.theta_positive.push_back(static_cast<int>(k));
  }

  Vec s = vec_zero(rs.field, rs.ambient_dim);
  for (int k : th.theta_positive) s = vec_add(s, rs.positive_roots[static_cast<size_t>(k)]);
  th.rho_theta = vec_scale(Scalar(rs.field, Rational(1, 2)), s);
  th.rho_bar = vec_sub(rs.rho(), th.rho_theta);

  for (int i : th.indices)
    if (!vec_eq(rs.reflect(rs.simple_roots[static_cast<size_t>(i)], th.rho_bar), th.rho_bar))
      throw InvariantViolation("rho_bar is not fixed by a theta reflection");

  // Strict positivity of every coroot value off Theta; downstream edge
  // weights inherit their positivity from this.
  std::vector<char> in_theta_pos(rs.positive_roots.size(), 0);
  for (int k : th.theta_positive) in_theta_pos[static_cast<size_t>(k)] = 1;
  for (size_t k = 0; k < rs.positive_roots.size(); ++k) {
    if (in_theta_pos[k]) continue;
    if (rs.coroot_eval(rs.positive_roots[k], th.rho_bar).sign() <= 0)
      throw InvariantViolation("coroot value on rho_bar not positive off Theta");
  }
  return th;
}

std::vector<int> designated_theta(const CoxeterType& type) {
  std::vector<int> idx;
  switch (type.family) {
    case Family::A:
      for (int i = 0; i + 1 < type.rank; ++i) idx.push_back(i);
      break;
    case Family::B:
    case Family::D:
      for (int i = 1; i < type.rank; ++i) idx.push_back(i);
      break;
    case Family::E:
      if (type.rank == 6) idx = {1, 2, 3, 4, 5};
      else if (type.rank == 7) idx = {0, 1, 2, 3, 4, 5};
      else idx = {0, 1, 2, 3, 4, 5, 6};
      break;
    case Family::F:
      idx = {0, 1, 2};
      break;
    case Family::H:
      if (type.rank == 3) idx = {0, 1};
      else idx = {0, 1, 2};
      break;
    case Family::I2:
      idx = {0};
      break;
  }
  return idx;
}

namespace {

std::string designated_theta_name(const CoxeterType& type) {
  switch (type.family) {
    case Family::A:
      return type.rank >= 2 ? "A" + std::to_string(type.rank - 1) : "";
    case Family::B:
      return type.rank == 2 ? "A1" : "B" + std::to_string(type.rank - 1);
    case Family::D:
      return type.rank == 4 ? "A3" : "D" + std::to_string(type.rank - 1);
    case Family::E:
      if (type.rank == 6) return "D5";
      return type.rank == 7 ? "E6" : "E7";
    case Family::F:
      return "B3";
    case Family::H:
      return type.rank == 3 ? "I2(5)" : "H3";
    case Family::I2:
      return "A1";
  }
  return "";
}

}  // namespace

std::vector<int> parse_theta_spec(const RootSystem& rs, const std::string& spec) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty() || s == "none") return {};

  bool index_list = true;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != ',') index_list = false;
  if (index_list) {
    std::vector<int> idx;
    size_t pos = 0;
    while (pos < s.size()) {
      size_t comma = s.find(',', pos);
      std::string piece = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!all_digits(piece)) throw ParameterError("bad theta index list '" + spec + "'");
      idx.push_back(std::stoi(piece));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return idx;
  }

  std::string expected = designated_theta_name(rs.type);
  if (!expected.empty() && s == expected) return designated_theta(rs.type);
  throw ParameterError("theta '" + spec + "' is not the designated parabolic of " + rs.type.name() +
                       (expected.empty() ? " (use an index list)"
                                         : " (expected '" + expected + "' or an index list)"));
}

RhoVectors rho_vectors(const RootSystem& rs, const ThetaSubset& theta) {
  return {rs.rho(), theta.rho_theta, theta.rho_bar};
}

}  // namespace slp
