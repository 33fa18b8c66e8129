/*
 * Deformation engine: proves that the coinvariant algebra E of a reflection
 * group inherits the strong Lefschetz property from a parabolic fibration.
 *
 * The data is a subset Theta of simple roots.  B is the subring of E spanned
 * by the Theta-invariant Schubert classes (the relative coinvariant ring), F
 * is the coinvariant algebra of the parabolic subgroup realized on a fresh
 * root system of the matching type, pi : B -> E is the inclusion and
 * iota : E -> F the restriction induced by orthogonal projection onto the
 * span of Theta.  After checking that E is a free B-module on a frame
 * x^j s(p) built from primitive vectors p of F and a degree-one lift x of
 * the fiber Lefschetz element tau, the one-parameter operator family
 *
 *   A_t = phi_t . (mult by x) . phi_{1/t},   phi_t = scale B-degree g by t^g,
 *
 * interpolates between mult by x (t = 1) and the block-triangular shift of
 * the tensor product B (x) F (t = 0).  Every entry of A_t is a polynomial in
 * t of degree at most the top degree of B, so each Lefschetz determinant
 * D_k(t) = det((Lambda + A_t)^{e-2k}) is recovered exactly by interpolation
 * at small integers, with surplus evaluation nodes confirming the degree
 * bounds.  D_k(0) is nonzero by the tensor-product argument, so a positive
 * integer t0 past every root of every D_k exists, and pi(lambda) + t0 x is
 * verified directly as a strong Lefschetz element of E.
 */

#include "slp/deform.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slp/errors.hpp"
#include "slp/lefschetz.hpp"

namespace slp {

namespace {

Rational binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return Rational(0);
  mpz_class z;
  mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(z);
}

// Re-express s inside the (larger) field f; rationals embed everywhere.
Scalar to_field(Scalar s, const FieldPtr& f) {
  Scalar z(f);
  unify_fields(s, z);
  return s;
}

FieldPtr unified(const FieldPtr& a, const FieldPtr& b) {
  Scalar x(a);
  Scalar y(b);
  unify_fields(x, y);
  return x.field();
}

Scalar pow_scalar(const FieldPtr& f, const Scalar& base, int e) {
  Scalar r(f, Rational(1));
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

ScalarMatrix mat_add(const ScalarMatrix& x, const ScalarMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw ParameterError("matrix sum needs equal shapes");
  ScalarMatrix r = ScalarMatrix::zero(x.field, x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) r.at(i, j) = x.at(i, j) + y.at(i, j);
  return r;
}

// m with column c scaled by t^{exps[c]}.
ScalarMatrix scale_columns(const ScalarMatrix& m, const FieldPtr& f, const Scalar& t,
                           const std::vector<int>& exps) {
  ScalarMatrix r = m;
  for (int c = 0; c < m.cols(); ++c) {
    Scalar s = pow_scalar(f, t, exps[static_cast<size_t>(c)]);
    for (int i = 0; i < m.rows(); ++i) r.at(i, c) = r.at(i, c) * s;
  }
  return r;
}

// Exact polynomial through (nodes[i], values[i]), ascending coefficients.
std::vector<Scalar> interpolate(const FieldPtr& f, const std::vector<long>& nodes,
                                std::vector<Scalar> values) {
  size_t n = nodes.size();
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) {
      Scalar gap(f, Rational(nodes[i] - nodes[i - j]));
      values[i] = (values[i] - values[i - 1]) / gap;
      if (i == j) break;
    }
  std::vector<Scalar> coeffs;
  for (size_t k = n; k-- > 0;) {
    coeffs.insert(coeffs.begin(), Scalar(f));
    Scalar node(f, Rational(nodes[k]));
    for (size_t i = 0; i + 1 < coeffs.size(); ++i)
      coeffs[i] = coeffs[i] - node * coeffs[i + 1];
    coeffs[0] = coeffs[0] + values[k];
  }
  while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
  return coeffs;
}

Scalar eval_poly(const FieldPtr& f, const std::vector<Scalar>& coeffs, const Scalar& t) {
  Scalar r(f);
  for (size_t k = coeffs.size(); k-- > 0;) r = r * t + coeffs[k];
  return r;
}

ScalarMatrix eval_matrix_poly(const std::vector<ScalarMatrix>& coeffs, const FieldPtr& f,
                              const Scalar& t) {
  ScalarMatrix r = coeffs.back();
  for (size_t k = coeffs.size() - 1; k-- > 0;) {
    ScalarMatrix next = ScalarMatrix::zero(f, r.rows(), r.cols());
    for (int i = 0; i < r.rows(); ++i)
      for (int j = 0; j < r.cols(); ++j) next.at(i, j) = r.at(i, j) * t + coeffs[k].at(i, j);
    r = std::move(next);
  }
  return r;
}

Polynomial poly_of_coords(const CoinvariantPresentation& pres, const std::vector<Scalar>& coords,
                          int degree) {
  std::vector<Polynomial> basis = coinvariant_basis(pres, degree);
  if (basis.size() != coords.size())
    throw ParameterError("coordinate count differs from the basis dimension");
  Polynomial r = Polynomial::zero(pres.field, pres.nvars);
  for (size_t k = 0; k < coords.size(); ++k) r = r + coords[k] * basis[k];
  return r;
}

}  // namespace

BinomialCheck binomial_matrix_check(int n, int m, int i) {
  if (n < 0 || m < n) throw ParameterError("binomial check needs 0 <= n <= m");
  int d = n + m;
  if (i < 0 || 2 * i > d) throw ParameterError("binomial check needs 0 <= i <= (n+m)/2");
  int power = d - 2 * i;
  FieldPtr f = field_rationals();

  // closed form: rows and columns indexed by monomials with ascending first
  // exponent
  ScalarMatrix formula = ScalarMatrix::zero(f, 1, 1);
  if (i <= n) {
    formula = ScalarMatrix::zero(f, i + 1, i + 1);
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        formula.at(j, k) = Scalar(f, binomial(power, n - i + j - k));
  } else {
    formula = ScalarMatrix::zero(f, n + 1, n + 1);
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) formula.at(j, k) = Scalar(f, binomial(power, j - k));
  }

  // direct route: multiply through the truncated ring
  int clo = std::max(0, i - m);
  int chi = std::min(n, i);
  int rlo = std::max(0, d - i - m);
  int rhi = std::min(n, d - i);
  ScalarMatrix direct = ScalarMatrix::zero(f, rhi - rlo + 1, chi - clo + 1);
  for (int a = clo; a <= chi; ++a) {
    std::vector<std::vector<Rational>> g(static_cast<size_t>(n) + 1,
                                         std::vector<Rational>(static_cast<size_t>(m) + 1,
                                                               Rational(0)));
    g[static_cast<size_t>(a)][static_cast<size_t>(i - a)] = 1;
    for (int s = 0; s < power; ++s) {
      std::vector<std::vector<Rational>> h(static_cast<size_t>(n) + 1,
                                           std::vector<Rational>(static_cast<size_t>(m) + 1,
                                                                 Rational(0)));
      for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= m; ++y) {
          const Rational& c = g[static_cast<size_t>(x)][static_cast<size_t>(y)];
          if (c == 0) continue;
          if (x + 1 <= n) h[static_cast<size_t>(x) + 1][static_cast<size_t>(y)] += c;
          if (y + 1 <= m) h[static_cast<size_t>(x)][static_cast<size_t>(y) + 1] += c;
        }
      g.swap(h);
    }
    for (int ap = rlo; ap <= rhi; ++ap)
      direct.at(ap - rlo, a - clo) =
          Scalar(f, g[static_cast<size_t>(ap)][static_cast<size_t>(d - i - ap)]);
  }

  if (direct.rows() != formula.rows() || direct.cols() != formula.cols() ||
      !equal_entries(direct, formula))
    throw InvariantViolation("binomial matrix routes disagree at n=" + std::to_string(n) +
                             " m=" + std::to_string(m) + " i=" + std::to_string(i));

  BinomialCheck check;
  check.matrix = formula;
  check.determinant = determinant(formula);
  check.nonzero = check.determinant.sign() != 0;
  if (!check.nonzero)
    throw InvariantViolation("binomial determinant vanishes at n=" + std::to_string(n) +
                             " m=" + std::to_string(m) + " i=" + std::to_string(i));
  return check;
}

TensorAlgebra tensor_product_algebra(const GradedAlgebra& u, const std::vector<Scalar>& mu,
                                     const GradedAlgebra& v, const std::vector<Scalar>& nu) {
  StrongReport su = strong_lefschetz_on_algebra(u, mu);
  if (!su.pass)
    throw PreconditionError("left tensor factor is not verified Lefschetz; " + su.message);
  StrongReport sv = strong_lefschetz_on_algebra(v, nu);
  if (!sv.pass)
    throw PreconditionError("right tensor factor is not verified Lefschetz; " + sv.message);

  FieldPtr f = unified(u.field, v.field);
  int ut = u.top();
  int vt = v.top();
  int top = ut + vt;

  TensorAlgebra ten;
  ten.algebra.field = f;
  ten.algebra.dims.assign(static_cast<size_t>(top) + 1, 0);
  ten.labels.resize(static_cast<size_t>(top) + 1);
  std::vector<std::map<std::array<int, 3>, int>> pos(static_cast<size_t>(top) + 1);
  for (int d = 0; d <= top; ++d) {
    for (int p = std::max(0, d - vt); p <= std::min(ut, d); ++p)
      for (int a = 0; a < u.dims[static_cast<size_t>(p)]; ++a)
        for (int b = 0; b < v.dims[static_cast<size_t>(d - p)]; ++b) {
          pos[static_cast<size_t>(d)][{p, a, b}] =
              static_cast<int>(ten.labels[static_cast<size_t>(d)].size());
          ten.labels[static_cast<size_t>(d)].push_back({p, a, b});
        }
    ten.algebra.dims[static_cast<size_t>(d)] =
        static_cast<int>(ten.labels[static_cast<size_t>(d)].size());
  }

  int ngens = top >= 1 ? ten.algebra.dims[1] : 0;
  ten.algebra.gen_mult.assign(static_cast<size_t>(ngens), {});
  for (int g = 0; g < ngens; ++g) {
    std::array<int, 3> gen = ten.labels[1][static_cast<size_t>(g)];
    for (int d = 0; d < top; ++d) {
      ScalarMatrix step = ScalarMatrix::zero(f, ten.algebra.dims[static_cast<size_t>(d) + 1],
                                             ten.algebra.dims[static_cast<size_t>(d)]);
      const auto& src_labels = ten.labels[static_cast<size_t>(d)];
      for (int src = 0; src < static_cast<int>(src_labels.size()); ++src) {
        auto [p, a, b] = src_labels[static_cast<size_t>(src)];
        if (gen[0] == 1) {
          if (p == ut) continue;
          const ScalarMatrix& block = u.gen_mult[static_cast<size_t>(gen[1])][static_cast<size_t>(p)];
          for (int ap = 0; ap < u.dims[static_cast<size_t>(p) + 1]; ++ap) {
            int dst = pos[static_cast<size_t>(d) + 1].at({p + 1, ap, b});
            step.at(dst, src) = to_field(block.at(ap, a), f);
          }
        } else {
          if (d - p == vt) continue;
          const ScalarMatrix& block =
              v.gen_mult[static_cast<size_t>(gen[2])][static_cast<size_t>(d - p)];
          for (int bp = 0; bp < v.dims[static_cast<size_t>(d - p) + 1]; ++bp) {
            int dst = pos[static_cast<size_t>(d) + 1].at({p, a, bp});
            step.at(dst, src) = to_field(block.at(bp, b), f);
          }
        }
      }
      ten.algebra.gen_mult[static_cast<size_t>(g)].push_back(std::move(step));
    }
  }

  ten.omega.assign(static_cast<size_t>(ngens), Scalar(f));
  for (int g = 0; g < ngens; ++g) {
    std::array<int, 3> gen = ten.labels[1][static_cast<size_t>(g)];
    ten.omega[static_cast<size_t>(g)] =
        gen[0] == 1 ? to_field(mu[static_cast<size_t>(gen[1])], f)
                    : to_field(nu[static_cast<size_t>(gen[2])], f);
  }

  ten.strong = strong_lefschetz_on_algebra(ten.algebra, ten.omega);
  if (!ten.strong.pass)
    throw InvariantViolation("tensor product lost the strong Lefschetz property; " +
                             ten.strong.message);
  return ten;
}

ParabolicClass classify_parabolic(const RootSystem& rs, const std::vector<int>& indices) {
  std::vector<int> idx = indices;
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty()) throw ParameterError("parabolic classification needs a nonempty subset");
  for (int v : idx)
    if (v < 0 || v >= rs.type.rank)
      throw ParameterError("simple root index out of range: " + std::to_string(v));
  int k = static_cast<int>(idx.size());

  if (rs.type.family == Family::I2) {
    ParabolicClass pc;
    pc.type = k == 1 ? CoxeterType::parse("A1") : rs.type;
    pc.order = idx;
    return pc;
  }
  if (rs.type.family != Family::A && rs.type.family != Family::B && rs.type.family != Family::D)
    throw UnsupportedError("parabolic classification covers ambient types A, B, D, and I2");

  // integer bond codes between chosen simple roots: 0 none, 1 single, 2 double
  auto bond = [&](int x, int y) {
    Scalar prod = rs.coroot_eval(rs.simple_roots[static_cast<size_t>(x)],
                                 rs.simple_roots[static_cast<size_t>(y)]) *
                  rs.coroot_eval(rs.simple_roots[static_cast<size_t>(y)],
                                 rs.simple_roots[static_cast<size_t>(x)]);
    for (int c = 0; c <= 2; ++c)
      if (prod == Scalar(rs.field, Rational(c))) return c;
    throw UnsupportedError("unexpected bond between simple roots " + std::to_string(x) + " and " +
                           std::to_string(y));
  };
  std::map<int, std::vector<int>> adj;
  for (int v : idx) adj[v] = {};
  for (int x : idx)
    for (int y : idx)
      if (x < y && bond(x, y) > 0) {
        adj[x].push_back(y);
        adj[y].push_back(x);
      }

  std::vector<int> stack = {idx[0]};
  std::map<int, bool> seen;
  seen[idx[0]] = true;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
  }
  if (static_cast<int>(seen.size()) != k)
    throw UnsupportedError("disconnected parabolic subsets are unsupported");

  ParabolicClass pc;
  if (k == 1) {
    pc.type = CoxeterType::parse("A1");
    pc.order = idx;
    return pc;
  }

  std::vector<int> branch_nodes;
  for (int v : idx) {
    if (static_cast<int>(adj[v].size()) > 3)
      throw UnsupportedError("parabolic subset with a degree-4 diagram vertex");
    if (adj[v].size() == 3) branch_nodes.push_back(v);
  }

  if (branch_nodes.size() > 1)
    throw UnsupportedError("parabolic subset with several branch vertices");
  if (branch_nodes.size() == 1) {
    int center = branch_nodes[0];
    for (int x : idx)
      for (int y : adj[x])
        if (x < y && bond(x, y) == 2)
          throw UnsupportedError("branched parabolic subset with a double bond");
    std::vector<std::vector<int>> arms;
    for (int first : adj[center]) {
      std::vector<int> arm = {first};
      int prev = center;
      while (true) {
        int cur = arm.back();
        int next = -1;
        for (int y : adj[cur])
          if (y != prev) next = y;
        if (next < 0) break;
        prev = cur;
        arm.push_back(next);
      }
      arms.push_back(std::move(arm));
    }
    std::sort(arms.begin(), arms.end(), [](const std::vector<int>& x, const std::vector<int>& y) {
      if (x.size() != y.size()) return x.size() > y.size();
      return x[0] < y[0];
    });
    if (arms[1].size() != 1 || arms[2].size() != 1)
      throw UnsupportedError("branched parabolic subset outside the D family");
    pc.type = CoxeterType::parse("D" + std::to_string(k));
    pc.order.assign(arms[0].rbegin(), arms[0].rend());
    pc.order.push_back(center);
    int leaf1 = arms[1][0];
    int leaf2 = arms[2][0];
    pc.order.push_back(std::min(leaf1, leaf2));
    pc.order.push_back(std::max(leaf1, leaf2));
    return pc;
  }

  // no branch: a path; walk it from its smaller endpoint
  std::vector<int> ends;
  for (int v : idx)
    if (adj[v].size() == 1) ends.push_back(v);
  if (ends.size() != 2) throw UnsupportedError("parabolic subset is not a path");
  std::vector<int> walk = {std::min(ends[0], ends[1])};
  int prev = -1;
  while (static_cast<int>(walk.size()) < k) {
    int cur = walk.back();
    int next = -1;
    for (int y : adj[cur])
      if (y != prev) next = y;
    prev = cur;
    walk.push_back(next);
  }

  int doubles = 0;
  for (int s = 0; s + 1 < k; ++s)
    if (bond(walk[static_cast<size_t>(s)], walk[static_cast<size_t>(s) + 1]) == 2) ++doubles;
  if (doubles == 0) {
    pc.type = CoxeterType::parse("A" + std::to_string(k));
    pc.order = walk;
    return pc;
  }
  if (doubles > 1) throw UnsupportedError("parabolic subset with several double bonds");
  if (bond(walk[static_cast<size_t>(k) - 2], walk[static_cast<size_t>(k) - 1]) != 2) {
    std::reverse(walk.begin(), walk.end());
    if (bond(walk[static_cast<size_t>(k) - 2], walk[static_cast<size_t>(k) - 1]) != 2)
      throw UnsupportedError("double bond in the interior of a parabolic path");
  }
  pc.type = CoxeterType::parse("B" + std::to_string(k));
  pc.order = walk;
  return pc;
}

FibrationData fibration_validate(const RootSystem& rs, const ThetaSubset& theta) {
  if (theta.indices.empty())
    throw UnsupportedError("empty theta gives the identity fibration; nothing to deform");
  if (rs.type.family == Family::E || rs.type.family == Family::F || rs.type.family == Family::H)
    throw UnsupportedError("fibration validation needs closed-form invariants; use the poset route for " +
                           rs.type.name());
  if (rs.type.group_order() > 400)
    throw ParameterError("fibration validation is limited to groups of order at most 400");

  FibrationData fd;
  fd.rs = rs;
  fd.theta = theta;
  FieldPtr f = rs.field;

  fd.pres_e = coinvariant_presentation(rs);
  fd.e_alg = algebra_of_presentation(fd.pres_e);
  int e = fd.pres_e.top;

  QuotientPoset full = enumerate_quotient(rs, make_theta(rs, {}));
  SchubertDualBasis duals = schubert_duals(rs, full, fd.pres_e);
  QuotientPoset rel = enumerate_quotient(rs, theta);
  std::vector<int> dims_b = degree_histogram(rel);
  int b = rel.r;

  // B basis: the Theta-invariant Schubert classes, one per relative coset
  std::vector<std::vector<Polynomial>> bpoly(static_cast<size_t>(b) + 1);
  fd.pi.clear();
  for (int g = 0; g <= b; ++g) {
    const std::vector<long>& ids = rel.by_degree[static_cast<size_t>(g)];
    ScalarMatrix cols = ScalarMatrix::zero(f, fd.pres_e.dims[static_cast<size_t>(g)],
                                           static_cast<int>(ids.size()));
    for (size_t a = 0; a < ids.size(); ++a) {
      long full_id = full_node_of(rs, full, rel.node(ids[a]));
      Polynomial cls = schubert_class(fd.pres_e, duals, full, full_id);
      bpoly[static_cast<size_t>(g)].push_back(cls);
      std::vector<Scalar> coords = complement_coordinates(fd.pres_e, cls, g);
      for (size_t r = 0; r < coords.size(); ++r)
        cols.at(static_cast<int>(r), static_cast<int>(a)) = to_field(coords[r], f);
    }
    fd.pi.push_back(std::move(cols));
  }

  // fresh realization of the parabolic type, pinned by its Cartan matrix
  ParabolicClass pc = classify_parabolic(rs, theta.indices);
  RootSystem rs_f = build_root_system(pc.type);
  int kf = pc.type.rank;
  for (int i = 0; i < kf; ++i)
    for (int j = 0; j < kf; ++j) {
      Scalar fresh = rs_f.coroot_eval(rs_f.simple_roots[static_cast<size_t>(j)],
                                      rs_f.simple_roots[static_cast<size_t>(i)]);
      Scalar ambient =
          rs.coroot_eval(rs.simple_roots[static_cast<size_t>(pc.order[static_cast<size_t>(j)])],
                         rs.simple_roots[static_cast<size_t>(pc.order[static_cast<size_t>(i)])]);
      if (!(fresh == ambient)) throw InvariantViolation("parabolic realization mismatch");
    }
  fd.f_type = pc.type;
  fd.pres_f = coinvariant_presentation(rs_f);
  fd.f_alg = algebra_of_presentation(fd.pres_f);
  int ftop = fd.pres_f.top;

  for (int d = 0; d <= e; ++d) {
    long count = 0;
    for (int g = std::max(0, d - ftop); g <= std::min(b, d); ++g)
      count += static_cast<long>(dims_b[static_cast<size_t>(g)]) *
               fd.pres_f.dims[static_cast<size_t>(d - g)];
    if (count != fd.pres_e.dims[static_cast<size_t>(d)])
      throw InvariantViolation("fibration dimension convolution fails at degree " +
                               std::to_string(d));
  }

  // iota: orthogonal projection onto span(Theta) in the matched coordinates
  ScalarMatrix gram_theta = ScalarMatrix::zero(f, kf, kf);
  for (int i = 0; i < kf; ++i)
    for (int j = 0; j < kf; ++j)
      gram_theta.at(i, j) =
          rs.inner(rs.simple_roots[static_cast<size_t>(pc.order[static_cast<size_t>(i)])],
                   rs.simple_roots[static_cast<size_t>(pc.order[static_cast<size_t>(j)])]);
  std::vector<Polynomial> images;
  for (int v = 0; v < rs.type.rank; ++v) {
    std::vector<Scalar> rhs(static_cast<size_t>(kf), Scalar(f));
    for (int l = 0; l < kf; ++l)
      rhs[static_cast<size_t>(l)] =
          rs.inner(rs.simple_roots[static_cast<size_t>(v)],
                   rs.simple_roots[static_cast<size_t>(pc.order[static_cast<size_t>(l)])]);
    auto coeff = solve(gram_theta, rhs);
    if (!coeff) throw InvariantViolation("theta Gram matrix is singular");
    images.push_back(Polynomial::linear(f, *coeff));
  }
  fd.iota.clear();
  for (int d = 0; d <= ftop; ++d) {
    std::vector<Polynomial> basis = coinvariant_basis(fd.pres_e, d);
    ScalarMatrix m = ScalarMatrix::zero(f, fd.pres_f.dims[static_cast<size_t>(d)],
                                        static_cast<int>(basis.size()));
    for (size_t c = 0; c < basis.size(); ++c) {
      std::vector<Scalar> coords = complement_coordinates(fd.pres_f, substitute(basis[c], images), d);
      for (size_t r = 0; r < coords.size(); ++r)
        m.at(static_cast<int>(r), static_cast<int>(c)) = to_field(coords[r], f);
    }
    fd.iota.push_back(std::move(m));
  }

  // positive-degree invariants must restrict to zero
  for (int g = 1; g <= std::min(b, ftop); ++g) {
    ScalarMatrix prod = multiply(fd.iota[static_cast<size_t>(g)], fd.pi[static_cast<size_t>(g)]);
    for (int i = 0; i < prod.rows(); ++i)
      for (int j = 0; j < prod.cols(); ++j)
        if (!prod.at(i, j).is_zero())
          throw InvariantViolation("invariant classes survive the restriction at degree " +
                                   std::to_string(g));
  }

  // uncorrected linear section of iota
  std::vector<ScalarMatrix> stilde;
  for (int h = 0; h <= ftop; ++h) {
    int nf = fd.pres_f.dims[static_cast<size_t>(h)];
    ScalarMatrix m = ScalarMatrix::zero(f, fd.pres_e.dims[static_cast<size_t>(h)], nf);
    for (int c = 0; c < nf; ++c) {
      std::vector<Scalar> target(static_cast<size_t>(nf), Scalar(f));
      target[static_cast<size_t>(c)] = Scalar(f, Rational(1));
      auto col = solve(fd.iota[static_cast<size_t>(h)], target);
      if (!col)
        throw InvariantViolation("restriction onto the fiber is not surjective at degree " +
                                 std::to_string(h));
      for (size_t r = 0; r < col->size(); ++r) m.at(static_cast<int>(r), c) = (*col)[r];
    }
    stilde.push_back(std::move(m));
  }

  // Lefschetz elements: tau on the fiber, rho-bar on the base
  fd.tau_f = complement_coordinates(fd.pres_f, vector_polynomial(rs_f, rs_f.rho()), 1);
  fd.f_strong = strong_lefschetz_on_algebra(fd.f_alg, fd.tau_f);
  if (!fd.f_strong.pass)
    throw InvariantViolation("fiber Lefschetz verification failed; " + fd.f_strong.message);
  PrimitiveDecomposition dec = primitive_decomposition(fd.f_alg, fd.tau_f);

  std::vector<Scalar> rho_bar_e =
      complement_coordinates(fd.pres_e, vector_polynomial(rs, theta.rho_bar), 1);
  if (b == 0) {
    for (const Scalar& c : rho_bar_e)
      if (!c.is_zero())
        throw InvariantViolation("rho-bar is nonzero although the base has no degree-one part");
    fd.lambda_b.clear();
  } else {
    auto lam = solve(fd.pi[1], rho_bar_e);
    if (!lam)
      throw InvariantViolation("rho-bar does not lie in the span of the invariant classes");
    fd.lambda_b = *lam;
  }

  // multiplication table of B in its Schubert basis, solved inside E
  fd.b_alg.field = f;
  fd.b_alg.dims = dims_b;
  fd.b_alg.gen_mult.assign(static_cast<size_t>(b >= 1 ? dims_b[1] : 0), {});
  for (int g1 = 0; g1 < (b >= 1 ? dims_b[1] : 0); ++g1) {
    for (int g = 0; g < b; ++g) {
      ScalarMatrix step = ScalarMatrix::zero(f, dims_b[static_cast<size_t>(g) + 1],
                                             dims_b[static_cast<size_t>(g)]);
      for (int a = 0; a < dims_b[static_cast<size_t>(g)]; ++a) {
        Polynomial prod = bpoly[1][static_cast<size_t>(g1)] * bpoly[static_cast<size_t>(g)][static_cast<size_t>(a)];
        std::vector<Scalar> coords = complement_coordinates(fd.pres_e, prod, g + 1);
        auto sol = solve(fd.pi[static_cast<size_t>(g) + 1], coords);
        if (!sol)
          throw InvariantViolation("invariant classes do not close under multiplication at degree " +
                                   std::to_string(g + 1));
        for (size_t r = 0; r < sol->size(); ++r) step.at(static_cast<int>(r), a) = (*sol)[r];
      }
      fd.b_alg.gen_mult[static_cast<size_t>(g1)].push_back(std::move(step));
    }
  }
  fd.b_strong = strong_lefschetz_on_algebra(fd.b_alg, fd.lambda_b);
  if (!fd.b_strong.pass)
    throw InvariantViolation("base Lefschetz verification failed; " + fd.b_strong.message);

  // the base multiplication must reproduce the weighted path matrices of the
  // relative coset poset
  for (int g = 0; g < b; ++g) {
    ScalarMatrix steps = one_step(fd.b_alg, fd.lambda_b, g);
    ScalarMatrix paths = path_matrix(rel, g, g + 1);
    if (!equal_entries(steps, paths))
      throw InvariantViolation("base multiplication disagrees with the path matrices at degree " +
                               std::to_string(g));
  }

  // degree-one lift of tau
  {
    std::vector<Scalar> tau_ambient(fd.tau_f.size(), Scalar(f));
    for (size_t r = 0; r < fd.tau_f.size(); ++r) tau_ambient[r] = to_field(fd.tau_f[r], f);
    auto lift = solve(fd.iota[1], tau_ambient);
    if (!lift) throw InvariantViolation("the fiber Lefschetz element has no degree-one lift");
    fd.x_e = *lift;
  }

  // frame x^j stilde(p) over the primitive vectors of the fiber
  int fhalf = ftop / 2;
  fd.ftilde.assign(static_cast<size_t>(ftop) + 1, {});
  for (int i = 0; i <= fhalf; ++i) {
    int pd = static_cast<int>(dec.p_dims[static_cast<size_t>(i)]);
    for (int p = 0; p < pd; ++p) {
      std::vector<Scalar> base(static_cast<size_t>(fd.pres_f.dims[static_cast<size_t>(i)]),
                               Scalar(f));
      for (int r = 0; r < static_cast<int>(base.size()); ++r)
        base[static_cast<size_t>(r)] = to_field(dec.bases[static_cast<size_t>(i)].at(r, p), f);
      std::vector<Scalar> cur = matvec(stilde[static_cast<size_t>(i)], base);
      for (int j = 0; j + 2 * i <= ftop; ++j) {
        ModuleVector mv;
        mv.i = i;
        mv.j = j;
        mv.p = p;
        mv.coords = cur;
        fd.ftilde[static_cast<size_t>(i + j)].push_back(std::move(mv));
        if (j + 2 * i < ftop)
          cur = matvec(one_step(fd.e_alg, fd.x_e, i + j), cur);
      }
    }
  }
  for (int h = 0; h <= ftop; ++h) {
    std::sort(fd.ftilde[static_cast<size_t>(h)].begin(), fd.ftilde[static_cast<size_t>(h)].end(),
              [](const ModuleVector& x, const ModuleVector& y) {
                if (x.i != y.i) return x.i < y.i;
                return x.p < y.p;
              });
    if (static_cast<int>(fd.ftilde[static_cast<size_t>(h)].size()) !=
        fd.pres_f.dims[static_cast<size_t>(h)])
      throw InvariantViolation("primitive frame miscounts degree " + std::to_string(h));
  }

  // corrected section: tau^j p on the fiber side matches x^j stilde(p)
  fd.section.clear();
  for (int h = 0; h <= ftop; ++h) {
    int nf = fd.pres_f.dims[static_cast<size_t>(h)];
    ScalarMatrix target = ScalarMatrix::zero(f, nf, nf);
    ScalarMatrix lifted = ScalarMatrix::zero(f, fd.pres_e.dims[static_cast<size_t>(h)], nf);
    for (int c = 0; c < nf; ++c) {
      const ModuleVector& mv = fd.ftilde[static_cast<size_t>(h)][static_cast<size_t>(c)];
      ScalarMatrix power = map_power(fd.f_alg, fd.tau_f, mv.i, mv.j);
      for (int r = 0; r < nf; ++r) {
        Scalar acc(f);
        for (int s = 0; s < fd.pres_f.dims[static_cast<size_t>(mv.i)]; ++s)
          acc = acc + to_field(power.at(r, s), f) *
                          to_field(dec.bases[static_cast<size_t>(mv.i)].at(s, mv.p), f);
        target.at(r, c) = acc;
      }
      for (int r = 0; r < lifted.rows(); ++r) lifted.at(r, c) = mv.coords[static_cast<size_t>(r)];
    }
    auto tinv = inverse(target);
    if (!tinv)
      throw InvariantViolation("primitive frame fails to span the fiber at degree " +
                               std::to_string(h));
    ScalarMatrix sect = multiply(lifted, *tinv);
    ScalarMatrix check = multiply(fd.iota[static_cast<size_t>(h)], sect);
    ScalarMatrix id = ScalarMatrix::identity(f, nf);
    if (!equal_entries(check, id))
      throw InvariantViolation("section identity fails at degree " + std::to_string(h));
    fd.section.push_back(std::move(sect));
  }

  // free-module frame pi(b_a) u_kappa degree by degree
  fd.module_change.clear();
  fd.module_labels.assign(static_cast<size_t>(e) + 1, {});
  for (int d = 0; d <= e; ++d) {
    int ne = fd.pres_e.dims[static_cast<size_t>(d)];
    ScalarMatrix m = ScalarMatrix::zero(f, ne, ne);
    int col = 0;
    for (int g = std::max(0, d - ftop); g <= std::min(b, d); ++g) {
      for (int a = 0; a < dims_b[static_cast<size_t>(g)]; ++a) {
        const auto& frame = fd.ftilde[static_cast<size_t>(d - g)];
        for (int kappa = 0; kappa < static_cast<int>(frame.size()); ++kappa) {
          std::vector<Scalar> coords;
          if (g == 0) {
            coords = frame[static_cast<size_t>(kappa)].coords;
          } else {
            Polynomial u =
                poly_of_coords(fd.pres_e, frame[static_cast<size_t>(kappa)].coords, d - g);
            coords = complement_coordinates(fd.pres_e,
                                            bpoly[static_cast<size_t>(g)][static_cast<size_t>(a)] * u,
                                            d);
          }
          if (col >= ne) throw InvariantViolation("module frame overflows degree " + std::to_string(d));
          for (size_t r = 0; r < coords.size(); ++r)
            m.at(static_cast<int>(r), col) = to_field(coords[r], f);
          fd.module_labels[static_cast<size_t>(d)].push_back({g, a, kappa});
          ++col;
        }
      }
    }
    if (col != ne) throw InvariantViolation("module frame misses degree " + std::to_string(d));
    if (!inverse(m))
      throw InvariantViolation("free module basis fails at degree " + std::to_string(d));
    fd.module_change.push_back(std::move(m));
  }

  return fd;
}

DeformationReport deformation_scan(const FibrationData& fd) {
  if (!fd.b_strong.pass || !fd.f_strong.pass)
    throw PreconditionError("deformation needs verified Lefschetz data on base and fiber");
  FieldPtr f = fd.rs.field;
  int e = fd.pres_e.top;
  int b = fd.b_alg.top();
  int ftop = fd.f_alg.top();
  const std::vector<int>& dims_e = fd.e_alg.dims;

  std::vector<ScalarMatrix> minv;
  for (int d = 0; d <= e; ++d) {
    auto inv = inverse(fd.module_change[static_cast<size_t>(d)]);
    if (!inv) throw InvariantViolation("free module basis fails at degree " + std::to_string(d));
    minv.push_back(std::move(*inv));
  }

  std::vector<Scalar> pilambda(static_cast<size_t>(dims_e[1]), Scalar(f));
  if (!fd.lambda_b.empty()) pilambda = matvec(fd.pi[1], fd.lambda_b);

  std::vector<ScalarMatrix> lam_step;
  std::vector<ScalarMatrix> x_step;
  for (int d = 0; d < e; ++d) {
    lam_step.push_back(one_step(fd.e_alg, pilambda, d));
    x_step.push_back(one_step(fd.e_alg, fd.x_e, d));
  }
  std::vector<ScalarMatrix> b_step;
  for (int g = 0; g < b; ++g) b_step.push_back(one_step(fd.b_alg, fd.lambda_b, g));

  // label lookups: position of (g, a, kappa) per degree, and of (i, j, p) in
  // the fiber frame per fiber degree
  std::vector<std::map<std::array<int, 3>, int>> lpos(static_cast<size_t>(e) + 1);
  for (int d = 0; d <= e; ++d)
    for (size_t c = 0; c < fd.module_labels[static_cast<size_t>(d)].size(); ++c)
      lpos[static_cast<size_t>(d)][fd.module_labels[static_cast<size_t>(d)][c]] =
          static_cast<int>(c);
  std::vector<std::map<std::array<int, 3>, int>> fpos(static_cast<size_t>(ftop) + 1);
  for (int h = 0; h <= ftop; ++h)
    for (size_t c = 0; c < fd.ftilde[static_cast<size_t>(h)].size(); ++c) {
      const ModuleVector& mv = fd.ftilde[static_cast<size_t>(h)][c];
      fpos[static_cast<size_t>(h)][{mv.i, mv.j, mv.p}] = static_cast<int>(c);
    }

  // x^{f-2i+1} stilde(p) must fall back into the augmentation ideal
  int fhalf = ftop / 2;
  for (int i = 0; i <= fhalf; ++i) {
    for (const ModuleVector& mv : fd.ftilde[static_cast<size_t>(ftop - i)]) {
      if (mv.i != i || mv.j != ftop - 2 * i) continue;
      if (ftop - i == e) continue;  // overflow leaves the algebra entirely
      std::vector<Scalar> w = matvec(x_step[static_cast<size_t>(ftop - i)], mv.coords);
      std::vector<Scalar> expansion = matvec(minv[static_cast<size_t>(ftop - i) + 1], w);
      const auto& labels = fd.module_labels[static_cast<size_t>(ftop - i) + 1];
      for (size_t c = 0; c < labels.size(); ++c)
        if (labels[c][0] == 0 && !expansion[c].is_zero())
          throw InvariantViolation("frame overflow escapes the augmentation ideal at primitive level " +
                                   std::to_string(i));
    }
  }

  // shift and base-multiplication operators in label coordinates
  std::vector<ScalarMatrix> shift;
  std::vector<ScalarMatrix> lam_label;
  for (int d = 0; d < e; ++d) {
    const auto& src = fd.module_labels[static_cast<size_t>(d)];
    const auto& lookup = lpos[static_cast<size_t>(d) + 1];
    ScalarMatrix sh = ScalarMatrix::zero(f, dims_e[static_cast<size_t>(d) + 1],
                                         dims_e[static_cast<size_t>(d)]);
    ScalarMatrix ll = ScalarMatrix::zero(f, dims_e[static_cast<size_t>(d) + 1],
                                         dims_e[static_cast<size_t>(d)]);
    for (size_t c = 0; c < src.size(); ++c) {
      auto [g, a, kappa] = src[c];
      const ModuleVector& mv = fd.ftilde[static_cast<size_t>(d - g)][static_cast<size_t>(kappa)];
      if (mv.j < ftop - 2 * mv.i) {
        int kp = fpos[static_cast<size_t>(d - g) + 1].at({mv.i, mv.j + 1, mv.p});
        sh.at(lookup.at({g, a, kp}), static_cast<int>(c)) = Scalar(f, Rational(1));
      }
      if (g < b) {
        const ScalarMatrix& step = b_step[static_cast<size_t>(g)];
        for (int ap = 0; ap < step.rows(); ++ap)
          ll.at(lookup.at({g + 1, ap, kappa}), static_cast<int>(c)) = step.at(ap, a);
      }
    }
    shift.push_back(std::move(sh));
    lam_label.push_back(std::move(ll));
  }

  // multiplication by pi(lambda) must be the base multiplication on labels
  for (int d = 0; d < e; ++d) {
    ScalarMatrix lhs = multiply(lam_step[static_cast<size_t>(d)],
                                fd.module_change[static_cast<size_t>(d)]);
    ScalarMatrix rhs = multiply(fd.module_change[static_cast<size_t>(d) + 1],
                                lam_label[static_cast<size_t>(d)]);
    if (!equal_entries(lhs, rhs))
      throw InvariantViolation("base multiplication is not frame-diagonal at degree " +
                               std::to_string(d));
  }

  auto exps_b = [&](int d) {
    std::vector<int> exps;
    for (const auto& label : fd.module_labels[static_cast<size_t>(d)]) exps.push_back(label[0]);
    return exps;
  };
  // phi scales a frame column by t^g, chi by t^{fiber degree}
  auto phi = [&](int d, const Scalar& t) {
    return multiply(scale_columns(fd.module_change[static_cast<size_t>(d)], f, t, exps_b(d)),
                    minv[static_cast<size_t>(d)]);
  };
  auto chi = [&](int d, const Scalar& t) {
    std::vector<int> exps;
    for (const auto& label : fd.module_labels[static_cast<size_t>(d)]) exps.push_back(d - label[0]);
    return multiply(scale_columns(fd.module_change[static_cast<size_t>(d)], f, t, exps),
                    minv[static_cast<size_t>(d)]);
  };
  auto a_value = [&](int d, const Scalar& t) {
    return multiply(phi(d + 1, t),
                    multiply(x_step[static_cast<size_t>(d)], phi(d, t.inverse())));
  };

  // recover each A_d(t) from its value at 0 and at 1..b, then confirm the
  // degree bound at two extra nodes
  std::vector<std::vector<ScalarMatrix>> a_coeffs;
  for (int d = 0; d < e; ++d) {
    ScalarMatrix a0 = multiply(fd.module_change[static_cast<size_t>(d) + 1],
                               multiply(shift[static_cast<size_t>(d)], minv[static_cast<size_t>(d)]));
    std::vector<ScalarMatrix> values = {a0};
    std::vector<long> nodes = {0};
    for (long t = 1; t <= b; ++t) {
      values.push_back(a_value(d, Scalar(f, Rational(t))));
      nodes.push_back(t);
    }
    std::vector<ScalarMatrix> coeffs(static_cast<size_t>(b) + 1,
                                     ScalarMatrix::zero(f, a0.rows(), a0.cols()));
    for (int i = 0; i < a0.rows(); ++i)
      for (int j = 0; j < a0.cols(); ++j) {
        std::vector<Scalar> entry;
        for (const ScalarMatrix& v : values) entry.push_back(v.at(i, j));
        std::vector<Scalar> poly = interpolate(f, nodes, entry);
        for (size_t k = 0; k < poly.size(); ++k) coeffs[k].at(i, j) = poly[k];
      }
    for (long t = b + 1; t <= b + 2; ++t) {
      Scalar ts(f, Rational(t));
      if (!equal_entries(eval_matrix_poly(coeffs, f, ts), a_value(d, ts)))
        throw InvariantViolation("deformation family violates its degree bound at degree " +
                                 std::to_string(d));
    }
    a_coeffs.push_back(std::move(coeffs));
  }

  DeformationReport rep;

  // sampled identities: chi_t phi_t = t^deg and chi_t A_t chi_{1/t} = t x
  for (long t = 2; t <= 3; ++t) {
    Scalar ts(f, Rational(t));
    Scalar tinv = ts.inverse();
    for (int d = 0; d <= e; ++d) {
      ScalarMatrix lhs = multiply(chi(d, ts), phi(d, ts));
      ScalarMatrix want = ScalarMatrix::identity(f, dims_e[static_cast<size_t>(d)]);
      Scalar scale = pow_scalar(f, ts, d);
      for (int i = 0; i < want.rows(); ++i) want.at(i, i) = scale;
      if (!equal_entries(lhs, want))
        throw InvariantViolation("composition identity fails at degree " + std::to_string(d));
    }
    for (int d = 0; d < e; ++d) {
      ScalarMatrix at = eval_matrix_poly(a_coeffs[static_cast<size_t>(d)], f, ts);
      ScalarMatrix lhs = multiply(chi(d + 1, ts), multiply(at, chi(d, tinv)));
      ScalarMatrix want = x_step[static_cast<size_t>(d)];
      for (int i = 0; i < want.rows(); ++i)
        for (int j = 0; j < want.cols(); ++j) want.at(i, j) = want.at(i, j) * ts;
      if (!equal_entries(lhs, want))
        throw InvariantViolation("change of base identity fails at degree " + std::to_string(d));
    }
  }
  rep.composition_ok = true;
  rep.change_of_base_ok = true;

  // independent tensor-product verification of the t = 0 limit
  TensorAlgebra ten = tensor_product_algebra(fd.b_alg, fd.lambda_b, fd.f_alg, fd.tau_f);
  if (ten.algebra.dims != dims_e)
    throw InvariantViolation("tensor product dimensions disagree with the coinvariant algebra");

  for (int k = 0; 2 * k <= e; ++k) {
    DeformationEntry entry;
    entry.k = k;
    int steps = e - 2 * k;
    auto det_at = [&](long t) {
      Scalar ts(f, Rational(t));
      ScalarMatrix prod = ScalarMatrix::identity(f, dims_e[static_cast<size_t>(k)]);
      for (int d = k; d < e - k; ++d)
        prod = multiply(mat_add(lam_step[static_cast<size_t>(d)],
                                eval_matrix_poly(a_coeffs[static_cast<size_t>(d)], f, ts)),
                        prod);
      return determinant(prod);
    };
    if (steps == 0) {
      entry.coeffs = {Scalar(f, Rational(1))};
    } else {
      long bound = static_cast<long>(dims_e[static_cast<size_t>(k)]) * b * steps;
      std::vector<long> nodes;
      std::vector<Scalar> values;
      for (long t = 0; t <= bound; ++t) {
        nodes.push_back(t);
        values.push_back(det_at(t));
      }
      entry.coeffs = interpolate(f, nodes, values);
      if (!(eval_poly(f, entry.coeffs, Scalar(f, Rational(bound + 1))) == det_at(bound + 1)))
        throw InvariantViolation("determinant interpolation fails its degree bound at k=" +
                                 std::to_string(k));
    }
    entry.at_zero = entry.coeffs[0];
    if (entry.at_zero.is_zero())
      throw InvariantViolation("the deformation determinant vanishes at t=0 for k=" +
                               std::to_string(k));

    // the t = 0 limit must agree with the label-coordinate route through the
    // module frame
    {
      ScalarMatrix prod = ScalarMatrix::identity(f, dims_e[static_cast<size_t>(k)]);
      for (int d = k; d < e - k; ++d)
        prod = multiply(mat_add(lam_label[static_cast<size_t>(d)], shift[static_cast<size_t>(d)]),
                        prod);
      Scalar expected = determinant(fd.module_change[static_cast<size_t>(e - k)]) *
                        determinant(prod) /
                        determinant(fd.module_change[static_cast<size_t>(k)]);
      if (!(entry.at_zero == expected))
        throw InvariantViolation("module route disagrees with the direct determinant at k=" +
                                 std::to_string(k));
    }
    entry.tensor_ratio =
        entry.at_zero / to_field(ten.strong.degrees[static_cast<size_t>(k)].determinant, f);
    rep.dk.push_back(std::move(entry));
  }

  long root_bound = 1;
  for (const DeformationEntry& entry : rep.dk)
    root_bound += static_cast<long>(entry.coeffs.size()) - 1;
  for (long t = 1; t <= root_bound && rep.t0 == 0; ++t) {
    Scalar ts(f, Rational(t));
    bool good = true;
    for (const DeformationEntry& entry : rep.dk)
      if (eval_poly(f, entry.coeffs, ts).is_zero()) {
        good = false;
        break;
      }
    if (good) rep.t0 = t;
  }
  if (rep.t0 == 0)
    throw InvariantViolation("no deformation parameter found below the root bound");

  Scalar t0s(f, Rational(rep.t0));
  rep.final_element.assign(static_cast<size_t>(dims_e[1]), Scalar(f));
  for (size_t r = 0; r < rep.final_element.size(); ++r)
    rep.final_element[r] = pilambda[r] + t0s * fd.x_e[r];
  rep.final_check = strong_lefschetz_on_algebra(fd.e_alg, rep.final_element);
  rep.pass = rep.final_check.pass;
  return rep;
}

}  // namespace slp
