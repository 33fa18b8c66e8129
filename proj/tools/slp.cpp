/*
 * slp: exact verification pipeline for the strong Lefschetz property of
 * coinvariant and relative coinvariant rings of finite reflection groups.
 *
 * Subcommands: roots (root system JSON), quotient (coset poset JSON/DOT),
 * lefschetz (strong/weak/middle/path analysis of a poset file), paths
 * (path-system census), coinvariant (polynomial-route strong check), deform
 * (fibration deformation certificate), tables (reference-table regeneration
 * with pass/fail manifests), verify-theorem (the inductive certification
 * chain over all types up to a rank bound).
 *
 * Exit codes: 0 when every requested check passes, 2 when some check fails,
 * 1 on usage or input errors.  All file output is atomic and byte
 * deterministic.  Environment: SLP_PRECISION_BITS (sign oracle starting
 * precision, default 128), SLP_PATH_CAP (path enumeration cap, default 1e6).
 */

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "slp/deform.hpp"
#include "slp/errors.hpp"
#include "slp/io.hpp"
#include "slp/lefschetz.hpp"
#include "slp/polyring.hpp"
#include "slp/quotient.hpp"
#include "slp/rootsystem.hpp"

using namespace slp;

namespace {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Empty path means stdout.
void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_text_atomic(path, content);
}

struct NamedCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

Json checks_to_json(const std::vector<NamedCheck>& checks) {
  Json out = Json::array();
  for (const NamedCheck& c : checks)
    out.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

bool all_pass(const std::vector<NamedCheck>& checks) {
  for (const NamedCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

RootSystem rs_of(const std::string& type) {
  return build_root_system(CoxeterType::parse(type));
}

Scalar sc(const FieldPtr& f, long v) { return Scalar(f, Rational(v)); }

std::vector<Scalar> sorted_scalars(std::vector<Scalar> v) {
  std::sort(v.begin(), v.end(), [](const Scalar& a, const Scalar& b) { return a.compare(b) < 0; });
  return v;
}

Rational rational_pow(long base, int e) {
  Rational r(1);
  for (int k = 0; k < e; ++k) r *= base;
  return r;
}

// ---------------------------------------------------------------------------
// roots / quotient

int cmd_roots(const std::string& type, const std::string& json_path) {
  RootSystem rs = rs_of(type);
  emit(json_path, dump(roots_to_json(rs)));
  return 0;
}

QuotientPoset build_poset(const RootSystem& rs, const std::string& theta_spec) {
  std::vector<int> idx = parse_theta_spec(rs, theta_spec);
  if (idx.empty() && rs.type.group_order() > 20000)
    throw ParameterError("the full quotient of " + rs.type.name() + " has " +
                         std::to_string(rs.type.group_order()) +
                         " elements; choose a parabolic subset");
  return enumerate_quotient(rs, make_theta(rs, idx));
}

int cmd_quotient(const std::string& type, const std::string& theta_spec,
                 const std::string& json_path, const std::string& dot_path) {
  RootSystem rs = rs_of(type);
  QuotientPoset p = build_poset(rs, theta_spec);
  ValidationReport v = validate(rs, p);
  if (!v.all_pass) {
    emit("", dump(validation_to_json(v)));
    return 2;
  }
  if (!json_path.empty()) emit(json_path, dump(poset_to_json(p)));
  if (!dot_path.empty()) emit(dot_path, poset_to_dot(p));
  if (json_path.empty() && dot_path.empty()) emit("", dump(poset_to_json(p)));
  return 0;
}

// ---------------------------------------------------------------------------
// lefschetz / paths

int paths_output(const QuotientPoset& p, int degree, bool vertex_disjoint,
                 const std::string& format, const std::string& out_path) {
  if (degree < 0) throw ParameterError("--degree is required for path output");
  ScalarMatrix m = path_matrix(p, degree, p.r - degree);
  if (format == "tsv") {
    emit(out_path, matrix_to_tsv(m));
    return 0;
  }
  PathSystemSummary sum = enumerate_path_systems(p, degree, vertex_disjoint);
  Json j = path_summary_to_json(sum);
  j["matrix"] = matrix_to_json(m);
  emit(out_path, dump(j));
  return 0;
}

int cmd_lefschetz(const std::string& poset_path, const std::string& mode, int degree,
                  bool vertex_disjoint, const std::string& format,
                  const std::string& out_path) {
  QuotientPoset p = poset_from_json(json_from_file(poset_path));
  if (format != "json" && format != "tsv")
    throw ParameterError("unknown format '" + format + "' (expected json or tsv)");

  if (mode == "paths") return paths_output(p, degree, vertex_disjoint, format, out_path);

  if (mode == "strong") {
    if (format == "tsv")
      throw ParameterError("tsv applies to matrix output (modes middle and paths)");
    StrongReport rep = strong_lefschetz_report(p);
    emit(out_path, dump(strong_report_to_json(rep)));
    return rep.pass ? 0 : 2;
  }
  if (mode == "weak") {
    if (format == "tsv")
      throw ParameterError("tsv applies to matrix output (modes middle and paths)");
    WeakReport rep = weak_lefschetz_report(p);
    emit(out_path, dump(weak_report_to_json(rep)));
    return rep.pass ? 0 : 2;
  }
  if (mode == "middle") {
    RootSystem rs = rs_of(p.type.name());
    if (rs.field->tag() != p.field->tag() ||
        (!p.nodes.empty() &&
         p.nodes[0].vector.size() != static_cast<size_t>(rs.ambient_dim)))
      throw ParameterError("poset file does not match the root system rebuilt from its type");
    MiddleForm mf = middle_form_reduce(rs, p);
    if (format == "tsv")
      emit(out_path, matrix_to_tsv(mf.form));
    else
      emit(out_path, dump(middle_form_to_json(mf)));
    return mf.strong_verdict ? 0 : 2;
  }
  throw ParameterError("unknown mode '" + mode + "' (expected strong, weak, middle or paths)");
}

int cmd_paths(const std::string& type, const std::string& theta_spec,
              const std::string& poset_path, int degree, bool vertex_disjoint,
              const std::string& format, const std::string& out_path) {
  if (format != "json" && format != "tsv")
    throw ParameterError("unknown format '" + format + "' (expected json or tsv)");
  if (poset_path.empty() && type.empty())
    throw ParameterError("either --type or --poset is required");
  QuotientPoset p = poset_path.empty()
                        ? build_poset(rs_of(type), theta_spec)
                        : poset_from_json(json_from_file(poset_path));
  return paths_output(p, degree, vertex_disjoint, format, out_path);
}

// ---------------------------------------------------------------------------
// coinvariant

int cmd_coinvariant(const std::string& type, bool check_strong, const std::string& element,
                    const std::string& out_path) {
  RootSystem rs = rs_of(type);
  CoinvariantPresentation pres = coinvariant_presentation(rs);

  Vec v;
  if (element == "rho") {
    v = rs.rho();
  } else {
    // Coefficient list over the simple coroots.
    std::vector<Scalar> coeffs;
    size_t pos = 0;
    while (pos <= element.size()) {
      size_t comma = element.find(',', pos);
      std::string piece =
          element.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      coeffs.push_back(Scalar::parse(rs.field, piece));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (coeffs.size() != rs.simple_roots.size())
      throw ParameterError("element needs " + std::to_string(rs.simple_roots.size()) +
                           " comma-separated coefficients over the simple coroots");
    v = vec_zero(rs.field, rs.ambient_dim);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      const Vec& a = rs.simple_roots[i];
      Scalar factor = coeffs[i] * sc(rs.field, 2) / rs.inner(a, a);
      v = vec_add(v, vec_scale(factor, a));
    }
  }

  std::vector<Scalar> l = complement_coordinates(pres, vector_polynomial(rs, v), 1);
  Json j{{"type", rs.type.name()},
         {"field", rs.field->tag()},
         {"element", Json::array()},
         {"dims", pres.dims}};
  for (const Scalar& c : l) j["element"].push_back(scalar_to_json(c));

  bool pass = true;
  if (check_strong) {
    GradedAlgebra alg = algebra_of_presentation(pres);
    StrongReport rep = strong_lefschetz_on_algebra(alg, l);
    j["strong"] = strong_report_to_json(rep);
    pass = rep.pass;
  }
  emit(out_path, dump(j));
  return pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// deform

int cmd_deform(const std::string& type, const std::string& theta_spec,
               const std::string& report_path) {
  RootSystem rs = rs_of(type);
  ThetaSubset theta = make_theta(rs, parse_theta_spec(rs, theta_spec));
  FibrationData fd = fibration_validate(rs, theta);
  DeformationReport rep = deformation_scan(fd);
  emit(report_path, dump(deformation_report_to_json(rep)));
  return rep.pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// tables

struct LayerRow {
  int label = 0;  // step V^(label-1) -> V^label
  size_t lower = 0;
  size_t upper = 0;
  long matchings = 0;
  bool sign_pure = false;
  bool pass = false;
  std::string detail;
};

// Matching census for one step.  Equal layers: the perfect-matching count
// (and optionally sign purity) must match the frozen value and certify a
// nonzero determinant.  Unequal layers differ by one vertex and some removal
// on the wider side must leave `expect` matchings with nonzero signed sum,
// exhibiting a full-rank square submatrix.
LayerRow layer_row(const QuotientPoset& p, int label, long expect, bool sign_pure) {
  LayerRow row;
  row.label = label;
  int lo = label - 1;
  std::vector<long> a = p.by_degree[static_cast<size_t>(lo)];
  std::vector<long> b = p.by_degree[static_cast<size_t>(label)];
  row.lower = a.size();
  row.upper = b.size();
  row.matchings = expect;
  row.sign_pure = sign_pure;
  if (a.size() == b.size()) {
    PathSystemSummary vd = enumerate_path_systems(p, lo, label, true);
    bool count_ok = !vd.overflow && vd.count == Rational(expect);
    bool purity_ok = !sign_pure || vd.sign_uniform;
    bool det_ok = (!sign_pure && expect % 2 == 0) || !vd.signed_sum.is_zero();
    row.pass = count_ok && purity_ok && det_ok;
    if (!row.pass)
      row.detail = "expected " + std::to_string(expect) + " matchings, found " +
                   rational_to_string(vd.count);
  } else {
    size_t wide_n = std::max(a.size(), b.size());
    size_t narrow_n = std::min(a.size(), b.size());
    if (wide_n - narrow_n != 1) {
      row.detail = "layer sizes differ by more than one";
      return row;
    }
    bool wide_is_source = a.size() > b.size();
    std::vector<long> wide = wide_is_source ? a : b;
    for (long v : wide) {
      std::vector<long> src = a, dst = b;
      std::vector<long>& trimmed = wide_is_source ? src : dst;
      trimmed.erase(std::find(trimmed.begin(), trimmed.end(), v));
      PathSystemSummary vd = enumerate_path_systems(p, lo, label, true, src, dst);
      if (!vd.overflow && vd.count == Rational(expect) && !vd.signed_sum.is_zero()) {
        row.pass = true;
        break;
      }
    }
    if (!row.pass)
      row.detail = "no single-vertex removal leaves " + std::to_string(expect) +
                   " matchings with nonzero signed sum";
  }
  return row;
}

struct TableData {
  std::string name;
  std::map<std::string, std::string> files;  // relative path -> content
  std::vector<NamedCheck> checks;
};

NamedCheck simple_check(const std::string& name, bool pass, const std::string& detail = "") {
  return NamedCheck{name, pass, pass ? "" : detail};
}

// Quotient graphs F4/B3, E6/D5, E7/E6 with their edge-label facts.
TableData build_table2() {
  TableData t;
  t.name = "table2";

  {  // F4 over B3
    RootSystem rs = rs_of("F4");
    QuotientPoset p = build_poset(rs, "B3");
    t.files["f4_b3.json"] = dump(poset_to_json(p));
    t.files["f4_b3.dot"] = poset_to_dot(p);
    t.checks.push_back(simple_check("f4_b3_size_24_r_15", p.nodes.size() == 24 && p.r == 15));

    bool single = true;
    for (int i = 0; i <= 3; ++i) {
      PathSystemSummary vd = enumerate_path_systems(p, i, true);
      single = single && !vd.overflow && vd.count == Rational(1);
    }
    t.checks.push_back(simple_check("f4_b3_single_system_degrees_0_3", single));

    bool pairs = true;
    for (int i = 4; i <= 7; ++i) {
      PathSystemSummary vd = enumerate_path_systems(p, i, true);
      pairs = pairs && !vd.overflow && vd.count == Rational(2) && vd.systems.size() == 2 &&
              vd.systems[0].weight != vd.systems[1].weight;
    }
    t.checks.push_back(simple_check("f4_b3_two_disjoint_systems_distinct_weights_degrees_4_7", pairs));

    // The four labeled middle edges carry the ratio pattern {c, c, c, 2c};
    // the absolute values depend on the inner-product normalization and are
    // reported rather than asserted.
    std::vector<Scalar> mid;
    for (const auto& e : p.edges)
      if (p.node(e.src).degree == 7) mid.push_back(e.weight);
    mid = sorted_scalars(mid);
    bool ratio = mid.size() == 4 && mid[0] == mid[1] && mid[1] == mid[2] &&
                 mid[3] == mid[0] + mid[0];
    std::string values;
    for (const Scalar& w : mid) values += (values.empty() ? "" : ", ") + w.str();
    t.checks.push_back(
        NamedCheck{"f4_b3_middle_labels_ratio_pattern_c_c_c_2c", ratio, "values: " + values});
  }

  {  // E6 over D5
    RootSystem rs = rs_of("E6");
    QuotientPoset p = build_poset(rs, "D5");
    t.files["e6_d5.json"] = dump(poset_to_json(p));
    t.files["e6_d5.dot"] = poset_to_dot(p);
    t.checks.push_back(simple_check("e6_d5_size_27_r_16", p.nodes.size() == 27 && p.r == 16));

    const std::vector<long> expected = {78, 78, 78, 78, 3, 3, 3, 3, 1};
    bool census = true;
    for (int i = 0; i <= 8; ++i) {
      PathSystemSummary vd = enumerate_path_systems(p, i, true);
      census = census && !vd.overflow && vd.count == Rational(expected[static_cast<size_t>(i)]) &&
               vd.sign_uniform && !vd.signed_sum.is_zero();
    }
    t.checks.push_back(simple_check("e6_d5_sign_uniform_disjoint_census", census));
  }

  {  // E7 over E6
    RootSystem rs = rs_of("E7");
    QuotientPoset p = build_poset(rs, "E6");
    t.files["e7_e6.json"] = dump(poset_to_json(p));
    t.files["e7_e6.dot"] = poset_to_dot(p);
    t.checks.push_back(simple_check("e7_e6_size_56_r_27", p.nodes.size() == 56 && p.r == 27));

    std::optional<Scalar> w = uniform_edge_weight(p);
    bool doubled = w.has_value() && *w + *w == sc(p.field, 18);
    t.checks.push_back(NamedCheck{
        "e7_e6_uniform_weight_doubles_to_18", doubled,
        w ? "common value " + w->str() + " in half-sum units" : "weights are not uniform"});
  }

  return t;
}

// Middle forms of H4/H3 and E8/E7 in diagonal units.
TableData build_table3() {
  TableData t;
  t.name = "table3";

  auto middle_entry = [&](const std::string& file, const std::string& type,
                          const std::string& theta, const ScalarMatrix& ref) {
    RootSystem rs = rs_of(type);
    QuotientPoset p = build_poset(rs, theta);
    MiddleForm mf = middle_form_reduce(rs, p);
    const FieldPtr& f = p.field;
    Scalar s = mf.form.at(0, 0) / sc(f, 2);
    bool scale_positive = s.sign() > 0;
    ScalarMatrix scaled = ScalarMatrix::zero(f, mf.form.rows(), mf.form.cols());
    if (scale_positive) {
      Scalar inv = s.inverse();
      for (int i = 0; i < mf.form.rows(); ++i)
        for (int j = 0; j < mf.form.cols(); ++j) scaled.at(i, j) = mf.form.at(i, j) * inv;
    }
    bool match = scale_positive && simultaneous_permutation_match(scaled, ref).has_value();
    std::string stem = type + "/" + theta;
    Json j{{"pair", stem},
           {"form", matrix_to_json(mf.form)},
           {"scale", scalar_to_json(s)},
           {"reference", matrix_to_json(ref)},
           {"permutation_match", match},
           {"positive_definite", mf.positive_definite},
           {"weak_pass", mf.weak.pass},
           {"strong_verdict", mf.strong_verdict}};
    t.files[file] = dump(j);
    std::string key = file.substr(0, file.find('.'));
    t.checks.push_back(simple_check(key + "_matches_reference", match,
                                    "middle form does not match the reference pattern"));
    t.checks.push_back(simple_check(key + "_positive_definite", mf.positive_definite));
    t.checks.push_back(simple_check(key + "_reference_positive_definite", is_positive_definite(ref)));
  };

  {
    FieldPtr f = field_quadratic(5);
    Scalar two_b(f, {Rational(-1, 2), Rational(1, 2)});  // (sqrt(5) - 1) / 2
    ScalarMatrix ref = ScalarMatrix::zero(f, 4, 4);
    const long base[4][4] = {{2, 1, 0, 0}, {1, 2, 1, 0}, {0, 1, 2, 0}, {0, 0, 0, 2}};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) ref.at(i, j) = sc(f, base[i][j]);
    ref.at(2, 3) = two_b;
    ref.at(3, 2) = two_b;
    middle_entry("h4_h3_middle.json", "H4", "H3", ref);
  }
  {
    FieldPtr f = field_rationals();
    const long rows[8][8] = {{2, 0, 0, 0, 0, 0, 0, 1}, {0, 2, 1, 0, 1, 0, 0, 0},
                             {0, 1, 2, 0, 0, 0, 0, 1}, {0, 0, 0, 2, 1, 0, 0, 0},
                             {0, 1, 0, 1, 2, 1, 0, 0}, {0, 0, 0, 0, 1, 2, 1, 0},
                             {0, 0, 0, 0, 0, 1, 2, 0}, {1, 0, 1, 0, 0, 0, 0, 2}};
    ScalarMatrix ref = ScalarMatrix::zero(f, 8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) ref.at(i, j) = sc(f, rows[i][j]);
    middle_entry("e8_e7_middle.json", "E8", "E7", ref);
  }

  return t;
}

// E7/E6 band census: middle legs and sign-pure classes.
TableData build_table4() {
  TableData t;
  t.name = "table4";
  RootSystem rs = rs_of("E7");
  QuotientPoset p = build_poset(rs, "E6");

  int middle_legs = 0;
  for (const auto& e : p.edges)
    if (p.node(e.src).degree == 13) ++middle_legs;
  // Systems cross the middle on a pair of these edges; nine pair classes.
  Json degrees = Json::array();
  bool census_ok = true;

  for (int i = 5; i <= 8; ++i) {
    PathSystemSummary vd = enumerate_path_systems(p, i, true);
    struct ClassStat {
      long n = 0;
      std::set<int> signs;
    };
    std::map<std::set<std::pair<long, long>>, ClassStat> central;
    std::map<std::set<long>, ClassStat> band;
    for (const auto& sys : vd.systems) {
      std::set<std::pair<long, long>> pair_key;
      std::set<long> vertex_key;
      for (const auto& path : sys.paths)
        for (size_t k = 0; k < path.size(); ++k) {
          int d = p.node(path[k]).degree;
          if (d >= 12 && d <= 15) vertex_key.insert(path[k]);
          if (d == 13) pair_key.insert({path[k], path[k + 1]});
        }
      auto& c = central[pair_key];
      c.n += 1;
      c.signs.insert(sys.sign);
      auto& b = band[vertex_key];
      b.n += 1;
      b.signs.insert(sys.sign);
    }

    std::vector<long> sizes, negatives;
    bool pure = true;
    Json classes = Json::array();
    for (const auto& [key, st] : central) {
      pure = pure && st.signs.size() == 1;
      sizes.push_back(st.n);
      int sign = st.signs.size() == 1 ? *st.signs.begin() : 0;
      if (sign < 0) negatives.push_back(st.n);
      classes.push_back(Json{{"systems", st.n}, {"sign", sign}});
    }
    std::sort(sizes.begin(), sizes.end());

    long band_negative_mass = 0;
    int band_negative_classes = 0;
    bool band_pure = true;
    for (const auto& [key, st] : band) {
      band_pure = band_pure && st.signs.size() == 1;
      if (st.signs.count(-1)) {
        band_negative_mass += st.n;
        ++band_negative_classes;
      }
    }

    bool row_ok =
        !vd.overflow && vd.count == Rational(1764) && pure && central.size() == 9 &&
        sizes == std::vector<long>{9, 42, 42, 75, 75, 196, 350, 350, 625} &&
        negatives == std::vector<long>{42, 42} && band_pure && band.size() == 25 &&
        band_negative_classes == 2 && band_negative_mass == 84 &&
        vd.signed_sum == Scalar(p.field, Rational(1596) * rational_pow(81, 27 - 2 * i));
    census_ok = census_ok && row_ok;
    degrees.push_back(Json{{"degree", i},
                           {"systems", rational_to_string(vd.count)},
                           {"signed_sum", scalar_to_json(vd.signed_sum)},
                           {"central_classes", std::move(classes)},
                           {"band_classes", static_cast<long>(band.size())},
                           {"band_negative_mass", band_negative_mass},
                           {"pass", row_ok}});
  }

  Json j{{"pair", "E7/E6"}, {"middle_legs", middle_legs}, {"band_degrees", std::move(degrees)}};
  t.files["e7_e6_middle_legs.json"] = dump(j);
  t.checks.push_back(simple_check("e7_e6_nine_middle_legs", middle_legs == 9,
                                  "found " + std::to_string(middle_legs)));
  t.checks.push_back(simple_check("e7_e6_band_census", census_ok));
  return t;
}

// H4/H3 per-step matching data, steps into degrees 7..22, in diagonal units.
TableData build_table5() {
  TableData t;
  t.name = "table5";
  RootSystem rs = rs_of("H4");
  QuotientPoset p = build_poset(rs, "H3");
  const FieldPtr& f = p.field;

  MiddleForm mf = middle_form_reduce(rs, p);
  Scalar unit = mf.form.at(0, 0) / sc(f, 2);  // common positive scale of the weights
  Scalar inv = unit.inverse();
  Scalar one = sc(f, 1);
  Scalar phi(f, {Rational(1, 2), Rational(1, 2)});   // (1 + sqrt(5)) / 2
  Scalar psi(f, {Rational(-1, 2), Rational(1, 2)});  // (sqrt(5) - 1) / 2

  const std::vector<std::pair<int, std::pair<long, bool>>> frozen = {
      {22, {2, false}}, {21, {2, true}}, {20, {3, false}}, {19, {1, false}},
      {18, {2, true}},  {17, {2, true}}, {16, {1, false}}, {15, {2, false}},
      {14, {1, false}}, {13, {1, false}}, {12, {3, false}}, {11, {1, false}},
      {10, {1, false}}, {9, {1, false}},  {8, {1, false}},  {7, {1, false}}};
  Json rows = Json::array();
  bool rows_ok = true;
  for (const auto& [label, data] : frozen) {
    LayerRow row = layer_row(p, label, data.first, data.second);
    rows_ok = rows_ok && row.pass;
    rows.push_back(Json{{"label", row.label},
                        {"step", "V^" + std::to_string(label - 1) + " -> V^" + std::to_string(label)},
                        {"lower", row.lower},
                        {"upper", row.upper},
                        {"matchings", row.matchings},
                        {"sign_pure", row.sign_pure},
                        {"pass", row.pass}});
  }
  t.checks.push_back(simple_check("h4_h3_per_step_matchings", rows_ok));

  auto layer_weights = [&](int lo) {
    std::vector<Scalar> w;
    for (const auto& e : p.edges)
      if (p.node(e.src).degree == lo) w.push_back(e.weight * inv);
    return sorted_scalars(std::move(w));
  };
  auto matching_weights = [&](int lo) {
    PathSystemSummary vd = enumerate_path_systems(p, lo, lo + 1, true);
    Scalar u = one;
    for (size_t k = 0; k < vd.sources.size(); ++k) u = u * inv;
    std::vector<Scalar> w;
    for (const auto& sys : vd.systems) w.push_back(sys.weight * u);
    return sorted_scalars(std::move(w));
  };
  auto scalar_list = [](const std::vector<Scalar>& v) {
    Json out = Json::array();
    for (const Scalar& s : v) out.push_back(scalar_to_json(s));
    return out;
  };

  // Starred steps: frozen edge-weight and matching-weight multisets.
  std::vector<Scalar> w21 = layer_weights(21), w19 = layer_weights(19), w11 = layer_weights(11);
  std::vector<Scalar> m21 = matching_weights(21), m19 = matching_weights(19),
                      m11 = matching_weights(11);
  t.checks.push_back(simple_check(
      "h4_h3_starred_21_22", w21 == sorted_scalars({one, one, one, one, phi, phi, psi, psi}) &&
                                 m21 == sorted_scalars({phi * phi, psi * psi})));
  t.checks.push_back(simple_check(
      "h4_h3_starred_19_20",
      w19 == sorted_scalars({one, one, phi, phi, phi, phi, psi, psi, psi}) &&
          m19 == sorted_scalars({phi * phi * phi * phi, phi, psi * psi})));
  t.checks.push_back(simple_check(
      "h4_h3_starred_11_12",
      w11 == sorted_scalars({one, one, phi, phi, phi, psi, psi}) &&
          m11 == sorted_scalars({phi * phi * phi, one, one})));

  // Determinant facts at the two delicate steps: 11 -> 12 has two unit
  // matchings of equal sign next to the phi^3 one, 14 -> 15 has two
  // matchings of opposite sign but distinct weights 1 and phi^3.
  PathSystemSummary vd11 = enumerate_path_systems(p, 11, 12, true);
  Scalar u11 = one;
  for (size_t k = 0; k < vd11.sources.size(); ++k) u11 = u11 * inv;
  Scalar det11 = vd11.signed_sum * u11;
  t.checks.push_back(simple_check("h4_h3_step_12_det_squared_5", det11 * det11 == sc(f, 5)));

  PathSystemSummary vd15 = enumerate_path_systems(p, 14, 15, true);
  Scalar u15 = one;
  for (size_t k = 0; k < vd15.sources.size(); ++k) u15 = u15 * inv;
  bool step15 = vd15.count == Rational(2) && !vd15.sign_uniform && vd15.systems.size() == 2 &&
                sorted_scalars({vd15.systems[0].weight * u15, vd15.systems[1].weight * u15}) ==
                    sorted_scalars({one, phi * phi * phi});
  Scalar det15 = vd15.signed_sum * u15;
  Scalar six_plus_2root5(f, {Rational(6), Rational(2)});
  t.checks.push_back(
      simple_check("h4_h3_step_15_opposite_signs_distinct_weights",
                   step15 && det15 * det15 == six_plus_2root5));

  Json j{{"pair", "H4/H3"},
         {"unit", scalar_to_json(unit)},
         {"rows", std::move(rows)},
         {"starred", Json{{"21_22", Json{{"edge_weights", scalar_list(w21)},
                                         {"matching_weights", scalar_list(m21)}}},
                          {"19_20", Json{{"edge_weights", scalar_list(w19)},
                                         {"matching_weights", scalar_list(m19)}}},
                          {"11_12", Json{{"edge_weights", scalar_list(w11)},
                                         {"matching_weights", scalar_list(m11)}}}}}};
  t.files["h4_h3_layers.json"] = dump(j);
  return t;
}

// E8/E7 per-step matching data, steps into degrees 7..28, highest-root units.
TableData build_table6() {
  TableData t;
  t.name = "table6";
  RootSystem rs = rs_of("E8");
  QuotientPoset p0 = build_poset(rs, "E7");
  QuotientPoset p = rescale(p0, Scalar(Rational(2, 29)));
  const FieldPtr& f = p.field;

  t.checks.push_back(simple_check(
      "e8_e7_highest_root_height_29",
      rs.height(rs.highest_root_index()) == Scalar(rs.field, Rational(29))));

  // After the rescale every weight is 1 except eight weight-2 middle edges
  // joined to their antiautomorphism partners.
  std::vector<long> alpha = antiautomorphism(rs, p);
  Scalar one = sc(f, 1), two = sc(f, 2);
  int middle_ones = 0, middle_twos = 0;
  bool weights_ok = true;
  for (const auto& e : p.edges) {
    if (p.node(e.src).degree != 28) {
      weights_ok = weights_ok && e.weight == one;
      continue;
    }
    if (e.weight == two) {
      ++middle_twos;
      weights_ok = weights_ok && alpha[static_cast<size_t>(e.src)] == e.dst;
    } else {
      ++middle_ones;
      weights_ok = weights_ok && e.weight == one && alpha[static_cast<size_t>(e.src)] != e.dst;
    }
  }
  t.checks.push_back(simple_check("e8_e7_weights_one_off_middle", weights_ok));
  t.checks.push_back(simple_check("e8_e7_middle_census_8_twos_14_ones",
                                  middle_twos == 8 && middle_ones == 14));

  const std::vector<std::pair<int, std::pair<long, bool>>> frozen = {
      {28, {1, false}}, {27, {2, true}},  {26, {3, false}}, {25, {2, true}},
      {24, {5, false}}, {23, {1, false}}, {22, {1, false}}, {21, {2, true}},
      {20, {3, false}}, {19, {1, false}}, {18, {1, false}}, {17, {1, false}},
      {16, {1, false}}, {15, {2, true}},  {14, {1, false}}, {13, {1, false}},
      {12, {1, false}}, {11, {1, false}}, {10, {1, false}}, {9, {1, false}},
      {8, {1, false}},  {7, {1, false}}};
  Json rows = Json::array();
  bool rows_ok = true;
  for (const auto& [label, data] : frozen) {
    LayerRow row = layer_row(p, label, data.first, data.second);
    rows_ok = rows_ok && row.pass;
    rows.push_back(Json{{"label", row.label},
                        {"step", "V^" + std::to_string(label - 1) + " -> V^" + std::to_string(label)},
                        {"lower", row.lower},
                        {"upper", row.upper},
                        {"matchings", row.matchings},
                        {"sign_pure", row.sign_pure},
                        {"pass", row.pass}});
  }
  t.checks.push_back(simple_check("e8_e7_per_step_matchings", rows_ok));

  Json j{{"pair", "E8/E7"},
         {"rescale", scalar_to_json(Scalar(Rational(2, 29)))},
         {"middle_twos", middle_twos},
         {"middle_ones", middle_ones},
         {"rows", std::move(rows)}};
  t.files["e8_e7_layers.json"] = dump(j);
  return t;
}

int cmd_tables(const std::string& out_dir) {
  std::vector<TableData> tables;
  tables.push_back(build_table2());
  tables.push_back(build_table3());
  tables.push_back(build_table4());
  tables.push_back(build_table5());
  tables.push_back(build_table6());

  Json top = Json::array();
  bool pass = true;
  for (const TableData& t : tables) {
    bool tp = all_pass(t.checks);
    pass = pass && tp;
    for (const auto& [rel, content] : t.files)
      write_text_atomic(out_dir + "/" + t.name + "/" + rel, content);
    Json manifest{{"table", t.name}, {"pass", tp}, {"checks", checks_to_json(t.checks)}};
    write_text_atomic(out_dir + "/" + t.name + "/manifest.json", dump(manifest));
    Json files = Json::array();
    for (const auto& [rel, content] : t.files) files.push_back(t.name + "/" + rel);
    top.push_back(Json{{"table", t.name}, {"pass", tp}, {"files", std::move(files)}});
  }
  Json manifest{{"pass", pass}, {"tables", std::move(top)}};
  write_text_atomic(out_dir + "/manifest.json", dump(manifest));
  std::cout << (pass ? "tables: pass\n" : "tables: FAIL (see manifest)\n");
  return pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// verify-theorem

std::string dependency_name(const CoxeterType& type) {
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

int cmd_verify(int max_rank, bool exhaustive, const std::string& out_path) {
  if (max_rank < 1 || max_rank > 10)
    throw ParameterError("--max-rank must lie in 1..10");

  std::vector<std::string> types;
  for (int n = 1; n <= max_rank; ++n) types.push_back("A" + std::to_string(n));
  for (int n = 2; n <= max_rank; ++n) types.push_back("B" + std::to_string(n));
  for (int n = 4; n <= max_rank; ++n) types.push_back("D" + std::to_string(n));
  if (max_rank >= 2)
    for (int m = 3; m <= 2 * max_rank; ++m) types.push_back("I2(" + std::to_string(m) + ")");
  if (max_rank >= 3) types.push_back("H3");
  if (max_rank >= 4) types.push_back("H4");
  if (max_rank >= 4) types.push_back("F4");
  for (int n = 6; n <= std::min(max_rank, 8); ++n) types.push_back("E" + std::to_string(n));

  std::set<std::string> passed;
  Json steps = Json::array();
  bool pass = true;
  for (const std::string& name : types) {
    RootSystem rs = rs_of(name);
    std::vector<int> idx = designated_theta(rs.type);
    QuotientPoset p = enumerate_quotient(rs, make_theta(rs, idx));
    ValidationReport v = validate(rs, p);

    bool relative = false;
    std::string route;
    bool exhaustive_pass = true;
    if (rs.type.family == Family::H && rs.type.rank == 4) {
      route = "middle-form reduction";
      relative = middle_form_reduce(rs, p).strong_verdict;
    } else if (rs.type.family == Family::E && rs.type.rank == 8) {
      route = "middle-form reduction";
      relative = middle_form_reduce(rs, p).strong_verdict;
    } else {
      route = "full determinants";
      relative = strong_lefschetz_report(p).pass;
    }
    if (exhaustive && route == "middle-form reduction") {
      route += " + full determinants";
      exhaustive_pass = strong_lefschetz_report(p).pass;
    }

    std::string dep = dependency_name(rs.type);
    // The chain bottoms out below rank 2, where the property is immediate.
    bool dep_covered = dep.empty() || dep == "A1" || passed.count(dep) > 0;
    bool step_pass = v.all_pass && relative && exhaustive_pass && dep_covered;
    pass = pass && step_pass;
    if (step_pass) passed.insert(name);

    Json theta = Json::array();
    for (int i : idx) theta.push_back(i);
    steps.push_back(Json{{"type", name},
                         {"theta", std::move(theta)},
                         {"theta_type", dep},
                         {"poset_nodes", static_cast<long>(p.nodes.size())},
                         {"r", p.r},
                         {"route", route},
                         {"validation_pass", v.all_pass},
                         {"relative_pass", relative && exhaustive_pass},
                         {"dependency", dep.empty() ? Json(nullptr) : Json(dep)},
                         {"dependency_covered", dep_covered},
                         {"pass", step_pass}});
  }

  Json manifest{
      {"max_rank", max_rank},
      {"exhaustive", exhaustive},
      {"scope",
       "Certifies exactly the inductive steps of the rank induction: for each "
       "listed type W with its designated parabolic W_T, the relative "
       "coinvariant ring is verified strong Lefschetz by exact computation "
       "(full determinants, or the positive-definite middle form plus weak "
       "full rank for H4 and E8), and the dependency chain down to rank one "
       "is recorded.  The full coinvariant ring of E8 is not verified "
       "directly at this scale; an E8 entry certifies only the relative step "
       "over E7 together with the recorded chain."},
      {"steps", std::move(steps)},
      {"pass", pass}};
  emit(out_path, dump(manifest));
  return pass ? 0 : 2;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const InvariantViolation& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact verification of the strong Lefschetz property for coinvariant "
      "and relative coinvariant rings of finite reflection groups\n"
      "environment: SLP_PRECISION_BITS (sign oracle start, default 128), "
      "SLP_PATH_CAP (path enumeration cap, default 1000000)"};
  app.require_subcommand(1);

  auto* roots = app.add_subcommand("roots", "emit a root system as JSON");
  std::string roots_type, roots_json;
  roots->add_option("--type", roots_type, "Coxeter type, e.g. A3, B4, D5, I2(7), H3, F4, E8")
      ->required();
  roots->add_option("--json", roots_json, "output path (stdout when omitted)");

  auto* quotient = app.add_subcommand("quotient", "enumerate a parabolic quotient poset");
  std::string q_type, q_theta, q_json, q_dot;
  quotient->add_option("--type", q_type, "ambient Coxeter type")->required();
  quotient->add_option("--theta", q_theta,
                       "parabolic subset: index list '0,1,2', designated type name, or empty");
  quotient->add_option("--json", q_json, "poset JSON output path");
  quotient->add_option("--dot", q_dot, "DOT output path, one rank per degree");

  auto* lef = app.add_subcommand("lefschetz", "analyze a poset file");
  std::string l_poset, l_mode = "strong", l_format = "json", l_out;
  int l_degree = -1;
  bool l_vd = false;
  lef->add_option("--poset", l_poset, "poset JSON file (from the quotient subcommand)")
      ->required();
  lef->add_option("--mode", l_mode, "strong | weak | middle | paths (default strong)");
  lef->add_option("--degree", l_degree, "source degree for mode paths");
  lef->add_flag("--vertex-disjoint", l_vd, "restrict the path census to vertex-disjoint systems");
  lef->add_option("--format", l_format, "json | tsv (tsv for matrix output)");
  lef->add_option("--out", l_out, "output path (stdout when omitted)");

  auto* paths = app.add_subcommand("paths", "path-system census between complementary degrees");
  std::string p_type, p_theta, p_poset, p_format = "json", p_out;
  int p_degree = -1;
  bool p_vd = false;
  paths->add_option("--type", p_type, "ambient Coxeter type (alternative to --poset)");
  paths->add_option("--theta", p_theta, "parabolic subset spec");
  paths->add_option("--poset", p_poset, "poset JSON file (alternative to --type)");
  paths->add_option("--degree", p_degree, "source degree i, census runs V^i -> V^(r-i)")
      ->required();
  paths->add_flag("--vertex-disjoint", p_vd, "restrict to vertex-disjoint systems");
  paths->add_option("--format", p_format, "json | tsv");
  paths->add_option("--out", p_out, "output path (stdout when omitted)");

  auto* coin = app.add_subcommand("coinvariant", "polynomial-route check on a coinvariant ring");
  std::string c_type, c_element = "rho", c_out;
  bool c_strong = false;
  coin->add_option("--type", c_type, "Coxeter type (families A, B, D, I2)")->required();
  coin->add_flag("--check-strong", c_strong, "run the full determinant suite");
  coin->add_option("--element", c_element,
                   "degree-one element: 'rho' or coefficients over the simple coroots, "
                   "e.g. '1,1/2,2' (default rho)");
  coin->add_option("--out", c_out, "output path (stdout when omitted)");

  auto* deform = app.add_subcommand("deform", "deformation certificate for a fibration");
  std::string d_type, d_theta, d_report;
  deform->add_option("--type", d_type, "ambient Coxeter type (families A, B, D, I2)")
      ->required();
  deform->add_option("--theta", d_theta, "parabolic subset spec")->required();
  deform->add_option("--report", d_report, "report output path (stdout when omitted)");

  auto* tables = app.add_subcommand("tables", "regenerate the reference tables with manifests");
  bool t_paper = false;
  std::string t_out = "tables-out";
  tables->add_flag("--paper", t_paper, "regenerate the published reference tables")->required();
  tables->add_option("--out", t_out, "output directory (default tables-out)");

  auto* verify = app.add_subcommand("verify-theorem", "replay the inductive certification");
  int v_rank = 4;
  bool v_exhaustive = false;
  std::string v_out;
  verify->add_option("--max-rank", v_rank, "largest rank to certify (default 4)");
  verify->add_flag("--exhaustive", v_exhaustive,
                   "also run the full determinant chains for H4 and E8");
  verify->add_option("--out", v_out, "manifest output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (roots->parsed()) return guarded([&] { return cmd_roots(roots_type, roots_json); });
  if (quotient->parsed())
    return guarded([&] { return cmd_quotient(q_type, q_theta, q_json, q_dot); });
  if (lef->parsed())
    return guarded([&] { return cmd_lefschetz(l_poset, l_mode, l_degree, l_vd, l_format, l_out); });
  if (paths->parsed())
    return guarded(
        [&] { return cmd_paths(p_type, p_theta, p_poset, p_degree, p_vd, p_format, p_out); });
  if (coin->parsed())
    return guarded([&] { return cmd_coinvariant(c_type, c_strong, c_element, c_out); });
  if (deform->parsed()) return guarded([&] { return cmd_deform(d_type, d_theta, d_report); });
  if (tables->parsed()) return guarded([&] { return cmd_tables(t_out); });
  if (verify->parsed()) return guarded([&] { return cmd_verify(v_rank, v_exhaustive, v_out); });
  return 1;
}
