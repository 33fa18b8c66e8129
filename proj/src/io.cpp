#include "slp/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "slp/errors.hpp"

namespace slp {

namespace {

std::vector<long> labels_or_range(const std::vector<long>& ids, int n) {
  if (!ids.empty()) return ids;
  std::vector<long> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = i;
  return out;
}

}  // namespace

Json scalar_to_json(const Scalar& s) {
  Json coeffs = Json::array();
  for (const Rational& c : s.coeffs()) coeffs.push_back(rational_to_string(c));
  return Json{{"field", s.field()->tag()}, {"coeffs", std::move(coeffs)}};
}

Scalar scalar_from_json(const Json& j) {
  try {
    FieldPtr f = field_from_tag(j.at("field").get<std::string>());
    std::vector<Rational> coeffs;
    for (const Json& c : j.at("coeffs"))
      coeffs.push_back(rational_from_string(c.get<std::string>()));
    if (static_cast<int>(coeffs.size()) != f->degree())
      throw ParseError("scalar coefficient count does not match the field degree");
    return Scalar(f, std::move(coeffs));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed scalar object: ") + e.what());
  }
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (const Scalar& s : v) out.push_back(scalar_to_json(s));
  return out;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("vector is not an array");
  Vec out;
  for (const Json& e : j) out.push_back(scalar_from_json(e));
  return out;
}

Json matrix_to_json(const ScalarMatrix& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m.at(i, j)));
    entries.push_back(std::move(row));
  }
  return Json{{"rows", labels_or_range(m.row_ids, m.rows())},
              {"cols", labels_or_range(m.col_ids, m.cols())},
              {"entries", std::move(entries)}};
}

std::string matrix_to_tsv(const ScalarMatrix& m) {
  std::vector<long> rows = labels_or_range(m.row_ids, m.rows());
  std::vector<long> cols = labels_or_range(m.col_ids, m.cols());
  std::ostringstream out;
  for (int j = 0; j < m.cols(); ++j) out << '\t' << cols[static_cast<size_t>(j)];
  out << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    out << rows[static_cast<size_t>(i)];
    for (int j = 0; j < m.cols(); ++j) out << '\t' << m.at(i, j).str();
    out << '\n';
  }
  return out.str();
}

Json roots_to_json(const RootSystem& rs) {
  Json simple = Json::array();
  for (const Vec& v : rs.simple_roots) simple.push_back(vec_to_json(v));
  Json positive = Json::array();
  for (const Vec& v : rs.positive_roots) positive.push_back(vec_to_json(v));
  Json gram = Json::array();
  for (const auto& row : rs.gram) {
    Json r = Json::array();
    for (const Scalar& s : row) r.push_back(scalar_to_json(s));
    gram.push_back(std::move(r));
  }
  return Json{{"type", rs.type.name()},
              {"field", rs.field->tag()},
              {"simple", std::move(simple)},
              {"positive", std::move(positive)},
              {"gram", std::move(gram)}};
}

Json poset_to_json(const QuotientPoset& poset) {
  Json nodes = Json::array();
  for (const CosetNode& n : poset.nodes)
    nodes.push_back(Json{{"id", n.id}, {"degree", n.degree}, {"vector", vec_to_json(n.vector)}});
  Json edges = Json::array();
  for (const WeightedEdge& e : poset.edges)
    edges.push_back(Json{{"src", e.src},
                         {"dst", e.dst},
                         {"root", e.root},
                         {"weight", scalar_to_json(e.weight)}});
  return Json{{"type", poset.type.name()}, {"theta", poset.theta},
              {"field", poset.field->tag()}, {"r", poset.r},
              {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

QuotientPoset poset_from_json(const Json& j) {
  QuotientPoset p;
  try {
    p.type = CoxeterType::parse(j.at("type").get<std::string>());
    p.theta = j.at("theta").get<std::vector<int>>();
    p.field = field_from_tag(j.at("field").get<std::string>());
    p.r = j.at("r").get<int>();
    if (p.r < 0) throw ParseError("negative top degree");
    size_t ambient = 0;
    for (const Json& n : j.at("nodes")) {
      CosetNode node;
      node.id = n.at("id").get<long>();
      node.degree = n.at("degree").get<int>();
      node.vector = vec_from_json(n.at("vector"));
      if (node.id != static_cast<long>(p.nodes.size()))
        throw ParseError("node ids must be 0..n-1 in order");
      if (node.degree < 0 || node.degree > p.r)
        throw ParseError("node degree outside 0..r");
      if (p.nodes.empty()) ambient = node.vector.size();
      if (node.vector.size() != ambient)
        throw ParseError("node vectors have mixed lengths");
      p.nodes.push_back(std::move(node));
    }
    if (p.nodes.empty()) throw ParseError("poset has no nodes");
    for (const Json& e : j.at("edges")) {
      WeightedEdge edge;
      edge.src = e.at("src").get<long>();
      edge.dst = e.at("dst").get<long>();
      edge.root = e.at("root").get<int>();
      edge.weight = scalar_from_json(e.at("weight"));
      long n = static_cast<long>(p.nodes.size());
      if (edge.src < 0 || edge.src >= n || edge.dst < 0 || edge.dst >= n)
        throw ParseError("edge endpoint out of range");
      if (p.node(edge.dst).degree != p.node(edge.src).degree + 1)
        throw ParseError("edge does not rise exactly one degree");
      p.edges.push_back(std::move(edge));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed poset file: ") + e.what());
  }
  p.reindex();
  return p;
}

std::string poset_to_dot(const QuotientPoset& poset) {
  std::ostringstream out;
  std::string title = poset.type.name();
  if (!poset.theta.empty()) {
    title += " theta";
    for (int i : poset.theta) title += " " + std::to_string(i);
  }
  out << "digraph \"" << title << "\" {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=circle, fontsize=10];\n";
  for (int d = 0; d <= poset.r; ++d) {
    out << "  { rank=same;";
    for (long id : poset.by_degree[static_cast<size_t>(d)]) out << " n" << id << ";";
    out << " }\n";
  }
  for (const WeightedEdge& e : poset.edges)
    out << "  n" << e.src << " -> n" << e.dst << " [label=\"" << e.weight.str() << "\"];\n";
  out << "}\n";
  return out.str();
}

Json strong_report_to_json(const StrongReport& rep) {
  Json degrees = Json::array();
  for (const StrongDegree& d : rep.degrees)
    degrees.push_back(Json{{"degree", d.degree}, {"rows", d.rows}, {"cols", d.cols},
                           {"determinant", scalar_to_json(d.determinant)},
                           {"sign", d.sign}, {"pass", d.pass}});
  return Json{{"pass", rep.pass}, {"message", rep.message}, {"degrees", std::move(degrees)}};
}

Json weak_report_to_json(const WeakReport& rep) {
  Json steps = Json::array();
  for (const WeakStep& s : rep.steps)
    steps.push_back(Json{{"degree", s.degree}, {"rank", s.rank},
                         {"required", s.required}, {"full_rank", s.full_rank}});
  return Json{{"pass", rep.pass}, {"steps", std::move(steps)}};
}

Json middle_form_to_json(const MiddleForm& mf) {
  return Json{{"form", matrix_to_json(mf.form)},
              {"positive_definite", mf.positive_definite},
              {"weak", weak_report_to_json(mf.weak)},
              {"strong_verdict", mf.strong_verdict}};
}

Json path_summary_to_json(const PathSystemSummary& sum) {
  return Json{{"degree_low", sum.degree_low},
              {"degree_high", sum.degree_high},
              {"vertex_disjoint", sum.vertex_disjoint_mode},
              {"sources", sum.sources},
              {"targets", sum.targets},
              {"overflow", sum.overflow},
              {"cap", sum.cap},
              {"count", rational_to_string(sum.count)},
              {"signed_sum", scalar_to_json(sum.signed_sum)},
              {"sign_uniform", sum.sign_uniform},
              {"shared_sign", sum.shared_sign}};
}

Json validation_to_json(const ValidationReport& rep) {
  Json checks = Json::array();
  for (const ValidationCheck& c : rep.checks)
    checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return Json{{"pass", rep.all_pass}, {"checks", std::move(checks)}};
}

Json deformation_report_to_json(const DeformationReport& rep) {
  Json dk = Json::array();
  for (const DeformationEntry& e : rep.dk) {
    Json coeffs = Json::array();
    for (const Scalar& c : e.coeffs) coeffs.push_back(scalar_to_json(c));
    dk.push_back(Json{{"k", e.k}, {"coeffs", std::move(coeffs)},
                      {"at0", scalar_to_json(e.at_zero)}});
  }
  return Json{{"Dk", std::move(dk)}, {"t0", rep.t0},
              {"final_check", rep.pass ? "pass" : "fail"}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ParseError("cannot read " + path);
  return buf.str();
}

Json json_from_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw Error("cannot write " + path);
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at " + path);
  }
}

}  // namespace slp
