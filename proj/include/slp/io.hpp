#pragma once

/*
 * Serialization layer: JSON for root systems, posets and reports, DOT for
 * rank diagrams, TSV for labeled matrices.  Every emitter is deterministic
 * byte for byte: object keys keep their insertion order, scalars print in
 * canonical text form inside the scalar JSON object, and arrays follow the
 * library's fixed node and edge orderings.  File writes go through a
 * temporary sibling plus an atomic rename, so an interrupted run never
 * leaves a partial artifact at the target path.
 */

#include <json.hpp>

#include <string>

#include "slp/deform.hpp"
#include "slp/lefschetz.hpp"
#include "slp/linalg.hpp"
#include "slp/quotient.hpp"
#include "slp/rootsystem.hpp"

namespace slp {

using Json = nlohmann::ordered_json;

// {"field": "<tag>", "coeffs": ["<rational>", ...]}
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);

// {"rows": [ids], "cols": [ids], "entries": [[scalar, ...], ...]}
Json matrix_to_json(const ScalarMatrix& m);

// Row-major with canonical text scalars; first row and first column carry
// the row/column ids (0..n-1 when the matrix has no labels).
std::string matrix_to_tsv(const ScalarMatrix& m);

Json roots_to_json(const RootSystem& rs);

Json poset_to_json(const QuotientPoset& poset);
// Validates ids, degrees and edge endpoints, rebuilds the indexes; throws
// ParseError on any structural defect.  Witness words are derived data and
// are not part of the interchange schema.
QuotientPoset poset_from_json(const Json& j);

// One rank per degree, edge labels = formatted weights.
std::string poset_to_dot(const QuotientPoset& poset);

Json strong_report_to_json(const StrongReport& rep);
Json weak_report_to_json(const WeakReport& rep);
Json middle_form_to_json(const MiddleForm& mf);
Json path_summary_to_json(const PathSystemSummary& sum);
Json validation_to_json(const ValidationReport& rep);

// Exactly {"Dk": [{"k", "coeffs", "at0"}, ...], "t0", "final_check"}.
Json deformation_report_to_json(const DeformationReport& rep);

// Whole-file helpers.  json_from_file wraps I/O and syntax errors in
// ParseError naming the path.
std::string read_text_file(const std::string& path);
Json json_from_file(const std::string& path);
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace slp
