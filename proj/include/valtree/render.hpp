#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "json.hpp"
#include "valtree/sequences.hpp"
#include "valtree/tree.hpp"

namespace valtree {

using Json = nlohmann::ordered_json;

// Valuation trees. ASCII puts one node per line, indented two spaces per
// level, as "(residues mod p^m) label".
std::string render_ascii(const ValuationTree& t);
std::string render_dot(const ValuationTree& t);
std::string render_json(const ValuationTree& t);
Json to_json(const ValuationTree& t);

/// Header of a tree whose construction hit the node budget; carries
/// "truncated": true and no root.
std::string render_truncated_json(const Polynomial& f, Prime p, unsigned arity, unsigned max_depth,
                                  std::size_t node_budget);

/// Inverse of render_json. Star digits are recomputed from (alpha, lin).
/// Throws std::invalid_argument on malformed documents.
ValuationTree tree_from_json(std::string_view text);

Json to_json(const SplitAnalysis& s);
std::string render_ascii(const SplitAnalysis& s);

Json to_json(const ClosedFormReport& r);
std::string render_ascii(const ClosedFormReport& r);

/// Row-major values, "inf" for infinite valuation. Arity 1 is a single row.
std::string render_csv(const PeriodReport& r);
Json to_json(const PeriodReport& r);
std::string render_ascii(const PeriodReport& r);

Json to_json(const EmpiricalTreeReport& r);
std::string render_ascii(const EmpiricalTreeReport& r);

}  // namespace valtree
