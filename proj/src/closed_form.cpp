#include "valtree/tree.hpp"

namespace valtree {
namespace {

// Emits the coarsest classes of constant valuation: a subtree whose leaves
// all carry the same label collapses into its root class.
void collect_table(const TreeNode& node, ClosedFormReport& report) {
  const ClassValuation cv = class_valuation(node);
  if (cv.kind == ClassValuation::Kind::Constant) {
    report.table.emplace_back(node.cls, cv.value);
    return;
  }
  for (const auto& child : node.children) collect_table(child, report);
}

}  // namespace

ClosedFormReport closed_form(const ValuationTree& t) {
  ClosedFormReport report;
  report.depth = t.max_depth;
  for_each_node(t.root, [&](const TreeNode& n) {
    if (is_frontier(n.label)) report.frontier.push_back(n.cls);
  });
  if (!report.frontier.empty()) {
    report.status = ClosedFormReport::Status::Unresolved;
    return report;
  }
  report.status = ClosedFormReport::Status::Closed;
  collect_table(t.root, report);
  return report;
}

std::optional<unsigned> ClosedFormReport::lookup(std::span<const Integer> point) const {
  for (const auto& [cls, v] : table)
    if (cls.contains(point)) return v;
  return std::nullopt;
}

}  // namespace valtree
