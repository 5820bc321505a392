#include "valtree/render.hpp"

#include <sstream>

namespace valtree {
namespace {

Json integer_json(const Integer& v) {
  if (v >= 0 && mpz_fits_ulong_p(v.get_mpz_t())) return Json(v.get_ui());
  return Json(v.get_str());
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_unsigned()) return Integer(j.get<unsigned long>());
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw std::invalid_argument("expected an integer, got " + j.dump());
}

Json class_json(const ResidueClass& c) {
  Json residues = Json::array();
  for (const auto& r : c.residues) residues.push_back(integer_json(r));
  return Json{{"level", c.level}, {"residues", std::move(residues)}};
}

Json label_json(const NodeLabel& l) {
  if (const auto* t = std::get_if<Terminal>(&l)) return Json(t->valuation);
  return Json(is_star(l) ? "star" : "frontier");
}

Json node_json(const TreeNode& n) {
  Json j{{"class", class_json(n.cls)}, {"label", label_json(n.label)}};
  if (n.split) j["split"] = to_json(*n.split);
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(node_json(c));
  j["children"] = std::move(children);
  return j;
}

Json header_json(const Polynomial& f, Prime p, unsigned arity, unsigned max_depth) {
  return Json{{"polynomial", render(f)}, {"p", p.value()}, {"arity", arity}, {"max_depth", max_depth}};
}

void ascii_lines(const TreeNode& n, std::ostringstream& out) {
  out << std::string(2 * n.cls.level, ' ') << to_string(n.cls) << ' ' << to_string(n.label) << '\n';
  for (const auto& c : n.children) ascii_lines(c, out);
}

std::size_t dot_nodes(const TreeNode& n, std::size_t& next_id, std::ostringstream& out) {
  const std::size_t id = next_id++;
  out << "  n" << id << " [label=\"" << to_string(n.label) << "\", tooltip=\"" << to_string(n.cls)
      << "\"];\n";
  for (const auto& c : n.children) {
    const std::size_t child = dot_nodes(c, next_id, out);
    out << "  n" << id << " -> n" << child << ";\n";
  }
  return id;
}

SplitKind split_kind_from(const std::string& s) {
  if (s == "all_star") return SplitKind::AllStar;
  if (s == "all_terminal") return SplitKind::AllTerminal;
  if (s == "exactly_p") return SplitKind::ExactlyP;
  throw std::invalid_argument("unknown split class '" + s + "'");
}

TreeNode node_from_json(const Json& j, Prime p, unsigned arity) {
  TreeNode n;
  const Json& cls = j.at("class");
  n.cls.level = cls.at("level").get<unsigned>();
  for (const auto& r : cls.at("residues")) n.cls.residues.push_back(integer_from_json(r));
  if (n.cls.arity() != arity) throw std::invalid_argument("residue arity mismatch");
  mpz_ui_pow_ui(n.cls.modulus.get_mpz_t(), p.value(), n.cls.level);

  const Json& label = j.at("label");
  if (label.is_number_unsigned()) {
    n.label = Terminal{label.get<unsigned>()};
  } else if (label == "star") {
    n.label = Star{};
  } else if (label == "frontier") {
    n.label = Frontier{};
  } else {
    throw std::invalid_argument("unknown label " + label.dump());
  }

  if (j.contains("split")) {
    const Json& s = j["split"];
    n.split = solve_split(s.at("alpha").get<std::uint32_t>(),
                          s.at("lin").get<std::vector<std::uint32_t>>(), p);
    if (n.split->kind != split_kind_from(s.at("class").get<std::string>()))
      throw std::invalid_argument("split class inconsistent with alpha and lin");
  }
  for (const auto& c : j.at("children")) n.children.push_back(node_from_json(c, p, arity));
  return n;
}

std::string digits_string(const DigitTuple& d) {
  std::string out = "(";
  for (std::size_t v = 0; v < d.size(); ++v) out += (v ? ", " : "") + std::to_string(d[v]);
  return out + ")";
}

Json valuation_json(const Valuation& v) { return v.is_finite() ? Json(v.value()) : Json("inf"); }

Json empirical_node_json(const EmpiricalNode& n) {
  Json j{{"class", {{"level", n.level}, {"residue", integer_json(n.residue)},
                    {"modulus", integer_json(n.modulus)}}}};
  const bool terminal = n.status == EmpiricalNode::Status::TerminalByWitness;
  j["status"] = terminal ? "terminal" : "mixed";
  if (terminal) j["valuation"] = n.valuation;
  Json w = Json::array();
  for (const auto& [idx, v] : n.witnesses) w.push_back(Json::array({idx, v}));
  j["witnesses"] = std::move(w);
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(empirical_node_json(c));
  j["children"] = std::move(children);
  return j;
}

void empirical_lines(const EmpiricalNode& n, std::ostringstream& out) {
  out << std::string(2 * n.level, ' ') << '(' << n.residue.get_str() << " mod " << n.modulus.get_str()
      << ") ";
  if (n.status == EmpiricalNode::Status::TerminalByWitness)
    out << n.valuation << " [" << n.witnesses.size() << " witnesses]\n";
  else
    out << "mixed\n";
  for (const auto& c : n.children) empirical_lines(c, out);
}

}  // namespace

Json to_json(const ValuationTree& t) {
  Json j = header_json(t.f, t.p, t.arity, t.max_depth);
  j["root"] = node_json(t.root);
  return j;
}

std::string render_json(const ValuationTree& t) { return to_json(t).dump(2) + "\n"; }

std::string render_truncated_json(const Polynomial& f, Prime p, unsigned arity, unsigned max_depth,
                                  std::size_t node_budget) {
  Json j = header_json(f, p, arity, max_depth);
  j["truncated"] = true;
  j["node_budget"] = node_budget;
  j["root"] = nullptr;
  return j.dump(2) + "\n";
}

std::string render_ascii(const ValuationTree& t) {
  std::ostringstream out;
  ascii_lines(t.root, out);
  return out.str();
}

std::string render_dot(const ValuationTree& t) {
  std::ostringstream out;
  out << "digraph valuation_tree {\n"
      << "  label=\"" << render(t.f) << ", p = " << t.p.value() << "\";\n"
      << "  node [shape=circle];\n";
  std::size_t next_id = 0;
  dot_nodes(t.root, next_id, out);
  out << "}\n";
  return out.str();
}

ValuationTree tree_from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    if (j.value("truncated", false)) throw std::invalid_argument("truncated tree has no root");
    const Prime p(j.at("p").get<std::uint64_t>());
    const unsigned arity = j.at("arity").get<unsigned>();
    if (arity != 1 && arity != 2) throw std::invalid_argument("arity must be 1 or 2");
    return ValuationTree{parse(j.at("polynomial").get<std::string>()), p, arity,
                         j.at("max_depth").get<unsigned>(), node_from_json(j.at("root"), p, arity)};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed tree JSON: ") + e.what());
  }
}

Json to_json(const SplitAnalysis& s) {
  return Json{{"alpha", s.alpha}, {"lin", s.lin}, {"class", to_string(s.kind)}};
}

std::string render_ascii(const SplitAnalysis& s) {
  std::ostringstream out;
  out << "alpha " << s.alpha << "\nlin";
  for (auto a : s.lin) out << ' ' << a;
  out << "\nsplit " << to_string(s.kind) << "\nstar digits";
  for (const auto& d : s.star_digits) out << ' ' << digits_string(d);
  out << '\n';
  return out.str();
}

Json to_json(const ClosedFormReport& r) {
  Json j;
  const bool closed = r.status == ClosedFormReport::Status::Closed;
  j["status"] = closed ? "closed" : "unresolved";
  j["depth"] = r.depth;
  if (closed) {
    Json table = Json::array();
    for (const auto& [cls, v] : r.table) table.push_back(Json{{"class", class_json(cls)}, {"valuation", v}});
    j["table"] = std::move(table);
  } else {
    Json frontier = Json::array();
    for (const auto& cls : r.frontier) frontier.push_back(class_json(cls));
    j["frontier"] = std::move(frontier);
  }
  return j;
}

std::string render_ascii(const ClosedFormReport& r) {
  std::ostringstream out;
  if (r.status == ClosedFormReport::Status::Closed) {
    out << "CLOSED\n";
    for (const auto& [cls, v] : r.table) out << "  " << to_string(cls) << " -> " << v << '\n';
  } else {
    out << "UNRESOLVED(" << r.depth << ")\n";
    for (const auto& cls : r.frontier) out << "  frontier " << to_string(cls) << '\n';
  }
  return out.str();
}

std::string render_csv(const PeriodReport& r) {
  std::ostringstream out;
  const std::size_t rows = r.arity == 2 ? r.window : 1;
  const std::size_t cols = r.window;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      if (k) out << ',';
      out << (r.arity == 2 ? r.at(i, k) : r.at(k)).to_string();
    }
    out << '\n';
  }
  return out.str();
}

Json to_json(const PeriodReport& r) {
  Json grid = Json::array();
  if (r.arity == 2) {
    for (std::size_t n = 0; n < r.window; ++n) {
      Json row = Json::array();
      for (std::size_t m = 0; m < r.window; ++m) row.push_back(valuation_json(r.at(n, m)));
      grid.push_back(std::move(row));
    }
  } else {
    for (const auto& v : r.grid) grid.push_back(valuation_json(v));
  }
  Json j{{"p", r.p.value()}, {"window", r.window}, {"arity", r.arity}, {"grid", std::move(grid)},
         {"vset", r.vset}};
  j["period"] = r.period ? Json{{"length", r.period->length}, {"power_of_p", r.period->is_power_of_p}}
                         : Json(nullptr);
  return j;
}

std::string render_ascii(const PeriodReport& r) {
  std::ostringstream out;
  out << "values {";
  bool first = true;
  for (auto v : r.vset) {
    out << (first ? "" : ", ") << v;
    first = false;
  }
  out << "}\n";
  if (r.period)
    out << "period " << r.period->length << (r.period->is_power_of_p ? " (power of " : " (not a power of ")
        << r.p.value() << ")\n";
  else
    out << "no period within window " << r.window << " (inconclusive)\n";
  return out.str();
}

Json to_json(const EmpiricalTreeReport& r) {
  return Json{{"sequence", "stirling"},
              {"k", r.k},
              {"p", r.p.value()},
              {"depth", r.depth},
              {"witnesses", r.min_witnesses},
              {"non_terminal_per_level", r.non_terminal_per_level},
              {"root", empirical_node_json(r.root)}};
}

std::string render_ascii(const EmpiricalTreeReport& r) {
  std::ostringstream out;
  out << "S(n," << r.k << "), p=" << r.p.value() << ", depth " << r.depth << ", " << r.min_witnesses
      << " witnesses\n";
  empirical_lines(r.root, out);
  out << "mixed classes per level:";
  for (auto c : r.non_terminal_per_level) out << ' ' << c;
  out << '\n';
  return out.str();
}

}  // namespace valtree
