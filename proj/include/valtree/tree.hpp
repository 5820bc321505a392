#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "valtree/padic.hpp"
#include "valtree/poly.hpp"

namespace valtree {

/// The class {(r_1 + p^m t_1, ..., r_a + p^m t_a)} at level m. The level-0
/// class has all residues 0 modulo 1, i.e. every input.
struct ResidueClass {
  unsigned level = 0;
  std::vector<Integer> residues;
  Integer modulus = 1;

  static ResidueClass root(unsigned arity);

  unsigned arity() const { return static_cast<unsigned>(residues.size()); }
  bool contains(std::span<const Integer> point) const;
  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

/// "(1, 3 mod 4)"
std::string to_string(const ResidueClass& c);

struct Terminal {
  unsigned valuation = 0;
  friend bool operator==(const Terminal&, const Terminal&) = default;
};
struct Star {
  friend bool operator==(const Star&, const Star&) = default;
};
/// A star node at the depth limit, left unexpanded.
struct Frontier {
  friend bool operator==(const Frontier&, const Frontier&) = default;
};
using NodeLabel = std::variant<Terminal, Star, Frontier>;

inline bool is_star(const NodeLabel& l) { return std::holds_alternative<Star>(l); }
inline bool is_terminal(const NodeLabel& l) { return std::holds_alternative<Terminal>(l); }
inline bool is_frontier(const NodeLabel& l) { return std::holds_alternative<Frontier>(l); }
std::string to_string(const NodeLabel& l);

enum class SplitKind { AllStar, AllTerminal, ExactlyP };
const char* to_string(SplitKind k);

using DigitTuple = std::vector<std::uint32_t>;

/// Split of a star node at level k >= 1 into its children. Children with new
/// digits d are star exactly when alpha + sum(lin[v] * d[v]) = 0 (mod p).
struct SplitAnalysis {
  std::uint32_t alpha = 0;
  std::vector<std::uint32_t> lin;
  SplitKind kind = SplitKind::AllTerminal;
  std::vector<DigitTuple> star_digits;

  friend bool operator==(const SplitAnalysis&, const SplitAnalysis&) = default;
};

/// Solves alpha + lin . d = 0 (mod p) over digit tuples in lex order and
/// classifies the solution set.
SplitAnalysis solve_split(std::uint32_t alpha, std::vector<std::uint32_t> lin, Prime p);

struct TreeNode {
  ResidueClass cls;
  NodeLabel label;
  std::vector<TreeNode> children;
  std::optional<SplitAnalysis> split;
};

struct ValuationTree {
  Polynomial f;
  Prime p;
  unsigned arity = 1;
  unsigned max_depth = 1;
  TreeNode root;
};

inline constexpr std::size_t kDefaultNodeBudget = 200'000;

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::size_t budget)
      : std::runtime_error("node budget of " + std::to_string(budget) + " exceeded"),
        budget_(budget) {}
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

/// The p^arity refinements of c at level m+1, ordered by the new digits.
std::vector<ResidueClass> child_classes(const ResidueClass& c, Prime p);

/// Valuation of f on an arity-1 class when it is the same for every member,
/// nullopt otherwise (including when f vanishes at a member).
std::optional<unsigned> constant_valuation(const Polynomial& f, const ResidueClass& c, Prime p);

/// Arity 2: Terminal(l-1) when f does not vanish mod p^l on c, Star
/// otherwise. Arity 1: Terminal(v) when nu_p(f) is constantly v on c, Star
/// otherwise. The level-0 class is always Star.
NodeLabel node_label(const Polynomial& f, const ResidueClass& c, Prime p);

/// Arity 1 rejects polynomials that mention y. Throws BudgetExceeded when
/// more than node_budget nodes would be created.
ValuationTree build_tree(const Polynomial& f, Prime p, unsigned arity, unsigned max_depth,
                         std::size_t node_budget = kDefaultNodeBudget);

/// Arity used when none is requested: 2 if f mentions y, else 1.
unsigned infer_arity(const Polynomial& f);

/// Split predicted from the linearization alpha + f_x i + f_y j (mod p).
/// Requires a star node at level >= 1.
SplitAnalysis classify_star(const Polynomial& f, Prime p, const TreeNode& node);

/// Split observed by evaluating f exactly on every child class. lin is
/// recovered by forward differences (f(b + p^k e_v) - f(b)) / p^k mod p.
SplitAnalysis brute_force_classify(const Polynomial& f, Prime p, const TreeNode& node);

/// Valuation behaviour of f on a node's class, as far as its subtree shows.
struct ClassValuation {
  enum class Kind { Constant, Varying, Undetermined };
  Kind kind = Kind::Undetermined;
  unsigned value = 0;  // meaningful for Constant

  friend bool operator==(const ClassValuation&, const ClassValuation&) = default;
};
ClassValuation class_valuation(const TreeNode& node);

struct ClosedFormReport {
  enum class Status { Closed, Unresolved };
  Status status = Status::Unresolved;
  unsigned depth = 0;
  /// Closed: classes partitioning the input space with their constant valuation.
  std::vector<std::pair<ResidueClass, unsigned>> table;
  /// Unresolved: classes of the frontier nodes.
  std::vector<ResidueClass> frontier;

  std::optional<unsigned> lookup(std::span<const Integer> point) const;
};

ClosedFormReport closed_form(const ValuationTree& t);

template <typename Visitor>
void for_each_node(const TreeNode& node, Visitor&& visit) {
  visit(node);
  for (const auto& child : node.children) for_each_node(child, visit);
}

}  // namespace valtree
