#include "valtree/tree.hpp"

#include <algorithm>

namespace valtree {
namespace {

using u64 = std::uint64_t;
__extension__ typedef unsigned __int128 u128;

constexpr u64 kWordModulusLimit = u64{1} << 62;

// Evaluates f at integer points modulo p^e for every e <= top. Uses 64-bit
// arithmetic when p^top fits in a word, exact GMP evaluation otherwise.
class ModularEvaluator {
 public:
  ModularEvaluator(const Polynomial& f, Prime p, unsigned top) : f_(f) {
    powers_.push_back(1);
    for (unsigned e = 1; e <= top; ++e) powers_.push_back(powers_.back() * p.value());
    if (powers_.back() >= kWordModulusLimit) return;

    modulus_ = powers_.back().get_ui();
    for (const auto& [e, c] : f.terms()) {
      terms_.push_back({e.x, e.y, mpz_fdiv_ui(c.get_mpz_t(), modulus_)});
      max_x_ = std::max(max_x_, e.x);
      max_y_ = std::max(max_y_, e.y);
    }
    word_path_ = true;
  }

  bool vanishes(const std::vector<Integer>& point, unsigned e) const {
    if (word_path_) return word_value(point) % powers_[e].get_ui() == 0;
    return mpz_divisible_p(exact_value(point).get_mpz_t(), powers_[e].get_mpz_t()) != 0;
  }

  // (f(point) / p^k) mod p, assuming p^k divides f(point).
  std::uint32_t digit(const std::vector<Integer>& point, unsigned k) const {
    if (word_path_) {
      const u64 r = word_value(point) % powers_[k + 1].get_ui();
      return static_cast<std::uint32_t>(r / powers_[k].get_ui());
    }
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), exact_value(point).get_mpz_t(), powers_[k + 1].get_mpz_t());
    mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), powers_[k].get_mpz_t());
    return static_cast<std::uint32_t>(r.get_ui());
  }

  std::uint32_t mod_p(const std::vector<Integer>& point) const { return digit(point, 0); }

 private:
  struct WordTerm {
    unsigned x, y;
    u64 c;
  };

  u64 mulmod(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % modulus_); }

  u64 word_value(const std::vector<Integer>& point) const {
    const u64 x = mpz_fdiv_ui(point[0].get_mpz_t(), modulus_);
    const u64 y = point.size() > 1 ? mpz_fdiv_ui(point[1].get_mpz_t(), modulus_) : 0;
    u64 xs[kMaxCachedPower + 1], ys[kMaxCachedPower + 1];
    if (max_x_ > kMaxCachedPower || max_y_ > kMaxCachedPower) return slow_word_value(x, y);
    xs[0] = ys[0] = 1 % modulus_;
    for (unsigned i = 1; i <= max_x_; ++i) xs[i] = mulmod(xs[i - 1], x);
    for (unsigned i = 1; i <= max_y_; ++i) ys[i] = mulmod(ys[i - 1], y);
    u64 sum = 0;
    for (const auto& t : terms_) sum = (sum + mulmod(t.c, mulmod(xs[t.x], ys[t.y]))) % modulus_;
    return sum;
  }

  u64 powmod(u64 b, unsigned e) const {
    u64 r = 1 % modulus_;
    for (; e != 0; e >>= 1, b = mulmod(b, b))
      if (e & 1u) r = mulmod(r, b);
    return r;
  }

  u64 slow_word_value(u64 x, u64 y) const {
    u64 sum = 0;
    for (const auto& t : terms_)
      sum = (sum + mulmod(t.c, mulmod(powmod(x, t.x), powmod(y, t.y)))) % modulus_;
    return sum;
  }

  Integer exact_value(const std::vector<Integer>& point) const {
    return evaluate(f_, point[0], point.size() > 1 ? point[1] : Integer(0));
  }

  static constexpr unsigned kMaxCachedPower = 32;

  const Polynomial& f_;
  std::vector<Integer> powers_;
  bool word_path_ = false;
  u64 modulus_ = 0;
  std::vector<WordTerm> terms_;
  unsigned max_x_ = 0, max_y_ = 0;
};

// Linearized split of star classes of f: alpha from f itself, lin from the
// formal partial derivatives.
class Linearizer {
 public:
  Linearizer(const Polynomial& f, Prime p, unsigned arity, unsigned top)
      : p_(p), value_(f, p, top) {
    gradient_.push_back(partial_derivative(f, Var::x));
    if (arity == 2) gradient_.push_back(partial_derivative(f, Var::y));
    for (const auto& g : gradient_) gradient_eval_.emplace_back(g, p, 1);
  }

  const ModularEvaluator& value() const { return value_; }

  SplitAnalysis classify(const ResidueClass& c) const {
    std::vector<std::uint32_t> lin;
    for (const auto& g : gradient_eval_) lin.push_back(g.mod_p(c.residues));
    return solve_split(value_.digit(c.residues, c.level), std::move(lin), p_);
  }

 private:
  Prime p_;
  ModularEvaluator value_;
  // Evaluators hold references, so the derivatives must not move after
  // gradient_eval_ is filled.
  std::vector<Polynomial> gradient_;
  std::vector<ModularEvaluator> gradient_eval_;
};

void for_each_digit_tuple(unsigned arity, std::uint32_t p, auto&& visit) {
  DigitTuple d(arity, 0);
  for (;;) {
    visit(d);
    unsigned v = arity;
    while (v > 0 && ++d[v - 1] == p) d[--v] = 0;
    if (v == 0) return;
  }
}

void require_star(const TreeNode& node, const char* who) {
  if (!is_star(node.label) || node.cls.level == 0)
    throw std::invalid_argument(std::string(who) + ": node " + to_string(node.cls) +
                                " is not a star node at level >= 1");
}

void require_arity(const Polynomial& f, unsigned arity) {
  if (arity != 1 && arity != 2) throw std::invalid_argument("arity must be 1 or 2");
  if (arity == 1 && f.depends_on(Var::y))
    throw std::invalid_argument("arity 1 requested but the polynomial depends on y");
}

class Builder {
 public:
  Builder(const Polynomial& f, Prime p, unsigned arity, unsigned max_depth, std::size_t budget)
      : f_(f), p_(p), arity_(arity), max_depth_(max_depth), budget_(budget),
        linearizer_(f, p, arity, max_depth) {}

  void expand(TreeNode& node) {
    auto classes = child_classes(node.cls, p_);
    node.children.reserve(classes.size());
    for (auto& c : classes) {
      if (++count_ > budget_) throw BudgetExceeded(budget_);
      NodeLabel label = Star{};
      if (arity_ == 1) {
        if (const auto v = constant_valuation(f_, c, p_)) label = Terminal{*v};
      } else if (!linearizer_.value().vanishes(c.residues, c.level)) {
        label = Terminal{c.level - 1};
      }
      if (is_star(label) && c.level == max_depth_) label = Frontier{};
      node.children.push_back(TreeNode{std::move(c), label, {}, std::nullopt});
    }
    for (auto& child : node.children) {
      if (!is_star(child.label)) continue;
      child.split = linearizer_.classify(child.cls);
      expand(child);
    }
  }

  void count_root() { ++count_; }

 private:
  const Polynomial& f_;
  Prime p_;
  unsigned arity_;
  unsigned max_depth_;
  std::size_t budget_;
  std::size_t count_ = 0;
  Linearizer linearizer_;
};

}  // namespace

ResidueClass ResidueClass::root(unsigned arity) {
  return ResidueClass{0, std::vector<Integer>(arity, Integer(0)), Integer(1)};
}

bool ResidueClass::contains(std::span<const Integer> point) const {
  if (point.size() != residues.size()) return false;
  for (std::size_t v = 0; v < point.size(); ++v)
    if (!mpz_congruent_p(point[v].get_mpz_t(), residues[v].get_mpz_t(), modulus.get_mpz_t()))
      return false;
  return true;
}

std::string to_string(const ResidueClass& c) {
  std::string out = "(";
  for (std::size_t v = 0; v < c.residues.size(); ++v) {
    if (v != 0) out += ", ";
    out += c.residues[v].get_str();
  }
  return out + " mod " + c.modulus.get_str() + ")";
}

std::string to_string(const NodeLabel& l) {
  if (const auto* t = std::get_if<Terminal>(&l)) return std::to_string(t->valuation);
  return is_star(l) ? "*" : "frontier";
}

const char* to_string(SplitKind k) {
  switch (k) {
    case SplitKind::AllStar: return "all_star";
    case SplitKind::AllTerminal: return "all_terminal";
    case SplitKind::ExactlyP: return "exactly_p";
  }
  return "?";
}

SplitAnalysis solve_split(std::uint32_t alpha, std::vector<std::uint32_t> lin, Prime p) {
  const std::uint32_t q = p.value();
  SplitAnalysis s;
  s.alpha = alpha % q;
  for (auto& a : lin) a %= q;
  s.lin = std::move(lin);
  for_each_digit_tuple(static_cast<unsigned>(s.lin.size()), q, [&](const DigitTuple& d) {
    std::uint64_t acc = s.alpha;
    for (std::size_t v = 0; v < d.size(); ++v) acc += std::uint64_t{s.lin[v]} * d[v];
    if (acc % q == 0) s.star_digits.push_back(d);
  });
  const bool flat = std::all_of(s.lin.begin(), s.lin.end(), [](std::uint32_t a) { return a == 0; });
  s.kind = !flat ? SplitKind::ExactlyP : s.alpha == 0 ? SplitKind::AllStar : SplitKind::AllTerminal;
  return s;
}

std::vector<ResidueClass> child_classes(const ResidueClass& c, Prime p) {
  std::vector<ResidueClass> out;
  const Integer step = c.modulus;
  const Integer modulus = c.modulus * p.value();
  for_each_digit_tuple(c.arity(), p.value(), [&](const DigitTuple& d) {
    ResidueClass child{c.level + 1, c.residues, modulus};
    for (std::size_t v = 0; v < d.size(); ++v) child.residues[v] += step * d[v];
    out.push_back(std::move(child));
  });
  return out;
}

std::optional<unsigned> constant_valuation(const Polynomial& f, const ResidueClass& c, Prime p) {
  if (c.arity() != 1) throw std::invalid_argument("constant_valuation: arity-1 class expected");
  const std::uint32_t q = p.value();
  const unsigned degree = f.degree_in(Var::x);
  std::uint64_t period = 1;
  while (period <= degree) period *= q;

  // g(i) = f(r + p^m i). nu_p(g) is constant v exactly when every forward
  // difference of g at 0 is divisible by p^v and g / p^v has no zero mod p
  // over one period of its binomial expansion.
  std::vector<Integer> g;
  for (std::uint64_t i = 0; i < std::max<std::uint64_t>(period, degree + 1); ++i)
    g.push_back(evaluate(f, c.residues[0] + c.modulus * static_cast<unsigned long>(i)));
  const Valuation v = valuation(g[0], p);
  if (!v.is_finite()) return std::nullopt;

  Integer pv;
  mpz_ui_pow_ui(pv.get_mpz_t(), q, v.value());
  std::vector<Integer> diff(g.begin(), g.begin() + degree + 1);
  for (unsigned t = 0; t <= degree; ++t) {
    if (!mpz_divisible_p(diff[0].get_mpz_t(), pv.get_mpz_t())) return std::nullopt;
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
    diff.pop_back();
  }
  for (std::uint64_t i = 0; i < period; ++i)
    if (valuation(g[i], p) != v) return std::nullopt;
  return v.value();
}

NodeLabel node_label(const Polynomial& f, const ResidueClass& c, Prime p) {
  if (c.level == 0) return Star{};
  if (c.arity() == 1) {
    if (const auto v = constant_valuation(f, c, p)) return Terminal{*v};
    return Star{};
  }
  const ModularEvaluator value(f, p, c.level);
  if (value.vanishes(c.residues, c.level)) return Star{};
  return Terminal{c.level - 1};
}

unsigned infer_arity(const Polynomial& f) { return f.depends_on(Var::y) ? 2 : 1; }

ValuationTree build_tree(const Polynomial& f, Prime p, unsigned arity, unsigned max_depth,
                         std::size_t node_budget) {
  require_arity(f, arity);
  if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");

  ValuationTree t{f, p, arity, max_depth, TreeNode{ResidueClass::root(arity), Star{}, {}, std::nullopt}};
  Builder builder(t.f, p, arity, max_depth, node_budget);
  builder.count_root();
  builder.expand(t.root);
  return t;
}

SplitAnalysis classify_star(const Polynomial& f, Prime p, const TreeNode& node) {
  require_star(node, "classify_star");
  const Linearizer linearizer(f, p, node.cls.arity(), node.cls.level + 1);
  return linearizer.classify(node.cls);
}

SplitAnalysis brute_force_classify(const Polynomial& f, Prime p, const TreeNode& node) {
  require_star(node, "brute_force_classify");
  const auto& base = node.cls.residues;
  const unsigned arity = node.cls.arity();
  const Integer& step = node.cls.modulus;  // p^k
  const Integer next = step * p.value();   // p^(k+1)

  auto f_at = [&](const std::vector<Integer>& pt) {
    return evaluate(f, pt[0], arity > 1 ? pt[1] : Integer(0));
  };
  auto quotient_mod_p = [&](Integer numerator) {
    mpz_divexact(numerator.get_mpz_t(), numerator.get_mpz_t(), step.get_mpz_t());
    return static_cast<std::uint32_t>(mpz_fdiv_ui(numerator.get_mpz_t(), p.value()));
  };

  const Integer f_base = f_at(base);
  SplitAnalysis s;
  s.alpha = quotient_mod_p(f_base);
  for (unsigned v = 0; v < arity; ++v) {
    std::vector<Integer> shifted = base;
    shifted[v] += step;
    s.lin.push_back(quotient_mod_p(f_at(shifted) - f_base));
  }

  std::size_t children = 0;
  for_each_digit_tuple(arity, p.value(), [&](const DigitTuple& d) {
    std::vector<Integer> pt = base;
    for (unsigned v = 0; v < arity; ++v) pt[v] += step * d[v];
    ++children;
    if (mpz_divisible_p(f_at(pt).get_mpz_t(), next.get_mpz_t())) s.star_digits.push_back(d);
  });
  s.kind = s.star_digits.empty()               ? SplitKind::AllTerminal
           : s.star_digits.size() == children ? SplitKind::AllStar
                                              : SplitKind::ExactlyP;
  return s;
}

ClassValuation class_valuation(const TreeNode& node) {
  using Kind = ClassValuation::Kind;
  if (const auto* t = std::get_if<Terminal>(&node.label)) return {Kind::Constant, t->valuation};
  if (node.children.empty()) return {Kind::Undetermined, 0};

  std::optional<unsigned> constant;
  bool undetermined = false;
  for (const auto& child : node.children) {
    const ClassValuation cv = class_valuation(child);
    if (cv.kind == Kind::Varying) return cv;
    if (cv.kind == Kind::Undetermined) {
      undetermined = true;
    } else if (!constant) {
      constant = cv.value;
    } else if (*constant != cv.value) {
      return {Kind::Varying, 0};
    }
  }
  if (undetermined) return {Kind::Undetermined, 0};
  return {Kind::Constant, *constant};
}

}  // namespace valtree
