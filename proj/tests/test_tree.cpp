#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "valtree/tree.hpp"
#include "valtree/verify.hpp"

using namespace valtree;

namespace {

const char* const kFigure2 = "x^2 + y^2 + x*y + x + y + 1";

ResidueClass cls(unsigned level, std::vector<Integer> residues, unsigned long p) {
  Integer modulus;
  mpz_ui_pow_ui(modulus.get_mpz_t(), p, level);
  return ResidueClass{level, std::move(residues), modulus};
}

TreeNode star_node(ResidueClass c) { return TreeNode{std::move(c), Star{}, {}, std::nullopt}; }

unsigned long pow_ul(unsigned long b, unsigned e) {
  unsigned long r = 1;
  while (e--) r *= b;
  return r;
}

// Valuation by repeated division; nullopt for zero.
std::optional<unsigned> nu(Integer n, unsigned long p) {
  if (n == 0) return std::nullopt;
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

Polynomial random_univariate(std::mt19937_64& rng, unsigned degree, long bound) {
  std::uniform_int_distribution<long> coeff(-bound, bound);
  Polynomial f;
  while (f.is_zero() || f.degree_in(Var::x) != degree) {
    f = Polynomial();
    for (unsigned e = 0; e <= degree; ++e) f += Polynomial::monomial(Integer(coeff(rng)), {e, 0});
  }
  return f;
}

std::vector<Integer> random_member(const ResidueClass& c, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned long> t(0, 1'000'000);
  std::vector<Integer> point;
  for (const auto& r : c.residues) point.push_back(r + c.modulus * t(rng));
  return point;
}

Integer eval_at(const Polynomial& f, const std::vector<Integer>& pt) {
  return evaluate(f, pt[0], pt.size() > 1 ? pt[1] : Integer(0));
}

std::vector<const TreeNode*> nodes_at(const TreeNode& root, unsigned level) {
  std::vector<const TreeNode*> out;
  for_each_node(root, [&](const TreeNode& n) {
    if (n.cls.level == level) out.push_back(&n);
  });
  return out;
}

std::size_t count_frontier(const TreeNode& root) {
  std::size_t n = 0;
  for_each_node(root, [&](const TreeNode& x) { n += is_frontier(x.label); });
  return n;
}

// Label and star correctness, partition and child order for every node.
void check_tree_against_members(const ValuationTree& t, std::mt19937_64& rng) {
  const unsigned long p = t.p.value();
  for_each_node(t.root, [&](const TreeNode& n) {
    CAPTURE(to_string(n.cls));
    for (int s = 0; s < 50; ++s) {
      const auto v = nu(eval_at(t.f, random_member(n.cls, rng)), p);
      if (const auto* term = std::get_if<Terminal>(&n.label)) {
        REQUIRE(v.has_value());
        CHECK(*v == term->valuation);
      } else if (v) {
        CHECK(*v >= n.cls.level);
      }
    }
    if (n.children.empty()) return;
    CHECK(n.children.size() == pow_ul(p, t.arity));
    std::set<std::vector<unsigned long>> seen;
    std::vector<unsigned long> previous;
    for (const auto& c : n.children) {
      CHECK(c.cls.level == n.cls.level + 1);
      CHECK(c.cls.modulus == n.cls.modulus * p);
      std::vector<unsigned long> digits;
      for (std::size_t v = 0; v < c.cls.residues.size(); ++v) {
        CHECK(c.cls.residues[v] >= 0);
        CHECK(c.cls.residues[v] < c.cls.modulus);
        CHECK(mpz_congruent_p(c.cls.residues[v].get_mpz_t(), n.cls.residues[v].get_mpz_t(),
                              n.cls.modulus.get_mpz_t()));
        digits.push_back(Integer((c.cls.residues[v] - n.cls.residues[v]) / n.cls.modulus).get_ui());
      }
      CHECK((previous.empty() || previous < digits));
      previous = digits;
      seen.insert(digits);
    }
    CHECK(seen.size() == n.children.size());
  });
}

}  // namespace

TEST_CASE("child classes") {
  const Prime two(2), three(3);
  CHECK(child_classes(cls(1, {1}, 2), two) ==
        std::vector<ResidueClass>{cls(2, {1}, 2), cls(2, {3}, 2)});
  CHECK(child_classes(cls(1, {1, 1}, 2), two) ==
        std::vector<ResidueClass>{cls(2, {1, 1}, 2), cls(2, {1, 3}, 2), cls(2, {3, 1}, 2),
                                  cls(2, {3, 3}, 2)});
  const auto level1 = child_classes(ResidueClass::root(2), three);
  REQUIRE(level1.size() == 9);
  for (unsigned i = 0; i < 3; ++i)
    for (unsigned j = 0; j < 3; ++j) CHECK(level1[3 * i + j] == cls(1, {i, j}, 3));
}

TEST_CASE("residue class rendering and membership") {
  CHECK(to_string(cls(2, {1, 3}, 2)) == "(1, 3 mod 4)");
  CHECK(to_string(ResidueClass::root(1)) == "(0 mod 1)");
  const std::vector<Integer> in{9, -1}, out{9, 0};
  CHECK(cls(2, {1, 3}, 2).contains(in));
  CHECK_FALSE(cls(2, {1, 3}, 2).contains(out));
}

TEST_CASE("node labels") {
  const Prime two(2);
  CHECK(node_label(parse("x^2 + 5"), cls(1, {0}, 2), two) == NodeLabel{Terminal{0}});
  CHECK(node_label(parse("x^2 + 5"), cls(1, {1}, 2), two) == NodeLabel{Terminal{1}});
  CHECK(node_label(parse(kFigure2), cls(1, {1, 1}, 2), two) == NodeLabel{Star{}});
  CHECK(node_label(parse(kFigure2), cls(2, {1, 3}, 2), two) == NodeLabel{Terminal{1}});
  CHECK(node_label(parse("x^2 + 7"), cls(3, {7}, 2), two) == NodeLabel{Terminal{3}});
  CHECK(node_label(parse("x^2 + 7"), cls(3, {3}, 2), two) == NodeLabel{Star{}});
}

TEST_CASE("constant valuation on univariate classes") {
  const Prime two(2), three(3);
  CHECK(constant_valuation(parse("x^2 + x + 1"), ResidueClass::root(1), two) == 0u);
  CHECK(constant_valuation(parse("x^2 + 7"), cls(3, {7}, 2), two) == 3u);
  CHECK_FALSE(constant_valuation(parse("x^2 + 7"), cls(2, {1}, 2), two).has_value());
  CHECK_FALSE(constant_valuation(parse("x"), cls(1, {0}, 3), three).has_value());
  CHECK(constant_valuation(parse("9"), cls(4, {5}, 3), three) == 2u);
  CHECK_FALSE(constant_valuation(Polynomial(), ResidueClass::root(1), two).has_value());
  // x^3 - x vanishes at 0, 1 and -1 mod 3 but its valuation is not constant.
  CHECK_FALSE(constant_valuation(parse("x^3 - x"), ResidueClass::root(1), three).has_value());
  CHECK_THROWS_AS(constant_valuation(parse("x"), cls(1, {0, 0}, 2), two), std::invalid_argument);
}

TEST_CASE("property: constant valuation agrees with exhaustive members") {
  std::mt19937_64 rng(21);
  for (unsigned long p : {2ul, 3ul, 5ul}) {
    for (int trial = 0; trial < 60; ++trial) {
      const Polynomial f = random_univariate(rng, 1 + trial % 4, 20);
      for (unsigned level = 0; level <= 3; ++level) {
        const unsigned long residue = rng() % pow_ul(p, level);
        const ResidueClass c = cls(level, {residue}, p);
        const auto v0 = nu(evaluate(f, c.residues[0]), p);
        if (!v0 || pow_ul(p, *v0 + 1) > 200'000) continue;
        // Whether nu_p(f) = v0 at a member depends only on f mod p^(v0+1), which repeats
        // with period p^(v0+1) in i.
        bool constant = true;
        for (unsigned long i = 0; i < pow_ul(p, *v0 + 1) && constant; ++i)
          constant = nu(evaluate(f, c.residues[0] + c.modulus * i), p) == v0;
        CAPTURE(render(f));
        CAPTURE(to_string(c));
        CHECK(constant_valuation(f, c, Prime(p)) == (constant ? v0 : std::nullopt));
      }
    }
  }
}

TEST_CASE("figure 1 tree") {
  const ValuationTree t = build_tree(parse("x^2 + 5"), Prime(2), 1, 4);
  CHECK(is_star(t.root.label));
  REQUIRE(t.root.children.size() == 2);
  CHECK(t.root.children[0].label == NodeLabel{Terminal{0}});
  CHECK(t.root.children[1].label == NodeLabel{Terminal{1}});
  CHECK(t.root.children[0].children.empty());
  CHECK(t.root.children[1].children.empty());
  CHECK(count_frontier(t.root) == 0);
}

TEST_CASE("figure 2 tree") {
  const ValuationTree t = build_tree(parse(kFigure2), Prime(2), 2, 4);
  const auto level1 = nodes_at(t.root, 1);
  REQUIRE(level1.size() == 4);
  for (int i = 0; i < 3; ++i) CHECK(level1[i]->label == NodeLabel{Terminal{0}});
  CHECK(is_star(level1[3]->label));
  CHECK(level1[3]->cls == cls(1, {1, 1}, 2));
  const auto level2 = nodes_at(t.root, 2);
  REQUIRE(level2.size() == 4);
  for (const auto* n : level2) CHECK(n->label == NodeLabel{Terminal{1}});
  CHECK(nodes_at(t.root, 3).empty());
}

TEST_CASE("x^2 + 7 splits into one terminal and one non-terminal class") {
  const ValuationTree t = build_tree(parse("x^2 + 7"), Prime(2), 1, 6);
  for_each_node(t.root, [&](const TreeNode& n) {
    if (n.cls.level < 2 || !is_star(n.label)) return;
    REQUIRE(n.children.size() == 2);
    const unsigned k = n.cls.level + 1;
    const int terminal = (n.children[0].label == NodeLabel{Terminal{k}}) +
                         (n.children[1].label == NodeLabel{Terminal{k}});
    const int open = !is_terminal(n.children[0].label) + !is_terminal(n.children[1].label);
    CHECK(terminal == 1);
    CHECK(open == 1);
  });
  CHECK(count_frontier(t.root) == 2);
  CHECK(check_one_terminal_splitting(build_tree(parse("x^2 + 7"), Prime(2), 1, 20)).ok());
}

TEST_CASE("build_tree arguments and budget") {
  CHECK_THROWS_AS(build_tree(parse("x*y"), Prime(2), 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_tree(parse("x"), Prime(2), 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_tree(parse("x"), Prime(2), 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_tree(parse("x^2 + y^2"), Prime(5), 2, 6), BudgetExceeded);
  try {
    build_tree(parse("x^2 + y^2"), Prime(5), 2, 6, 1000);
  } catch (const BudgetExceeded& e) {
    CHECK(e.budget() == 1000);
  }
  CHECK(infer_arity(parse("x^2 + 5")) == 1);
  CHECK(infer_arity(parse("x + y")) == 2);
}

TEST_CASE("zero polynomial gives an all-frontier tree") {
  const ValuationTree t = build_tree(Polynomial(), Prime(3), 2, 2);
  std::size_t leaves = 0;
  for_each_node(t.root, [&](const TreeNode& n) {
    CHECK_FALSE(is_terminal(n.label));
    if (n.children.empty()) {
      CHECK(is_frontier(n.label));
      CHECK(n.cls.level == 2);
      ++leaves;
    }
  });
  CHECK(leaves == 81);
  CHECK(closed_form(t).status == ClosedFormReport::Status::Unresolved);
}

TEST_CASE("classify_star examples") {
  const Prime three(3), five(5), two(2);
  const TreeNode a = star_node(cls(1, {1, 2}, 3));
  const SplitAnalysis sa = classify_star(parse("x*y + 1"), three, a);
  CHECK(sa.alpha == 1);
  CHECK(sa.lin == std::vector<std::uint32_t>{2, 1});
  CHECK(sa.kind == SplitKind::ExactlyP);
  CHECK(sa.star_digits == std::vector<DigitTuple>{{0, 2}, {1, 0}, {2, 1}});
  CHECK(brute_force_classify(parse("x*y + 1"), three, a) == sa);

  const TreeNode b = star_node(cls(1, {0, 0}, 3));
  CHECK(classify_star(parse("x^2 + y^2 + 3"), three, b).kind == SplitKind::AllTerminal);
  CHECK(brute_force_classify(parse("x^2 + y^2 + 3"), three, b).kind == SplitKind::AllTerminal);

  const TreeNode c = star_node(cls(1, {0, 0}, 5));
  const SplitAnalysis sc = classify_star(parse("x^2 + y^2"), five, c);
  CHECK(sc.kind == SplitKind::AllStar);
  CHECK(sc.star_digits.size() == 25);
  CHECK(brute_force_classify(parse("x^2 + y^2"), five, c) == sc);

  const TreeNode d = star_node(cls(1, {1, 1}, 2));
  CHECK(brute_force_classify(parse(kFigure2), two, d).kind == SplitKind::AllTerminal);
}

TEST_CASE("classifiers require a star node at level >= 1") {
  const Prime two(2);
  const ValuationTree t = build_tree(parse("x^2 + 5"), two, 1, 4);
  CHECK(nodes_at(t.root, 1).size() == 2);
  for (const auto* n : nodes_at(t.root, 1)) {
    CHECK_THROWS_AS(brute_force_classify(t.f, two, *n), std::invalid_argument);
    CHECK_THROWS_AS(classify_star(t.f, two, *n), std::invalid_argument);
  }
  CHECK_THROWS_AS(brute_force_classify(t.f, two, t.root), std::invalid_argument);
}

TEST_CASE("solve_split cases") {
  const Prime seven(7);
  CHECK(solve_split(0, {0, 0}, seven).kind == SplitKind::AllStar);
  CHECK(solve_split(3, {0, 0}, seven).star_digits.empty());
  const SplitAnalysis s = solve_split(3, {0, 5}, seven);
  CHECK(s.kind == SplitKind::ExactlyP);
  CHECK(s.star_digits.size() == 7);
  for (const auto& d : s.star_digits) CHECK(d[1] == 5);  // 3 + 5*5 = 28
  CHECK(solve_split(4, {3}, seven).star_digits == std::vector<DigitTuple>{{1}});
}

TEST_CASE("closed forms") {
  const ClosedFormReport one = closed_form(build_tree(parse("x^2 + 5"), Prime(2), 1, 4));
  REQUIRE(one.status == ClosedFormReport::Status::Closed);
  CHECK(one.table == std::vector<std::pair<ResidueClass, unsigned>>{{cls(1, {0}, 2), 0}, {cls(1, {1}, 2), 1}});

  const ClosedFormReport two = closed_form(build_tree(parse(kFigure2), Prime(2), 2, 4));
  REQUIRE(two.status == ClosedFormReport::Status::Closed);
  for (long x = 0; x < 6; ++x)
    for (long y = 0; y < 6; ++y) {
      const std::vector<Integer> pt{x, y};
      CHECK(two.lookup(pt) == ((x % 2 && y % 2) ? 1u : 0u));
    }

  const ClosedFormReport seven = closed_form(build_tree(parse("x^2 + 7"), Prime(2), 1, 6));
  CHECK(seven.status == ClosedFormReport::Status::Unresolved);
  CHECK(seven.depth == 6);
  CHECK_FALSE(seven.frontier.empty());

  const ClosedFormReport constant = closed_form(build_tree(parse("x^2 + x + 1"), Prime(2), 1, 3));
  REQUIRE(constant.status == ClosedFormReport::Status::Closed);
  CHECK(constant.table == std::vector<std::pair<ResidueClass, unsigned>>{{ResidueClass::root(1), 0}});
}

TEST_CASE("property: labels, stars and partitions on random trees") {
  std::mt19937_64 rng(31);
  for (unsigned long q : {2ul, 3ul, 5ul}) {
    const Prime p(q);
    for (int trial = 0; trial < 15; ++trial) {
      const ValuationTree t1 = build_tree(random_univariate(rng, 1 + trial % 4, 50), p, 1, 5);
      check_tree_against_members(t1, rng);
      try {
        const ValuationTree t2 = build_tree(random_polynomial(2 + trial % 2, p, rng), p, 2, 3, 5000);
        check_tree_against_members(t2, rng);
      } catch (const BudgetExceeded&) {
      }
    }
  }
}

TEST_CASE("property: trichotomy on random trees of both arities") {
  std::mt19937_64 rng(41);
  std::size_t univariate_stars = 0, bivariate_stars = 0;
  for (unsigned long q : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
    const Prime p(q);
    for (int trial = 0; trial < 20; ++trial) {
      const ValuationTree t1 = build_tree(random_univariate(rng, 1 + trial % 3, 200), p, 1, 6);
      const TrichotomyCheck c1 = check_trichotomy(t1);
      CHECK(c1.ok());
      for (const auto& f : c1.failures) MESSAGE(f);
      univariate_stars += c1.star_nodes;
      try {
        const ValuationTree t2 = build_tree(random_polynomial(1 + trial % 3, p, rng), p, 2, 4, 50'000);
        const TrichotomyCheck c2 = check_trichotomy(t2);
        CHECK(c2.ok());
        for (const auto& f : c2.failures) MESSAGE(f);
        bivariate_stars += c2.star_nodes;
      } catch (const BudgetExceeded&) {
      }
    }
  }
  CHECK(univariate_stars > 50);
  CHECK(bivariate_stars > 500);
}

TEST_CASE("property: degree-2 gradient matches the explicit coefficients at star nodes") {
  std::mt19937_64 rng(51);
  std::size_t checked = 0;
  for (unsigned long q : {2ul, 3ul, 5ul, 7ul}) {
    const Prime p(q);
    for (int trial = 0; trial < 30; ++trial) {
      const Polynomial f = random_polynomial(2, p, rng);
      auto a = [&](unsigned l, unsigned m) { return f.coefficient({l, m}); };
      std::optional<ValuationTree> t;
      try {
        t = build_tree(f, p, 2, 4, 20'000);
      } catch (const BudgetExceeded&) {
        continue;
      }
      for_each_node(t->root, [&](const TreeNode& n) {
        if (!n.split) return;
        const Integer& i0 = n.cls.residues[0];
        const Integer& j0 = n.cls.residues[1];
        const Integer ex = 2 * a(2, 0) * i0 + a(1, 1) * j0 + a(1, 0);
        const Integer ey = 2 * a(0, 2) * j0 + a(1, 1) * i0 + a(0, 1);
        CHECK(n.split->lin[0] == mpz_fdiv_ui(ex.get_mpz_t(), q));
        CHECK(n.split->lin[1] == mpz_fdiv_ui(ey.get_mpz_t(), q));
        ++checked;
      });
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("property: closed-form tables are sound") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<long> coord(-1'000'000'000L, 1'000'000'000L);
  std::size_t closed = 0;
  for (unsigned long q : {2ul, 3ul, 5ul}) {
    const Prime p(q);
    for (int trial = 0; trial < 30; ++trial) {
      const bool bivariate = trial % 2;
      std::optional<ValuationTree> t;
      try {
        t = bivariate ? build_tree(random_polynomial(2, p, rng), p, 2, 5, 20'000)
                      : build_tree(random_univariate(rng, 2, 30), p, 1, 8);
      } catch (const BudgetExceeded&) {
        continue;
      }
      const ClosedFormReport r = closed_form(*t);
      if (r.status != ClosedFormReport::Status::Closed) {
        CHECK(count_frontier(t->root) > 0);
        continue;
      }
      ++closed;
      for (int s = 0; s < 1000; ++s) {
        std::vector<Integer> pt{coord(rng)};
        if (bivariate) pt.push_back(coord(rng));
        const auto v = nu(eval_at(t->f, pt), q);
        REQUIRE(v.has_value());
        CHECK(r.lookup(pt) == *v);
      }
    }
  }
  CHECK(closed > 10);
}
