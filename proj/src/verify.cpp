#include "valtree/verify.hpp"

#include <algorithm>
#include <sstream>

#include "valtree/render.hpp"

namespace valtree {
namespace {

std::string describe(const SplitAnalysis& s) {
  std::ostringstream out;
  out << "alpha=" << s.alpha << " lin=[";
  for (std::size_t v = 0; v < s.lin.size(); ++v) out << (v ? "," : "") << s.lin[v];
  out << "] " << to_string(s.kind) << " stars=" << s.star_digits.size();
  return out.str();
}

bool allowed_star_count(std::size_t count, std::uint32_t p, unsigned arity) {
  if (arity == 1) return count == 0 || count == 1 || count == p;
  return count == 0 || count == p || count == std::size_t{p} * p;
}

// Star digits as observed from the children actually built: every child
// except those with valuation exactly k, the parent's level.
std::vector<DigitTuple> observed_star_digits(const TreeNode& node, std::uint32_t p) {
  std::vector<DigitTuple> out;
  for (const auto& child : node.children) {
    if (child.label == NodeLabel{Terminal{node.cls.level}}) continue;
    DigitTuple d;
    for (std::size_t v = 0; v < child.cls.residues.size(); ++v) {
      Integer digit = (child.cls.residues[v] - node.cls.residues[v]) / node.cls.modulus;
      d.push_back(static_cast<std::uint32_t>(mpz_fdiv_ui(digit.get_mpz_t(), p)));
    }
    out.push_back(std::move(d));
  }
  return out;
}

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

VerifyOutcome make_outcome(std::size_t passed, std::size_t total, const std::string& what,
                           const std::vector<std::string>& failures) {
  VerifyOutcome o;
  o.ok = passed == total && failures.empty();
  o.summary = std::string(o.ok ? "OK: " : "FAIL: ") + std::to_string(passed) + "/" +
              std::to_string(total) + " " + what;
  for (const auto& f : failures) o.details += f + "\n";
  return o;
}

}  // namespace

Polynomial random_polynomial(unsigned degree, Prime p, std::mt19937_64& rng) {
  const long bound = static_cast<long>(p.value()) * p.value();
  std::uniform_int_distribution<long> coefficient(-bound, bound);
  for (;;) {
    Polynomial f;
    bool top_present = false, unit_present = false;
    for (unsigned total = 0; total <= degree; ++total)
      for (unsigned lx = 0; lx <= total; ++lx) {
        const long c = coefficient(rng);
        if (c == 0) continue;
        f += Polynomial::monomial(Integer(c), {lx, total - lx});
        top_present = top_present || total == degree;
        unit_present = unit_present || c % static_cast<long>(p.value()) != 0;
      }
    if (top_present && unit_present) return f;
  }
}

TrichotomyCheck check_trichotomy(const ValuationTree& t, std::size_t limit) {
  TrichotomyCheck check;
  const std::uint32_t p = t.p.value();
  auto fail = [&](const TreeNode& n, const std::string& what) {
    if (check.failures.size() < 10)
      check.failures.push_back(render(t.f) + " p=" + std::to_string(p) + " at " + to_string(n.cls) +
                               ": " + what);
  };

  for_each_node(t.root, [&](const TreeNode& n) {
    if (!is_star(n.label) || n.cls.level == 0 || check.star_nodes >= limit) return;
    ++check.star_nodes;
    const SplitAnalysis predicted = classify_star(t.f, t.p, n);
    const SplitAnalysis observed = brute_force_classify(t.f, t.p, n);
    if (!n.split || *n.split != predicted) return fail(n, "stored split differs from classify_star");
    if (predicted != observed)
      return fail(n, "linearized " + describe(predicted) + " vs brute force " + describe(observed));
    if (observed_star_digits(n, p) != predicted.star_digits)
      return fail(n, "child labels disagree with star digits");
    if (!allowed_star_count(predicted.star_digits.size(), p, t.arity))
      return fail(n, "star-child count " + std::to_string(predicted.star_digits.size()) +
                         " outside the trichotomy");
    ++check.matched;
  });
  return check;
}

SplittingCheck check_one_terminal_splitting(const ValuationTree& t) {
  SplittingCheck check;
  const Prime two(2);
  for_each_node(t.root, [&](const TreeNode& n) {
    const unsigned m = n.cls.level;
    if (m < 2 || !is_star(n.label)) return;
    const unsigned k = m + 1;
    ++check.checked;
    const std::string where = to_string(n.cls) + " (level " + std::to_string(k) + ")";
    if (n.children.size() != 2) {
      check.failures.push_back(where + ": " + std::to_string(n.children.size()) + " children");
      return;
    }
    std::size_t terminal_k = 0, deep = 0;
    for (const auto& c : n.children) {
      if (c.label == NodeLabel{Terminal{k}}) {
        ++terminal_k;
        continue;
      }
      if (is_terminal(c.label)) continue;
      // Both lifts of c modulo 2^(k+1) must be divisible by 2^(k+1).
      bool vanishes = true;
      for (const Integer& x : {c.cls.residues[0], Integer(c.cls.residues[0] + c.cls.modulus)})
        vanishes = vanishes && valuation(evaluate(t.f, x), two) >= Valuation::finite(k + 1);
      if (vanishes) ++deep;
    }
    if (terminal_k != 1 || deep != 1)
      check.failures.push_back(where + ": expected one terminal child with valuation " +
                               std::to_string(k) + " and one non-terminal with valuation >= " +
                               std::to_string(k + 1));
  });
  return check;
}

VerifyOutcome verify_trichotomy(unsigned degree, Prime p, std::size_t star_samples, std::uint64_t seed,
                                unsigned depth, std::size_t node_budget) {
  std::mt19937_64 rng(seed);
  std::size_t checked = 0, matched = 0, polynomials = 0, skipped = 0;
  std::vector<std::string> failures;
  constexpr std::size_t kMaxPolynomials = 1'000'000;
  while (checked < star_samples && polynomials < kMaxPolynomials) {
    const Polynomial f = random_polynomial(degree, p, rng);
    ++polynomials;
    try {
      const ValuationTree t = build_tree(f, p, 2, depth, node_budget);
      const TrichotomyCheck c = check_trichotomy(t, star_samples - checked);
      checked += c.star_nodes;
      matched += c.matched;
      failures.insert(failures.end(), c.failures.begin(), c.failures.end());
    } catch (const BudgetExceeded&) {
      ++skipped;
    }
  }
  VerifyOutcome o = make_outcome(matched, checked, "star nodes matched oracle", failures);
  if (skipped)
    o.details += std::to_string(skipped) + " polynomial(s) skipped: node budget exceeded\n";
  return o;
}

VerifyOutcome verify_gradient_coefficients(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  static const Prime primes[] = {Prime(2), Prime(3), Prime(5), Prime(7), Prime(11), Prime(13)};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(primes) - 1);
  std::uniform_int_distribution<long> point(-1'000'000, 1'000'000);
  std::size_t passed = 0;
  std::vector<std::string> failures;
  for (std::size_t s = 0; s < samples; ++s) {
    const Prime p = primes[pick(rng)];
    const std::uint32_t q = p.value();
    const Polynomial f = random_polynomial(2, p, rng);
    const Integer b = point(rng), c = point(rng);
    auto a = [&](unsigned l, unsigned m) { return f.coefficient({l, m}); };
    auto mod = [&](const Integer& v) { return mpz_fdiv_ui(v.get_mpz_t(), q); };
    const Integer i0 = mod(b), j0 = mod(c);

    const auto lin_x = mod(evaluate(partial_derivative(f, Var::x), b, c));
    const auto lin_y = mod(evaluate(partial_derivative(f, Var::y), b, c));
    const auto explicit_x = mod(Integer(2 * a(2, 0) * i0 + a(1, 1) * j0 + a(1, 0)));
    const auto explicit_y = mod(Integer(2 * a(0, 2) * j0 + a(1, 1) * i0 + a(0, 1)));
    if (lin_x == explicit_x && lin_y == explicit_y)
      ++passed;
    else if (failures.size() < 10)
      failures.push_back(render(f) + " p=" + std::to_string(q) + " at (" + b.get_str() + ", " +
                         c.get_str() + ")");
  }
  return make_outcome(passed, samples, "gradient coefficients matched the degree-2 expansion",
                      failures);
}

VerifyOutcome verify_legendre(std::uint64_t n_max) {
  std::size_t passed = 0, total = 0;
  std::vector<std::string> failures;
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u}) {
    const Prime p(q);
    Integer factorial = 1;
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      if (n > 0) factorial *= static_cast<unsigned long>(n);
      ++total;
      try {
        if (factorial_valuation(n, p) == valuation(factorial, p).value())
          ++passed;
        else if (failures.size() < 10)
          failures.push_back("n=" + std::to_string(n) + " p=" + std::to_string(q));
      } catch (const std::logic_error& e) {
        if (failures.size() < 10) failures.push_back(e.what());
      }
    }
  }
  return make_outcome(passed, total, "factorial valuations agreed (floor sum, digit sum, exact)",
                      failures);
}

VerifyOutcome verify_central_binomial(std::uint64_t n_max) {
  const Prime two(2);
  std::size_t passed = 0, total = 0;
  std::vector<std::string> failures;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    Integer binom;
    mpz_bin_uiui(binom.get_mpz_t(), 2 * n, n);
    const unsigned v = valuation(binom, two).value();
    bool ok = central_binomial_valuation(n) == v;
    if (n >= 1) ok = ok && v >= 1 && ((v == 1) == is_power_of_two(n));
    ++total;
    if (ok)
      ++passed;
    else if (failures.size() < 10)
      failures.push_back("n=" + std::to_string(n));
  }
  return make_outcome(passed, total, "central binomial coefficients matched s_2(n)", failures);
}

VerifyOutcome verify_stirling_closed_forms(unsigned n_max) {
  const Prime two(2);
  std::size_t passed = 0, total = 0;
  std::vector<std::string> failures;
  for (unsigned k = 1; k <= 4; ++k) {
    const auto column = stirling_column(k, n_max);
    for (unsigned n = k; n <= n_max; ++n) {
      ++total;
      if (valuation(column[n], two).value() == stirling_valuation_closed(n, k))
        ++passed;
      else if (failures.size() < 10)
        failures.push_back("S(" + std::to_string(n) + "," + std::to_string(k) + ")");
    }
  }
  return make_outcome(passed, total, "Stirling valuations matched the closed forms", failures);
}

VerifyOutcome verify_n2_plus_7(unsigned depth) {
  const ValuationTree t = build_tree(parse("x^2 + 7"), Prime(2), 1, depth);
  const SplittingCheck c = check_one_terminal_splitting(t);
  VerifyOutcome o = make_outcome(c.checked - std::min(c.checked, c.failures.size()), c.checked,
                                 "non-terminal classes split into one terminal and one deeper class",
                                 c.failures);
  if (c.checked == 0) {
    o.ok = false;
    o.summary = "FAIL: no non-terminal classes below level 3 at depth " + std::to_string(depth);
  }
  return o;
}

}  // namespace valtree
