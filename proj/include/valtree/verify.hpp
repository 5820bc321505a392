#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "valtree/tree.hpp"

namespace valtree {

/// Coefficients uniform in [-p^2, p^2] on every monomial of total degree
/// <= degree, with a nonzero top-degree part; resampled while every
/// coefficient is divisible by p.
Polynomial random_polynomial(unsigned degree, Prime p, std::mt19937_64& rng);

struct TrichotomyCheck {
  std::size_t star_nodes = 0;
  std::size_t matched = 0;
  std::vector<std::string> failures;

  bool ok() const { return matched == star_nodes; }
};

/// At every star node of level >= 1 (at most `limit` of them, preorder):
/// the stored split equals classify_star and brute_force_classify, the
/// children's labels agree with star_digits, and the star-child count is
/// 0, p or p^2 (arity 2) or 0, 1 or p (arity 1).
TrichotomyCheck check_trichotomy(const ValuationTree& t, std::size_t limit = SIZE_MAX);

/// Splitting pattern of the arity-1 tree of x^2 + 7 at p = 2. Numbering
/// levels from 1 at the root, so a class mod 2^m sits at level k = m + 1:
/// every non-terminal class at level k >= 3 has two children, one terminal
/// with valuation k and one non-terminal with all valuations >= k + 1.
struct SplittingCheck {
  std::size_t checked = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty() && checked > 0; }
};
SplittingCheck check_one_terminal_splitting(const ValuationTree& t);

/// Outcome of a `verify` suite: a one-line verdict plus details on failure.
struct VerifyOutcome {
  bool ok = false;
  std::string summary;
  std::string details;
};

VerifyOutcome verify_trichotomy(unsigned degree, Prime p, std::size_t star_samples, std::uint64_t seed,
                                unsigned depth, std::size_t node_budget);
VerifyOutcome verify_gradient_coefficients(std::size_t samples, std::uint64_t seed);
VerifyOutcome verify_legendre(std::uint64_t n_max);
VerifyOutcome verify_central_binomial(std::uint64_t n_max);
VerifyOutcome verify_stirling_closed_forms(unsigned n_max);
VerifyOutcome verify_n2_plus_7(unsigned depth);

}  // namespace valtree
