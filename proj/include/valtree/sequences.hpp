#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "valtree/padic.hpp"
#include "valtree/poly.hpp"

namespace valtree {

struct Period {
  std::size_t length = 0;
  bool is_power_of_p = false;
  friend bool operator==(const Period&, const Period&) = default;
};

/// Valuations of f over the window [0, N) (arity 1) or [0, N)^2 (arity 2).
struct PeriodReport {
  Prime p;
  std::size_t window = 0;
  unsigned arity = 1;
  /// Row-major: grid[n * window + m] = nu_p(f(n, m)).
  std::vector<Valuation> grid;
  std::set<unsigned> vset;
  std::optional<Period> period;

  const Valuation& at(std::size_t n, std::size_t m = 0) const {
    return grid[arity == 2 ? n * window + m : n];
  }
};

PeriodReport valuation_grid(const Polynomial& f, Prime p, std::size_t window, unsigned arity);

/// Smallest divisor d <= N/2 of the window N leaving the grid invariant
/// under a shift by d in every variable. Absent when no such d exists or any
/// value is infinite; absence means "inconclusive at this window".
std::optional<Period> minimal_period(const PeriodReport& report);

/// valuation_grid followed by minimal_period.
PeriodReport period_report(const Polynomial& f, Prime p, std::size_t window, unsigned arity);

enum class VsetRange { Triangle, FullGrid };

/// Distinct finite valuations of f over 0 <= m <= n < N (Triangle) or over
/// all 0 <= n, m < N (FullGrid). Arity-1 polynomials range over n < N.
std::set<unsigned> vset(const Polynomial& f, Prime p, std::size_t bound,
                        VsetRange range = VsetRange::Triangle);

/// A class {p^m i + j : i >= 0, p^m i + j >= k} of the sequence n -> S(n, k).
struct EmpiricalNode {
  enum class Status { TerminalByWitness, Mixed };

  unsigned level = 0;
  Integer residue = 0;
  Integer modulus = 1;
  Status status = Status::Mixed;
  unsigned valuation = 0;  // meaningful for TerminalByWitness
  /// (n, nu_p(S(n,k))) for the first members of the class.
  std::vector<std::pair<std::uint64_t, unsigned>> witnesses;
  std::vector<EmpiricalNode> children;
};

struct EmpiricalTreeReport {
  unsigned k = 1;
  Prime p;
  unsigned depth = 1;
  unsigned min_witnesses = 8;
  /// Mixed classes per level 0..depth.
  std::vector<std::size_t> non_terminal_per_level;
  EmpiricalNode root;
};

inline constexpr unsigned kDefaultWitnesses = 8;

/// Sampling-based class tree of nu_p(S(n, k)). Evidence only; a
/// TerminalByWitness class agreed on its first `witnesses` members.
EmpiricalTreeReport stirling_tree(unsigned k, Prime p, unsigned depth,
                                  unsigned witnesses = kDefaultWitnesses);

}  // namespace valtree
