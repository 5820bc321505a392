#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "valtree/poly.hpp"

namespace valtree {

bool is_prime(std::uint64_t n);

/// A validated prime. Construction rejects composites, 0 and 1.
class Prime {
 public:
  explicit Prime(std::uint64_t value);

  std::uint32_t value() const { return value_; }
  friend bool operator==(Prime, Prime) = default;

 private:
  std::uint32_t value_;
};

/// nu_p(n): finite for nonzero n, infinite for n = 0.
class Valuation {
 public:
  static constexpr Valuation infinite() { return Valuation(true, 0); }
  static constexpr Valuation finite(unsigned v) { return Valuation(false, v); }

  constexpr bool is_finite() const { return !infinite_; }
  unsigned value() const;
  std::string to_string() const;

  friend constexpr bool operator==(const Valuation&, const Valuation&) = default;
  friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.infinite_ != b.infinite_) return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    return a.value_ <=> b.value_;
  }

 private:
  constexpr Valuation(bool infinite, unsigned v) : infinite_(infinite), value_(v) {}
  bool infinite_;
  unsigned value_;
};

/// Sign of n is ignored.
Valuation valuation(const Integer& n, Prime p);

/// s_p(n), the sum of the base-p digits of n >= 0.
std::uint64_t digit_sum(const Integer& n, Prime p);

/// nu_p(n!) by Legendre's floor sum, checked against (n - s_p(n)) / (p - 1).
/// A disagreement throws std::logic_error.
std::uint64_t factorial_valuation(std::uint64_t n, Prime p);

/// nu_2(C(2n, n)) = s_2(n).
std::uint64_t central_binomial_valuation(std::uint64_t n);

/// Stirling numbers of the second kind S(n, k) for n <= n_max, k <= k_max,
/// filled by S(n,k) = S(n-1,k-1) + k S(n-1,k).
class StirlingTable {
 public:
  StirlingTable(unsigned n_max, unsigned k_max);

  unsigned n_max() const { return n_max_; }
  unsigned k_max() const { return k_max_; }
  /// Zero outside 0 <= k <= n; throws std::out_of_range past the table bounds.
  const Integer& at(unsigned n, unsigned k) const;

 private:
  unsigned n_max_;
  unsigned k_max_;
  std::vector<Integer> values_;
  Integer zero_ = 0;
};

Integer stirling(unsigned n, unsigned k);

/// S(n, k) for a fixed k and every n in [0, n_max].
std::vector<Integer> stirling_column(unsigned k, unsigned n_max);

/// Closed forms of nu_2(S(n, k)) for 1 <= k <= 4, n >= k.
unsigned stirling_valuation_closed(unsigned n, unsigned k);

}  // namespace valtree
