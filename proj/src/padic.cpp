#include "valtree/padic.hpp"

#include <algorithm>

namespace valtree {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

Prime::Prime(std::uint64_t value) : value_(0) {
  if (value > UINT32_MAX || !is_prime(value))
    throw std::invalid_argument(std::to_string(value) + " is not a prime");
  value_ = static_cast<std::uint32_t>(value);
}

unsigned Valuation::value() const {
  if (infinite_) throw std::logic_error("valuation of zero is infinite");
  return value_;
}

std::string Valuation::to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

Valuation valuation(const Integer& n, Prime p) {
  if (n == 0) return Valuation::infinite();
  if (p.value() == 2) return Valuation::finite(static_cast<unsigned>(mpz_scan1(n.get_mpz_t(), 0)));
  Integer rest;
  const Integer prime = p.value();
  return Valuation::finite(
      static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t())));
}

std::uint64_t digit_sum(const Integer& n, Prime p) {
  if (n < 0) throw std::domain_error("digit_sum: negative argument " + n.get_str());
  std::uint64_t sum = 0;
  Integer rest = n;
  while (rest != 0) sum += mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), p.value());
  return sum;
}

std::uint64_t factorial_valuation(std::uint64_t n, Prime p) {
  const Integer big_n = static_cast<unsigned long>(n);
  Integer floor_sum = 0;
  for (Integer power = p.value(); power <= big_n; power *= p.value()) floor_sum += big_n / power;

  const std::uint64_t digit_form = (n - digit_sum(big_n, p)) / (p.value() - 1);
  if (floor_sum != static_cast<unsigned long>(digit_form))
    throw std::logic_error("Legendre forms disagree for n=" + std::to_string(n) +
                           ", p=" + std::to_string(p.value()));
  return digit_form;
}

std::uint64_t central_binomial_valuation(std::uint64_t n) {
  static const Prime two(2);
  const std::uint64_t s = digit_sum(Integer(static_cast<unsigned long>(n)), two);
  constexpr std::uint64_t kExactCheckLimit = 1024;
  if (n <= kExactCheckLimit) {
    Integer binom;
    mpz_bin_uiui(binom.get_mpz_t(), 2 * n, n);
    if (valuation(binom, two).value() != s)
      throw std::logic_error("central binomial valuation mismatch at n=" + std::to_string(n));
  }
  return s;
}

StirlingTable::StirlingTable(unsigned n_max, unsigned k_max)
    : n_max_(n_max), k_max_(k_max),
      values_(static_cast<std::size_t>(n_max + 1) * (k_max + 1)) {
  auto cell = [&](unsigned n, unsigned k) -> Integer& {
    return values_[static_cast<std::size_t>(n) * (k_max_ + 1) + k];
  };
  cell(0, 0) = 1;
  for (unsigned n = 1; n <= n_max_; ++n)
    for (unsigned k = 1; k <= std::min(n, k_max_); ++k)
      cell(n, k) = cell(n - 1, k - 1) + k * cell(n - 1, k);
}

const Integer& StirlingTable::at(unsigned n, unsigned k) const {
  if (n > n_max_ || k > k_max_) throw std::out_of_range("StirlingTable::at outside table");
  if (k > n) return zero_;
  return values_[static_cast<std::size_t>(n) * (k_max_ + 1) + k];
}

std::vector<Integer> stirling_column(unsigned k, unsigned n_max) {
  // Rolling row S(n, 0..k).
  std::vector<Integer> row(k + 1, 0), column(n_max + 1, 0);
  row[0] = 1;
  column[0] = k == 0 ? 1 : 0;
  for (unsigned n = 1; n <= n_max; ++n) {
    for (unsigned j = std::min(n, k); j >= 1; --j) row[j] = row[j - 1] + j * row[j];
    row[0] = 0;
    column[n] = row[k];
  }
  return column;
}

Integer stirling(unsigned n, unsigned k) {
  if (k > n) return 0;
  return stirling_column(k, n)[n];
}

unsigned stirling_valuation_closed(unsigned n, unsigned k) {
  if (k < 1 || k > 4)
    throw std::invalid_argument("no closed form for nu_2(S(n,k)) with k=" + std::to_string(k));
  if (n < k) throw std::invalid_argument("closed form requires n >= k");
  switch (k) {
    case 3: return n % 2 == 0 ? 1 : 0;
    case 4: return n % 2 == 1 ? 1 : 0;
    default: return 0;
  }
}

}  // namespace valtree
