#include "valtree/poly.hpp"

#include <algorithm>
#include <vector>

namespace valtree {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error("at offset " + std::to_string(position) + ": " + message),
      position_(position) {}

Polynomial::Polynomial(const Integer& constant) { add_term({0, 0}, constant); }

Polynomial Polynomial::variable(Var v) {
  return monomial(1, v == Var::x ? Exponent{1, 0} : Exponent{0, 1});
}

Polynomial Polynomial::monomial(const Integer& coefficient, Exponent e) {
  Polynomial f;
  f.add_term(e, coefficient);
  return f;
}

Integer Polynomial::coefficient(Exponent e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Integer(0) : it->second;
}

bool Polynomial::depends_on(Var v) const { return degree_in(v) > 0; }

unsigned Polynomial::degree_in(Var v) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, v == Var::x ? e.x : e.y);
  return d;
}

void Polynomial::add_term(Exponent e, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term({ea.x + eb.x, ea.y + eb.y}, Integer(ca * cb));
  return r;
}

Polynomial pow(const Polynomial& base, unsigned exponent) {
  Polynomial result(1);
  Polynomial square = base;
  while (exponent != 0) {
    if (exponent & 1u) result = result * square;
    exponent >>= 1;
    if (exponent != 0) square = square * square;
  }
  return result;
}

namespace {

void append_power(std::string& out, char var, unsigned e) {
  if (e == 0) return;
  if (!out.empty() && out.back() != ' ' && out.back() != '-') out += '*';
  out += var;
  if (e > 1) out += "^" + std::to_string(e);
}

}  // namespace

std::string render(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    const bool negative = c < 0;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const Integer magnitude = abs(c);
    const bool constant = e.x == 0 && e.y == 0;
    if (constant || magnitude != 1) out += magnitude.get_str();
    append_power(out, 'x', e.x);
    append_power(out, 'y', e.y);
  }
  return out;
}

Integer evaluate(const Polynomial& f, const Integer& x, const Integer& y) {
  std::vector<Integer> xs(f.degree_in(Var::x) + 1), ys(f.degree_in(Var::y) + 1);
  xs[0] = 1;
  ys[0] = 1;
  for (std::size_t i = 1; i < xs.size(); ++i) xs[i] = xs[i - 1] * x;
  for (std::size_t i = 1; i < ys.size(); ++i) ys[i] = ys[i - 1] * y;

  Integer sum = 0, term;
  for (const auto& [e, c] : f.terms()) {
    term = xs[e.x] * ys[e.y];
    mpz_addmul(sum.get_mpz_t(), term.get_mpz_t(), c.get_mpz_t());
  }
  return sum;
}

Polynomial partial_derivative(const Polynomial& f, Var v) {
  Polynomial d;
  for (const auto& [e, c] : f.terms()) {
    const unsigned power = v == Var::x ? e.x : e.y;
    if (power == 0) continue;
    Exponent lowered = e;
    (v == Var::x ? lowered.x : lowered.y) -= 1;
    d += Polynomial::monomial(Integer(c * power), lowered);
  }
  return d;
}

std::optional<unsigned> total_degree(const Polynomial& f) {
  if (f.is_zero()) return std::nullopt;
  // Graded-lex order puts a term of maximal total degree first.
  return f.terms().begin()->first.total();
}

}  // namespace valtree
