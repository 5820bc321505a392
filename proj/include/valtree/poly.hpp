#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace valtree {

using Integer = mpz_class;

enum class Var { x, y };

/// Exponent pair (l, m) of the monomial x^l y^m.
struct Exponent {
  unsigned x = 0;
  unsigned y = 0;

  unsigned total() const { return x + y; }
  friend auto operator<=>(const Exponent&, const Exponent&) = default;
};

/// Graded lexicographic order with x before y: higher total degree first,
/// then higher power of x.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const {
    if (a.total() != b.total()) return a.total() > b.total();
    return a.x > b.x;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Sparse polynomial in x, y with arbitrary-precision integer coefficients.
/// Stored terms never carry a zero coefficient; the zero polynomial has no
/// terms.
class Polynomial {
 public:
  using Terms = std::map<Exponent, Integer, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(const Integer& constant);

  static Polynomial variable(Var v);
  static Polynomial monomial(const Integer& coefficient, Exponent e);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Integer coefficient(Exponent e) const;
  bool depends_on(Var v) const;
  unsigned degree_in(Var v) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial operator-() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

 private:
  void add_term(Exponent e, const Integer& c);

  Terms terms_;
};

Polynomial pow(const Polynomial& base, unsigned exponent);

/// Largest exponent literal accepted after `^`.
inline constexpr unsigned kMaxExponentLiteral = 64;
/// Largest total degree the parser will expand to.
inline constexpr unsigned kMaxParsedDegree = 1024;

/// Parses `+ - * ^`, parentheses, integer literals and the variables x, y.
/// Throws ParseError carrying the byte offset of the offending input.
Polynomial parse(std::string_view text);

/// Canonical text: graded-lex term order, explicit `*` and `^`.
std::string render(const Polynomial& f);

Integer evaluate(const Polynomial& f, const Integer& x, const Integer& y = 0);

Polynomial partial_derivative(const Polynomial& f, Var v);

/// Total degree; std::nullopt stands for the -infinity degree of zero.
std::optional<unsigned> total_degree(const Polynomial& f);

}  // namespace valtree
