#include <cctype>
#include <string>

#include "valtree/poly.hpp"

namespace valtree {
namespace {

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | 'x' | 'y' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Polynomial parse_all() {
    skip_space();
    if (at_end()) fail("empty input");
    Polynomial f = expr();
    skip_space();
    if (!at_end()) unexpected_after_operand();
    return f;
  }

 private:
  Polynomial expr() {
    Polynomial f = term();
    for (;;) {
      skip_space();
      if (peek() == '+') {
        ++pos_;
        f += term();
      } else if (peek() == '-') {
        ++pos_;
        f -= term();
      } else {
        return f;
      }
    }
  }

  Polynomial term() {
    Polynomial f = unary();
    for (;;) {
      skip_space();
      if (peek() != '*') return f;
      ++pos_;
      f = checked(f * unary());
    }
  }

  Polynomial unary() {
    skip_space();
    if (peek() == '-') {
      ++pos_;
      return -unary();
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    skip_space();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    const std::size_t at = pos_;
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '(')
      fail("exponent must be a non-negative integer literal, not an expression", at);
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("exponent must be a non-negative integer literal", at);
    const Integer e = literal();
    if (e > kMaxExponentLiteral)
      fail("exponent " + e.get_str() + " exceeds " + std::to_string(kMaxExponentLiteral), at);
    skip_space();
    if (peek() == '^') fail("chained exponents are not supported; use parentheses");
    return checked(pow(base, static_cast<unsigned>(e.get_ui())));
  }

  Polynomial primary() {
    skip_space();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return Polynomial(literal());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      const std::size_t open = pos_++;
      Polynomial f = expr();
      skip_space();
      if (at_end()) fail("unclosed '(' opened at offset " + std::to_string(open));
      if (peek() != ')') unexpected_after_operand();
      ++pos_;
      return f;
    }
    if (at_end()) fail("unexpected end of input");
    if (c == '/') fail("division is not a polynomial operation");
    fail(std::string("unexpected '") + c + "'");
  }

  Polynomial identifier() {
    const std::size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Polynomial::variable(Var::x);
    if (name == "y") return Polynomial::variable(Var::y);
    if (name.size() > 1 && name.find_first_not_of("xy") == std::string_view::npos)
      fail("implicit multiplication is not allowed; write '" + std::string(1, name[0]) + "*" +
               std::string(name.substr(1)) + "'",
           start);
    fail("unknown identifier '" + std::string(name) + "' (only x and y are variables)", start);
  }

  Integer literal() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (std::isalpha(static_cast<unsigned char>(peek())))
      fail("implicit multiplication is not allowed; use '*'");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  Polynomial checked(Polynomial f) const {
    const auto d = total_degree(f);
    if (d && *d > kMaxParsedDegree)
      fail("expanded degree exceeds " + std::to_string(kMaxParsedDegree));
    return f;
  }

  [[noreturn]] void unexpected_after_operand() const {
    const char c = peek();
    if (c == '/') fail("division is not a polynomial operation");
    if (c == ')') fail("unmatched ')'");
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '(')
      fail("implicit multiplication is not allowed; use '*'");
    fail(std::string("unexpected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& message) const { fail(message, pos_); }
  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    throw ParseError(message, at);
  }

  void skip_space() {
    while (std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace valtree
