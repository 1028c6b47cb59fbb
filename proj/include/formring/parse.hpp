#pragma once

// Polynomial text grammar (whitespace is ignored between tokens):
//
//   expr     = term { ("+" | "-") term } ;
//   term     = unary { ("*" | "/") unary } ;
//   unary    = { "+" | "-" } power ;
//   power    = atom [ "^" natural ] ;
//   atom     = natural | variable | "(" expr ")" ;
//   natural  = digit { digit } ;
//   variable = letter { letter | digit | "_" } ;
//
// The right operand of "/" must evaluate to a nonzero constant, so rational
// literals are written 3/4 or (3/4)*x. Results are expanded normal forms.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formring/poly.hpp"

namespace formring {

class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

namespace detail {

template <class F>
class PolyParser {
public:
  using P = Poly<F>;

  PolyParser(std::string_view text, const std::vector<std::string>& vars, const F& field)
      : text_(text), vars_(vars), field_(field) {}

  P parse() {
    skip_ws();
    if (pos_ == text_.size()) throw parse_error("empty polynomial", pos_);
    P p = expr();
    skip_ws();
    if (pos_ != text_.size()) throw parse_error(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return p;
  }

private:
  P expr() {
    P acc = term();
    for (;;) {
      skip_ws();
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else return acc;
    }
  }

  P term() {
    P acc = unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        acc *= unary();
      } else if (peek() == '/') {
        const std::size_t at = pos_;
        ++pos_;
        P den = unary();
        if (den.is_zero()) throw parse_error("division by zero", at);
        if (den.max_degree() != 0)
          throw parse_error("only field constants may appear in denominators", at);
        acc = inverse(den.terms().front().second) * acc;
      } else {
        return acc;
      }
    }
  }

  P unary() {
    skip_ws();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  P power() {
    P base = atom();
    skip_ws();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw parse_error("exponent must be a natural number", at);
      mpz_class e = natural();
      if (e > 4096) throw parse_error("exponent too large", at);
      return base.pow(static_cast<unsigned>(e.get_ui()), field_.one());
    }
    return base;
  }

  P atom() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      P inner = expr();
      skip_ws();
      if (!accept(')')) throw parse_error("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return P::constant(field_.from_integer(natural()));
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return P::monomial(Monomial::variable(i), field_.one());
      throw parse_error("unknown variable '" + name + "'", start);
    }
    if (pos_ == text_.size()) throw parse_error("unexpected end of input", pos_);
    throw parse_error(std::string("unexpected '") + c + "'", pos_);
  }

  mpz_class natural() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  const F& field_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <class F>
Poly<F> parse_poly(std::string_view text, const std::vector<std::string>& vars, const F& field) {
  return detail::PolyParser<F>(text, vars, field).parse();
}

}  // namespace formring
