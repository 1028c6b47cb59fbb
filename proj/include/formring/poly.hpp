#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "formring/field.hpp"
#include "formring/monomial.hpp"

namespace formring {

/// Initial degree of a polynomial with respect to the maximal ideal. The zero
/// polynomial has order infinity, which compares above every finite order.
class Order {
public:
  constexpr explicit Order(std::uint32_t v) : value_(v), infinite_(false) {}
  static constexpr Order infinity() { return Order(); }

  constexpr bool is_infinite() const { return infinite_; }
  std::uint32_t value() const {
    if (infinite_) throw std::logic_error("order of the zero polynomial is infinite");
    return value_;
  }

  friend constexpr bool operator==(Order a, Order b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr bool operator<(Order a, Order b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }

private:
  constexpr Order() : value_(0), infinite_(true) {}
  std::uint32_t value_;
  bool infinite_;
};

/// Sparse multivariate polynomial over the field `F`. Terms are kept sorted
/// in ascending degrevlex order with no zero coefficients, so the first term
/// always carries the order and equality is structural.
template <class F>
class Poly {
public:
  using scalar = typename F::value_type;
  using term = std::pair<Monomial, scalar>;

  Poly() = default;

  static Poly constant(const scalar& c) { return monomial(Monomial{}, c); }

  static Poly monomial(const Monomial& m, const scalar& c) {
    Poly p;
    if (!formring::is_zero(c)) p.terms_.emplace_back(m, c);
    return p;
  }

  static Poly from_terms(std::vector<term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  const std::vector<term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Order ord() const { return terms_.empty() ? Order::infinity() : Order(terms_.front().first.degree); }

  std::uint32_t max_degree() const { return terms_.empty() ? 0 : terms_.back().first.degree; }

  /// Drop every term of total degree >= N.
  Poly truncate(std::uint32_t N) const {
    Poly p;
    for (const auto& t : terms_)
      if (t.first.degree < N) p.terms_.push_back(t);
    return p;
  }

  /// Homogeneous component of lowest degree (the initial form for the
  /// m-adic filtration).
  Poly lowest_form() const {
    if (terms_.empty()) throw std::invalid_argument("lowest_form of the zero polynomial");
    Poly p;
    const auto d = terms_.front().first.degree;
    for (const auto& t : terms_) {
      if (t.first.degree != d) break;
      p.terms_.push_back(t);
    }
    return p;
  }

  /// Homogeneous component of the given degree (possibly zero).
  Poly homogeneous_part(std::uint32_t d) const {
    Poly p;
    for (const auto& t : terms_)
      if (t.first.degree == d) p.terms_.push_back(t);
    return p;
  }

  bool is_homogeneous() const {
    return terms_.empty() || terms_.front().first.degree == terms_.back().first.degree;
  }

  Poly operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_) t.second = -t.second;
    return p;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    std::vector<term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) out.emplace_back(s.first * t.first, s.second * t.second);
    return from_terms(std::move(out));
  }

  friend Poly operator*(const scalar& c, const Poly& a) {
    if (formring::is_zero(c)) return Poly();
    Poly p = a;
    for (auto& t : p.terms_) t.second = c * t.second;
    return p;
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly pow(unsigned e, const scalar& one) const {
    Poly result = constant(one), base = *this;
    while (e) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  /// Canonical text: terms in descending degrevlex order, `*` between factors,
  /// `^` for powers. The output parses back to the same polynomial.
  std::string to_string(const std::vector<std::string>& vars) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      std::string coef = formring::to_string(it->second);
      bool negative = !coef.empty() && coef[0] == '-';
      if (negative) coef.erase(0, 1);
      if (first) {
        if (negative) os << "-";
      } else {
        os << (negative ? " - " : " + ");
      }
      first = false;
      const Monomial& m = it->first;
      const bool unit = coef == "1";
      if (m.degree == 0) {
        os << coef;
        continue;
      }
      bool need_star = false;
      if (!unit) {
        // rational coefficients are parenthesised so that a/b*x parses as (a/b)*x
        if (coef.find('/') != std::string::npos) os << "(" << coef << ")";
        else os << coef;
        need_star = true;
      }
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (m.exp[i] == 0) continue;
        if (need_star) os << "*";
        os << vars[i];
        if (m.exp[i] > 1) os << "^" << m.exp[i];
        need_star = true;
      }
    }
    return os.str();
  }

private:
  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const term& x, const term& y) { return degrevlex_less(x.first, y.first); });
    std::vector<term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().first == t.first) {
        merged.back().second += t.second;
        if (formring::is_zero(merged.back().second)) merged.pop_back();
      } else if (!formring::is_zero(t.second)) {
        merged.push_back(std::move(t));
      }
    }
    terms_ = std::move(merged);
  }

  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    Poly p;
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && degrevlex_less(i->first, j->first))) {
        p.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || degrevlex_less(j->first, i->first)) {
        p.terms_.emplace_back(j->first, subtract ? scalar(-j->second) : j->second);
        ++j;
      } else {
        scalar c = subtract ? scalar(i->second - j->second) : scalar(i->second + j->second);
        if (!formring::is_zero(c)) p.terms_.emplace_back(i->first, c);
        ++i;
        ++j;
      }
    }
    return p;
  }

  std::vector<term> terms_;
};

}  // namespace formring
