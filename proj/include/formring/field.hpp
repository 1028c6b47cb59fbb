#pragma once

// Coefficient fields: exact rationals (GMP) and prime fields F_p.
//
// Every algorithm in the library is a template over a field descriptor `F`
// exposing `value_type` plus the handful of operations below. Scalars are
// plain values; the descriptor is only needed to manufacture constants.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace formring {

class field_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rationals

/// The field Q. Values are `mpq_class`, always kept canonical (lowest
/// terms, positive denominator).
struct RationalField {
  using value_type = mpq_class;

  value_type zero() const { return value_type(0); }
  value_type one() const { return value_type(1); }

  value_type from_integer(const mpz_class& n) const { return value_type(n); }

  value_type from_fraction(const mpz_class& num, const mpz_class& den) const {
    if (den == 0) throw field_error("division by zero in coefficient");
    value_type q(num, den);
    q.canonicalize();
    return q;
  }

  std::string name() const { return "Q"; }
  bool operator==(const RationalField&) const = default;
};

inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool is_one(const mpq_class& x) { return x == 1; }
inline mpq_class inverse(const mpq_class& x) {
  if (is_zero(x)) throw field_error("inverse of zero");
  return mpq_class(1) / x;
}
inline std::string to_string(const mpq_class& x) { return x.get_str(); }

// ---------------------------------------------------------------------------
// Prime fields

/// Element of F_p. The modulus travels with the value so that arithmetic
/// never needs a context; mixing moduli is a logic error.
class ModP {
public:
  ModP(std::uint64_t v, std::uint32_t p) : v_(v % p), p_(p) {}

  std::uint64_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }

  friend ModP operator+(ModP a, ModP b) { return {a.v_ + b.v_, a.p_}; }
  friend ModP operator-(ModP a, ModP b) { return {a.v_ + a.p_ - b.v_, a.p_}; }
  friend ModP operator*(ModP a, ModP b) { return {a.v_ * b.v_, a.p_}; }
  friend ModP operator/(ModP a, ModP b) { return a * inverse(b); }
  ModP operator-() const { return {p_ - v_, p_}; }
  ModP& operator+=(ModP b) { return *this = *this + b; }
  ModP& operator-=(ModP b) { return *this = *this - b; }
  ModP& operator*=(ModP b) { return *this = *this * b; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }

  friend ModP inverse(ModP a) {
    if (a.v_ == 0) throw field_error("inverse of zero");
    // Fermat: a^(p-2)
    std::uint64_t result = 1, base = a.v_, e = a.p_ - 2;
    while (e) {
      if (e & 1) result = result * base % a.p_;
      base = base * base % a.p_;
      e >>= 1;
    }
    return {result, a.p_};
  }

private:
  std::uint64_t v_;
  std::uint32_t p_;
};

inline bool is_zero(const ModP& x) { return x.value() == 0; }
inline bool is_one(const ModP& x) { return x.value() == 1; }
inline std::string to_string(const ModP& x) { return std::to_string(x.value()); }

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t k = 2; k * k <= p; ++k)
    if (p % k == 0) return false;
  return true;
}

/// The field F_p for a prime p < 2^31 (products fit in 64 bits).
struct PrimeField {
  using value_type = ModP;

  explicit PrimeField(std::uint32_t prime) : p(prime) {
    if (!is_prime(p) || p >= (1u << 31))
      throw field_error("Fp modulus must be a prime below 2^31, got " + std::to_string(p));
  }

  value_type zero() const { return {0, p}; }
  value_type one() const { return {1, p}; }

  value_type from_integer(const mpz_class& n) const {
    mpz_class r = n % p;
    if (r < 0) r += p;
    return {r.get_ui(), p};
  }

  value_type from_fraction(const mpz_class& num, const mpz_class& den) const {
    value_type d = from_integer(den);
    if (is_zero(d))
      throw field_error("denominator " + den.get_str() + " vanishes mod " + std::to_string(p));
    return from_integer(num) / d;
  }

  std::string name() const { return "Fp:" + std::to_string(p); }
  bool operator==(const PrimeField&) const = default;

  std::uint32_t p;
};

inline std::ostream& operator<<(std::ostream& os, const ModP& x) { return os << x.value(); }

}  // namespace formring
