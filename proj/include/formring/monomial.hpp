#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace formring {

inline constexpr std::size_t kMaxVars = 8;

/// Dense exponent vector with a cached total degree. Unused slots beyond
/// the ring's variable count stay zero, so arithmetic never needs `nvars`.
struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};
  std::uint32_t degree = 0;

  Monomial() = default;

  static Monomial variable(std::size_t i, std::uint16_t power = 1) {
    Monomial m;
    m.exp[i] = power;
    m.degree = power;
    return m;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = a.exp[i] + b.exp[i];
    m.degree = a.degree + b.degree;
    return m;
  }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exp[i] > other.exp[i]) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp == b.exp; }
};

/// Degree-reverse-lexicographic order, ascending: lower degree first; within a
/// degree, `a < b` iff the last nonzero entry of a - b is positive.
inline bool degrevlex_less(const Monomial& a, const Monomial& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  for (std::size_t i = kMaxVars; i-- > 0;) {
    if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i];
  }
  return false;
}

struct DegrevlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return degrevlex_less(a, b); }
};

/// Global enumeration of the monomials in `nvars` variables in ascending
/// degrevlex order. Because the order is degree-first, the monomials of
/// degree < N always occupy the index prefix [0, count_below(N)), so an index
/// means the same thing at every truncation level.
///
/// Ranking is closed-form; unranking uses a table that grows on demand
/// (shared reads, exclusive growth).
class MonomialIndex {
public:
  explicit MonomialIndex(std::size_t nvars) : nvars_(nvars) {
    if (nvars == 0 || nvars > kMaxVars)
      throw std::invalid_argument("number of variables must be in [1, 8]");
  }

  std::size_t nvars() const { return nvars_; }

  /// Number of monomials of total degree < N.
  std::uint64_t count_below(std::uint32_t N) const {
    if (N == 0) return 0;
    return binom(N - 1 + nvars_, nvars_);
  }

  std::uint64_t index_of(const Monomial& m) const {
    std::uint64_t idx = count_below(m.degree);
    // ascending degrevlex = descending lex on (e_n, ..., e_1)
    std::uint64_t rem = m.degree;
    for (std::size_t k = nvars_; k >= 2; --k) {
      const std::uint64_t e = m.exp[k - 1];
      for (std::uint64_t v = e + 1; v <= rem; ++v) idx += binom(rem - v + k - 2, k - 2);
      rem -= e;
    }
    return idx;
  }

  Monomial monomial(std::uint64_t idx) const {
    {
      std::shared_lock lock(mutex_);
      if (idx < table_.size()) return table_[idx];
    }
    std::unique_lock lock(mutex_);
    while (table_.size() <= idx) extend_one_degree();
    return table_[idx];
  }

private:
  static std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  }

  void extend_one_degree() const {
    const std::uint32_t D = next_degree_++;
    std::vector<Monomial> block;
    Monomial m;
    enumerate(block, m, 0, D);
    std::sort(block.begin(), block.end(), DegrevlexLess{});
    table_.insert(table_.end(), block.begin(), block.end());
  }

  void enumerate(std::vector<Monomial>& out, Monomial& m, std::size_t var, std::uint32_t rem) const {
    if (var + 1 == nvars_) {
      m.exp[var] = static_cast<std::uint16_t>(rem);
      m.degree = 0;
      for (std::size_t i = 0; i < nvars_; ++i) m.degree += m.exp[i];
      out.push_back(m);
      m.exp[var] = 0;
      return;
    }
    for (std::uint32_t e = 0; e <= rem; ++e) {
      m.exp[var] = static_cast<std::uint16_t>(e);
      enumerate(out, m, var + 1, rem - e);
    }
    m.exp[var] = 0;
  }

  std::size_t nvars_;
  mutable std::shared_mutex mutex_;
  mutable std::vector<Monomial> table_;
  mutable std::uint32_t next_degree_ = 0;
};

}  // namespace formring
