#pragma once

// Naive reference computations. Nothing here touches MonomialIndex,
// Subspace or the truncated-module code: monomials are enumerated afresh,
// matrices are dense, and elimination is textbook Gaussian elimination.
// The point is to be obviously right, not fast.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "formring/poly.hpp"

namespace formring::oracle {

using Exponents = std::vector<int>;

inline Exponents exponents_of(const Monomial& m, std::size_t nvars) {
  return Exponents(m.exp.begin(), m.exp.begin() + static_cast<std::ptrdiff_t>(nvars));
}

inline int total_degree(const Exponents& e) {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

inline bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

/// All exponent vectors in nvars variables of total degree exactly deg.
inline std::vector<Exponents> monomials_of_degree(std::size_t nvars, int deg) {
  std::vector<Exponents> out;
  Exponents cur(nvars, 0);
  auto rec = [&](auto&& self, std::size_t var, int rem) -> void {
    if (var + 1 == nvars) {
      cur[var] = rem;
      out.push_back(cur);
      cur[var] = 0;
      return;
    }
    for (int e = rem; e >= 0; --e) {
      cur[var] = e;
      self(self, var + 1, rem - e);
    }
    cur[var] = 0;
  };
  rec(rec, 0, deg);
  return out;
}

inline std::vector<Exponents> monomials_below(std::size_t nvars, int N) {
  std::vector<Exponents> out;
  for (int d = 0; d < N; ++d) {
    auto block = monomials_of_degree(nvars, d);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

/// A monomial ideal held by its minimal generators.
class MonomialIdeal {
public:
  MonomialIdeal(std::size_t nvars, std::vector<Exponents> gens) : nvars_(nvars) {
    for (auto& g : gens) {
      if (g.size() != nvars) throw std::invalid_argument("monomial arity mismatch");
      add(std::move(g));
    }
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<Exponents>& gens() const { return gens_; }

  bool contains(const Exponents& m) const {
    return std::any_of(gens_.begin(), gens_.end(), [&](const Exponents& g) { return divides(g, m); });
  }

  friend MonomialIdeal operator+(const MonomialIdeal& a, const MonomialIdeal& b) {
    MonomialIdeal s = a;
    for (const auto& g : b.gens_) s.add(g);
    return s;
  }

  friend MonomialIdeal operator*(const MonomialIdeal& a, const MonomialIdeal& b) {
    MonomialIdeal s(a.nvars_, {});
    for (const auto& g : a.gens_)
      for (const auto& h : b.gens_) {
        Exponents p(a.nvars_);
        for (std::size_t i = 0; i < a.nvars_; ++i) p[i] = g[i] + h[i];
        s.add(std::move(p));
      }
    return s;
  }

  MonomialIdeal power(int n) const {
    MonomialIdeal s(nvars_, {Exponents(nvars_, 0)});
    for (int k = 0; k < n; ++k) s = s * *this;
    return s;
  }

  MonomialIdeal intersect(const MonomialIdeal& b) const {
    MonomialIdeal s(nvars_, {});
    for (const auto& g : gens_)
      for (const auto& h : b.gens_) {
        Exponents l(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i) l[i] = std::max(g[i], h[i]);
        s.add(std::move(l));
      }
    return s;
  }

  /// I : x^m, generated by g / gcd(g, x^m).
  MonomialIdeal colon(const Exponents& m) const {
    MonomialIdeal s(nvars_, {});
    for (const auto& g : gens_) {
      Exponents q(nvars_);
      for (std::size_t i = 0; i < nvars_; ++i) q[i] = std::max(0, g[i] - m[i]);
      s.add(std::move(q));
    }
    return s;
  }

  static MonomialIdeal maximal_power(std::size_t nvars, int n) {
    return MonomialIdeal(nvars, monomials_of_degree(nvars, std::max(n, 0)));
  }

private:
  void add(Exponents g) {
    for (const auto& h : gens_)
      if (divides(h, g)) return;
    gens_.erase(std::remove_if(gens_.begin(), gens_.end(), [&](const Exponents& h) { return divides(g, h); }),
                gens_.end());
    gens_.push_back(std::move(g));
    std::sort(gens_.begin(), gens_.end());
  }

  std::size_t nvars_;
  std::vector<Exponents> gens_;
};

/// l(A/I) by counting standard monomials; nullopt (infinite) when some
/// variable has no pure power in I.
inline std::optional<long long> monomial_colength(const MonomialIdeal& I) {
  const std::size_t n = I.nvars();
  Exponents bound(n, -1);
  for (const auto& g : I.gens()) {
    int support = 0, var = -1;
    for (std::size_t i = 0; i < n; ++i)
      if (g[i] > 0) {
        ++support;
        var = static_cast<int>(i);
      }
    if (support == 0) return 0;  // unit ideal
    if (support == 1 && (bound[var] < 0 || g[var] < bound[var])) bound[var] = g[var];
  }
  for (int b : bound)
    if (b < 0) return std::nullopt;
  long long count = 0;
  Exponents cur(n, 0);
  auto rec = [&](auto&& self, std::size_t var) -> void {
    if (var == n) {
      if (!I.contains(cur)) ++count;
      return;
    }
    for (int e = 0; e < bound[var]; ++e) {
      cur[var] = e;
      self(self, var + 1);
    }
    cur[var] = 0;
  };
  rec(rec, 0);
  return count;
}

/// dim k[x]/(I + m^N): standard monomials of degree < N.
inline long long monomial_truncated_colength(const MonomialIdeal& I, int N) {
  long long count = 0;
  for (const auto& m : monomials_below(I.nvars(), N))
    if (!I.contains(m)) ++count;
  return count;
}

/// Rank of a dense matrix by plain Gaussian elimination.
template <class F>
std::size_t dense_rank(std::vector<std::vector<typename F::value_type>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && is_zero(rows[p][c])) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    const auto inv = inverse(rows[rank][c]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (is_zero(rows[r][c])) continue;
      const typename F::value_type f = rows[r][c] * inv;
      for (std::size_t k = c; k < cols; ++k) rows[r][k] = rows[r][k] - f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

namespace detail {

template <class F>
class DenseSpace {
public:
  using scalar = typename F::value_type;

  DenseSpace(const F& field, std::size_t nvars, std::vector<Exponents> basis)
      : field_(field), nvars_(nvars), basis_(std::move(basis)) {
    for (std::size_t i = 0; i < basis_.size(); ++i) pos_[basis_[i]] = i;
  }

  std::size_t size() const { return basis_.size(); }
  const std::vector<Exponents>& basis() const { return basis_; }

  /// Dense coordinates of p, dropping monomials outside the basis.
  std::vector<scalar> coords(const Poly<F>& p) const {
    std::vector<scalar> v(basis_.size(), field_.zero());
    for (const auto& [m, c] : p.terms()) {
      auto it = pos_.find(exponents_of(m, nvars_));
      if (it != pos_.end()) v[it->second] = c;
    }
    return v;
  }

  Poly<F> monomial(const Exponents& e) const {
    Monomial m;
    for (std::size_t i = 0; i < nvars_; ++i) {
      m.exp[i] = static_cast<std::uint16_t>(e[i]);
      m.degree += static_cast<std::uint32_t>(e[i]);
    }
    return Poly<F>::monomial(m, field_.one());
  }

private:
  F field_;
  std::size_t nvars_;
  std::vector<Exponents> basis_;
  std::map<Exponents, std::size_t> pos_;
};

}  // namespace detail

/// p ∈ (gens) + m^N in k[x], by spanning all x^α g with deg < N densely.
template <class F>
bool brute_membership(const F& field, std::size_t nvars, const Poly<F>& p, const std::vector<Poly<F>>& gens,
                      int N) {
  detail::DenseSpace<F> space(field, nvars, monomials_below(nvars, N));
  std::vector<std::vector<typename F::value_type>> rows;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    for (const auto& m : space.basis()) rows.push_back(space.coords(space.monomial(m) * g));
  }
  const std::size_t r0 = dense_rank<F>(rows);
  rows.push_back(space.coords(p));
  return dense_rank<F>(rows) == r0;
}

/// dim k[x]/((gens) + m^N), by dense elimination over all x^α g.
template <class F>
long long dense_truncated_colength(const F& field, std::size_t nvars, const std::vector<Poly<F>>& gens, int N) {
  detail::DenseSpace<F> space(field, nvars, monomials_below(nvars, N));
  std::vector<std::vector<typename F::value_type>> rows;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    for (const auto& m : space.basis()) rows.push_back(space.coords(space.monomial(m) * g));
  }
  return static_cast<long long>(space.size() - dense_rank<F>(rows));
}

/// Every product of n elements of gens (with repetition), n >= 0.
template <class F>
std::vector<Poly<F>> power_generators(const F& field, const std::vector<Poly<F>>& gens, int n) {
  std::vector<Poly<F>> prods{Poly<F>::constant(field.one())};
  for (int k = 0; k < n; ++k) {
    std::vector<Poly<F>> next;
    for (const auto& p : prods)
      for (const auto& g : gens) {
        Poly<F> q = p * g;
        if (std::find(next.begin(), next.end(), q) == next.end()) next.push_back(std::move(q));
      }
    prods = std::move(next);
  }
  return prods;
}

/// dim [f*B :_B g* / f*B]_n in B = k[X_1..X_r] for homogeneous f*, g*.
template <class F>
long long graded_colon_dim(const F& field, std::size_t nvars, const Poly<F>& fstar, const Poly<F>& gstar, int n) {
  if (!fstar.is_homogeneous() || !gstar.is_homogeneous() || fstar.is_zero() || gstar.is_zero())
    throw std::invalid_argument("graded colon oracle needs nonzero homogeneous forms");
  const int df = static_cast<int>(fstar.max_degree());
  const int dg = static_cast<int>(gstar.max_degree());
  auto fB = [&](int deg) {
    detail::DenseSpace<F> target(field, nvars, monomials_of_degree(nvars, deg));
    std::vector<std::vector<typename F::value_type>> rows;
    if (deg >= df)
      for (const auto& m : monomials_of_degree(nvars, deg - df)) rows.push_back(target.coords(target.monomial(m) * fstar));
    return std::make_pair(target, rows);
  };
  auto [tgt, frows] = fB(n + dg);
  const std::size_t rank_f = dense_rank<F>(frows);
  const auto Bn = monomials_of_degree(nvars, n);
  auto rows = frows;
  for (const auto& m : Bn) rows.push_back(tgt.coords(tgt.monomial(m) * gstar));
  const long long rank_map = static_cast<long long>(dense_rank<F>(rows) - rank_f);
  const long long colon = static_cast<long long>(Bn.size()) - rank_map;
  auto [src, srows] = fB(n);
  return colon - static_cast<long long>(dense_rank<F>(srows));
}

/// dim [B/(forms)]_n in B = k[X_1..X_r] for homogeneous forms.
template <class F>
long long graded_quotient_dim(const F& field, std::size_t nvars, const std::vector<Poly<F>>& forms, int n) {
  detail::DenseSpace<F> target(field, nvars, monomials_of_degree(nvars, n));
  std::vector<std::vector<typename F::value_type>> rows;
  for (const auto& f : forms) {
    if (f.is_zero() || !f.is_homogeneous()) throw std::invalid_argument("graded quotient oracle needs nonzero forms");
    const int df = static_cast<int>(f.max_degree());
    if (df > n) continue;
    for (const auto& m : monomials_of_degree(nvars, n - df)) rows.push_back(target.coords(target.monomial(m) * f));
  }
  return static_cast<long long>(target.size() - dense_rank<F>(rows));
}

/// Hilbert-series regular-sequence test: with h_n = dim [G]_n and
/// g_n = dim [G/(a*)G]_n on a common window n = 0..W, the forms of degrees
/// β_j are regular iff Σ g_n z^n = Π (1 - z^β_j) Σ h_n z^n coefficientwise.
/// Returns the first mismatching n, or nullopt when the window agrees.
inline std::optional<long> regseq_series_mismatch(const std::vector<long>& degrees, const std::vector<long long>& h,
                                                  const std::vector<long long>& g) {
  std::vector<long long> expect = h;
  for (long b : degrees) {
    std::vector<long long> next = expect;
    for (std::size_t n = static_cast<std::size_t>(b); n < next.size(); ++n) next[n] -= expect[n - static_cast<std::size_t>(b)];
    expect = std::move(next);
  }
  for (std::size_t n = 0; n < std::min(expect.size(), g.size()); ++n)
    if (expect[n] != g[n]) return static_cast<long>(n);
  return std::nullopt;
}

inline bool regseq_hilbert_series(const std::vector<long>& degrees, const std::vector<long long>& h,
                                  const std::vector<long long>& g) {
  return !regseq_series_mismatch(degrees, h, g).has_value();
}

}  // namespace formring::oracle
