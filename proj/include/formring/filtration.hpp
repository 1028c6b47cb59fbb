#pragma once

// q-adic filtration data of a cyclic module M = A/J: powers q^n M, lengths
// l(M/q^n M), the Hilbert-Samuel polynomial, graded pieces of the form
// module G_M(q), initial degrees, and the graded colon used for the
// correction term of the Bezout-type bound.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "formring/artinian.hpp"

namespace formring {

/// An ideal of definition q, given by generators or as the maximal ideal.
template <class F>
class IdealOfDefinition {
public:
  static IdealOfDefinition maximal(const LocalRing<F>& ring) {
    IdealOfDefinition q;
    q.maximal_ = true;
    for (std::size_t i = 0; i < ring.nvars(); ++i) q.gens_.push_back(ring.variable(i));
    return q;
  }

  static IdealOfDefinition generated_by(std::vector<Poly<F>> gens) {
    IdealOfDefinition q;
    for (auto& g : gens)
      if (!g.is_zero()) q.gens_.push_back(std::move(g));
    if (q.gens_.empty()) throw std::invalid_argument("ideal of definition needs a nonzero generator");
    for (const auto& g : q.gens_)
      if (g.ord().value() == 0) throw std::invalid_argument("ideal of definition must lie in the maximal ideal");
    return q;
  }

  bool is_maximal() const { return maximal_; }
  const std::vector<Poly<F>>& gens() const { return gens_; }

  /// Smallest order of a generator: q^n ⊆ m^(n * min_order).
  std::uint32_t min_order() const {
    std::uint32_t o = gens_.front().ord().value();
    for (const auto& g : gens_) o = std::min(o, g.ord().value());
    return o;
  }

  std::uint32_t max_degree() const {
    std::uint32_t d = 0;
    for (const auto& g : gens_) d = std::max(d, g.max_degree());
    return d;
  }

private:
  IdealOfDefinition() = default;
  bool maximal_ = false;
  std::vector<Poly<F>> gens_;
};

/// n ↦ certified length.
struct LengthTable {
  std::vector<long> n;
  std::vector<StabilizedValue> values;

  bool all_stable() const {
    return std::all_of(values.begin(), values.end(), [](const StabilizedValue& v) { return v.stable; });
  }
  std::vector<long long> lengths() const {
    std::vector<long long> out;
    for (const auto& v : values) out.push_back(v.value);
    return out;
  }
};

struct HilbertSamuelData {
  LengthTable table;
  bool fitted = false;
  int dim = -1;              // degree of the Hilbert-Samuel polynomial; -1 for M = 0
  std::vector<long long> e;  // e_0 .. e_dim
  long poly_from = 0;        // the fit is exact for poly_from <= n <= table end

  long long e0() const {
    if (!fitted) throw stabilization_error("Hilbert-Samuel polynomial not determined");
    return e.empty() ? 0 : e.front();
  }
};

/// Fit of a length sequence (indexed by n = first_n, first_n+1, ...) to
/// Σ e_i C(n+d-i-1, d-i). Returns nullopt unless the d-th difference is
/// constant over `window` trailing values and the fit covers d + window
/// points.
inline std::optional<HilbertSamuelData> fit_hilbert_samuel(const std::vector<long long>& vals, long first_n,
                                                           std::size_t window) {
  HilbertSamuelData out;
  const std::size_t len = vals.size();
  if (len < window) return std::nullopt;
  if (std::all_of(vals.end() - static_cast<std::ptrdiff_t>(window), vals.end(),
                  [](long long v) { return v == 0; })) {
    out.fitted = true;
    out.dim = -1;
    out.poly_from = first_n + static_cast<long>(len - window);
    while (out.poly_from > first_n && vals[out.poly_from - 1 - first_n] == 0) --out.poly_from;
    return out;
  }
  std::vector<long long> diff = vals;
  for (std::size_t k = 0; k + window <= len; ++k) {
    const std::size_t m = diff.size();
    bool constant = m >= window;
    for (std::size_t i = m - window + 1; constant && i < m; ++i) constant = diff[i] == diff[i - 1];
    if (constant) {
      const int d = static_cast<int>(k);
      // e_i from the trailing d+1 values
      const std::size_t neq = static_cast<std::size_t>(d) + 1;
      if (len < neq) return std::nullopt;
      auto basis = [d](long n, int i) -> mpq_class {
        const long top = n + d - i - 1;
        const long bot = d - i;
        if (bot == 0) return 1;
        if (top < bot || top < 0) return 0;
        mpz_class r;
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(top), static_cast<unsigned long>(bot));
        return mpq_class(r);
      };
      std::vector<std::vector<mpq_class>> mat(neq, std::vector<mpq_class>(neq + 1));
      for (std::size_t r = 0; r < neq; ++r) {
        const long n = first_n + static_cast<long>(len - neq + r);
        for (std::size_t i = 0; i < neq; ++i) mat[r][i] = basis(n, static_cast<int>(i));
        mat[r][neq] = static_cast<long>(vals[len - neq + r]);
      }
      for (std::size_t col = 0; col < neq; ++col) {
        std::size_t piv = col;
        while (piv < neq && mat[piv][col] == 0) ++piv;
        if (piv == neq) return std::nullopt;
        std::swap(mat[piv], mat[col]);
        for (std::size_t r = 0; r < neq; ++r) {
          if (r == col || mat[r][col] == 0) continue;
          mpq_class f = mat[r][col] / mat[col][col];
          for (std::size_t c = col; c <= neq; ++c) mat[r][c] -= f * mat[col][c];
        }
      }
      out.e.clear();
      for (std::size_t i = 0; i < neq; ++i) {
        mpq_class v = mat[i][neq] / mat[i][i];
        if (v.get_den() != 1) return std::nullopt;
        out.e.push_back(v.get_num().get_si());
      }
      auto poly = [&](long n) {
        mpq_class s = 0;
        for (std::size_t i = 0; i < neq; ++i) s += basis(n, static_cast<int>(i)) * static_cast<long>(out.e[i]);
        return s;
      };
      long from = first_n + static_cast<long>(len);
      while (from > first_n && poly(from - 1) == static_cast<long>(vals[static_cast<std::size_t>(from - 1 - first_n)])) --from;
      const long covered = first_n + static_cast<long>(len) - from;
      if (covered < static_cast<long>(neq + window - 1)) return std::nullopt;
      out.fitted = true;
      out.dim = d;
      out.poly_from = from;
      return out;
    }
    std::vector<long long> next;
    for (std::size_t i = 1; i < diff.size(); ++i) next.push_back(diff[i] - diff[i - 1]);
    diff = std::move(next);
  }
  return std::nullopt;
}

/// Degree of the eventual polynomial of a table by finite differences:
/// smallest k with Δ^(k+1) vanishing on the trailing window; -1 when the
/// tail is identically zero; nullopt when undetermined.
inline std::optional<int> eventual_degree(const std::vector<long long>& vals, std::size_t window) {
  if (vals.size() < window) return std::nullopt;
  std::vector<long long> diff = vals;
  for (int k = -1; diff.size() >= window; ++k) {
    bool zero = true;
    for (std::size_t i = diff.size() - window; i < diff.size(); ++i) zero = zero && diff[i] == 0;
    if (zero) return k;
    std::vector<long long> next;
    for (std::size_t i = 1; i < diff.size(); ++i) next.push_back(diff[i] - diff[i - 1]);
    diff = std::move(next);
  }
  return std::nullopt;
}

/// Certified initial degree of an element with respect to q.
template <class F>
struct InitialFormData {
  Poly<F> element;
  long c = 0;
  bool in_all_powers = false;  // membership held up to the truncation bound
  std::vector<std::uint32_t> certified_levels;
};

/// The pair (M, q) with caches of q^n M at each truncation level.
template <class F>
class Filtration {
public:
  using Space = Subspace<F>;

  Filtration(ModulePresentation<F> M, IdealOfDefinition<F> q, std::uint32_t input_degree = 0)
      : M_(std::move(M)), q_(std::move(q)) {
    const auto& policy = M_.ring().policy();
    start_ = policy.n_start ? policy.n_start
                            : std::max({M_.max_degree(), q_.max_degree(), input_degree}) + 4;
    policy.validate(start_);
  }

  Filtration(const Filtration& other)
      : M_(other.M_), q_(other.q_), start_(other.start_), sat_(other.sat_) {}

  const ModulePresentation<F>& module() const { return M_; }
  const IdealOfDefinition<F>& ideal() const { return q_; }
  const LocalRing<F>& ring() const { return M_.ring(); }
  const TruncationPolicy& policy() const { return M_.ring().policy(); }
  std::uint32_t start() const { return start_; }

  /// Lowest level for a quantity involving q^n. From s·n on, where
  /// m^s M ⊆ qM, the truncation contains nothing outside q^n M, so
  /// quotients by q^n M are exact there; lower levels can agree on a wrong
  /// value for several steps.
  std::uint32_t first_level(long n, std::uint32_t extra = 0) const {
    long lo = n > 0 ? n * static_cast<long>(saturation_exponent()) + 1 : 0;
    return std::max<std::uint32_t>({start_, static_cast<std::uint32_t>(std::max(0L, lo)), extra});
  }

  /// Smallest s with m^s M ⊆ qM: the first s at which l(M/(q + m^s)M)
  /// stops growing (Nakayama). Falls back to min_order when q is not
  /// m-primary on M within the truncation bound.
  std::uint32_t saturation_exponent() const {
    std::lock_guard lock(*mutex_);
    if (!sat_) {
      sat_ = q_.min_order();
      if (!q_.is_maximal()) {
        auto len = [&](std::uint32_t N) { return at(N).dim() - at(N).ideal(q_.gens()).dim(); };
        std::size_t prev = len(1);
        for (std::uint32_t N = 1; N < policy().n_max; ++N) {
          const std::size_t next = len(N + 1);
          if (next == prev) {
            sat_ = std::max<std::uint32_t>(N, 1);
            break;
          }
          prev = next;
        }
      }
    }
    return *sat_;
  }

  const TruncatedModule<F>& at(std::uint32_t N) const { return M_.at(N); }

  /// q^n M at level N (the whole module for n <= 0), by iterated
  /// multiplication q · q^(n-1) M.
  const Space& power(long n, std::uint32_t N) const {
    if (n < 0) n = 0;
    {
      std::lock_guard lock(*mutex_);
      auto it = powers_.find({n, N});
      if (it != powers_.end()) return *it->second;
    }
    const auto& T = at(N);
    Space s(T.field(), N);
    if (n == 0) s = T.full();
    else if (q_.is_maximal()) s = T.maximal_power(n);
    else if (n == 1) s = T.ideal(q_.gens());
    else s = T.product(q_.gens(), power(n - 1, N));
    std::lock_guard lock(*mutex_);
    auto it = powers_.emplace(std::make_pair(n, N), std::make_unique<Space>(std::move(s))).first;
    return *it->second;
  }

  /// q^n M at level N from the explicit products of n generators.
  Space power_by_products(long n, std::uint32_t N) const {
    const auto& T = at(N);
    if (n <= 0) return T.full();
    std::vector<Poly<F>> prods{Poly<F>::constant(T.field().one())};
    for (long k = 0; k < n; ++k) {
      std::vector<Poly<F>> next;
      for (std::size_t i = 0; i < prods.size(); ++i)
        for (const auto& g : q_.gens()) next.push_back(prods[i] * g);
      // dedupe identical products
      std::vector<Poly<F>> uniq;
      for (auto& p : next)
        if (std::find(uniq.begin(), uniq.end(), p) == uniq.end()) uniq.push_back(std::move(p));
      prods = std::move(uniq);
    }
    return T.ideal(prods);
  }

  /// (gens, q^n) M at level N.
  Space with_power(const std::vector<Poly<F>>& gens, long n, std::uint32_t N) const {
    Space s = power(n, N);
    s.insert_all(at(N).ideal(gens));
    return s;
  }

  /// l(M / q^n M), certified.
  StabilizedValue colength(long n) const {
    return stabilized([&](std::uint32_t N) { return static_cast<long long>(at(N).dim() - power(n, N).dim()); },
                      policy(), first_level(n));
  }

  /// First level N at which m^N M ⊆ q^n M. One agreement of l(M/(q^n+m^N)M)
  /// at consecutive N already proves this (Nakayama); the window is extra.
  std::uint32_t saturation_level(long n) const {
    auto v = colength(n);
    v.require("l(M/q^" + std::to_string(n) + "M)");
    return v.levels.front();
  }

  /// Checks that l(M/qM) is finite.
  bool validate() const { return colength(1).stable; }

private:
  ModulePresentation<F> M_;
  IdealOfDefinition<F> q_;
  std::uint32_t start_;
  mutable std::optional<std::uint32_t> sat_;
  mutable std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  mutable std::map<std::pair<long, std::uint32_t>, std::unique_ptr<Space>> powers_;
};

/// q^n M at level N; whole space for n <= 0.
template <class F>
Subspace<F> q_power_in_M(const Filtration<F>& filt, long n, std::uint32_t N) {
  return filt.power(n, N);
}

template <class F>
LengthTable hilbert_samuel_table(const Filtration<F>& filt, long n_max) {
  LengthTable t;
  for (long n = 1; n <= n_max; ++n) {
    t.n.push_back(n);
    t.values.push_back(filt.colength(n));
  }
  return t;
}

/// Hilbert-Samuel function n ↦ l(M/q^n M) for 1 <= n <= n_max and its
/// polynomial, when the trailing values determine it.
template <class F>
HilbertSamuelData hilbert_samuel(const Filtration<F>& filt, long n_max) {
  HilbertSamuelData out;
  out.table = hilbert_samuel_table(filt, n_max);
  if (!out.table.all_stable()) return out;
  if (auto fit = fit_hilbert_samuel(out.table.lengths(), 1, filt.policy().agree_window)) {
    fit->table = std::move(out.table);
    return *fit;
  }
  return out;
}

/// Hilbert-Samuel data with the n-range grown until the polynomial is pinned
/// down (at most `n_cap`).
template <class F>
HilbertSamuelData hilbert_samuel_adaptive(const Filtration<F>& filt, long n_min = 8, long n_cap = 40) {
  HilbertSamuelData hs;
  for (long n_max = n_min; n_max <= n_cap; n_max += 4) {
    hs = hilbert_samuel(filt, n_max);
    if (hs.fitted || !hs.table.all_stable()) return hs;
  }
  return hs;
}

/// dim [G_M(q)]_n = l(q^n M / q^(n+1) M), certified.
template <class F>
StabilizedValue form_module_piece(const Filtration<F>& filt, long n) {
  return stabilized(
      [&](std::uint32_t N) {
        return static_cast<long long>(filt.power(n, N).dim() - filt.power(n + 1, N).dim());
      },
      filt.policy(), filt.first_level(n + 1));
}

/// dim [G_M(q) / a* G_M(q)]_n = l(q^n M / (q^(n+1) M + Σ a_i q^(n-c_i) M)).
template <class F>
StabilizedValue form_quotient_piece(const Filtration<F>& filt, const std::vector<Poly<F>>& elems,
                                    const std::vector<long>& degrees, long n) {
  return stabilized(
      [&](std::uint32_t N) {
        const auto& T = filt.at(N);
        Subspace<F> s = filt.power(n + 1, N);
        for (std::size_t i = 0; i < elems.size(); ++i)
          s.insert_all(T.product({elems[i]}, filt.power(n - degrees[i], N)));
        return static_cast<long long>(filt.power(n, N).dim() - s.dim());
      },
      filt.policy(), filt.first_level(n + 1));
}

/// Largest c with a ∈ q^c M (a viewed in M = A/J).
template <class F>
InitialFormData<F> initial_degree(const Filtration<F>& filt, const Poly<F>& a) {
  if (a.is_zero()) throw std::invalid_argument("initial degree of zero");
  InitialFormData<F> out;
  out.element = a;
  if (filt.ideal().is_maximal() && filt.module().relations().empty()) {
    out.c = a.ord().value();
    return out;
  }
  const auto& policy = filt.policy();
  const std::uint32_t ordmin = filt.ideal().min_order();
  // membership in q^c M is monotone decreasing in c; a ∈ q^0 M always
  for (long c = 1;; ++c) {
    if (static_cast<long>(ordmin) * c >= static_cast<long>(policy.n_max) - 1) {
      out.c = c - 1;
      out.in_all_powers = true;
      return out;
    }
    auto sat = filt.colength(c);
    if (!sat.stable) {
      out.c = c - 1;
      out.in_all_powers = true;
      return out;
    }
    auto member = stabilized(
        [&](std::uint32_t N) {
          const auto& T = filt.at(N);
          return filt.power(c, N).contains(T.to_vec(a)) ? 1LL : 0LL;
        },
        policy, sat.levels.front());
    if (!member.stable) {
      out.c = c - 1;
      out.in_all_powers = true;
      return out;
    }
    if (member.value == 0) {
      out.c = c - 1;
      out.certified_levels = member.levels;
      return out;
    }
  }
}

/// A sequence a_1..a_d with initial degrees c_i in G_A(q) and the derived
/// constants c = Π c_i, c̄ = Σ c_i, c̄_i = c̄ - c_i.
template <class F>
struct SequenceSpec {
  std::vector<Poly<F>> elems;
  std::vector<long> degrees;
  long c_prod = 1;
  long c_bar = 0;
  std::vector<long> c_bar_i;

  std::size_t size() const { return elems.size(); }

  static SequenceSpec with_degrees(std::vector<Poly<F>> elems, std::vector<long> degrees) {
    if (elems.size() != degrees.size()) throw std::invalid_argument("sequence/degree size mismatch");
    SequenceSpec s;
    s.elems = std::move(elems);
    s.degrees = std::move(degrees);
    for (long c : s.degrees) {
      s.c_prod *= c;
      s.c_bar += c;
    }
    for (long c : s.degrees) s.c_bar_i.push_back(s.c_bar - c);
    return s;
  }

  SequenceSpec prefix(std::size_t k) const {
    return with_degrees(std::vector<Poly<F>>(elems.begin(), elems.begin() + static_cast<std::ptrdiff_t>(k)),
                        std::vector<long>(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(k)));
  }
  SequenceSpec drop_first() const {
    return with_degrees(std::vector<Poly<F>>(elems.begin() + 1, elems.end()),
                        std::vector<long>(degrees.begin() + 1, degrees.end()));
  }
};

/// Builds a SequenceSpec whose degrees are initial degrees in G_A(q).
template <class F>
SequenceSpec<F> make_sequence(const Filtration<F>& ring_filt, std::vector<Poly<F>> elems) {
  std::vector<long> degrees;
  for (const auto& a : elems) {
    auto init = initial_degree(ring_filt, a);
    if (init.in_all_powers)
      throw stabilization_error("initial degree of " + ring_filt.ring().print(a) + " not determined");
    degrees.push_back(init.c);
  }
  return SequenceSpec<F>::with_degrees(std::move(elems), std::move(degrees));
}

/// dim [ b*G :_G a* / b*G ]_n realised as
///   ((∩_i (b, q^(n+c_i+1))M :_M a_i) ∩ (b, q^n)M) / (b, q^(n+1))M.
template <class F>
StabilizedValue graded_colon_dim(const Filtration<F>& filt, const std::vector<Poly<F>>& b,
                                 const SequenceSpec<F>& a, long n) {
  long cmax = 0;
  for (long c : a.degrees) cmax = std::max(cmax, c);
  return stabilized(
      [&](std::uint32_t N) {
        const auto& T = filt.at(N);
        Subspace<F> acc = filt.with_power(b, n, N);
        for (std::size_t i = 0; i < a.size(); ++i) {
          Subspace<F> col = T.colon(filt.with_power(b, n + a.degrees[i] + 1, N), a.elems[i]);
          acc = subspace_intersect(acc, col);
        }
        return static_cast<long long>(T.quotient_dim(acc, filt.with_power(b, n + 1, N)));
      },
      filt.policy(), filt.first_level(n + cmax + 1));
}

}  // namespace formring
