#pragma once

// The Koszul complex K(a; M) and its filtered pieces at a fixed n:
//
//   K_i(a,q,M;n) = ⊕_{|S|=i} q^(n-c_S) M        (subcomplex)
//   L_i(a,q,M;n) = ⊕_{|S|=i} M / q^(n-c_S) M    (quotient complex)
//   [K(a*; G_M(q))]_n with terms ⊕ q^(n-c_S)M / q^(n-c_S+1)M
//
// with c_S = Σ_{j∈S} c_j and e_S ↦ Σ_k (-1)^(k+1) a_{j_k} e_{S∖j_k}.
//
// Every term is a subquotient Top/Bottom of ⊕_S M_N (summand index in the
// key). Finite-length complexes (L and the graded one) are exact at a
// saturated level N. K and the full Koszul complex have infinite-length
// terms; their cycles are computed at a raised level N' and projected back
// to N, since the kernel computed naively at N picks up chains whose
// boundary merely falls into m^N.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "formring/filtration.hpp"

namespace formring {

enum class ComplexKind { Koszul, KSub, LQuot, GradedKoszul };

inline std::string to_string(ComplexKind k) {
  switch (k) {
    case ComplexKind::Koszul: return "KOSZUL";
    case ComplexKind::KSub: return "K_SUB";
    case ComplexKind::LQuot: return "L_QUOT";
    case ComplexKind::GradedKoszul: return "GRADED_KOSZUL";
  }
  return "?";
}

/// Margin used when cycles or colons of non-m-primary submodules are
/// computed at a raised level and projected back.
inline std::uint32_t lift_margin(std::uint32_t N) { return std::max<std::uint32_t>(4, N / 2); }

/// Subsets of {0..d-1} of size i in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t d, std::size_t i) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (cur.size() == i) {
      out.push_back(cur);
      return;
    }
    for (std::size_t j = from; j < d; ++j) {
      cur.push_back(j);
      self(self, j + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Re-keys a summand-0 vector into summand s.
template <class S>
SparseVec<S> into_summand(const SparseVec<S>& v, std::uint64_t s) {
  SparseVec<S> out;
  out.reserve(v.size());
  for (const auto& [k, c] : v) out.emplace_back(make_key(s, key_monomial(k)), c);
  return out;
}

template <class F>
class ComplexInstance {
public:
  using scalar = typename F::value_type;
  using vec = SparseVec<scalar>;
  using Space = Subspace<F>;

  ComplexInstance(ComplexKind kind, const Filtration<F>& filt, const SequenceSpec<F>& seq, long n,
                  std::uint32_t N)
      : kind_(kind), n_(n), module_(&filt.at(N)), elems_(seq.elems) {
    const std::size_t d = seq.size();
    for (std::size_t i = 0; i <= d; ++i) {
      subsets_.push_back(subsets_of_size(d, i));
      Space top(module_->field(), N), bottom(module_->field(), N);
      for (std::size_t s = 0; s < subsets_[i].size(); ++s) {
        long cs = 0;
        for (std::size_t j : subsets_[i][s]) cs += seq.degrees[j];
        const long k = n - cs;
        auto add = [&](Space& into, const Space& part) {
          for (const auto& r : part.rows()) into.insert(into_summand(r, s));
        };
        switch (kind) {
          case ComplexKind::Koszul: add(top, module_->full()); break;
          case ComplexKind::KSub: add(top, filt.power(k, N)); break;
          case ComplexKind::LQuot:
            add(top, module_->full());
            add(bottom, filt.power(k, N));
            break;
          case ComplexKind::GradedKoszul:
            add(top, filt.power(k, N));
            add(bottom, filt.power(k + 1, N));
            break;
        }
      }
      top_.push_back(std::move(top));
      bottom_.push_back(std::move(bottom));
    }
  }

  ComplexKind kind() const { return kind_; }
  long n() const { return n_; }
  std::uint32_t level() const { return module_->level(); }
  std::size_t length() const { return elems_.size(); }
  const std::vector<std::vector<std::size_t>>& subsets(std::size_t i) const { return subsets_[i]; }
  const Space& top(std::size_t i) const { return top_[i]; }
  const Space& bottom(std::size_t i) const { return bottom_[i]; }
  std::size_t term_dim(std::size_t i) const { return top_[i].dim() - bottom_[i].dim(); }

  /// ∂_i applied to a chain of homological degree i.
  vec boundary(std::size_t i, const vec& v) const {
    if (i == 0 || v.empty()) return {};
    std::map<Key, scalar> acc;
    std::size_t p = 0;
    while (p < v.size()) {
      const std::uint64_t s = key_summand(v[p].first);
      vec part;
      while (p < v.size() && key_summand(v[p].first) == s) part.push_back(v[p++]);
      const auto& S = subsets_[i][s];
      for (std::size_t k = 0; k < S.size(); ++k) {
        std::vector<std::size_t> face;
        for (std::size_t j = 0; j < S.size(); ++j)
          if (j != k) face.push_back(S[j]);
        const auto& targets = subsets_[i - 1];
        const std::uint64_t t = static_cast<std::uint64_t>(
            std::lower_bound(targets.begin(), targets.end(), face) - targets.begin());
        const bool negative = k % 2 == 1;
        for (const auto& [key, c] : module_->multiply(elems_[S[k]], part)) {
          const Key tk = make_key(t, key_monomial(key));
          auto it = acc.find(tk);
          const scalar val = negative ? scalar(-c) : c;
          if (it == acc.end()) acc.emplace(tk, val);
          else it->second += val;
        }
      }
    }
    vec out;
    for (auto& [k, c] : acc)
      if (!is_zero(c)) out.emplace_back(k, std::move(c));
    return out;
  }

  /// ∂_(i-1) ∘ ∂_i vanishes on the top of term i, exactly.
  bool boundary_squares_to_zero() const {
    for (std::size_t i = 2; i < top_.size(); ++i)
      for (const auto& r : top_[i].rows())
        if (!boundary(i - 1, boundary(i, r)).empty()) return false;
    return true;
  }

  /// ∂ maps top to top and bottom to bottom, so the subquotient complex is
  /// well defined.
  bool maps_respect_terms() const {
    for (std::size_t i = 1; i < top_.size(); ++i) {
      for (const auto& r : top_[i].rows())
        if (!top_[i - 1].contains(boundary(i, r))) return false;
      for (const auto& r : bottom_[i].rows())
        if (!bottom_[i - 1].contains(boundary(i, r))) return false;
    }
    return true;
  }

  /// Rows of top(i) spanning a complement of bottom(i).
  std::vector<vec> complement(std::size_t i) const {
    Space w = bottom_[i];
    std::vector<vec> out;
    for (const auto& r : top_[i].rows())
      if (w.insert(r)) out.push_back(r);
    return out;
  }

  /// Homology lengths of the subquotient complex at this level:
  /// l(H_i) = dim_i - rank ∂_i - rank ∂_(i+1).
  std::vector<long long> subquotient_homology() const {
    const std::size_t d = length();
    std::vector<long long> rank(d + 2, 0);
    for (std::size_t i = 1; i <= d; ++i) {
      Space img = bottom_[i - 1];
      const std::size_t base = img.dim();
      for (const auto& r : complement(i)) img.insert(boundary(i, r));
      rank[i] = static_cast<long long>(img.dim() - base);
    }
    std::vector<long long> h(d + 1);
    for (std::size_t i = 0; i <= d; ++i)
      h[i] = static_cast<long long>(term_dim(i)) - rank[i] - rank[i + 1];
    return h;
  }

  /// Cycles Z_i = ker ∂_i on top(i) (bottom must be zero).
  Space cycles(std::size_t i) const {
    if (i == 0) return top_[0];
    std::vector<vec> domain, images;
    for (const auto& r : top_[i].rows()) {
      domain.push_back(r);
      images.push_back(boundary(i, r));
    }
    return linear_kernel(module_->field(), level(), domain, images);
  }

  /// Boundaries B_i = ∂_(i+1)(top(i+1)).
  Space boundaries(std::size_t i) const {
    Space b(module_->field(), level());
    if (i + 1 < top_.size())
      for (const auto& r : top_[i + 1].rows()) b.insert(boundary(i + 1, r));
    return b;
  }

  /// Σ (-1)^i dim of the terms.
  long long alternating_term_sum() const {
    long long s = 0;
    for (std::size_t i = 0; i < top_.size(); ++i)
      s += (i % 2 ? -1 : 1) * static_cast<long long>(term_dim(i));
    return s;
  }

private:
  ComplexKind kind_;
  long n_;
  const TruncatedModule<F>* module_;
  std::vector<Poly<F>> elems_;
  std::vector<std::vector<std::vector<std::size_t>>> subsets_;
  std::vector<Space> top_, bottom_;
};

template <class F>
ComplexInstance<F> build_L(const Filtration<F>& filt, const SequenceSpec<F>& a, long n, std::uint32_t N) {
  return ComplexInstance<F>(ComplexKind::LQuot, filt, a, n, N);
}

template <class F>
ComplexInstance<F> build_K_truncated(const Filtration<F>& filt, const SequenceSpec<F>& a, long n,
                                     std::uint32_t N) {
  return ComplexInstance<F>(ComplexKind::KSub, filt, a, n, N);
}

/// Several quantities recomputed together at increasing levels; they share
/// one certificate.
template <class Fn>
std::vector<StabilizedValue> stabilized_many(Fn&& f, const TruncationPolicy& policy, std::uint32_t first,
                                             std::size_t count) {
  std::vector<std::vector<long long>> traces;
  std::vector<std::uint32_t> tried;
  std::vector<StabilizedValue> out(count);
  for (std::uint32_t N = first; N <= policy.n_max; N += policy.n_step) {
    tried.push_back(N);
    traces.push_back(f(N));
    const std::size_t w = policy.agree_window;
    if (traces.size() >= w) {
      bool agree = true;
      for (std::size_t i = traces.size() - w + 1; i < traces.size(); ++i) agree = agree && traces[i] == traces[i - 1];
      if (agree) {
        for (std::size_t k = 0; k < count; ++k) {
          out[k].stable = true;
          out[k].value = traces.back()[k];
          out[k].levels.assign(tried.end() - static_cast<std::ptrdiff_t>(w), tried.end());
          for (const auto& t : traces) out[k].trace.push_back(t[k]);
        }
        return out;
      }
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    out[k].levels = tried;
    for (const auto& t : traces) out[k].trace.push_back(t[k]);
    if (!traces.empty()) out[k].value = traces.back()[k];
  }
  return out;
}

/// Lowest level at which every term of the complex at n is visible.
template <class F>
std::uint32_t complex_first_level(const Filtration<F>& filt, long n) {
  return filt.first_level(n + 1);
}

/// l(L_i(a,q,M;n)) for i = 0..d, certified together.
template <class F>
std::vector<StabilizedValue> homology_lengths(const Filtration<F>& filt, const SequenceSpec<F>& a, long n) {
  return stabilized_many([&](std::uint32_t N) { return build_L(filt, a, n, N).subquotient_homology(); },
                         filt.policy(), complex_first_level(filt, n), a.size() + 1);
}

/// dim [H_i(a*; G_M(q))]_n for i = 0..d, certified together.
template <class F>
std::vector<StabilizedValue> graded_koszul_homology(const Filtration<F>& filt, const SequenceSpec<F>& a,
                                                    long n) {
  return stabilized_many(
      [&](std::uint32_t N) {
        return ComplexInstance<F>(ComplexKind::GradedKoszul, filt, a, n, N).subquotient_homology();
      },
      filt.policy(), complex_first_level(filt, n), a.size() + 1);
}

inline std::uint32_t lifted_level(std::uint32_t N, long c_bar) {
  return N + lift_margin(N) + static_cast<std::uint32_t>(std::max(0L, c_bar));
}

/// Homology of a complex whose terms have infinite length (K or the full
/// Koszul complex) at level N: cycles from level N + lift_margin(N) + c̄,
/// projected to N, modulo boundaries at N.
///
/// Every row of a term lies in one summand and the rows are in echelon
/// form, so the rows whose pivot has degree >= N span the kernel W of the
/// projection. Then dim proj(Z) = dim top(N) - (dim ∂top - dim ∂W), which
/// needs ranks only.
template <class F>
std::vector<long long> lifted_homology(ComplexKind kind, const Filtration<F>& filt, const SequenceSpec<F>& a,
                                       long n, std::uint32_t N) {
  const std::uint32_t Nh = lifted_level(N, a.c_bar);
  ComplexInstance<F> low(kind, filt, a, n, N);
  ComplexInstance<F> high(kind, filt, a, n, Nh);
  const auto& T = filt.at(N);
  std::vector<long long> h{static_cast<long long>(low.top(0).dim() - low.boundaries(0).dim())};
  for (std::size_t i = 1; i <= a.size(); ++i) {
    Subspace<F> img(T.field(), Nh);
    std::vector<const typename Subspace<F>::vec*> visible;
    for (const auto& r : high.top(i).rows()) {
      if (T.below_level(r.front().first)) visible.push_back(&r);
      else img.insert(high.boundary(i, r));
    }
    if (visible.size() != low.top(i).dim()) throw std::logic_error("lifted term does not project onto the term at N");
    const std::size_t base = img.dim();
    for (const auto* r : visible) img.insert(high.boundary(i, *r));
    const long long proj_cycles = static_cast<long long>(visible.size()) - static_cast<long long>(img.dim() - base);
    h.push_back(proj_cycles - static_cast<long long>(low.boundaries(i).dim()));
  }
  return h;
}

/// Reference version of lifted_homology: explicit cycle spaces and a
/// containment-checked quotient. Slower; used to cross-check.
template <class F>
std::vector<long long> lifted_homology_by_cycles(ComplexKind kind, const Filtration<F>& filt,
                                                 const SequenceSpec<F>& a, long n, std::uint32_t N) {
  ComplexInstance<F> low(kind, filt, a, n, N);
  ComplexInstance<F> high(kind, filt, a, n, lifted_level(N, a.c_bar));
  const auto& T = filt.at(N);
  std::vector<long long> h;
  for (std::size_t i = 0; i <= a.size(); ++i) {
    Subspace<F> z = i == 0 ? low.top(0) : T.project(high.cycles(i));
    h.push_back(static_cast<long long>(T.quotient_dim(z, low.boundaries(i))));
  }
  return h;
}

/// l(H_i(a,q,M;n)) of the subcomplex K, i = 0..d. Entries that fail to
/// stabilize are returned unstable (infinite length is possible).
template <class F>
std::vector<StabilizedValue> k_homology_lengths(const Filtration<F>& filt, const SequenceSpec<F>& a, long n) {
  return stabilized_many([&](std::uint32_t N) { return lifted_homology(ComplexKind::KSub, filt, a, n, N); },
                         filt.policy(), complex_first_level(filt, n), a.size() + 1);
}

/// l(H_i(a; M)) of the Koszul complex, i = 0..d.
template <class F>
std::vector<StabilizedValue> koszul_homology_lengths(const Filtration<F>& filt, const SequenceSpec<F>& a) {
  return stabilized_many([&](std::uint32_t N) { return lifted_homology(ComplexKind::Koszul, filt, a, 0, N); },
                         filt.policy(), filt.start(), a.size() + 1);
}

inline long long euler_sum(const std::vector<StabilizedValue>& h) {
  long long s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) s += (i % 2 ? -1 : 1) * h[i].value;
  return s;
}

inline bool all_stable(const std::vector<StabilizedValue>& h) {
  return std::all_of(h.begin(), h.end(), [](const StabilizedValue& v) { return v.stable; });
}

/// Σ (-1)^i l(L_i(a,q,M;n)).
template <class F>
StabilizedValue euler_L(const Filtration<F>& filt, const SequenceSpec<F>& a, long n) {
  auto h = homology_lengths(filt, a, n);
  StabilizedValue v = h.front();
  v.stable = all_stable(h);
  v.value = euler_sum(h);
  return v;
}

/// Σ (-1)^i l(H_i(a,q,M;n)), computed from the K-complex homology.
template <class F>
StabilizedValue chi_K(const Filtration<F>& filt, const SequenceSpec<F>& a, long n) {
  auto h = k_homology_lengths(filt, a, n);
  StabilizedValue v = h.front();
  v.stable = all_stable(h);
  v.value = euler_sum(h);
  return v;
}

/// (i, n) ↦ certified length for one complex kind.
struct HomologyTable {
  std::string kind;
  std::map<std::pair<long, std::size_t>, StabilizedValue> entries;  // (n, i)

  void put(long n, const std::vector<StabilizedValue>& h) {
    for (std::size_t i = 0; i < h.size(); ++i) entries[{n, i}] = h[i];
  }
  const StabilizedValue& at(long n, std::size_t i) const { return entries.at({n, i}); }
};

template <class F>
HomologyTable l_homology_table(const Filtration<F>& filt, const SequenceSpec<F>& a, long n_lo, long n_hi) {
  HomologyTable t{to_string(ComplexKind::LQuot), {}};
  for (long n = n_lo; n <= n_hi; ++n) t.put(n, homology_lengths(filt, a, n));
  return t;
}

template <class F>
HomologyTable k_homology_table(const Filtration<F>& filt, const SequenceSpec<F>& a, long n_lo, long n_hi) {
  HomologyTable t{to_string(ComplexKind::KSub), {}};
  for (long n = n_lo; n <= n_hi; ++n) t.put(n, k_homology_lengths(filt, a, n));
  return t;
}

/// Default n-range: 1 .. c̄ + 2d + 8.
template <class F>
long default_n_max(const SequenceSpec<F>& a) {
  return a.c_bar + 2 * static_cast<long>(a.size()) + 8;
}

/// (U :_M a) for a submodule U of M that need not be m-primary: colon at a
/// raised level, projected to N. `U_at(level)` builds U at any level.
template <class F, class Builder>
Subspace<F> lifted_colon(const Filtration<F>& filt, Builder&& U_at, const Poly<F>& a, std::uint32_t N) {
  const std::uint32_t Nh = N + lift_margin(N) + (a.is_zero() ? 0 : a.ord().value());
  const auto& high = filt.at(Nh);
  return filt.at(N).project(high.colon(U_at(Nh), a));
}

}  // namespace formring
