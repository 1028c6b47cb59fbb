#pragma once

// Linear algebra in the truncated local algebra.
//
// The ambient ring is A = k[x_1..x_d] localised at the origin and the module
// is M = A/J. Every length we need is the length of a module supported at
// the origin, and such modules are computed inside
//
//     M_N = M / m^N M = k[x] / (J + m^N).
//
// Because V(J + m^N) is contained in the origin, the affine quotient
// k[x]/(J + m^N) already equals its localisation, so no standard-basis
// machinery is required: M_N is a finite-dimensional k-vector space and
// submodules of M_N are k-subspaces closed under multiplication. A length
// l(M/U) for an m-primary U equals dim M_N / U_N as soon as m^N M ⊆ U; the
// `stabilized` helper certifies that by recomputing at consecutive N.
//
// Elements of M_N are sparse vectors over monomial keys in normal form with
// respect to the reduced echelon basis of J_N. Pivots are the degrevlex-
// smallest monomial of each row, which makes the normal form of a monomial
// of degree e supported in degrees >= e; in particular m^n M_N is spanned by
// the standard monomials of degree >= n.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formring/monomial.hpp"
#include "formring/parse.hpp"
#include "formring/poly.hpp"
#include "formring/subspace.hpp"

namespace formring {

class stabilization_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// How truncation levels are walked when certifying a length.
struct TruncationPolicy {
  std::uint32_t n_start = 0;  // 0: max input degree + 4
  std::uint32_t n_step = 1;
  std::uint32_t n_max = 64;
  std::uint32_t agree_window = 3;

  void validate(std::uint32_t effective_start) const {
    if (effective_start < 2) throw std::invalid_argument("truncation start must be >= 2");
    if (n_step < 1) throw std::invalid_argument("truncation step must be >= 1");
    if (agree_window < 2) throw std::invalid_argument("agree window must be >= 2");
    if (n_max < effective_start + agree_window * n_step)
      throw std::invalid_argument("truncation maximum " + std::to_string(n_max) +
                                  " leaves no room for an agree window above " +
                                  std::to_string(effective_start));
  }
};

/// A length recomputed at increasing truncation levels. `stable` means the
/// last `agree_window` levels in `levels` produced the same value.
struct StabilizedValue {
  bool stable = false;
  long long value = 0;
  std::vector<std::uint32_t> levels;  // certifying levels (stable) or all tried levels
  std::vector<long long> trace;

  std::string certificate() const {
    std::ostringstream os;
    if (stable) {
      os << "N=";
      for (std::size_t i = 0; i < levels.size(); ++i) os << (i ? "," : "") << levels[i];
    } else {
      os << "NON-STABILIZED";
      if (!levels.empty()) os << "(N<=" << levels.back() << ")";
    }
    return os.str();
  }

  long long require(const std::string& what) const {
    if (!stable) throw stabilization_error(what + " did not stabilize: " + certificate());
    return value;
  }
};

/// Recomputes `f(N)` for N = first, first+step, ... until `agree_window`
/// consecutive values agree or `n_max` is exceeded.
template <class Fn>
StabilizedValue stabilized(Fn&& f, const TruncationPolicy& policy, std::uint32_t first) {
  StabilizedValue out;
  std::vector<std::uint32_t> tried;
  for (std::uint32_t N = first; N <= policy.n_max; N += policy.n_step) {
    tried.push_back(N);
    out.trace.push_back(f(N));
    const std::size_t w = policy.agree_window;
    if (out.trace.size() >= w) {
      bool agree = true;
      for (std::size_t i = out.trace.size() - w + 1; i < out.trace.size(); ++i)
        agree = agree && out.trace[i] == out.trace[i - 1];
      if (agree) {
        out.stable = true;
        out.value = out.trace.back();
        out.levels.assign(tried.end() - static_cast<std::ptrdiff_t>(w), tried.end());
        return out;
      }
    }
  }
  out.levels = std::move(tried);
  if (!out.trace.empty()) out.value = out.trace.back();
  return out;
}

/// The ambient local ring k[x_1..x_d]_(x): coefficient field, variable names
/// and the truncation policy. Immutable after construction.
template <class F>
class LocalRing {
public:
  LocalRing(F field, std::vector<std::string> vars, TruncationPolicy policy = {})
      : field_(std::move(field)), vars_(std::move(vars)), policy_(policy),
        index_(std::make_shared<MonomialIndex>(vars_.size())) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (vars_[i] == vars_[j]) throw std::invalid_argument("duplicate variable name '" + vars_[i] + "'");
  }

  const F& field() const { return field_; }
  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const MonomialIndex& index() const { return *index_; }
  const TruncationPolicy& policy() const { return policy_; }

  Poly<F> parse(std::string_view text) const { return parse_poly(text, vars_, field_); }
  std::string print(const Poly<F>& p) const { return p.to_string(vars_); }
  Poly<F> variable(std::size_t i) const { return Poly<F>::monomial(Monomial::variable(i), field_.one()); }
  Poly<F> constant(long c) const { return Poly<F>::constant(field_.from_integer(c)); }

private:
  F field_;
  std::vector<std::string> vars_;
  TruncationPolicy policy_;
  std::shared_ptr<MonomialIndex> index_;
};

template <class F>
using RingPtr = std::shared_ptr<const LocalRing<F>>;

/// M_N = k[x]/(J + m^N) with its normal-form machinery. All subspaces handed
/// to or returned from these methods live at this level and use summand 0.
template <class F>
class TruncatedModule {
public:
  using scalar = typename F::value_type;
  using vec = SparseVec<scalar>;
  using Space = Subspace<F>;

  TruncatedModule(RingPtr<F> ring, const std::vector<Poly<F>>& relations, std::uint32_t N)
      : ring_(std::move(ring)), N_(N), relations_(ring_->field(), N) {
    const auto& index = ring_->index();
    for (const auto& g : relations) {
      if (g.is_zero()) continue;
      const std::uint32_t o = g.ord().value();
      if (o >= N) continue;
      const std::uint64_t count = index.count_below(N - o);
      for (std::uint64_t k = 0; k < count; ++k) {
        const Monomial m = index.monomial(k);
        relations_.insert(multiply_raw(g, m, 0));
      }
    }
    relations_.canonicalize();
    const std::uint64_t total = index.count_below(N);
    for (std::uint64_t k = 0; k < total; ++k)
      if (!relations_.is_pivot(k)) basis_.push_back(k);
  }

  std::uint32_t level() const { return N_; }
  const LocalRing<F>& ring() const { return *ring_; }
  const F& field() const { return ring_->field(); }

  /// Standard monomials: the k-basis of M_N.
  const std::vector<Key>& basis_keys() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  const Space& relations() const { return relations_; }

  std::uint32_t degree_of(Key k) const { return ring_->index().monomial(key_monomial(k)).degree; }
  bool below_level(Key k) const { return key_monomial(k) < ring_->index().count_below(N_); }

  /// Normal form modulo J_N; entries in any summand are reduced separately.
  vec nf(const vec& v) const {
    if (relations_.dim() == 0 || v.empty()) return v;
    vec out;
    std::size_t i = 0;
    while (i < v.size()) {
      const std::uint64_t s = key_summand(v[i].first);
      vec part;
      while (i < v.size() && key_summand(v[i].first) == s) {
        part.emplace_back(key_monomial(v[i].first), v[i].second);
        ++i;
      }
      for (auto& e : relations_.reduce(part)) out.emplace_back(make_key(s, e.first), std::move(e.second));
    }
    return out;
  }

  vec to_vec(const Poly<F>& p, std::uint64_t summand = 0) const {
    vec v;
    for (const auto& [m, c] : p.terms())
      if (m.degree < N_) v.emplace_back(make_key(summand, ring_->index().index_of(m)), c);
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return nf(v);
  }

  /// Representative polynomial of the summand-s part of v.
  Poly<F> to_poly(const vec& v, std::uint64_t summand = 0) const {
    std::vector<typename Poly<F>::term> terms;
    for (const auto& [k, c] : v)
      if (!(k & kTagBit) && key_summand(k) == summand) terms.emplace_back(ring_->index().monomial(key_monomial(k)), c);
    return Poly<F>::from_terms(std::move(terms));
  }

  vec unit(Key k) const { return vec{{k, field().one()}}; }

  /// a * v in M_N, summand of every entry preserved.
  vec multiply(const Poly<F>& a, const vec& v) const {
    const auto& index = ring_->index();
    std::map<Key, scalar> acc;
    for (const auto& [k, c] : v) {
      const Monomial base = index.monomial(key_monomial(k));
      const std::uint64_t s = key_summand(k);
      for (const auto& [m, t] : a.terms()) {
        const Monomial prod = base * m;
        if (prod.degree >= N_) continue;
        const Key pk = make_key(s, index.index_of(prod));
        auto it = acc.find(pk);
        if (it == acc.end()) acc.emplace(pk, c * t);
        else it->second += c * t;
      }
    }
    vec out;
    for (auto& [k, c] : acc)
      if (!is_zero(c)) out.emplace_back(k, std::move(c));
    return nf(out);
  }

  Space zero() const { return Space(field(), N_); }

  Space full() const {
    Space s(field(), N_);
    for (Key k : basis_) s.insert(unit(k));
    return s;
  }

  /// m^n M_N; the whole space for n <= 0.
  Space maximal_power(long n) const {
    Space s(field(), N_);
    for (Key k : basis_)
      if (n <= 0 || degree_of(k) >= static_cast<std::uint64_t>(n)) s.insert(unit(k));
    return s;
  }

  /// Image of the ideal (gens) in M_N, i.e. (gens)M_N.
  Space ideal(const std::vector<Poly<F>>& gens) const {
    Space s(field(), N_);
    for (const auto& g : gens) {
      if (g.is_zero()) continue;
      const std::uint32_t o = g.ord().value();
      for (Key k : basis_) {
        if (degree_of(k) + o >= N_) continue;
        s.insert(multiply(g, unit(k)));
      }
    }
    return s;
  }

  /// (gens) * U for a submodule U.
  Space product(const std::vector<Poly<F>>& gens, const Space& U) const {
    Space s(field(), N_);
    for (const auto& g : gens)
      for (const auto& u : U.rows()) s.insert(multiply(g, u));
    return s;
  }

  /// U :_M a = {u in M_N : a u in U}, for a submodule U.
  ///
  /// M_N = U ⊕ span(C) with C the standard monomials that are not pivots of
  /// U, and a·U ⊆ U, so only the kernel of u ↦ a·u mod U on span(C) is new.
  Space colon(const Space& U, const Poly<F>& a) const {
    Space result = U;
    std::vector<vec> domain, images;
    const std::uint32_t o = a.is_zero() ? N_ : a.ord().value();
    for (Key k : basis_) {
      if (U.is_pivot(k)) continue;
      if (degree_of(k) + o >= N_) {
        result.insert(unit(k));
        continue;
      }
      domain.push_back(unit(k));
      images.push_back(U.reduce(multiply(a, unit(k))));
    }
    result.insert_all(linear_kernel(field(), N_, domain, images));
    return result;
  }

  /// Image of a vector of a higher truncation level under M_N' -> M_N.
  vec project(const vec& v) const {
    vec out;
    const std::uint64_t bound = ring_->index().count_below(N_);
    for (const auto& e : v)
      if (key_monomial(e.first) < bound) out.push_back(e);
    return nf(out);
  }

  Space project(const Space& U) const {
    Space s(field(), N_);
    for (const auto& r : U.rows()) s.insert(project(r));
    return s;
  }

  /// dim(big / small), after checking small ⊆ big.
  std::size_t quotient_dim(const Space& big, const Space& small) const {
    for (const auto& r : small.rows()) {
      if (!big.contains(r)) {
        std::ostringstream os;
        os << "quotient_dim: containment violated by basis vector with pivot monomial "
           << key_monomial(r.front().first) << " at level " << N_;
        throw std::logic_error(os.str());
      }
    }
    return big.dim() - small.dim();
  }

private:
  // x^m * g truncated at N, not reduced; used while building J_N itself.
  vec multiply_raw(const Poly<F>& g, const Monomial& m, std::uint64_t summand) const {
    vec v;
    for (const auto& [t, c] : g.terms()) {
      const Monomial prod = t * m;
      if (prod.degree < N_) v.emplace_back(make_key(summand, ring_->index().index_of(prod)), c);
    }
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return v;
  }

  RingPtr<F> ring_;
  std::uint32_t N_;
  Space relations_;
  std::vector<Key> basis_;
};

/// A cyclic module M = A/J together with a per-level cache of M_N. The
/// cache is a single-writer map with shared reads; returned references stay
/// valid for the lifetime of the presentation.
template <class F>
class ModulePresentation {
public:
  ModulePresentation(RingPtr<F> ring, std::vector<Poly<F>> relations)
      : ring_(std::move(ring)), relations_(std::move(relations)) {}

  ModulePresentation(const ModulePresentation& other) : ring_(other.ring_), relations_(other.relations_) {}

  const LocalRing<F>& ring() const { return *ring_; }
  RingPtr<F> ring_ptr() const { return ring_; }
  const std::vector<Poly<F>>& relations() const { return relations_; }

  /// True when some relation is a unit, i.e. M = 0.
  bool is_zero_module() const {
    for (const auto& g : relations_)
      if (!g.is_zero() && g.ord().value() == 0) return true;
    return false;
  }

  const TruncatedModule<F>& at(std::uint32_t N) const {
    std::lock_guard lock(*mutex_);
    auto it = cache_.find(N);
    if (it == cache_.end()) it = cache_.emplace(N, std::make_unique<TruncatedModule<F>>(ring_, relations_, N)).first;
    return *it->second;
  }

  /// M/(extra)M as a new presentation.
  ModulePresentation quotient_by(const std::vector<Poly<F>>& extra) const {
    std::vector<Poly<F>> rel = relations_;
    rel.insert(rel.end(), extra.begin(), extra.end());
    return ModulePresentation(ring_, std::move(rel));
  }

  std::uint32_t max_degree() const {
    std::uint32_t d = 0;
    for (const auto& g : relations_) d = std::max(d, g.max_degree());
    return d;
  }

private:
  RingPtr<F> ring_;
  std::vector<Poly<F>> relations_;
  mutable std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  mutable std::map<std::uint32_t, std::unique_ptr<TruncatedModule<F>>> cache_;
};

/// dim M/m^N M: the algebra basis count at level N.
template <class F>
std::size_t algebra_basis_dim(const ModulePresentation<F>& M, std::uint32_t N) {
  return M.at(N).dim();
}

}  // namespace formring
