#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "formring/field.hpp"

namespace formring {

/// Column key of a sparse vector. Low 40 bits: monomial index; bits 40..55:
/// summand index inside a direct sum; bit 63 is reserved for the augmented
/// half used by kernels and intersections.
using Key = std::uint64_t;

inline constexpr Key kSummandShift = 40;
inline constexpr Key kMonomialMask = (Key{1} << kSummandShift) - 1;
inline constexpr Key kTagBit = Key{1} << 63;

inline constexpr Key make_key(std::uint64_t summand, std::uint64_t mono) {
  return (summand << kSummandShift) | mono;
}
inline constexpr std::uint64_t key_summand(Key k) { return (k & ~kTagBit) >> kSummandShift; }
inline constexpr std::uint64_t key_monomial(Key k) { return k & kMonomialMask; }

template <class S>
using SparseVec = std::vector<std::pair<Key, S>>;

namespace detail {

template <class S>
SparseVec<S> axpy(const SparseVec<S>& x, const S& a, const SparseVec<S>& y) {
  // x + a*y
  SparseVec<S> out;
  out.reserve(x.size() + y.size());
  auto i = x.begin(), j = y.begin();
  while (i != x.end() || j != y.end()) {
    if (j == y.end() || (i != x.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == x.end() || j->first < i->first) {
      out.emplace_back(j->first, a * j->second);
      ++j;
    } else {
      S c = i->second + a * j->second;
      if (!is_zero(c)) out.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class S>
void scale(SparseVec<S>& v, const S& a) {
  for (auto& e : v) e.second = a * e.second;
}

}  // namespace detail

/// A k-subspace of a coordinate space, held as an echelon basis: every row is
/// normalised so that its first (smallest-key) entry is 1, and no two rows
/// share that pivot key. `canonicalize()` upgrades to reduced echelon form.
///
/// This is the carrier for every ideal, submodule, cycle space and image in
/// the library; `level` records the truncation level of the ambient space.
template <class F>
class Subspace {
public:
  using scalar = typename F::value_type;
  using vec = SparseVec<scalar>;

  explicit Subspace(F field, std::uint32_t level = 0) : field_(std::move(field)), level_(level) {}

  const F& field() const { return field_; }
  std::uint32_t level() const { return level_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<vec>& rows() const { return rows_; }
  bool is_pivot(Key k) const { return pivot_.count(k) != 0; }

  std::vector<Key> pivots() const {
    std::vector<Key> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.front().first);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Full normal form of v modulo this subspace: no entry of the result sits
  /// on a pivot key. `on_row(row_index, coefficient)` observes every row
  /// subtraction, which is how coordinates relative to the basis are read off.
  template <class OnRow>
  vec reduce_tracking(const vec& v, OnRow&& on_row) const {
    if (rows_.empty() || v.empty()) return v;
    std::map<Key, scalar> acc;
    for (const auto& e : v) acc.emplace(e.first, e.second);
    auto it = acc.begin();
    while (it != acc.end()) {
      auto p = pivot_.find(it->first);
      if (p == pivot_.end()) {
        ++it;
        continue;
      }
      const Key k = it->first;
      const scalar coef = it->second;
      on_row(p->second, coef);
      const vec& row = rows_[p->second];
      for (const auto& [rk, rv] : row) {
        auto jt = acc.find(rk);
        if (jt == acc.end()) {
          acc.emplace(rk, -(coef * rv));
        } else {
          jt->second -= coef * rv;
          if (is_zero(jt->second)) acc.erase(jt);
        }
      }
      it = acc.lower_bound(k);
    }
    return vec(acc.begin(), acc.end());
  }

  vec reduce(const vec& v) const {
    return reduce_tracking(v, [](std::size_t, const scalar&) {});
  }

  bool contains(const vec& v) const { return reduce(v).empty(); }

  /// Adds v to the span. Returns true when the dimension grew.
  bool insert(const vec& v) {
    vec r = reduce(v);
    if (r.empty()) return false;
    detail::scale(r, inverse(r.front().second));
    pivot_.emplace(r.front().first, rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

  void insert_all(const Subspace& other) {
    for (const auto& r : other.rows_) insert(r);
  }

  /// Reduced echelon form: each pivot key appears in exactly one row.
  void canonicalize() {
    for (auto& row : rows_) {
      vec tail(row.begin() + 1, row.end());
      Key pk = row.front().first;
      scalar one = row.front().second;
      tail = reduce(tail);
      row.clear();
      row.emplace_back(pk, one);
      row.insert(row.end(), tail.begin(), tail.end());
    }
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows_[a].front().first < rows_[b].front().first; });
    std::vector<vec> sorted;
    sorted.reserve(rows_.size());
    pivot_.clear();
    for (std::size_t i : order) {
      pivot_.emplace(rows_[i].front().first, sorted.size());
      sorted.push_back(std::move(rows_[i]));
    }
    rows_ = std::move(sorted);
  }

  /// Exact equality of spans.
  bool same_span(const Subspace& other) const {
    if (dim() != other.dim()) return false;
    for (const auto& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

  bool includes(const Subspace& other) const {
    for (const auto& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

private:
  F field_;
  std::uint32_t level_;
  std::vector<vec> rows_;
  std::unordered_map<Key, std::size_t> pivot_;
};

template <class F>
Subspace<F> subspace_sum(const Subspace<F>& a, const Subspace<F>& b) {
  if (a.dim() >= b.dim()) {
    Subspace<F> s = a;
    s.insert_all(b);
    return s;
  }
  Subspace<F> s = b;
  s.insert_all(a);
  return s;
}

/// Intersection by the Zassenhaus trick: rows (u | u) for u in a and (w | 0)
/// for w in b; the rows whose left half vanishes span a ∩ b on the right.
template <class F>
Subspace<F> subspace_intersect(const Subspace<F>& a, const Subspace<F>& b) {
  using vec = typename Subspace<F>::vec;
  Subspace<F> work(a.field(), a.level());
  for (const auto& u : a.rows()) {
    vec both = u;
    for (const auto& e : u) both.emplace_back(e.first | kTagBit, e.second);
    work.insert(both);
  }
  for (const auto& w : b.rows()) work.insert(w);
  Subspace<F> out(a.field(), a.level());
  for (const auto& r : work.rows()) {
    if (!(r.front().first & kTagBit)) continue;
    vec v;
    v.reserve(r.size());
    for (const auto& e : r) v.emplace_back(e.first & ~kTagBit, e.second);
    out.insert(v);
  }
  return out;
}

/// Kernel of the linear map sending domain[i] to images[i]: rows
/// (image | domain) are echelonised and the rows with a zero image half are
/// read off. Keys of both halves must stay below the tag bit.
template <class F>
Subspace<F> linear_kernel(const F& field, std::uint32_t level,
                          const std::vector<typename Subspace<F>::vec>& domain,
                          const std::vector<typename Subspace<F>::vec>& images) {
  using vec = typename Subspace<F>::vec;
  if (domain.size() != images.size()) throw std::invalid_argument("linear_kernel: size mismatch");
  Subspace<F> work(field, level);
  for (std::size_t i = 0; i < domain.size(); ++i) {
    vec row = images[i];
    for (const auto& e : domain[i]) row.emplace_back(e.first | kTagBit, e.second);
    work.insert(row);
  }
  Subspace<F> out(field, level);
  for (const auto& r : work.rows()) {
    if (!(r.front().first & kTagBit)) continue;
    vec v;
    v.reserve(r.size());
    for (const auto& e : r) v.emplace_back(e.first & ~kTagBit, e.second);
    out.insert(v);
  }
  return out;
}

}  // namespace formring
