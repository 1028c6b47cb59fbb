#include <gtest/gtest.h>

#include "formring/complexes.hpp"
#include "formring/oracle.hpp"
#include "generators.hpp"

using namespace formring;
using Q = RationalField;

namespace {

struct Input {
  RingPtr<Q> R;
  Filtration<Q> filt;
  SequenceSpec<Q> seq;
};

Input make_input(std::vector<std::string> vars, std::vector<std::string> J, std::vector<std::string> a,
                 std::vector<std::string> q = {}) {
  auto R = std::make_shared<const LocalRing<Q>>(Q{}, vars);
  std::vector<Poly<Q>> rel, elems, gens;
  for (auto& s : J) rel.push_back(R->parse(s));
  for (auto& s : a) elems.push_back(R->parse(s));
  for (auto& s : q) gens.push_back(R->parse(s));
  auto ideal = q.empty() ? IdealOfDefinition<Q>::maximal(*R) : IdealOfDefinition<Q>::generated_by(gens);
  std::uint32_t hint = 0;
  for (const auto& e : elems) hint = std::max(hint, e.max_degree());
  Filtration<Q> ambient(ModulePresentation<Q>(R, {}), ideal, hint);
  auto seq = make_sequence(ambient, elems);
  return {R, Filtration<Q>(ModulePresentation<Q>(R, rel), ideal, hint), seq};
}

std::vector<Input> small_corpus() {
  std::vector<Input> out;
  out.push_back(make_input({"x", "y"}, {}, {"x", "y"}));
  out.push_back(make_input({"x", "y"}, {}, {"y^2 - x^3", "y^2 + x^3"}));
  out.push_back(make_input({"x", "y"}, {"x^2"}, {"x + y^3"}));
  out.push_back(make_input({"x", "y"}, {"x*y"}, {"x + y^2", "x - y"}));
  out.push_back(make_input({"x", "y"}, {}, {"x^2", "y"}, {"x^2", "y"}));
  return out;
}

std::vector<long long> values(const std::vector<StabilizedValue>& vs) {
  std::vector<long long> out;
  for (const auto& v : vs) out.push_back(v.value);
  return out;
}

}  // namespace

TEST(Complexes, SubsetsAreLexicographic) {
  EXPECT_EQ(subsets_of_size(3, 2), (std::vector<std::vector<std::size_t>>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(subsets_of_size(4, 0).size(), 1u);
  EXPECT_EQ(subsets_of_size(4, 2).size(), 6u);
  EXPECT_TRUE(subsets_of_size(2, 3).empty());
}

TEST(Complexes, TermDimensionsOfCoordinateL) {
  auto in = make_input({"x", "y"}, {}, {"x", "y"});
  auto cx = build_L(in.filt, in.seq, 3, 8);
  EXPECT_EQ(cx.term_dim(0), 6u);
  EXPECT_EQ(cx.term_dim(1), 6u);
  EXPECT_EQ(cx.term_dim(2), 1u);
  EXPECT_EQ(cx.subsets(1).size(), 2u);
}

TEST(Complexes, NonPositiveNGivesZeroL) {
  auto in = make_input({"x", "y"}, {}, {"x", "y"});
  for (long n : {-2L, 0L}) {
    auto cx = build_L(in.filt, in.seq, n, 6);
    for (std::size_t i = 0; i <= 2; ++i) EXPECT_EQ(cx.term_dim(i), 0u);
    for (auto h : cx.subquotient_homology()) EXPECT_EQ(h, 0);
  }
}

TEST(Complexes, BoundarySquaresToZeroAndMapsRespectTerms) {
  for (const auto& in : small_corpus())
    for (long n : {1L, 3L, 5L})
      for (auto kind : {ComplexKind::LQuot, ComplexKind::KSub, ComplexKind::Koszul, ComplexKind::GradedKoszul}) {
        ComplexInstance<Q> cx(kind, in.filt, in.seq, n, 9);
        EXPECT_TRUE(cx.boundary_squares_to_zero()) << to_string(kind) << " n=" << n;
        EXPECT_TRUE(cx.maps_respect_terms()) << to_string(kind) << " n=" << n;
      }
  auto three = make_input({"x", "y", "z"}, {}, {"x", "y + z^2", "z"});
  ComplexInstance<Q> cx(ComplexKind::Koszul, three.filt, three.seq, 0, 5);
  EXPECT_TRUE(cx.boundary_squares_to_zero());
}

TEST(Complexes, KAndLSplitTheKoszulTerms) {
  for (const auto& in : small_corpus())
    for (long n : {1L, 2L, 4L}) {
      const std::uint32_t N = 9;
      ComplexInstance<Q> full(ComplexKind::Koszul, in.filt, in.seq, n, N);
      auto K = build_K_truncated(in.filt, in.seq, n, N);
      auto L = build_L(in.filt, in.seq, n, N);
      for (std::size_t i = 0; i <= in.seq.size(); ++i) {
        EXPECT_EQ(full.term_dim(i), K.term_dim(i) + L.term_dim(i));
        EXPECT_TRUE(L.bottom(i).same_span(K.top(i)));
        EXPECT_TRUE(full.top(i).includes(K.top(i)));
      }
    }
}

TEST(Complexes, AlternatingTermSumEqualsHomologySum) {
  for (const auto& in : small_corpus())
    for (long n = 1; n <= 6; ++n) {
      auto L = build_L(in.filt, in.seq, n, 10);
      auto h = L.subquotient_homology();
      long long s = 0;
      for (std::size_t i = 0; i < h.size(); ++i) s += (i % 2 ? -1 : 1) * h[i];
      EXPECT_EQ(s, L.alternating_term_sum()) << "n=" << n;
    }
}

TEST(Complexes, RegularCoordinatesHaveNoHigherL) {
  auto in = make_input({"x", "y"}, {}, {"x", "y"});
  for (long n = 1; n <= 7; ++n) {
    auto h = homology_lengths(in.filt, in.seq, n);
    ASSERT_TRUE(all_stable(h));
    EXPECT_EQ(h[0].value, 1);
    EXPECT_EQ(h[1].value, 0);
    EXPECT_EQ(h[2].value, 0);
    auto k = k_homology_lengths(in.filt, in.seq, n);
    ASSERT_TRUE(all_stable(k));
    EXPECT_EQ(k[1].value, 0);
    EXPECT_EQ(k[2].value, 0);
  }
}

TEST(Complexes, ZeroDivisorInitialFormGivesNonzeroL1) {
  auto in = make_input({"x", "y"}, {"x^2"}, {"x + y^3"});
  bool seen = false;
  for (long n = 1; n <= 6; ++n) {
    auto h = homology_lengths(in.filt, in.seq, n);
    ASSERT_TRUE(all_stable(h));
    seen = seen || h[1].value > 0;
  }
  EXPECT_TRUE(seen);
}

TEST(Complexes, KHomologyZeroMatchesDirectQuotient) {
  // H_0(a,q,A;n) = m^n / (x^2 m^(n-2) + y^3 m^(n-3)): a monomial count
  auto in = make_input({"x", "y"}, {}, {"x^2", "y^3"});
  oracle::MonomialIdeal m(2, {{1, 0}, {0, 1}});
  for (long n = 1; n <= 7; ++n) {
    auto k = k_homology_lengths(in.filt, in.seq, n);
    ASSERT_TRUE(all_stable(k));
    auto mn = m.power(static_cast<int>(n));
    auto sub = oracle::MonomialIdeal(2, {{2, 0}}) * m.power(static_cast<int>(std::max(0L, n - 2))) +
               oracle::MonomialIdeal(2, {{0, 3}}) * m.power(static_cast<int>(std::max(0L, n - 3)));
    sub = sub.intersect(mn);
    EXPECT_EQ(k[0].value, *oracle::monomial_colength(sub) - *oracle::monomial_colength(mn)) << "n=" << n;
  }
}

TEST(Complexes, LiftedHomologyAgreesWithCycleReference) {
  for (const auto& in : small_corpus())
    for (long n : {1L, 3L, 5L})
      for (auto kind : {ComplexKind::KSub, ComplexKind::Koszul}) {
        const std::uint32_t N = in.filt.first_level(n + 1);
        EXPECT_EQ(lifted_homology(kind, in.filt, in.seq, n, N), lifted_homology_by_cycles(kind, in.filt, in.seq, n, N))
            << to_string(kind) << " n=" << n;
      }
}

TEST(Complexes, SmallNKEqualsKoszul) {
  // n <= 0: every K-term is the whole module. For 0 < n <= min c_i only
  // K_0 = q^n M differs, which lowers H_0 by l(M/q^n M).
  auto in = make_input({"x", "y"}, {}, {"y^2 - x^3", "y^2 + x^3"});
  auto koszul = koszul_homology_lengths(in.filt, in.seq);
  ASSERT_TRUE(all_stable(koszul));
  EXPECT_EQ(koszul[0].value, 6);
  EXPECT_EQ(koszul[1].value, 0);
  EXPECT_EQ(koszul[2].value, 0);
  auto k0 = k_homology_lengths(in.filt, in.seq, 0);
  ASSERT_TRUE(all_stable(k0));
  EXPECT_EQ(values(koszul), values(k0));
  auto k2 = k_homology_lengths(in.filt, in.seq, 2);
  ASSERT_TRUE(all_stable(k2));
  EXPECT_EQ(k2[0].value, koszul[0].value - in.filt.colength(2).value);
  EXPECT_EQ(k2[1].value, koszul[1].value);
  EXPECT_EQ(k2[2].value, koszul[2].value);
}

TEST(Complexes, EulerCharacteristicsOfCorpus) {
  struct Case {
    std::vector<std::string> a;
    long long euler, chi;
  };
  const std::vector<Case> cases{{{"x", "y"}, 1, 0}, {{"y^2 - x^3", "y^2 + x^3"}, 4, 2}, {{"x^2", "y^3"}, 6, 0}};
  for (const auto& c : cases) {
    auto in = make_input({"x", "y"}, {}, c.a);
    const long n = in.seq.c_bar + 3;
    auto e = euler_L(in.filt, in.seq, n);
    ASSERT_TRUE(e.stable);
    EXPECT_EQ(e.value, c.euler) << c.a[0];
    auto chi = chi_K(in.filt, in.seq, n);
    ASSERT_TRUE(chi.stable);
    EXPECT_EQ(chi.value, c.chi) << c.a[0];
    // L_0 = M/aM once q^n M ⊆ aM
    EXPECT_EQ(homology_lengths(in.filt, in.seq, n)[0].value, c.euler + c.chi);
  }
}

TEST(Complexes, HomologyTableRecordsZeros) {
  auto in = make_input({"x", "y"}, {}, {"x", "y"});
  auto t = l_homology_table(in.filt, in.seq, 1, 3);
  EXPECT_EQ(t.kind, to_string(ComplexKind::LQuot));
  EXPECT_EQ(t.entries.size(), 9u);
  EXPECT_TRUE(t.at(2, 1).stable);
  EXPECT_EQ(t.at(2, 1).value, 0);
  EXPECT_GE(t.at(2, 1).levels.size(), 3u);
}

TEST(Complexes, DefaultRange) {
  auto in = make_input({"x", "y"}, {}, {"y^2 - x^3", "y"});
  EXPECT_EQ(default_n_max(in.seq), in.seq.c_bar + 4 + 8);
}

TEST(Complexes, DualFieldAgreement) {
  auto in = make_input({"x", "y"}, {"x*y"}, {"x + y^2", "x - y"});
  auto Rp = std::make_shared<const LocalRing<PrimeField>>(PrimeField(32003), std::vector<std::string>{"x", "y"});
  Filtration<PrimeField> amb(ModulePresentation<PrimeField>(Rp, {}), IdealOfDefinition<PrimeField>::maximal(*Rp), 2);
  Filtration<PrimeField> fp(ModulePresentation<PrimeField>(Rp, {Rp->parse("x*y")}),
                            IdealOfDefinition<PrimeField>::maximal(*Rp), 2);
  auto sp = make_sequence(amb, {Rp->parse("x + y^2"), Rp->parse("x - y")});
  for (long n = 1; n <= 5; ++n) {
    auto hq = homology_lengths(in.filt, in.seq, n);
    auto hp = homology_lengths(fp, sp, n);
    for (std::size_t i = 0; i < hq.size(); ++i) EXPECT_EQ(hq[i].value, hp[i].value) << "n=" << n << " i=" << i;
  }
}
