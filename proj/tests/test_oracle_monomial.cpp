// Engine dimensions on monomial inputs against the combinatorial oracle.

#include <gtest/gtest.h>

#include "formring/filtration.hpp"
#include "formring/oracle.hpp"
#include "generators.hpp"

using namespace formring;
using Q = RationalField;
using oracle::MonomialIdeal;

namespace {

RingPtr<Q> ring(std::size_t nvars) {
  static const std::vector<std::string> names{"x", "y", "z"};
  return std::make_shared<const LocalRing<Q>>(Q{}, std::vector<std::string>(names.begin(), names.begin() + nvars));
}

// A monomial ideal that need not have finite colength.
MonomialIdeal random_ideal(gen::Rng& r, std::size_t nvars, int max_deg) {
  std::vector<std::vector<int>> gens;
  for (int k = r.uniform(1, 3); k > 0; --k) gens.push_back(gen::exponents(r, nvars, 1, max_deg));
  return MonomialIdeal(nvars, gens);
}

int assertions = 0;

}  // namespace

TEST(MonomialOracle, TruncatedQuotientDims) {
  gen::Rng r(101);
  for (std::size_t nv : {2u, 3u}) {
    auto R = ring(nv);
    for (int trial = 0; trial < 12; ++trial) {
      auto I = random_ideal(r, nv, 4);
      ModulePresentation<Q> M(R, gen::as_polys(I, Q{}));
      for (std::uint32_t N : {1u, 3u, 6u}) {
        EXPECT_EQ(static_cast<long long>(M.at(N).dim()), oracle::monomial_truncated_colength(I, static_cast<int>(N)));
        ++assertions;
      }
    }
  }
}

TEST(MonomialOracle, MaximalPowerColengths) {
  gen::Rng r(102);
  auto R = ring(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto I = random_ideal(r, 2, 4);
    Filtration<Q> f(ModulePresentation<Q>(R, gen::as_polys(I, Q{})), IdealOfDefinition<Q>::maximal(*R), 4);
    for (long n = 1; n <= 5; ++n) {
      auto len = f.colength(n);
      ASSERT_TRUE(len.stable);
      EXPECT_EQ(len.value, *oracle::monomial_colength(I + MonomialIdeal::maximal_power(2, static_cast<int>(n))));
      ++assertions;
    }
  }
}

TEST(MonomialOracle, MonomialIdealOfDefinition) {
  gen::Rng r(103);
  auto R = ring(2);
  for (int trial = 0; trial < 8; ++trial) {
    auto q = gen::artinian_monomial_ideal(r, 2, 3);
    auto I = random_ideal(r, 2, 5);
    Filtration<Q> f(ModulePresentation<Q>(R, gen::as_polys(I, Q{})),
                    IdealOfDefinition<Q>::generated_by(gen::as_polys(q, Q{})), 5);
    for (long n = 1; n <= 3; ++n) {
      auto len = f.colength(n);
      ASSERT_TRUE(len.stable);
      EXPECT_EQ(len.value, *oracle::monomial_colength(I + q.power(static_cast<int>(n))));
      ++assertions;
    }
  }
}

TEST(MonomialOracle, ThreeVariableColengths) {
  auto R = ring(3);
  MonomialIdeal I(3, {{1, 1, 0}, {0, 0, 2}});
  MonomialIdeal q(3, {{1, 0, 0}, {0, 2, 0}, {0, 0, 1}});
  Filtration<Q> f(ModulePresentation<Q>(R, gen::as_polys(I, Q{})),
                  IdealOfDefinition<Q>::generated_by(gen::as_polys(q, Q{})), 2);
  for (long n = 1; n <= 4; ++n) {
    EXPECT_EQ(f.colength(n).value, *oracle::monomial_colength(I + q.power(static_cast<int>(n))));
    ++assertions;
  }
}

TEST(MonomialOracle, ColonByMonomial) {
  gen::Rng r(104);
  auto R = ring(2);
  ModulePresentation<Q> A(R, {});
  const std::uint32_t N = 12;
  const auto& T = A.at(N);
  for (int trial = 0; trial < 20; ++trial) {
    auto U = gen::artinian_monomial_ideal(r, 2, 4);
    const auto e = gen::exponents(r, 2, 0, 3);
    auto colon = T.colon(T.ideal(gen::as_polys(U, Q{})), Poly<Q>::monomial(gen::monomial(e), mpq_class(1)));
    EXPECT_EQ(static_cast<long long>(T.dim() - colon.dim()),
              oracle::monomial_truncated_colength(U.colon(e), static_cast<int>(N)));
    ++assertions;
  }
}

TEST(MonomialOracle, HilbertSamuelMultiplicity) {
  // A/(x^a): e0(m) = a in dimension 1. A/(x^a y^b): e0 = a + b.
  auto R = ring(2);
  for (int a = 1; a <= 3; ++a)
    for (int b = 0; b <= 2; ++b) {
      MonomialIdeal I(2, {{a, b}});
      Filtration<Q> f(ModulePresentation<Q>(R, gen::as_polys(I, Q{})), IdealOfDefinition<Q>::maximal(*R), 4);
      auto hs = hilbert_samuel_adaptive(f);
      ASSERT_TRUE(hs.fitted);
      EXPECT_EQ(hs.dim, 1);
      EXPECT_EQ(hs.e0(), a + b);
      // the fitted polynomial reproduces the oracle counts from poly_from on
      for (std::size_t k = 0; k < hs.table.n.size(); ++k) {
        const long n = hs.table.n[k];
        EXPECT_EQ(hs.table.values[k].value,
                  *oracle::monomial_colength(I + MonomialIdeal::maximal_power(2, static_cast<int>(n))));
        ++assertions;
      }
      assertions += 2;
    }
}

TEST(MonomialOracle, AssertionCount) {
  // runs last in this binary; the acceptance suite counts its own
  EXPECT_GE(assertions, 100);
}
