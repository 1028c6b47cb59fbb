#include <gtest/gtest.h>

#include "formring/artinian.hpp"
#include "formring/oracle.hpp"
#include "generators.hpp"

using namespace formring;
using Q = RationalField;

namespace {

RingPtr<Q> ring2() { return std::make_shared<const LocalRing<Q>>(Q{}, std::vector<std::string>{"x", "y"}); }

}  // namespace

TEST(Stabilized, CertifiesAfterWindowAgrees) {
  TruncationPolicy pol;
  auto v = stabilized([](std::uint32_t N) { return std::min<long long>(N, 7); }, pol, 3);
  ASSERT_TRUE(v.stable);
  EXPECT_EQ(v.value, 7);
  EXPECT_EQ(v.levels, (std::vector<std::uint32_t>{7, 8, 9}));
  EXPECT_EQ(v.certificate(), "N=7,8,9");
}

TEST(Stabilized, ReportsNonStabilization) {
  TruncationPolicy pol;
  pol.n_max = 12;
  auto v = stabilized([](std::uint32_t N) { return static_cast<long long>(N); }, pol, 3);
  EXPECT_FALSE(v.stable);
  EXPECT_EQ(v.certificate(), "NON-STABILIZED(N<=12)");
  EXPECT_THROW(v.require("growing"), stabilization_error);
}

TEST(Stabilized, PolicyValidation) {
  TruncationPolicy pol;
  EXPECT_NO_THROW(pol.validate(6));
  EXPECT_THROW(pol.validate(1), std::invalid_argument);
  pol.n_max = 7;
  EXPECT_THROW(pol.validate(6), std::invalid_argument);
  TruncationPolicy w;
  w.agree_window = 1;
  EXPECT_THROW(w.validate(6), std::invalid_argument);
}

TEST(TruncatedModule, DimensionOfPolynomialRing) {
  auto R = ring2();
  ModulePresentation<Q> A(R, {});
  for (std::uint32_t N = 1; N < 10; ++N) EXPECT_EQ(A.at(N).dim(), N * (N + 1) / 2);
}

TEST(TruncatedModule, MonomialQuotientMatchesOracle) {
  auto R = ring2();
  gen::Rng r(21);
  for (int trial = 0; trial < 25; ++trial) {
    auto I = gen::artinian_monomial_ideal(r, 2, 5);
    ModulePresentation<Q> M(R, gen::as_polys(I, Q{}));
    for (std::uint32_t N : {2u, 4u, 7u, 12u})
      EXPECT_EQ(static_cast<long long>(M.at(N).dim()), oracle::monomial_truncated_colength(I, static_cast<int>(N)));
  }
}

TEST(TruncatedModule, ColonByMonomialMatchesOracle) {
  auto R = ring2();
  gen::Rng r(22);
  for (int trial = 0; trial < 20; ++trial) {
    auto I = gen::artinian_monomial_ideal(r, 2, 5);
    auto U = gen::artinian_monomial_ideal(r, 2, 4);
    const auto e = gen::exponents(r, 2, 1, 2);
    ModulePresentation<Q> A(R, {});
    const std::uint32_t N = 14;
    const auto& T = A.at(N);
    auto colon = T.colon(T.ideal(gen::as_polys(U, Q{})), Poly<Q>::monomial(gen::monomial(e), mpq_class(1)));
    // dim A_N/(U : x^e) with U ⊇ m^N up to level N: U : x^e ⊇ m^(N - |e|)
    auto expected = oracle::monomial_truncated_colength(U.colon(e), static_cast<int>(N));
    EXPECT_EQ(static_cast<long long>(T.dim() - colon.dim()), expected);
    (void)I;
  }
}

TEST(TruncatedModule, RelationsReduceAndUnitKillsModule) {
  auto R = ring2();
  ModulePresentation<Q> cusp(R, {R->parse("y^2 - x^3")});
  const auto& T = cusp.at(8);
  EXPECT_TRUE(T.to_vec(R->parse("y^2 - x^3")).empty());
  EXPECT_EQ(T.to_vec(R->parse("y^2")), T.to_vec(R->parse("x^3")));
  EXPECT_FALSE(cusp.is_zero_module());
  EXPECT_TRUE(ModulePresentation<Q>(R, {R->parse("1 + x")}).is_zero_module());
  EXPECT_EQ(ModulePresentation<Q>(R, {R->parse("1 + x")}).at(6).dim(), 0u);
}

TEST(TruncatedModule, QuotientDimChecksContainment) {
  auto R = ring2();
  ModulePresentation<Q> A(R, {});
  const auto& T = A.at(6);
  auto big = T.maximal_power(1), small = T.maximal_power(3);
  EXPECT_EQ(T.quotient_dim(big, small), 2u + 3u);
  EXPECT_THROW(T.quotient_dim(small, big), std::logic_error);
}

TEST(TruncatedModule, ProjectionDropsHighDegrees) {
  auto R = ring2();
  ModulePresentation<Q> A(R, {});
  const auto& hi = A.at(9);
  const auto& lo = A.at(4);
  auto p = lo.project(hi.maximal_power(2));
  EXPECT_TRUE(p.same_span(lo.maximal_power(2)));
  EXPECT_EQ(lo.to_poly(lo.to_vec(R->parse("x + x^3 + x^3*y + x^5"))), R->parse("x + x^3"));
}

TEST(TruncatedModule, ProductAndIdealAgree) {
  auto R = ring2();
  ModulePresentation<Q> A(R, {R->parse("x*y")});
  const auto& T = A.at(9);
  auto q = T.ideal({R->parse("x^2"), R->parse("y")});
  auto q2 = T.product({R->parse("x^2"), R->parse("y")}, q);
  auto direct = T.ideal({R->parse("x^4"), R->parse("x^2*y"), R->parse("y^2")});
  EXPECT_TRUE(q2.same_span(direct));
}

TEST(TruncatedModule, AlgebraBasisDimIsModuleDim) {
  auto R = ring2();
  ModulePresentation<Q> M(R, {R->parse("x^2"), R->parse("y^3")});
  EXPECT_EQ(algebra_basis_dim(M, 10), 6u);
}

TEST(LocalRing, RejectsDuplicateVariables) {
  EXPECT_THROW(LocalRing<Q>(Q{}, {"x", "x"}), std::invalid_argument);
}
