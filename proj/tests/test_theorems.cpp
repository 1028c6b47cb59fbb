#include <gtest/gtest.h>

#include "formring/oracle.hpp"
#include "formring/theorems.hpp"

using namespace formring;
using Q = RationalField;

namespace {

RingPtr<Q> ring(std::vector<std::string> vars = {"x", "y"}) {
  return std::make_shared<const LocalRing<Q>>(Q{}, std::move(vars));
}

std::vector<Poly<Q>> polys(const RingPtr<Q>& R, const std::vector<std::string>& ss) {
  std::vector<Poly<Q>> out;
  for (const auto& s : ss) out.push_back(R->parse(s));
  return out;
}

Context<Q> context(const RingPtr<Q>& R, std::vector<std::string> J, std::vector<std::string> a,
                   std::vector<std::string> q = {}) {
  auto ideal = q.empty() ? IdealOfDefinition<Q>::maximal(*R) : IdealOfDefinition<Q>::generated_by(polys(R, q));
  return Context<Q>(ModulePresentation<Q>(R, polys(R, J)), ideal, polys(R, a));
}

bool flag(const Verdict& v, const char* key) { return v.witness.at(key).get<bool>(); }
long long num(const Verdict& v, const char* key) { return v.witness.at(key).get<long long>(); }

}  // namespace

TEST(RegularSequence, CoordinatesAreRegular) {
  auto R = ring();
  auto ctx = context(R, {}, {"x", "y"});
  auto v = check_regseq_form(ctx, ctx.seq());
  EXPECT_TRUE(v.holds) << v.summary;
  EXPECT_TRUE(flag(v, "form_regular"));
  EXPECT_TRUE(flag(v, "L1_vanishes"));
  EXPECT_TRUE(flag(v, "all_Li_vanish"));
  EXPECT_FALSE(v.certificates.empty());
}

TEST(RegularSequence, RepeatedTangentConeIsNotRegular) {
  auto R = ring();
  auto ctx = context(R, {}, {"y^2 - x^3", "y^2 + x^3"});
  auto v = check_regseq_form(ctx, ctx.seq());
  EXPECT_TRUE(v.holds) << v.summary;  // the three conditions agree
  EXPECT_FALSE(flag(v, "form_regular"));
  EXPECT_FALSE(flag(v, "L1_vanishes"));
  EXPECT_FALSE(v.witness.at("first_nonzero_L1_n").is_null());
}

TEST(RegularSequence, ZeroDivisorInitialForm) {
  auto R = ring();
  auto ctx = context(R, {"x^2"}, {"x + y^3"});
  auto v = check_regseq_form(ctx, ctx.seq());
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(flag(v, "form_regular"));
}

TEST(RegularSequence, ReesCriterion) {
  auto R = ring();
  auto reg = context(R, {}, {"x", "y"});
  auto v = check_rees_regseq(reg, reg.seq());
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(flag(v, "K_higher_homology_vanishes"));
  auto bad = context(R, {}, {"y^2 - x^3", "y^2 + x^3"});
  auto w = check_rees_regseq(bad, bad.seq());
  EXPECT_TRUE(w.holds);
  EXPECT_FALSE(flag(w, "form_regular"));
}

TEST(Lift, SolvableLinearCase) {
  auto R = ring();
  auto ctx = context(R, {}, {"x", "y"});
  auto b = R->parse("x + y + x^2");
  auto lift = lift_to_sequence(ctx, {b});
  ASSERT_TRUE(lift.solvable) << lift.failure;
  EXPECT_TRUE(lift.verdict.holds);
  EXPECT_EQ(lift.beta, (std::vector<long>{1}));
  EXPECT_EQ(lift.precision, (std::vector<long>{kLiftPrecision}));
  // b' = x·r_0 + y·r_1 with b - b' ∈ m^(1 + precision)
  const auto& r = lift.r[0];
  EXPECT_EQ(lift.b_prime[0], R->parse("x") * r[0] + R->parse("y") * r[1]);
  const auto diff = b - lift.b_prime[0];
  EXPECT_TRUE(diff.is_zero() || diff.ord().value() >= 1 + kLiftPrecision);
}

TEST(Lift, UnsolvableWhenInitialFormOutsideIdeal) {
  auto R = ring();
  auto ctx = context(R, {}, {"x^2", "y^2"});
  auto lift = lift_to_sequence(ctx, {R->parse("x*y")});
  EXPECT_FALSE(lift.solvable);
  EXPECT_FALSE(lift.failure.empty());
  // xy is not in (x^2, y^2) + m^3
  EXPECT_FALSE(oracle::brute_membership(Q{}, 2, R->parse("x*y"), polys(R, {"x^2", "y^2"}), 3));
}

TEST(VanishingFormula, HoldsOnRegularLift) {
  auto R = ring();
  auto ctx = context(R, {}, {"x", "y"});
  auto lift = lift_to_sequence(ctx, {R->parse("x + y + x^2")});
  auto v = check_vanishing_formula(ctx, lift);
  EXPECT_TRUE(v.holds) << v.summary;
  EXPECT_TRUE(flag(v, "higher_vanish"));
  EXPECT_EQ(num(v, "t"), 1);
}

TEST(VanishingFormula, RejectsUnsolvableLift) {
  auto R = ring();
  auto ctx = context(R, {}, {"x^2", "y^2"});
  auto lift = lift_to_sequence(ctx, {R->parse("x*y")});
  EXPECT_THROW(check_vanishing_formula(ctx, lift), hypothesis_error);
}

TEST(GradedKoszul, VanishesAboveDMinusT) {
  auto R = ring();
  auto ctx = context(R, {}, {"x", "y"});
  EXPECT_TRUE(check_graded_koszul_vanishing(ctx, 1).holds);
  EXPECT_TRUE(check_graded_koszul_vanishing(ctx, 2).holds);
}

TEST(Multiplicity, CuspPairIdentity) {
  auto R = ring();
  auto ctx = context(R, {}, {"y^2 - x^3", "y^2 + x^3"});
  auto v = check_multiplicity_identity(ctx);
  EXPECT_TRUE(v.holds) << v.summary;
  EXPECT_EQ(num(v, "l(M/aM)"), 6);
  EXPECT_EQ(num(v, "c"), 4);
  EXPECT_EQ(num(v, "e0(q;M)"), 1);
  EXPECT_EQ(num(v, "l(L_1)"), 2);
}

TEST(Multiplicity, NonMaximalIdeal) {
  auto R = ring();
  auto ctx = context(R, {}, {"x^2", "y"}, {"x^2", "y"});
  auto v = check_multiplicity_identity(ctx);
  EXPECT_TRUE(v.holds) << v.summary;
  EXPECT_EQ(num(v, "l(M/aM)"), 2);
  EXPECT_EQ(num(v, "e0(q;M)"), 2);
  EXPECT_EQ(num(v, "l(L_1)"), 0);
}

TEST(Multiplicity, DecompositionAndBounds) {
  auto R = ring();
  auto ctx = context(R, {}, {"y^2 - x^3", "y^2 + x^3"});
  auto [dec, v] = decompose_L1(ctx);
  EXPECT_TRUE(v.holds) << v.summary;
  EXPECT_EQ(dec.total, 2);
  EXPECT_EQ(dec.x_frak, 2);
  EXPECT_EQ(dec.ell_n, 0);
  EXPECT_TRUE(check_improved_bound(ctx).holds);
  auto u = check_upper_bound_cor54(ctx);
  EXPECT_TRUE(u.holds) << u.summary;
  EXPECT_FALSE(flag(u, "a_star_is_sop"));
}

TEST(Multiplicity, HypothesisErrors) {
  auto R = ring();
  auto not_sop = context(R, {}, {"x", "x^2"});
  EXPECT_THROW(check_multiplicity_identity(not_sop), hypothesis_error);
  auto too_short = context(R, {}, {"x"});
  EXPECT_THROW(check_multiplicity_identity(too_short), hypothesis_error);
}

TEST(Bezout, Corpus) {
  auto R = ring();
  struct Case {
    std::string f, g;
    long long e0, cd, t;
  };
  const std::vector<Case> cases{{"x", "y", 1, 1, 0},
                                {"y - x^2", "y", 2, 1, 1},
                                {"y^2 - x^3", "y^2 + x^3", 6, 4, 2},
                                {"y^2 - x^3", "y", 3, 2, 1}};
  for (const auto& c : cases) {
    auto f = R->parse(c.f), g = R->parse(c.g);
    auto rep = bezout_plane(R, f, g);
    EXPECT_TRUE(rep.verdict.holds) << rep.verdict.summary;
    EXPECT_EQ(rep.e0, c.e0) << c.f;
    EXPECT_EQ(rep.c * rep.d_deg, c.cd) << c.f;
    EXPECT_EQ(rep.t, c.t) << c.f;
    EXPECT_EQ(rep.slack, 0) << c.f;
    EXPECT_EQ(rep.e0, oracle::dense_truncated_colength(Q{}, 2, {f, g}, 20));
  }
}

TEST(Bezout, RejectsBadCurves) {
  auto R = ring();
  EXPECT_THROW(bezout_plane(R, R->parse("1 + x"), R->parse("y")), hypothesis_error);
  EXPECT_THROW(bezout_plane(R, R->parse("x"), R->parse("x*y")), hypothesis_error);
  EXPECT_THROW(bezout_plane(ring({"x", "y", "z"}), R->parse("x"), R->parse("y")), std::invalid_argument);
}

TEST(EulerCharacteristic, CuspPair) {
  auto R = ring();
  auto ctx = context(R, {}, {"y^2 - x^3", "y^2 + x^3"});
  auto e = check_euler_characteristics(ctx);
  EXPECT_TRUE(e.holds) << e.summary;
  EXPECT_EQ(num(e, "euler_L_stable"), 4);
  EXPECT_EQ(num(e, "chi_stable"), 2);
  auto c = check_chi_bounds(ctx);
  EXPECT_TRUE(c.holds) << c.summary;
  EXPECT_EQ(num(c, "chi"), 2);
  EXPECT_TRUE(flag(c, "cohen_macaulay"));
  EXPECT_TRUE(check_lemma61(ctx).holds);
}

TEST(EulerCharacteristic, NonCohenMacaulayIsStrict) {
  auto R = ring();
  auto ctx = context(R, {"x^2*y", "x^3"}, {"y"});
  auto c = check_chi_bounds(ctx);
  EXPECT_TRUE(c.holds) << c.summary;
  EXPECT_FALSE(flag(c, "cohen_macaulay"));
  EXPECT_LT(num(c, "chi"), num(c, "l(L_1)"));
}

TEST(Monotonicity, DomainEquality) {
  auto R = ring();
  auto ctx = context(R, {}, {"y^2 - x^3"});
  auto v = check_euler_monotonicity(ctx);
  EXPECT_TRUE(v.holds) << v.summary;
  EXPECT_EQ(num(v, "lhs"), 2);
  EXPECT_EQ(num(v, "rhs"), 2);
  EXPECT_TRUE(flag(v, "degree_criterion"));
}

TEST(Monotonicity, StrictOnZeroDivisorForm) {
  auto R = ring();
  auto ctx = context(R, {"x*y"}, {"x + y^2"});
  auto v = check_euler_monotonicity(ctx);
  EXPECT_TRUE(v.holds) << v.summary;
  EXPECT_LT(num(v, "lhs"), num(v, "rhs"));
  EXPECT_FALSE(flag(v, "degree_criterion"));
}

TEST(Monotonicity, RequiresDimensionDrop) {
  auto R = ring();
  auto ctx = context(R, {"x"}, {"x + y^2"});  // acts as y^2 on M = k[y]
  EXPECT_NO_THROW(check_euler_monotonicity(ctx));
  auto bad = context(R, {"x"}, {"x"});  // a acts as 0
  EXPECT_THROW(check_euler_monotonicity(bad), hypothesis_error);
}

TEST(KernelCriterion, ParameterAndNonParameter) {
  auto R = ring();
  auto par = context(R, {}, {"y^2 - x^3"});
  auto v = check_remark65_kernel(par);
  EXPECT_TRUE(v.holds) << v.summary;
  EXPECT_TRUE(flag(v, "a_star_parameter"));
  auto non = context(R, {"x*y"}, {"x + y^2"});
  auto w = check_remark65_kernel(non);
  EXPECT_TRUE(w.holds) << w.summary;
  EXPECT_FALSE(flag(w, "a_star_parameter"));
  EXPECT_EQ(num(w, "kernel_degree"), 0);
}

TEST(Verdict, CertifyRecordsAndRequires) {
  Verdict v;
  StabilizedValue ok;
  ok.stable = true;
  ok.value = 3;
  ok.levels = {5, 6, 7};
  v.certify("thing", ok);
  ASSERT_EQ(v.certificates.size(), 1u);
  EXPECT_EQ(v.certificates[0], "thing: N=5,6,7");
  StabilizedValue bad;
  EXPECT_THROW(v.certify("other", bad), stabilization_error);
}

TEST(Helpers, TailValue) {
  EXPECT_EQ(tail_value({1, 2, 2, 2}, 3), 2);
  EXPECT_FALSE(tail_value({1, 2, 3, 3}, 3));
  EXPECT_FALSE(tail_value({2, 2}, 3));
}
