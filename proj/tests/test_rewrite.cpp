#include <gtest/gtest.h>

#include <algorithm>

#include "builders.hpp"
#include "gen.hpp"
#include "lsf/rewrite.hpp"
#include "lsf/sort.hpp"
#include "oracle.hpp"

using namespace lsf;
using namespace lsf::testing;

namespace {

Term lo(const Term& t, RuleSet rs) {
  Strategy s = Strategy::leftmost_outermost();
  return normalize(t, rs, s);
}

bool has_rule(const std::vector<Redex>& rs, RuleId rule) {
  return std::any_of(rs.begin(), rs.end(), [&](const Redex& r) { return r.rule == rule; });
}

}  // namespace

TEST(Rewrite, RuleNames) {
  EXPECT_EQ(rule_name(RuleId::Beta), "Beta");
  EXPECT_EQ(rule_name(RuleId::VarConsHit), "VarConsHit");
  EXPECT_EQ(rule_name(RuleId::EtaConsShift), "EtaConsShift");
}

TEST(Rewrite, SingleRules) {
  EXPECT_EQ(contract(app(lam(idx(1)), idx(2)), {}, RuleId::Beta), clos(idx(1), cons(idx(2), shift(0))));
  EXPECT_EQ(contract(clos(idx(1), cons(idx(5), shift(3))), {}, RuleId::VarConsHit), idx(5));
  EXPECT_EQ(contract(clos(idx(3), cons(idx(5), shift(3))), {}, RuleId::VarConsSkip), clos(idx(2), shift(3)));
  EXPECT_EQ(contract(clos(idx(3), shift(2)), {}, RuleId::VarShift), idx(5));
  EXPECT_EQ(contract(clos(mv("X"), shift(0)), {}, RuleId::IdSub), mv("X"));
  EXPECT_EQ(contract(clos(mv("X"), comp(shift(1), shift(2))), {1}, RuleId::ShiftComp), clos(mv("X"), shift(3)));
  EXPECT_EQ(contract(clos(mv("X"), cons(idx(1), shift(1))), {1}, RuleId::EtaConsShift), clos(mv("X"), shift(0)));
  EXPECT_EQ(contract(clos(mv("X"), cons(idx(3), shift(3))), {1}, RuleId::EtaConsShift), clos(mv("X"), shift(2)));
  EXPECT_THROW(contract(idx(1), {}, RuleId::Beta), Error);
}

TEST(Rewrite, RedexesInPreOrder) {
  Term t = app(lam(clos(idx(1), shift(1))), clos(idx(2), shift(0)));
  auto rs = redexes(t, RuleSet::LambdaSigma);
  ASSERT_GE(rs.size(), 3u);
  EXPECT_EQ(rs[0].position, Path{});
  EXPECT_EQ(rs[0].rule, RuleId::Beta);
  EXPECT_FALSE(has_rule(redexes(t, RuleSet::SigmaOnly), RuleId::Beta));
}

TEST(Rewrite, AbstractionUnderShift) {
  // (λ2)[^1] -> λ(2[1 . (^1 o ^1)]) -> ... -> λ3
  EXPECT_EQ(normalize_sigma(clos(lam(idx(2)), shift(1))), lam(idx(3)));
}

TEST(Rewrite, BetaOnlyInLambdaSigma) {
  Term t = app(lam(app(idx(1), idx(1))), idx(3));
  EXPECT_EQ(normalize_sigma(t), t);
  EXPECT_EQ(normalize_lambda_sigma(t), app(idx(3), idx(3)));
}

TEST(Rewrite, MetaClosuresStayPut) {
  Term t = clos(clos(mv("X"), shift(1)), cons(idx(4), shift(2)));
  // X[^1 o (4 . ^2)] -> X[^2]
  EXPECT_EQ(normalize_sigma(t), clos(mv("X"), shift(2)));
  // X[1 . 2 . ^2] -> X[1 . ^1] -> X
  EXPECT_EQ(normalize_sigma(clos(mv("X"), cons(idx(1), cons(idx(2), shift(2))))), mv("X"));
}

TEST(Rewrite, FuelExhaustion) {
  // Omega has no normal form under beta.
  Term w = lam(app(idx(1), idx(1)));
  Term omega = app(w, w);
  EXPECT_THROW(normalize_lambda_sigma(omega, 1000), FuelExhausted);
  try {
    Strategy s = Strategy::leftmost_outermost();
    normalize_traced(omega, RuleSet::LambdaSigma, s, 50);
    FAIL();
  } catch (const FuelExhausted& e) {
    EXPECT_EQ(e.fuel(), 50u);
    EXPECT_EQ(e.partial().steps.size(), 50u);
    EXPECT_TRUE(replay(e.partial()));
  }
}

TEST(Rewrite, StepReportsRedex) {
  Strategy s = Strategy::leftmost_outermost();
  auto r = step(clos(idx(1), cons(idx(2), shift(0))), RuleSet::SigmaOnly, s);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->rule, RuleId::VarConsHit);
  EXPECT_EQ(r->term, idx(2));
  EXPECT_FALSE(step(idx(2), RuleSet::SigmaOnly, s).has_value());
}

TEST(Rewrite, SigmaEqualityModuloShiftSpelling) {
  EXPECT_TRUE(sigma_equal(clos(mv("X"), comp(shift(1), shift(1))), clos(mv("X"), shift(2))));
  EXPECT_FALSE(sigma_equal(clos(mv("X"), shift(1)), mv("X")));
  EXPECT_FALSE(sigma_equal(app(lam(idx(1)), idx(1)), idx(1)));
  EXPECT_TRUE(lambda_sigma_equal(app(lam(idx(1)), idx(1)), idx(1)));
}

TEST(PureEncoding, Examples) {
  EXPECT_EQ(to_pure(idx(1)), idx(1));
  EXPECT_EQ(to_pure(idx(3)), clos(idx(1), comp(shift(1), shift(1))));
  EXPECT_EQ(from_pure(to_pure(idx(3))), idx(3));
  EXPECT_EQ(from_pure(to_pure(clos(mv("X"), shift(2)))), clos(mv("X"), shift(2)));
}

class RewriteProperties : public ::testing::Test {
 protected:
  Generator gen{424242};
};

TEST_F(RewriteProperties, SigmaNormalFormMatchesEvaluator) {
  for (int i = 0; i < 1500; ++i) {
    TypedTerm tt = gen.typed_term(50);
    Term nf = normalize_sigma(tt.term);
    ASSERT_EQ(nf, eval_sigma(tt.term)) << "case " << i;
    ASSERT_TRUE(redexes(nf, RuleSet::SigmaOnly).empty());
  }
}

TEST_F(RewriteProperties, LambdaSigmaNormalFormMatchesEvaluator) {
  for (int i = 0; i < 1500; ++i) {
    TypedTerm tt = gen.typed_term(40);
    Term nf = normalize_lambda_sigma(tt.term);
    ASSERT_EQ(nf, eval_lambda_sigma(tt.term)) << "case " << i;
  }
}

TEST_F(RewriteProperties, NormalizationIsIdempotent) {
  for (int i = 0; i < 500; ++i) {
    TypedTerm tt = gen.typed_term(50);
    for (RuleSet rs : {RuleSet::SigmaOnly, RuleSet::LambdaSigma}) {
      Term nf = lo(tt.term, rs);
      ASSERT_EQ(lo(nf, rs), nf);
    }
  }
}

TEST_F(RewriteProperties, RandomStrategiesReachTheSameNormalForm) {
  for (int i = 0; i < 500; ++i) {
    TypedTerm tt = gen.typed_term(50);
    for (RuleSet rs : {RuleSet::SigmaOnly, RuleSet::LambdaSigma}) {
      Term expected = lo(tt.term, rs);
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Strategy s = Strategy::randomized(seed * 7919 + static_cast<std::uint64_t>(i));
        ASSERT_EQ(normalize(tt.term, rs, s), expected);
      }
    }
  }
}

TEST_F(RewriteProperties, EveryStepPreservesTheSort) {
  for (int i = 0; i < 300; ++i) {
    TypedTerm tt = gen.typed_term(40);
    Strategy s = Strategy::randomized(static_cast<std::uint64_t>(i));
    auto [nf, trace] = normalize_traced(tt.term, RuleSet::LambdaSigma, s);
    for (const TraceStep& st : trace.steps) {
      ASSERT_NO_THROW(check_term(tt.ctx, tt.metas, st.after, tt.type))
          << rule_name(st.rule) << " at " << render_path(st.position);
    }
  }
}

TEST_F(RewriteProperties, TracesReplay) {
  for (int i = 0; i < 300; ++i) {
    TypedTerm tt = gen.typed_term(40);
    Strategy s = Strategy::randomized(static_cast<std::uint64_t>(i) + 11);
    auto [nf, trace] = normalize_traced(tt.term, RuleSet::SigmaOnly, s);
    ASSERT_TRUE(replay(trace));
    ASSERT_EQ(trace.last(), nf);
    ASSERT_EQ(trace.fuel_spent, trace.steps.size());
    for (const TraceStep& st : trace.steps) ASSERT_NE(st.rule, RuleId::Beta);
  }
}

TEST_F(RewriteProperties, TamperedTraceFailsReplay) {
  int tampered = 0;
  for (int i = 0; i < 200 && tampered < 20; ++i) {
    TypedTerm tt = gen.typed_term(40);
    Strategy s = Strategy::leftmost_outermost();
    auto [nf, trace] = normalize_traced(tt.term, RuleSet::SigmaOnly, s);
    if (trace.steps.size() < 2) continue;
    std::swap(trace.steps.front().after, trace.steps.back().after);
    if (trace.steps.front().after == trace.steps.back().after) continue;
    EXPECT_FALSE(replay(trace));
    ++tampered;
  }
  EXPECT_GT(tampered, 0);
}

TEST_F(RewriteProperties, PureEncodingAgrees) {
  for (int i = 0; i < 800; ++i) {
    TypedTerm tt = gen.typed_term(30);
    for (RuleSet rs : {RuleSet::SigmaOnly, RuleSet::LambdaSigma}) {
      Term nf = lo(tt.term, rs);
      ASSERT_EQ(from_pure(to_pure(nf)), nf);
      ASSERT_EQ(from_pure(normalize_pure(to_pure(tt.term), rs)), nf) << "case " << i;
    }
  }
}
