#include <gtest/gtest.h>

#include "builders.hpp"
#include "gen.hpp"
#include "lsf/solver.hpp"
#include "lsf/transform.hpp"

using namespace lsf;
using namespace lsf::testing;

namespace {

// c : i, with X : i -> i over [c]; equation X c = c.
UnifProblem xc_eq_c() {
  MetaTable m;
  m.declare("X", Sort{{ty_i()}, arrow(ty_i(), ty_i())});
  return UnifProblem{{"i"}, {ty_i()}, m, app(mv("X"), idx(1)), idx(1), Mode::LambdaSigma};
}

// f : i -> i, c : i (c is Index 1), with X : i -> i -> i; equation (λy. X y c) c = f c.
UnifProblem under_binder() {
  Context ctx{ty_i(), arrow(ty_i(), ty_i())};
  MetaTable m;
  m.declare("X", Sort{ctx, arrow(ty_i(), arrow(ty_i(), ty_i()))});
  return UnifProblem{{"i"}, ctx, m, app(lam(app(mv("X"), idx(1), idx(2))), idx(1)), app(idx(2), idx(1)),
                     Mode::LambdaSigma};
}

}  // namespace

TEST(Precook, TagsUnknownsWithTheirDepth) {
  EXPECT_EQ(precook_term(lam(lam(app(mv("X"), idx(1))))), lam(lam(app(clos(mv("X"), shift(2)), idx(1)))));
  EXPECT_EQ(precook_term(app(mv("X"), idx(1))), app(mv("X"), idx(1)));
  UnifProblem p = xc_eq_c();
  p.lhs = app(lam(app(mv("X"), idx(1))), idx(1));
  UnifProblem q = precook(p);
  EXPECT_EQ(q.lhs, app(lam(app(clos(mv("X"), shift(1)), idx(1))), idx(1)));
  EXPECT_EQ(q.metas, p.metas);
}

TEST(Precook, RejectsExplicitSubstitutions) {
  UnifProblem p = xc_eq_c();
  p.lhs = clos(p.lhs, shift(0));
  EXPECT_THROW(precook(p), PreconditionViolated);
}

TEST(LiftingSubst, FreshNamesAndContexts) {
  UnifProblem p = under_binder();
  p.metas.declare("X'1", Sort{p.ctx, ty_i()});
  LiftingSubst ls = build_lifting_subst(p);
  ASSERT_EQ(ls.var_map.size(), 2u);
  EXPECT_EQ(ls.var_map[0], (CertificateEntry{"X", "X'2", 2}));
  EXPECT_EQ(ls.var_map[1], (CertificateEntry{"X'1", "X'1'3", 0}));
  EXPECT_EQ(*ls.subst.find("X"), lam(lam(mv("X'2"))));
  const Sort* y = ls.fresh_metas.find("X'2");
  ASSERT_NE(y, nullptr);
  // Y lives below the binders for the arguments, last argument innermost.
  EXPECT_EQ(y->ctx, (Context{ty_i(), ty_i(), ty_i(), arrow(ty_i(), ty_i())}));
  EXPECT_EQ(y->ty, ty_i());
}

TEST(LiftingSubst, OrderTooHigh) {
  UnifProblem p = xc_eq_c();
  p.metas.declare("H", Sort{{}, arrow(arrow(ty_i(), ty_i()), ty_i())});
  EXPECT_THROW(build_lifting_subst(p), OrderTooHigh);
}

TEST(ReduceProblem, ConstantArgument) {
  ReductionCertificate cert = reduce_problem(xc_eq_c());
  EXPECT_EQ(cert.target.mode, Mode::SigmaOnly);
  EXPECT_EQ(cert.target.lhs, clos(mv("X'1"), cons(idx(1), shift(0))));
  EXPECT_EQ(cert.target.rhs, idx(1));
  EXPECT_TRUE(validate_reduced_problem(cert).ok());
  ASSERT_NE(cert.by_source("X"), nullptr);
  EXPECT_EQ(cert.by_source("X")->fresh, "X'1");
  EXPECT_EQ(cert.by_fresh("X'1")->source, "X");
  EXPECT_EQ(cert.by_fresh("X"), nullptr);
}

TEST(ReduceProblem, UnknownUnderABinder) {
  ReductionCertificate cert = reduce_problem(under_binder());
  // Both arguments become c once the outer redex fires.
  EXPECT_EQ(cert.target.lhs, clos(mv("X'1"), cons(idx(1), cons(idx(1), shift(0)))));
  EXPECT_EQ(cert.target.rhs, app(idx(2), idx(1)));
  EXPECT_TRUE(validate_reduced_problem(cert).ok()) << validate_reduced_problem(cert).render();
}

TEST(ReduceProblem, RejectsNonAtomicEquations) {
  UnifProblem p = xc_eq_c();
  p.ctx = {arrow(ty_i(), ty_i())};
  p.lhs = idx(1);
  p.rhs = idx(1);
  p.metas = MetaTable{};
  EXPECT_THROW(reduce_problem(p), PreconditionViolated);
}

TEST(ValidateReducedProblem, FlagsHigherOrderUnknowns) {
  UnifProblem target = reduce_problem(xc_eq_c()).target;
  EXPECT_TRUE(validate_reduced_problem(target).ok());
  UnifProblem bad = target;
  bad.metas = MetaTable{};
  bad.metas.declare("X'1", Sort{{ty_i(), ty_i()}, arrow(ty_i(), ty_i())});
  EXPECT_FALSE(validate_reduced_problem(bad).ok());
}

TEST(ValidateReducedProblem, FlagsHigherOrderClosureArguments) {
  // Y[f . ^0] with f : i -> i as a closure argument.
  Context ctx{arrow(ty_i(), ty_i())};
  MetaTable m;
  m.declare("Y", Sort{{arrow(ty_i(), ty_i()), arrow(ty_i(), ty_i())}, ty_i()});
  m.declare("Z", Sort{ctx, ty_i()});
  UnifProblem p{{"i"}, ctx, m, clos(mv("Y"), cons(idx(1), shift(0))), mv("Z"), Mode::SigmaOnly};
  ValidationReport r = validate_reduced_problem(p);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.violations.empty());
}

TEST(LiftProject, Examples) {
  ReductionCertificate cert = reduce_problem(xc_eq_c());
  MetaSubst target = bind({{"X'1", idx(1)}});
  MetaSubst source = lift_solution(cert, target);
  EXPECT_EQ(*source.find("X"), lam(idx(1)));
  EXPECT_EQ(project_solution(cert, source), target);
  EXPECT_TRUE(check_solution(cert.source, source));
  EXPECT_TRUE(check_solution(cert.target, target));
  EXPECT_THROW(lift_solution(cert, bind({{"Q", idx(1)}})), UnknownMeta);
  EXPECT_THROW(project_solution(cert, bind({{"X", idx(1)}})), ShapeMismatch);
}

TEST(Agreement, Examples) {
  // ctx: c : i (1), f : i -> i (2); Y over [y, c, f].
  Context ctx{ty_i(), arrow(ty_i(), ty_i())};
  MetaTable m;
  m.declare("Y", Sort{{ty_i(), ty_i(), arrow(ty_i(), ty_i())}, ty_i()});
  Term a = app(idx(2), clos(mv("Y"), cons(idx(1), shift(0))));
  EXPECT_TRUE(check_sigma_agreement(ctx, m, a, bind({{"Y", idx(1)}})));
  AgreementResult r = sigma_agreement(ctx, m, a, bind({{"Y", app(idx(3), idx(2))}}));
  EXPECT_TRUE(r.agree);
  EXPECT_EQ(r.sigma_nf, app(idx(2), app(idx(2), idx(1))));
  for (const TraceStep& st : r.sigma_trace.steps) EXPECT_NE(st.rule, RuleId::Beta);
}

TEST(Agreement, Preconditions) {
  Context ctx{ty_i(), arrow(ty_i(), ty_i())};
  MetaTable m;
  m.declare("Y", Sort{{ty_i(), ty_i(), arrow(ty_i(), ty_i())}, ty_i()});
  m.declare("Z", Sort{{ty_i(), ty_i(), arrow(ty_i(), ty_i())}, ty_i()});
  Term a = app(idx(2), clos(mv("Y"), cons(idx(1), shift(0))));
  // Not simple.
  EXPECT_THROW(sigma_agreement(ctx, m, a, bind({{"Y", clos(mv("Z"), cons(idx(1), shift(0)))}})),
               PreconditionViolated);
  // Not normal.
  EXPECT_THROW(sigma_agreement(ctx, m, app(lam(idx(1)), idx(1)), MetaSubst{}), PreconditionViolated);
  // Higher-order closure argument.
  EXPECT_THROW(sigma_agreement(ctx, m, clos(mv("Y"), cons(idx(2), shift(0))), MetaSubst{}), PreconditionViolated);
  // Ill-typed binding.
  EXPECT_THROW(sigma_agreement(ctx, m, a, bind({{"Y", idx(3)}})), PreconditionViolated);
}

class TransformProperties : public ::testing::Test {
 protected:
  Generator gen{8675309};
};

TEST_F(TransformProperties, GeneratedAgreementInstancesAgree) {
  for (int i = 0; i < 300; ++i) {
    AgreementInstance inst = gen.agreement_instance();
    AgreementResult r = sigma_agreement(inst.ctx, inst.metas, inst.a, inst.theta);
    ASSERT_TRUE(r.agree) << "case " << i;
    for (const TraceStep& st : r.sigma_trace.steps) ASSERT_NE(st.rule, RuleId::Beta);
  }
}

TEST_F(TransformProperties, ReducedProblemsAreWellFormed) {
  for (int i = 0; i < 300; ++i) {
    UnifProblem p = gen.second_order_problem();
    ReductionCertificate cert = reduce_problem(p);
    ValidationReport r = validate_reduced_problem(cert);
    ASSERT_TRUE(r.ok()) << "case " << i << "\n" << r.render();
    EXPECT_EQ(cert.var_map.size(), p.metas.size());
    for (const Term* side : {&cert.target.lhs, &cert.target.rhs}) {
      for_each_subterm(*side, [](const Term& t) { ASSERT_FALSE(t.is<Lam>()); });
    }
  }
}

TEST_F(TransformProperties, LiftThenProjectIsIdentity) {
  for (int i = 0; i < 300; ++i) {
    ReductionCertificate cert = reduce_problem(gen.second_order_problem());
    MetaSubst::Map target;
    for (const auto& [name, sort] : cert.target.metas) {
      auto pool = enumerate_simple_terms(sort, MetaTable{}, SearchConfig{3, 3});
      if (pool.empty()) continue;
      target.emplace(name, pool[gen.below(static_cast<unsigned>(pool.size()))]);
    }
    MetaSubst theta(target);
    ASSERT_EQ(project_solution(cert, lift_solution(cert, theta)), theta);
  }
}

TEST_F(TransformProperties, SolutionsTransferBothWays) {
  int solvable = 0;
  int projected = 0;
  for (int i = 0; i < 120; ++i) {
    UnifProblem p = gen.second_order_problem();
    SearchOutcome o = decide_small_lambda(p, SearchConfig{3, 4});
    if (!solved(o)) continue;
    ++solvable;
    ReductionCertificate cert = reduce_problem(p);
    for (const MetaSubst& theta : solutions(o)) {
      MetaSubst down;
      try {
        down = project_solution(cert, theta);
      } catch (const ShapeMismatch&) {
        continue;  // eta-short binding
      }
      ++projected;
      ASSERT_TRUE(check_solution(cert.target, down)) << "case " << i;
    }
    SearchOutcome up = solve_sigma(cert.target, sigma_config_for(p, SearchConfig{3, 4}));
    ASSERT_TRUE(solved(up)) << "case " << i;
    for (const MetaSubst& theta : solutions(up)) ASSERT_TRUE(check_solution(p, lift_solution(cert, theta)));
  }
  EXPECT_GT(solvable, 10);
  EXPECT_GT(projected, 0);
}
