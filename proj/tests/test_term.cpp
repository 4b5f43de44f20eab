#include <gtest/gtest.h>

#include "builders.hpp"
#include "gen.hpp"
#include "lsf/rewrite.hpp"
#include "lsf/term.hpp"
#include "oracle.hpp"

using namespace lsf;
using namespace lsf::testing;

namespace {

bool has_comp_of_shifts(const Subst& s);

bool has_comp_of_shifts(const Term& t) {
  if (const auto* a = t.as<App>()) return has_comp_of_shifts(a->fun) || has_comp_of_shifts(a->arg);
  if (const auto* l = t.as<Lam>()) return has_comp_of_shifts(l->body);
  if (const auto* c = t.as<Closure>()) return has_comp_of_shifts(c->body) || has_comp_of_shifts(c->subst);
  return false;
}

bool has_comp_of_shifts(const Subst& s) {
  if (const auto* c = s.as<Cons>()) return has_comp_of_shifts(c->head) || has_comp_of_shifts(c->tail);
  if (const auto* c = s.as<Comp>()) {
    if (c->first.is<Shift>() && c->second.is<Shift>()) return true;
    return has_comp_of_shifts(c->first) || has_comp_of_shifts(c->second);
  }
  return false;
}

}  // namespace

TEST(IsSimple, ShiftedUnknownIsSimple) { EXPECT_TRUE(is_simple(clos(mv("X"), shift(2)))); }

TEST(IsSimple, UnknownUnderConsIsNotSimple) { EXPECT_FALSE(is_simple(clos(mv("X"), cons(idx(1), shift(0))))); }

TEST(IsSimple, ShiftedUnknownUnderBinder) { EXPECT_TRUE(is_simple(lam(app(idx(2), clos(mv("X"), shift(1)))))); }

TEST(IsSimple, BareUnknownCountsAsShiftZero) { EXPECT_TRUE(is_simple(app(mv("X"), idx(1)))); }

TEST(IsSimple, UnknownUnderComposedShiftsIsNotLiterallySimple) {
  EXPECT_FALSE(is_simple(clos(mv("X"), comp(shift(1), shift(2)))));
}

TEST(IsSimpleSubst, Examples) {
  EXPECT_TRUE(is_simple_subst(MetaSubst{}));
  EXPECT_TRUE(is_simple_subst(bind({{"X", idx(1)}})));
  EXPECT_FALSE(is_simple_subst(bind({{"X", clos(mv("Y"), cons(idx(1), shift(0)))}})));
}

TEST(Graft, ReplacesLiterally) {
  EXPECT_EQ(graft(bind({{"X", idx(1)}}), clos(mv("X"), shift(3))), clos(idx(1), shift(3)));
  Term t = lam(app(mv("X"), clos(mv("Y"), shift(1))));
  EXPECT_EQ(graft(MetaSubst{}, t), t);
  EXPECT_EQ(graft(bind({{"X", app(idx(2), idx(1))}}), lam(mv("X"))), lam(app(idx(2), idx(1))));
}

TEST(Graft, ReachesInsideSubstitutions) {
  Term t = clos(idx(1), cons(mv("X"), comp(shift(1), cons(mv("X"), shift(0)))));
  Term expected = clos(idx(1), cons(idx(4), comp(shift(1), cons(idx(4), shift(0)))));
  EXPECT_EQ(graft(bind({{"X", idx(4)}}), t), expected);
}

TEST(MetaSubst, RejectsBindingMentioningItsDomain) {
  EXPECT_THROW(bind({{"X", mv("Y")}, {"Y", idx(1)}}), Error);
  EXPECT_THROW(bind({{"X", app(mv("X"), idx(1))}}), Error);
  EXPECT_NO_THROW(bind({{"X", mv("Z")}, {"Y", idx(1)}}));
}

TEST(CanonicalizeShifts, Examples) {
  EXPECT_EQ(canonicalize_shifts(comp(shift(1), shift(2))), shift(3));
  EXPECT_EQ(canonicalize_shifts(shift(0)), shift(0));
  Subst s = cons(idx(1), comp(shift(2), shift(0)));
  EXPECT_EQ(canonicalize_shifts(s), cons(idx(1), shift(2)));
  EXPECT_EQ(normalize_sigma(clos(idx(3), s)), normalize_sigma(clos(idx(3), canonicalize_shifts(s))));
}

TEST(CanonicalizeShifts, CollapsesNestedChains) {
  EXPECT_EQ(canonicalize_shifts(comp(comp(shift(1), shift(1)), comp(shift(0), shift(2)))), shift(4));
}

TEST(FreeMetavars, Examples) {
  EXPECT_TRUE(free_metavars(idx(3)).empty());
  EXPECT_EQ(free_metavars(clos(mv("X"), cons(mv("Y"), shift(0)))), (std::set<std::string>{"X", "Y"}));
  EXPECT_EQ(free_metavars(lam(mv("X"))), (std::set<std::string>{"X"}));
}

TEST(TermSize, Examples) {
  EXPECT_EQ(term_size(idx(1)), 1u);
  EXPECT_EQ(term_size(app(idx(1), idx(2))), 3u);
  EXPECT_EQ(term_size(clos(mv("X"), shift(2))), 3u);
}

TEST(PrecookTerm, TagsUnknownsWithBinderDepth) {
  EXPECT_EQ(precook_term(mv("X")), mv("X"));
  EXPECT_EQ(precook_term(lam(app(mv("X"), idx(1)))), lam(app(clos(mv("X"), shift(1)), idx(1))));
  EXPECT_EQ(precook_term(lam(lam(idx(2)))), lam(lam(idx(2))));
  EXPECT_THROW(precook_term(clos(idx(1), shift(1))), Error);
}

TEST(RenderPath, Format) {
  EXPECT_EQ(render_path({}), "ε");
  EXPECT_EQ(render_path({0, 1, 1}), "0.1.1");
}

class TermProperties : public ::testing::Test {
 protected:
  Generator gen{20240611};

  MetaSubst random_theta(const TypedTerm& tt) {
    MetaSubst::Map m;
    for (const auto& [name, sort] : tt.metas) {
      if (gen.chance(60)) {
        Generator inner(gen.rng()());
        TypedTerm b = inner.typed_term(8, false);
        m.emplace(name, b.term);
      }
    }
    return MetaSubst(std::move(m));
  }
};

TEST_F(TermProperties, GraftIsIdempotentAndMatchesNaiveReplacement) {
  for (int i = 0; i < 500; ++i) {
    TypedTerm tt = gen.typed_term(30);
    MetaSubst theta = random_theta(tt);
    Term once = graft(theta, tt.term);
    EXPECT_EQ(once, naive_graft(theta, tt.term));
    EXPECT_EQ(graft(theta, once), once);
  }
}

TEST_F(TermProperties, FreeMetavarsOfGraft) {
  for (int i = 0; i < 500; ++i) {
    TypedTerm tt = gen.typed_term(30);
    MetaSubst theta = random_theta(tt);
    std::set<std::string> bound;
    std::set<std::string> allowed;
    for (const auto& m : free_metavars(tt.term)) {
      if (const Term* b = theta.find(m)) {
        auto inner = free_metavars(*b);
        allowed.insert(inner.begin(), inner.end());
      } else {
        allowed.insert(m);
      }
    }
    for (const auto& m : free_metavars(graft(theta, tt.term))) EXPECT_TRUE(allowed.count(m)) << m;
  }
}

TEST_F(TermProperties, SimplicityIsInheritedBySubterms) {
  int simple = 0;
  for (int i = 0; i < 1000; ++i) {
    TypedTerm tt = gen.typed_term(25);
    if (!is_simple(tt.term)) continue;
    ++simple;
    for_each_subterm(tt.term, [](const Term& sub) { EXPECT_TRUE(is_simple(sub)); });
  }
  EXPECT_GT(simple, 50);
}

TEST_F(TermProperties, CanonicalizationRemovesShiftCompositionsAndKeepsNormalForm) {
  for (int i = 0; i < 500; ++i) {
    TypedTerm tt = gen.typed_term(40);
    Term c = canonicalize_shifts(tt.term);
    EXPECT_FALSE(has_comp_of_shifts(c));
    EXPECT_EQ(normalize_sigma(c), normalize_sigma(tt.term));
  }
}

TEST_F(TermProperties, SizeCountsConstructors) {
  for (int i = 0; i < 300; ++i) {
    TypedTerm tt = gen.typed_term(60);
    EXPECT_EQ(term_size(tt.term), count_nodes(tt.term));
  }
}
