// Pure 1/^ encoding and the textbook lambda-sigma rules over it.

#include "lsf/rewrite.hpp"
#include "overloaded.hpp"

namespace lsf {

using detail::overloaded;

namespace {

Subst shift_chain(std::uint32_t k) {
  if (k == 0) return Subst::id();
  if (k == 1) return Subst::shift(1);
  return Subst::comp(Subst::shift(1), shift_chain(k - 1));
}

Subst to_pure(const Subst& s) {
  return std::visit(overloaded{
                        [](const Shift& x) { return shift_chain(x.k); },
                        [](const Cons& x) { return Subst::cons(to_pure(x.head), to_pure(x.tail)); },
                        [](const Comp& x) { return Subst::comp(to_pure(x.first), to_pure(x.second)); },
                    },
                    s.node());
}

Subst from_pure(const Subst& s) {
  return std::visit(overloaded{
                        [&](const Shift&) { return s; },
                        [](const Cons& x) { return Subst::cons(from_pure(x.head), from_pure(x.tail)); },
                        [](const Comp& x) {
                          Subst a = from_pure(x.first);
                          Subst b = from_pure(x.second);
                          if (a.is<Shift>() && b.is<Shift>()) return Subst::shift(a.as<Shift>()->k + b.as<Shift>()->k);
                          return Subst::comp(std::move(a), std::move(b));
                        },
                    },
                    s.node());
}

bool is_one(const Term& t) {
  const auto* i = t.as<Index>();
  return i && i->n == 1;
}

std::optional<Subst> pure_step(const Subst& s, RuleSet rs);

// Leftmost-outermost single step.
std::optional<Term> pure_step(const Term& t, RuleSet rs) {
  if (const auto* app = t.as<App>()) {
    if (rs == RuleSet::LambdaSigma) {
      if (const auto* lam = app->fun.as<Lam>()) return Term::closure(lam->body, Subst::cons(app->arg, Subst::id()));
    }
    if (auto f = pure_step(app->fun, rs)) return Term::app(*f, app->arg);
    if (auto a = pure_step(app->arg, rs)) return Term::app(app->fun, *a);
    return std::nullopt;
  }
  if (const auto* lam = t.as<Lam>()) {
    if (auto b = pure_step(lam->body, rs)) return Term::lam(*b);
    return std::nullopt;
  }
  const auto* c = t.as<Closure>();
  if (!c) return std::nullopt;
  const Subst& s = c->subst;
  if (s.is_shift(0)) return c->body;
  if (const auto* app = c->body.as<App>()) return Term::app(Term::closure(app->fun, s), Term::closure(app->arg, s));
  if (const auto* lam = c->body.as<Lam>()) {
    return Term::lam(Term::closure(lam->body, Subst::cons(Term::index(1), Subst::comp(s, Subst::shift(1)))));
  }
  if (const auto* inner = c->body.as<Closure>()) return Term::closure(inner->body, Subst::comp(inner->subst, s));
  if (is_one(c->body)) {
    if (const auto* cons = s.as<Cons>()) return cons->head;
  }
  if (auto b = pure_step(c->body, rs)) return Term::closure(*b, s);
  if (auto s2 = pure_step(s, rs)) return Term::closure(c->body, *s2);
  return std::nullopt;
}

std::optional<Subst> pure_step(const Subst& s, RuleSet rs) {
  if (const auto* cons = s.as<Cons>()) {
    if (is_one(cons->head) && cons->tail.is_shift(1)) return Subst::id();
    if (const auto* hd = cons->head.as<Closure>(); hd && is_one(hd->body)) {
      if (const auto* tl = cons->tail.as<Comp>(); tl && tl->first.is_shift(1) && tl->second == hd->subst) {
        return hd->subst;
      }
    }
    if (auto h = pure_step(cons->head, rs)) return Subst::cons(*h, cons->tail);
    if (auto tl = pure_step(cons->tail, rs)) return Subst::cons(cons->head, *tl);
    return std::nullopt;
  }
  const auto* c = s.as<Comp>();
  if (!c) return std::nullopt;
  if (c->first.is_shift(0)) return c->second;
  if (c->second.is_shift(0)) return c->first;
  if (c->first.is_shift(1)) {
    if (const auto* cons = c->second.as<Cons>()) return cons->tail;
  }
  if (const auto* inner = c->first.as<Comp>()) return Subst::comp(inner->first, Subst::comp(inner->second, c->second));
  if (const auto* cons = c->first.as<Cons>()) {
    return Subst::cons(Term::closure(cons->head, c->second), Subst::comp(cons->tail, c->second));
  }
  if (auto a = pure_step(c->first, rs)) return Subst::comp(*a, c->second);
  if (auto b = pure_step(c->second, rs)) return Subst::comp(c->first, *b);
  return std::nullopt;
}

}  // namespace

Term to_pure(const Term& t) {
  return std::visit(overloaded{
                        [](const Index& x) {
                          return x.n == 1 ? Term::index(1) : Term::closure(Term::index(1), shift_chain(x.n - 1));
                        },
                        [&](const Meta&) { return t; },
                        [](const App& x) { return Term::app(to_pure(x.fun), to_pure(x.arg)); },
                        [](const Lam& x) { return Term::lam(to_pure(x.body)); },
                        [](const Closure& x) { return Term::closure(to_pure(x.body), to_pure(x.subst)); },
                    },
                    t.node());
}

Term from_pure(const Term& t) {
  return std::visit(overloaded{
                        [&](const Index&) { return t; },
                        [&](const Meta&) { return t; },
                        [](const App& x) { return Term::app(from_pure(x.fun), from_pure(x.arg)); },
                        [](const Lam& x) { return Term::lam(from_pure(x.body)); },
                        [](const Closure& x) {
                          Term body = from_pure(x.body);
                          Subst s = from_pure(x.subst);
                          const auto* i = body.as<Index>();
                          const auto* sh = s.as<Shift>();
                          if (i && sh) return Term::index(i->n + sh->k);
                          return Term::closure(std::move(body), std::move(s));
                        },
                    },
                    t.node());
}

Term normalize_pure(const Term& t, RuleSet ruleset, std::uint64_t fuel) {
  Term current = t;
  std::uint64_t spent = 0;
  while (auto next = pure_step(current, ruleset)) {
    if (spent == fuel) throw FuelExhausted(fuel, RewriteTrace{current, {}, spent});
    ++spent;
    current = std::move(*next);
  }
  return current;
}

}  // namespace lsf
