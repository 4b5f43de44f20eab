#include "lsf/rewrite.hpp"

#include <functional>

#include "overloaded.hpp"

namespace lsf {

using detail::overloaded;

std::string_view rule_name(RuleId rule) {
  switch (rule) {
    case RuleId::Beta: return "Beta";
    case RuleId::App: return "App";
    case RuleId::Abs: return "Abs";
    case RuleId::Clos: return "Clos";
    case RuleId::VarConsHit: return "VarConsHit";
    case RuleId::VarConsSkip: return "VarConsSkip";
    case RuleId::VarShift: return "VarShift";
    case RuleId::IdSub: return "IdSub";
    case RuleId::ShiftCons: return "ShiftCons";
    case RuleId::ShiftComp: return "ShiftComp";
    case RuleId::MapCons: return "MapCons";
    case RuleId::AssocComp: return "AssocComp";
    case RuleId::IdL: return "IdL";
    case RuleId::IdR: return "IdR";
    case RuleId::EtaConsShift: return "EtaConsShift";
  }
  return "?";
}

namespace {

// Rules applicable at the root of a term / substitution, in priority order.
void term_rules(const Term& t, RuleSet ruleset, std::vector<RuleId>& out) {
  if (const auto* app = t.as<App>()) {
    if (ruleset == RuleSet::LambdaSigma && app->fun.is<Lam>()) out.push_back(RuleId::Beta);
    return;
  }
  const auto* c = t.as<Closure>();
  if (!c) return;
  if (c->subst.is_shift(0)) out.push_back(RuleId::IdSub);
  std::visit(overloaded{
                 [&](const Index& x) {
                   if (c->subst.is<Cons>()) {
                     out.push_back(x.n == 1 ? RuleId::VarConsHit : RuleId::VarConsSkip);
                   } else if (c->subst.is<Shift>()) {
                     out.push_back(RuleId::VarShift);
                   }
                 },
                 [](const Meta&) {},
                 [&](const App&) { out.push_back(RuleId::App); },
                 [&](const Lam&) { out.push_back(RuleId::Abs); },
                 [&](const Closure&) { out.push_back(RuleId::Clos); },
             },
             c->body.node());
}

bool eta_cons_shift(const Cons& c) {
  if (const auto* idx = c.head.as<Index>()) {
    const auto* sh = c.tail.as<Shift>();
    return sh && sh->k == idx->n;
  }
  const auto* hd = c.head.as<Closure>();
  const auto* tl = c.tail.as<Comp>();
  if (!hd || !tl) return false;
  const auto* one = hd->body.as<Index>();
  return one && one->n == 1 && tl->first.is_shift(1) && hd->subst == tl->second;
}

void subst_rules(const Subst& s, std::vector<RuleId>& out) {
  if (const auto* c = s.as<Cons>()) {
    if (eta_cons_shift(*c)) out.push_back(RuleId::EtaConsShift);
    return;
  }
  const auto* c = s.as<Comp>();
  if (!c) return;
  if (c->first.is_shift(0)) out.push_back(RuleId::IdL);
  if (c->second.is_shift(0)) out.push_back(RuleId::IdR);
  if (c->first.is<Comp>()) out.push_back(RuleId::AssocComp);
  if (c->first.is<Cons>()) out.push_back(RuleId::MapCons);
  if (const auto* sh = c->first.as<Shift>(); sh && sh->k >= 1) {
    if (c->second.is<Cons>()) out.push_back(RuleId::ShiftCons);
    if (c->second.is<Shift>()) out.push_back(RuleId::ShiftComp);
    if (const auto* inner = c->second.as<Comp>(); inner && inner->first.is<Shift>()) {
      out.push_back(RuleId::ShiftComp);
    }
  }
}

[[noreturn]] void no_redex(RuleId rule) {
  throw Error("rule " + std::string(rule_name(rule)) + " does not apply at the given position");
}

Term apply_term_rule(const Term& t, RuleId rule) {
  if (rule == RuleId::Beta) {
    const auto* app = t.as<App>();
    const auto* lam = app ? app->fun.as<Lam>() : nullptr;
    if (!lam) no_redex(rule);
    return Term::closure(lam->body, Subst::cons(app->arg, Subst::id()));
  }
  const auto* c = t.as<Closure>();
  if (!c) no_redex(rule);
  const Subst& s = c->subst;
  switch (rule) {
    case RuleId::IdSub:
      if (!s.is_shift(0)) no_redex(rule);
      return c->body;
    case RuleId::App:
      if (const auto* app = c->body.as<App>()) {
        return Term::app(Term::closure(app->fun, s), Term::closure(app->arg, s));
      }
      break;
    case RuleId::Abs:
      if (const auto* lam = c->body.as<Lam>()) {
        return Term::lam(
            Term::closure(lam->body, Subst::cons(Term::index(1), Subst::comp(s, Subst::shift(1)))));
      }
      break;
    case RuleId::Clos:
      if (const auto* inner = c->body.as<Closure>()) {
        return Term::closure(inner->body, Subst::comp(inner->subst, s));
      }
      break;
    case RuleId::VarConsHit:
      if (const auto* idx = c->body.as<Index>(); idx && idx->n == 1) {
        if (const auto* cons = s.as<Cons>()) return cons->head;
      }
      break;
    case RuleId::VarConsSkip:
      if (const auto* idx = c->body.as<Index>(); idx && idx->n > 1) {
        if (const auto* cons = s.as<Cons>()) return Term::closure(Term::index(idx->n - 1), cons->tail);
      }
      break;
    case RuleId::VarShift:
      if (const auto* idx = c->body.as<Index>()) {
        if (const auto* sh = s.as<Shift>()) return Term::index(idx->n + sh->k);
      }
      break;
    default:
      break;
  }
  no_redex(rule);
}

Subst apply_subst_rule(const Subst& s, RuleId rule) {
  if (rule == RuleId::EtaConsShift) {
    const auto* c = s.as<Cons>();
    if (!c || !eta_cons_shift(*c)) no_redex(rule);
    if (const auto* idx = c->head.as<Index>()) return Subst::shift(idx->n - 1);
    return c->tail.as<Comp>()->second;
  }
  const auto* c = s.as<Comp>();
  if (!c) no_redex(rule);
  switch (rule) {
    case RuleId::IdL:
      if (c->first.is_shift(0)) return c->second;
      break;
    case RuleId::IdR:
      if (c->second.is_shift(0)) return c->first;
      break;
    case RuleId::AssocComp:
      if (const auto* inner = c->first.as<Comp>()) {
        return Subst::comp(inner->first, Subst::comp(inner->second, c->second));
      }
      break;
    case RuleId::MapCons:
      if (const auto* cons = c->first.as<Cons>()) {
        return Subst::cons(Term::closure(cons->head, c->second), Subst::comp(cons->tail, c->second));
      }
      break;
    case RuleId::ShiftCons:
      if (const auto* sh = c->first.as<Shift>(); sh && sh->k >= 1) {
        if (const auto* cons = c->second.as<Cons>()) {
          return sh->k == 1 ? cons->tail : Subst::comp(Subst::shift(sh->k - 1), cons->tail);
        }
      }
      break;
    case RuleId::ShiftComp:
      if (const auto* sh = c->first.as<Shift>(); sh && sh->k >= 1) {
        if (const auto* sh2 = c->second.as<Shift>()) return Subst::shift(sh->k + sh2->k);
        if (const auto* inner = c->second.as<Comp>()) {
          if (const auto* sh2 = inner->first.as<Shift>()) {
            return Subst::comp(Subst::shift(sh->k + sh2->k), inner->second);
          }
        }
      }
      break;
    default:
      break;
  }
  no_redex(rule);
}

// Pre-order walk over redexes; the visitor returns true to stop.
using RedexVisitor = std::function<bool(const Path&, RuleId)>;

bool walk_subst(const Subst& s, Path& path, RuleSet ruleset, const RedexVisitor& visit);

bool walk_term(const Term& t, Path& path, RuleSet ruleset, const RedexVisitor& visit) {
  std::vector<RuleId> rules;
  term_rules(t, ruleset, rules);
  for (RuleId r : rules) {
    if (visit(path, r)) return true;
  }
  auto child_term = [&](std::uint8_t i, const Term& c) {
    path.push_back(i);
    bool stop = walk_term(c, path, ruleset, visit);
    path.pop_back();
    return stop;
  };
  return std::visit(overloaded{
                        [](const Index&) { return false; },
                        [](const Meta&) { return false; },
                        [&](const App& x) { return child_term(0, x.fun) || child_term(1, x.arg); },
                        [&](const Lam& x) { return child_term(0, x.body); },
                        [&](const Closure& x) {
                          if (child_term(0, x.body)) return true;
                          path.push_back(1);
                          bool stop = walk_subst(x.subst, path, ruleset, visit);
                          path.pop_back();
                          return stop;
                        },
                    },
                    t.node());
}

bool walk_subst(const Subst& s, Path& path, RuleSet ruleset, const RedexVisitor& visit) {
  std::vector<RuleId> rules;
  subst_rules(s, rules);
  for (RuleId r : rules) {
    if (visit(path, r)) return true;
  }
  auto child_subst = [&](std::uint8_t i, const Subst& c) {
    path.push_back(i);
    bool stop = walk_subst(c, path, ruleset, visit);
    path.pop_back();
    return stop;
  };
  return std::visit(overloaded{
                        [](const Shift&) { return false; },
                        [&](const Cons& x) {
                          path.push_back(0);
                          bool stop = walk_term(x.head, path, ruleset, visit);
                          path.pop_back();
                          return stop || child_subst(1, x.tail);
                        },
                        [&](const Comp& x) { return child_subst(0, x.first) || child_subst(1, x.second); },
                    },
                    s.node());
}

Subst contract_subst(const Subst& s, const Path& pos, std::size_t depth, RuleId rule);

Term contract_term(const Term& t, const Path& pos, std::size_t depth, RuleId rule) {
  if (depth == pos.size()) return apply_term_rule(t, rule);
  const std::uint8_t i = pos[depth];
  return std::visit(overloaded{
                        [&](const Index&) -> Term { throw Error("position leaves the term"); },
                        [&](const Meta&) -> Term { throw Error("position leaves the term"); },
                        [&](const App& x) -> Term {
                          if (i == 0) return Term::app(contract_term(x.fun, pos, depth + 1, rule), x.arg);
                          return Term::app(x.fun, contract_term(x.arg, pos, depth + 1, rule));
                        },
                        [&](const Lam& x) -> Term {
                          if (i != 0) throw Error("position leaves the term");
                          return Term::lam(contract_term(x.body, pos, depth + 1, rule));
                        },
                        [&](const Closure& x) -> Term {
                          if (i == 0) return Term::closure(contract_term(x.body, pos, depth + 1, rule), x.subst);
                          return Term::closure(x.body, contract_subst(x.subst, pos, depth + 1, rule));
                        },
                    },
                    t.node());
}

Subst contract_subst(const Subst& s, const Path& pos, std::size_t depth, RuleId rule) {
  if (depth == pos.size()) return apply_subst_rule(s, rule);
  const std::uint8_t i = pos[depth];
  return std::visit(overloaded{
                        [&](const Shift&) -> Subst { throw Error("position leaves the term"); },
                        [&](const Cons& x) -> Subst {
                          if (i == 0) return Subst::cons(contract_term(x.head, pos, depth + 1, rule), x.tail);
                          return Subst::cons(x.head, contract_subst(x.tail, pos, depth + 1, rule));
                        },
                        [&](const Comp& x) -> Subst {
                          if (i == 0) return Subst::comp(contract_subst(x.first, pos, depth + 1, rule), x.second);
                          return Subst::comp(x.first, contract_subst(x.second, pos, depth + 1, rule));
                        },
                    },
                    s.node());
}

}  // namespace

std::vector<Redex> redexes(const Term& t, RuleSet ruleset) {
  std::vector<Redex> out;
  Path path;
  walk_term(t, path, ruleset, [&](const Path& p, RuleId r) {
    out.push_back({p, r});
    return false;
  });
  return out;
}

Term contract(const Term& t, const Path& position, RuleId rule) { return contract_term(t, position, 0, rule); }

std::optional<StepResult> step(const Term& t, RuleSet ruleset, Strategy& strategy) {
  std::optional<Redex> chosen;
  if (auto* rng = strategy.rng()) {
    std::vector<Redex> all = redexes(t, ruleset);
    if (all.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    chosen = std::move(all[pick(*rng)]);
  } else {
    Path path;
    walk_term(t, path, ruleset, [&](const Path& p, RuleId r) {
      chosen = Redex{p, r};
      return true;
    });
    if (!chosen) return std::nullopt;
  }
  return StepResult{contract(t, chosen->position, chosen->rule), chosen->position, chosen->rule};
}

namespace {

template <class OnStep>
Term run(const Term& t, RuleSet ruleset, Strategy& strategy, std::uint64_t fuel, OnStep&& on_step,
         RewriteTrace* trace) {
  Term current = t;
  std::uint64_t spent = 0;
  while (auto next = step(current, ruleset, strategy)) {
    if (spent == fuel) {
      RewriteTrace partial = trace ? std::move(*trace) : RewriteTrace{current, {}, spent};
      partial.fuel_spent = spent;
      throw FuelExhausted(fuel, std::move(partial));
    }
    ++spent;
    on_step(*next);
    current = std::move(next->term);
  }
  if (trace) trace->fuel_spent = spent;
  return current;
}

}  // namespace

Term normalize(const Term& t, RuleSet ruleset, Strategy& strategy, std::uint64_t fuel) {
  return run(t, ruleset, strategy, fuel, [](const StepResult&) {}, nullptr);
}

Term normalize_sigma(const Term& t, std::uint64_t fuel) {
  Strategy s = Strategy::leftmost_outermost();
  return normalize(t, RuleSet::SigmaOnly, s, fuel);
}

Term normalize_lambda_sigma(const Term& t, std::uint64_t fuel) {
  Strategy s = Strategy::leftmost_outermost();
  return normalize(t, RuleSet::LambdaSigma, s, fuel);
}

std::pair<Term, RewriteTrace> normalize_traced(const Term& t, RuleSet ruleset, Strategy& strategy,
                                               std::uint64_t fuel) {
  RewriteTrace trace{t, {}, 0};
  Term nf = run(
      t, ruleset, strategy, fuel,
      [&](const StepResult& st) { trace.steps.push_back({st.position, st.rule, st.term}); }, &trace);
  return {std::move(nf), std::move(trace)};
}

bool replay(const RewriteTrace& trace) {
  Term current = trace.initial;
  for (const auto& st : trace.steps) {
    try {
      current = contract(current, st.position, st.rule);
    } catch (const Error&) {
      return false;
    }
    if (!(current == st.after)) return false;
  }
  return trace.fuel_spent == trace.steps.size();
}

bool sigma_equal(const Term& a, const Term& b, std::uint64_t fuel) {
  return canonicalize_shifts(normalize_sigma(a, fuel)) == canonicalize_shifts(normalize_sigma(b, fuel));
}

bool lambda_sigma_equal(const Term& a, const Term& b, std::uint64_t fuel) {
  return canonicalize_shifts(normalize_lambda_sigma(a, fuel)) ==
         canonicalize_shifts(normalize_lambda_sigma(b, fuel));
}

}  // namespace lsf
