#include "oracle.hpp"

namespace lsf::testing {

namespace {

class Evaluator {
 public:
  explicit Evaluator(bool beta) : beta_(beta) {}

  Term eval(const Term& t, const SubstValue& env) {
    if (const auto* x = t.as<Index>()) {
      if (x->n <= env.items.size()) return env.items[x->n - 1];
      return Term::index(static_cast<std::uint32_t>(x->n - env.items.size() + env.shift));
    }
    if (t.is<Meta>()) {
      Subst s = reify(env);
      if (s.is_shift(0)) return t;
      return Term::closure(t, s);
    }
    if (const auto* x = t.as<App>()) {
      Term f = eval(x->fun, env);
      Term a = eval(x->arg, env);
      if (beta_) {
        if (const auto* lam = f.as<Lam>()) return eval(lam->body, SubstValue{{a}, 0});
      }
      return Term::app(f, a);
    }
    if (const auto* x = t.as<Lam>()) return Term::lam(eval(x->body, lift(env)));
    const auto& c = *t.as<Closure>();
    return eval(c.body, subst(c.subst, env));
  }

  // The value of s o env.
  SubstValue subst(const Subst& s, const SubstValue& env) {
    if (const auto* x = s.as<Shift>()) {
      if (x->k <= env.items.size()) {
        return SubstValue{std::vector<Term>(env.items.begin() + x->k, env.items.end()), env.shift};
      }
      return SubstValue{{}, static_cast<std::uint32_t>(env.shift + x->k - env.items.size())};
    }
    if (const auto* x = s.as<Cons>()) {
      SubstValue tail = subst(x->tail, env);
      tail.items.insert(tail.items.begin(), eval(x->head, env));
      return tail;
    }
    const auto& c = *s.as<Comp>();
    return subst(c.first, subst(c.second, env));
  }

 private:
  // 1 . (env o ^1)
  SubstValue lift(const SubstValue& env) {
    SubstValue out;
    out.items.push_back(Term::index(1));
    SubstValue up{{}, 1};
    for (const auto& item : env.items) out.items.push_back(eval(item, up));
    out.shift = env.shift + 1;
    return out;
  }

  bool beta_;
};

}  // namespace

Subst reify(const SubstValue& v) {
  std::vector<Term> items = v.items;
  std::uint32_t shift = v.shift;
  while (!items.empty() && shift >= 1) {
    const auto* last = items.back().as<Index>();
    if (!last || last->n != shift) break;
    items.pop_back();
    --shift;
  }
  Subst out = Subst::shift(shift);
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = Subst::cons(*it, out);
  return out;
}

Term eval_sigma(const Term& t) { return Evaluator(false).eval(t, SubstValue{}); }

Term eval_lambda_sigma(const Term& t) { return Evaluator(true).eval(t, SubstValue{}); }

SubstValue eval_subst(const Subst& s, bool beta) { return Evaluator(beta).subst(s, SubstValue{}); }

Term naive_graft(const MetaSubst& theta, const Term& t) {
  if (const auto* m = t.as<Meta>()) {
    const Term* b = theta.find(m->name);
    return b ? *b : t;
  }
  if (const auto* a = t.as<App>()) return Term::app(naive_graft(theta, a->fun), naive_graft(theta, a->arg));
  if (const auto* l = t.as<Lam>()) return Term::lam(naive_graft(theta, l->body));
  if (const auto* c = t.as<Closure>()) {
    std::function<Subst(const Subst&)> go = [&](const Subst& s) -> Subst {
      if (const auto* x = s.as<Cons>()) return Subst::cons(naive_graft(theta, x->head), go(x->tail));
      if (const auto* x = s.as<Comp>()) return Subst::comp(go(x->first), go(x->second));
      return s;
    };
    return Term::closure(naive_graft(theta, c->body), go(c->subst));
  }
  return t;
}

std::size_t count_nodes(const Term& t) {
  std::function<std::size_t(const Subst&)> subst = [&](const Subst& s) -> std::size_t {
    if (const auto* x = s.as<Cons>()) return 1 + count_nodes(x->head) + subst(x->tail);
    if (const auto* x = s.as<Comp>()) return 1 + subst(x->first) + subst(x->second);
    return 1;
  };
  if (const auto* a = t.as<App>()) return 1 + count_nodes(a->fun) + count_nodes(a->arg);
  if (const auto* l = t.as<Lam>()) return 1 + count_nodes(l->body);
  if (const auto* c = t.as<Closure>()) return 1 + count_nodes(c->body) + subst(c->subst);
  return 1;
}

}  // namespace lsf::testing
