#include "lsf/transform.hpp"

#include <set>

#include "lsf/error.hpp"

namespace lsf {

const CertificateEntry* ReductionCertificate::by_source(const std::string& name) const {
  for (const auto& e : var_map) {
    if (e.source == name) return &e;
  }
  return nullptr;
}

const CertificateEntry* ReductionCertificate::by_fresh(const std::string& name) const {
  for (const auto& e : var_map) {
    if (e.fresh == name) return &e;
  }
  return nullptr;
}

UnifProblem precook(const UnifProblem& p) {
  if (p.mode != Mode::LambdaSigma) throw PreconditionViolated("precook expects a lambdasigma problem");
  if (has_closure(p.lhs) || has_closure(p.rhs)) {
    throw PreconditionViolated("precook expects a problem without explicit substitutions");
  }
  UnifProblem out = p;
  out.lhs = precook_term(p.lhs);
  out.rhs = precook_term(p.rhs);
  equation_type(out);
  return out;
}

LiftingSubst build_lifting_subst(const UnifProblem& p) {
  std::set<std::string> taken;
  for (const auto& [name, sort] : p.metas) taken.insert(name);

  LiftingSubst out;
  MetaSubst::Map bindings;
  unsigned counter = 1;
  for (const auto& [name, sort] : p.metas) {
    if (order_of_type(sort.ty) > 2) throw OrderTooHigh(name);
    std::string fresh;
    do {
      fresh = name + "'" + std::to_string(counter++);
    } while (taken.count(fresh));
    taken.insert(fresh);

    std::vector<SimpleType> args = arg_types(sort.ty);
    Context ctx = sort.ctx;
    for (const auto& a : args) ctx = extend(a, ctx);
    out.fresh_metas.declare(fresh, Sort{ctx, result_type(sort.ty)});

    Term body = Term::meta(fresh);
    for (std::size_t i = 0; i < args.size(); ++i) body = Term::lam(body);
    bindings.emplace(name, body);
    out.var_map.push_back({name, fresh, static_cast<unsigned>(args.size())});
  }
  out.subst = MetaSubst(std::move(bindings));
  return out;
}

ReductionCertificate reduce_problem(const UnifProblem& p, std::uint64_t fuel) {
  if (p.mode != Mode::LambdaSigma) throw PreconditionViolated("reduce expects a lambdasigma problem");
  UnifProblem cooked = explicit_form(p);
  SimpleType ty = equation_type(cooked);
  if (!ty.is_base()) throw PreconditionViolated("equation type " + render_type(ty) + " is not atomic");
  if (!check_second_order_context(p.ctx)) throw PreconditionViolated("context is not second order");

  LiftingSubst lifting = build_lifting_subst(cooked);
  UnifProblem target{p.base_types,
                     p.ctx,
                     lifting.fresh_metas,
                     normalize_lambda_sigma(graft(lifting.subst, cooked.lhs), fuel),
                     normalize_lambda_sigma(graft(lifting.subst, cooked.rhs), fuel),
                     Mode::SigmaOnly};
  return ReductionCertificate{std::move(lifting.var_map), p, std::move(target)};
}

namespace {

// Splits s into c_1 ... c_p . ^n; false when s has another shape.
bool decompose(const Subst& s, std::vector<Term>& heads, std::uint32_t& shift) {
  const Subst* cur = &s;
  while (const auto* c = cur->as<Cons>()) {
    heads.push_back(c->head);
    cur = &c->tail;
  }
  const auto* sh = cur->as<Shift>();
  if (!sh) return false;
  shift = sh->k;
  return true;
}

void check_closure_arguments(const Term& t, const MetaTable& metas, std::vector<std::string>& violations) {
  for_each_subterm(t, [&](const Term& u) {
    const auto* c = u.as<Closure>();
    if (!c) return;
    const auto* m = c->body.as<Meta>();
    if (!m) return;
    std::vector<Term> heads;
    std::uint32_t shift = 0;
    if (!decompose(c->subst, heads, shift)) {
      violations.push_back("substitution on ?" + m->name + " is not of the form c_1 ... c_p . ^n");
      return;
    }
    const Sort* sort = metas.find(m->name);
    if (!sort) return;  // reported by sort checking
    for (std::size_t i = 0; i < heads.size() && i < sort->ctx.size(); ++i) {
      if (order_of_type(sort->ctx[i]) != 1) {
        violations.push_back("argument " + std::to_string(i + 1) + " of ?" + m->name + " has type " +
                             render_type(sort->ctx[i]) + " of order " +
                             std::to_string(order_of_type(sort->ctx[i])));
      }
    }
  });
}

}  // namespace

ValidationReport validate_reduced_problem(const UnifProblem& target) {
  ValidationReport report;
  bool typed = false;
  try {
    equation_type(target);
    typed = true;
  } catch (const IllTyped& err) {
    report.violations.push_back(err.what());
  }
  report.add("sides sort-check with equal type", typed);

  bool ctx_ok = check_second_order_context(target.ctx);
  if (!ctx_ok) report.violations.push_back("context is not second order");
  report.add("context is second order", ctx_ok);

  bool metas_ok = true;
  std::set<std::string> seen;
  for (const auto& [name, sort] : target.metas) {
    seen.insert(name);
    if (!sort.ty.is_base()) {
      metas_ok = false;
      report.violations.push_back("?" + name + " has non-atomic type " + render_type(sort.ty));
    }
    if (!check_second_order_context(sort.ctx)) {
      metas_ok = false;
      report.violations.push_back("?" + name + " has a context that is not second order");
    }
  }
  for (const Term* side : {&target.lhs, &target.rhs}) {
    for (const auto& m : free_metavars(*side)) {
      if (!seen.count(m)) {
        metas_ok = false;
        report.violations.push_back("?" + m + " occurs but is not declared");
      }
    }
  }
  report.add("unknowns have atomic type and second-order context", metas_ok);

  std::vector<std::string> arg_violations;
  check_closure_arguments(target.lhs, target.metas, arg_violations);
  check_closure_arguments(target.rhs, target.metas, arg_violations);
  report.add("closure arguments have first-order type", arg_violations.empty());
  report.violations.insert(report.violations.end(), arg_violations.begin(), arg_violations.end());
  return report;
}

ValidationReport validate_reduced_problem(const ReductionCertificate& cert) {
  return validate_reduced_problem(cert.target);
}

MetaSubst lift_solution(const ReductionCertificate& cert, const MetaSubst& target_solution) {
  MetaSubst::Map out;
  for (const auto& [name, term] : target_solution) {
    const CertificateEntry* e = cert.by_fresh(name);
    if (!e) throw UnknownMeta(name);
    Term lifted = term;
    for (unsigned i = 0; i < e->arity; ++i) lifted = Term::lam(lifted);
    out.emplace(e->source, std::move(lifted));
  }
  return MetaSubst(std::move(out));
}

MetaSubst project_solution(const ReductionCertificate& cert, const MetaSubst& source_solution) {
  MetaSubst::Map out;
  for (const auto& [name, term] : source_solution) {
    const CertificateEntry* e = cert.by_source(name);
    if (!e) throw UnknownMeta(name);
    const Term* body = &term;
    for (unsigned i = 0; i < e->arity; ++i) {
      const auto* lam = body->as<Lam>();
      if (!lam) {
        throw ShapeMismatch("binding of ?" + name + " has " + std::to_string(i) + " leading abstractions, " +
                            std::to_string(e->arity) + " expected");
      }
      body = &lam->body;
    }
    out.emplace(e->fresh, *body);
  }
  return MetaSubst(std::move(out));
}

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionViolated(what);
}

void require_atomic_unknowns(const Term& t, const MetaTable& metas) {
  for (const auto& m : free_metavars(t)) {
    const Sort* sort = metas.find(m);
    require(sort != nullptr, "?" + m + " is not declared");
    require(sort->ty.is_base(), "?" + m + " does not have an atomic type");
    require(check_second_order_context(sort->ctx), "?" + m + " does not have a second-order context");
  }
}

}  // namespace

AgreementResult sigma_agreement(const Context& ctx, const MetaTable& metas, const Term& a, const MetaSubst& theta,
                                std::uint64_t fuel) {
  require(check_second_order_context(ctx), "context is not second order");
  SimpleType ty = SimpleType::base("");
  try {
    ty = sort_check_term(ctx, metas, a);
  } catch (const IllTyped& err) {
    throw PreconditionViolated(std::string("term is ill-typed: ") + err.what());
  }
  require(ty.is_base(), "term has non-atomic type " + render_type(ty));
  require(normalize_lambda_sigma(a, fuel) == a, "term is not in normal form");
  require_atomic_unknowns(a, metas);
  std::vector<std::string> violations;
  check_closure_arguments(a, metas, violations);
  require(violations.empty(), violations.empty() ? "" : violations.front());

  require(is_simple_subst(theta), "substitution is not simple");
  for (const auto& [name, term] : theta) {
    const Sort* sort = metas.find(name);
    require(sort != nullptr, "?" + name + " is not declared");
    try {
      check_term(sort->ctx, metas, term, sort->ty);
    } catch (const IllTyped& err) {
      throw PreconditionViolated("binding of ?" + name + " is ill-typed: " + err.what());
    }
    require(normalize_lambda_sigma(term, fuel) == term, "binding of ?" + name + " is not in normal form");
    require_atomic_unknowns(term, metas);
  }

  Term grafted = graft(theta, a);
  Term ls = canonicalize_shifts(normalize_lambda_sigma(grafted, fuel));
  Strategy lo = Strategy::leftmost_outermost();
  auto [s, trace] = normalize_traced(grafted, RuleSet::SigmaOnly, lo, fuel);
  Term sigma = canonicalize_shifts(s);
  return AgreementResult{ls == sigma, ls, sigma, std::move(trace)};
}

bool check_sigma_agreement(const Context& ctx, const MetaTable& metas, const Term& a, const MetaSubst& theta,
                           std::uint64_t fuel) {
  return sigma_agreement(ctx, metas, a, theta, fuel).agree;
}

}  // namespace lsf
