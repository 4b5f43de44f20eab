#include "lsf/solver.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "lsf/error.hpp"

namespace lsf {

namespace {

std::string context_key(const Context& ctx) {
  std::string key;
  for (const auto& ty : ctx) key += render_type(ty) + ",";
  return key;
}

// Type left after applying a term of type `ty` to q arguments.
const SimpleType* after_args(const SimpleType& ty, unsigned q) {
  const SimpleType* cur = &ty;
  for (unsigned i = 0; i < q; ++i) {
    if (!cur->is_arrow()) return nullptr;
    cur = &cur->cod();
  }
  return cur;
}

}  // namespace

SimpleTermEnumerator::SimpleTermEnumerator(MetaTable pool, unsigned depth_bound)
    : pool_(std::move(pool)), depth_bound_(depth_bound) {}

const std::vector<Term>& SimpleTermEnumerator::of_size(const Context& ctx, const SimpleType& ty, unsigned size) {
  return exact(ctx, ty, size, depth_bound_);
}

std::vector<Term> SimpleTermEnumerator::up_to(const Context& ctx, const SimpleType& ty, unsigned size_bound) {
  std::vector<Term> out;
  for (unsigned s = 1; s <= size_bound; ++s) {
    const auto& terms = exact(ctx, ty, s, depth_bound_);
    out.insert(out.end(), terms.begin(), terms.end());
  }
  return out;
}

const std::vector<Term>& SimpleTermEnumerator::exact(const Context& ctx, const SimpleType& ty, unsigned size,
                                                     unsigned depth) {
  static const std::vector<Term> kNone;
  if (size == 0 || depth == 0) return kNone;
  std::string key = context_key(ctx) + "|" + render_type(ty) + "|" + std::to_string(size) + "|" +
                    std::to_string(depth);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  std::vector<Term> out;
  if (size == 1) {
    for (std::uint32_t i = 0; i < ctx.size(); ++i) {
      if (ctx[i] == ty) out.push_back(Term::index(i + 1));
    }
  }
  for (std::uint32_t i = 0; i < ctx.size(); ++i) {
    std::vector<SimpleType> args = arg_types(ctx[i]);
    for (unsigned q = 1; q <= args.size(); ++q) {
      const SimpleType* rest = after_args(ctx[i], q);
      if (!(*rest == ty) || depth < q + 1 || size < 1 + 2 * q) continue;
      std::vector<SimpleType> used(args.begin(), args.begin() + q);
      spines(ctx, i + 1, used, size - 1 - q, depth, out);
    }
  }
  if (ty.is_arrow() && size >= 2 && depth >= 2) {
    for (const auto& body : exact(extend(ty.dom(), ctx), ty.cod(), size - 1, depth - 1)) {
      out.push_back(Term::lam(body));
    }
  }
  for (const auto& [name, sort] : pool_) {
    if (!(sort.ty == ty)) continue;
    for (std::uint32_t k = 0; k <= ctx.size(); ++k) {
      if (drop(ctx, k) != sort.ctx) continue;
      if (k == 0 && size == 1) out.push_back(Term::meta(name));
      if (k > 0 && size == 3 && depth >= 2) out.push_back(Term::closure(Term::meta(name), Subst::shift(k)));
    }
  }
  return memo_.emplace(std::move(key), std::move(out)).first->second;
}

void SimpleTermEnumerator::spines(const Context& ctx, std::uint32_t head, const std::vector<SimpleType>& args,
                                  unsigned budget, unsigned depth, std::vector<Term>& out) {
  const unsigned q = static_cast<unsigned>(args.size());
  std::function<void(unsigned, const Term&, unsigned)> rec = [&](unsigned j, const Term& partial, unsigned left) {
    if (j == q) {
      if (left == 0) out.push_back(partial);
      return;
    }
    const unsigned later = q - j - 1;
    if (left < later + 1) return;
    for (unsigned s = 1; s + later <= left; ++s) {
      const auto& candidates = exact(ctx, args[j], s, depth - (q - j));
      for (const auto& e : candidates) rec(j + 1, Term::app(partial, e), left - s);
    }
  };
  rec(0, Term::index(head), budget);
}

std::vector<Term> enumerate_simple_terms(const Sort& sort, const MetaTable& pool, const SearchConfig& cfg) {
  SimpleTermEnumerator e(pool, cfg.depth_bound);
  return e.up_to(sort.ctx, sort.ty, cfg.size_bound);
}

SearchConfig sigma_config_for(const UnifProblem& source, const SearchConfig& cfg) {
  unsigned max_arity = 0;
  for (const auto& [name, sort] : source.metas) max_arity = std::max(max_arity, arity(sort.ty));
  SearchConfig out = cfg;
  out.size_bound = cfg.size_bound + 2 * max_arity;
  out.depth_bound = cfg.depth_bound + max_arity;
  return out;
}

bool solved(const SearchOutcome& o) { return std::holds_alternative<Solved>(o); }

const std::vector<MetaSubst>& solutions(const SearchOutcome& o) {
  static const std::vector<MetaSubst> kNone;
  if (const auto* s = std::get_if<Solved>(&o)) return s->solutions;
  return kNone;
}

bool check_solution(const UnifProblem& p, const MetaSubst& theta, std::uint64_t fuel) {
  for (const auto& [name, term] : theta) {
    if (!p.metas.contains(name)) throw UnknownMeta(name);
  }
  for (const auto& [name, sort] : p.metas) {
    const Term* bound = theta.find(name);
    if (!bound) throw Error("substitution does not bind ?" + name);
    try {
      check_term(sort.ctx, p.metas, *bound, sort.ty);
    } catch (const IllTyped& err) {
      throw IllTyped("binding of ?" + name + ": " + err.reason(), err.path());
    }
  }
  UnifProblem e = explicit_form(p);
  Term lhs = graft(theta, e.lhs);
  Term rhs = graft(theta, e.rhs);
  return p.mode == Mode::SigmaOnly ? sigma_equal(lhs, rhs, fuel) : lambda_sigma_equal(lhs, rhs, fuel);
}

namespace {

struct Collector {
  const SearchConfig& cfg;
  std::vector<MetaSubst> found;
  std::uint64_t checked = 0;

  bool full() const { return found.size() >= (cfg.find_all ? cfg.max_solutions : 1u); }
};

SearchOutcome finish(const UnifProblem& p, Collector& c) {
  for (const auto& theta : c.found) {
    if (!check_solution(p, theta, c.cfg.fuel)) throw Error("search returned a substitution that is not a solution");
  }
  if (c.found.empty()) return ExhaustedNoSolution{c.cfg.size_bound, c.cfg.depth_bound, c.checked};
  return Solved{std::move(c.found)};
}

std::vector<std::vector<Term>> sigma_candidates(const UnifProblem& p, const SearchConfig& cfg) {
  SimpleTermEnumerator e(MetaTable{}, cfg.depth_bound);
  std::vector<std::vector<Term>> out;
  for (const auto& [name, sort] : p.metas) out.push_back(e.up_to(sort.ctx, sort.ty, cfg.size_bound));
  return out;
}

MetaSubst assignment(const UnifProblem& p, const std::vector<const Term*>& chosen) {
  MetaSubst::Map m;
  std::size_t i = 0;
  for (const auto& [name, sort] : p.metas) {
    if (i < chosen.size()) m.emplace(name, *chosen[i]);
    ++i;
  }
  return MetaSubst(std::move(m));
}

void require_sigma(const UnifProblem& p) {
  if (p.mode != Mode::SigmaOnly) throw PreconditionViolated("sigma search expects a sigma problem");
  ValidationReport r = validate_problem(p);
  if (!r.flags.front().passed) {
    throw PreconditionViolated(r.violations.empty() ? "problem does not sort-check" : r.violations.front());
  }
}

bool is_flex(const Term& t) {
  if (t.is<Meta>()) return true;
  if (const auto* c = t.as<Closure>()) return c->body.is<Meta>();
  return false;
}

const Term& spine_head(const Term& t, std::size_t& nargs) {
  const Term* cur = &t;
  nargs = 0;
  while (const auto* a = cur->as<App>()) {
    ++nargs;
    cur = &a->fun;
  }
  return *cur;
}

// l is sigma-normal, r is sigma-normal and ground; false only when no grafting of
// the unknowns left in l can make the two equal.
bool rigid_compatible(const Term& l, const Term& r) {
  if (is_flex(l)) return true;
  if (const auto* lam = l.as<Lam>()) {
    const auto* rlam = r.as<Lam>();
    return rlam && rigid_compatible(lam->body, rlam->body);
  }
  if (l.is<Index>() || l.is<App>()) {
    std::size_t ln = 0, rn = 0;
    const Term& lh = spine_head(l, ln);
    if (is_flex(lh)) return true;
    const Term& rh = spine_head(r, rn);
    if (!lh.is<Index>() || !(lh == rh) || ln != rn) return false;
    const Term* lc = &l;
    const Term* rc = &r;
    while (const auto* la = lc->as<App>()) {
      const auto* ra = rc->as<App>();
      if (!rigid_compatible(la->arg, ra->arg)) return false;
      lc = &la->fun;
      rc = &ra->fun;
    }
    return true;
  }
  return true;
}

}  // namespace

SearchOutcome solve_sigma(const UnifProblem& p, const SearchConfig& cfg) {
  require_sigma(p);
  Collector c{cfg, {}, 0};
  try {
    auto cands = sigma_candidates(p, cfg);
    std::vector<const Term*> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (c.full()) return;
      if (j == cands.size()) {
        ++c.checked;
        MetaSubst theta = assignment(p, chosen);
        if (sigma_equal(graft(theta, p.lhs), graft(theta, p.rhs), cfg.fuel)) c.found.push_back(std::move(theta));
        return;
      }
      for (const auto& t : cands[j]) {
        chosen.push_back(&t);
        rec(j + 1);
        chosen.pop_back();
        if (c.full()) return;
      }
    };
    rec(0);
    return finish(p, c);
  } catch (const FuelExhausted& e) {
    return Aborted{e.what()};
  }
}

SearchOutcome match_sigma(const UnifProblem& p, const SearchConfig& cfg) {
  require_sigma(p);
  const bool rhs_ground = is_ground(p.rhs);
  if (!rhs_ground && !is_ground(p.lhs)) throw PreconditionViolated("matching expects one ground side");
  const Term& flex = rhs_ground ? p.lhs : p.rhs;
  const Term& rigid = rhs_ground ? p.rhs : p.lhs;

  Collector c{cfg, {}, 0};
  try {
    const Term goal = canonicalize_shifts(normalize_sigma(rigid, cfg.fuel));
    auto cands = sigma_candidates(p, cfg);
    std::vector<const Term*> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (c.full()) return;
      MetaSubst partial = assignment(p, chosen);
      Term nf = canonicalize_shifts(normalize_sigma(graft(partial, flex), cfg.fuel));
      if (j == cands.size()) {
        ++c.checked;
        if (nf == goal) c.found.push_back(std::move(partial));
        return;
      }
      if (!rigid_compatible(nf, goal)) return;
      for (const auto& t : cands[j]) {
        chosen.push_back(&t);
        rec(j + 1);
        chosen.pop_back();
        if (c.full()) return;
      }
    };
    rec(0);
    return finish(p, c);
  } catch (const FuelExhausted& e) {
    return Aborted{e.what()};
  }
}

namespace {

// Beta-normal lambda terms, built by binary application splits rather than spines
// so that the oracle shares no enumeration code with the sigma search.
class LambdaTermOracle {
 public:
  const std::vector<Term>& normal(const Context& ctx, const SimpleType& ty, unsigned size) {
    std::string key = "n" + context_key(ctx) + "|" + render_type(ty) + "|" + std::to_string(size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Term> out = neutral(ctx, ty, size);
    if (ty.is_arrow() && size >= 2) {
      for (const auto& b : normal(extend(ty.dom(), ctx), ty.cod(), size - 1)) out.push_back(Term::lam(b));
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  std::vector<Term> neutral(const Context& ctx, const SimpleType& ty, unsigned size) {
    std::vector<Term> out;
    if (size == 1) {
      for (std::uint32_t i = 0; i < ctx.size(); ++i) {
        if (ctx[i] == ty) out.push_back(Term::index(i + 1));
      }
      return out;
    }
    for (const auto& fn_ty : function_types(ctx, ty)) {
      for (unsigned fs = 1; fs + 2 <= size; ++fs) {
        std::vector<Term> funs = neutral(ctx, fn_ty, fs);
        if (funs.empty()) continue;
        const auto& args = normal(ctx, fn_ty.dom(), size - 1 - fs);
        for (const auto& f : funs) {
          for (const auto& a : args) out.push_back(Term::app(f, a));
        }
      }
    }
    return out;
  }

  // Arrow types with codomain ty that occur as a suffix of some context entry.
  static std::vector<SimpleType> function_types(const Context& ctx, const SimpleType& ty) {
    std::vector<SimpleType> out;
    for (const auto& entry : ctx) {
      for (const SimpleType* cur = &entry; cur->is_arrow(); cur = &cur->cod()) {
        if (cur->cod() == ty && std::find(out.begin(), out.end(), *cur) == out.end()) out.push_back(*cur);
      }
    }
    return out;
  }

  std::map<std::string, std::vector<Term>> memo_;
};

}  // namespace

SearchOutcome decide_small_lambda(const UnifProblem& p, const SearchConfig& cfg) {
  if (p.mode != Mode::LambdaSigma) throw PreconditionViolated("the lambda oracle expects a lambdasigma problem");
  ValidationReport r = validate_problem(p);
  if (!r.ok()) throw PreconditionViolated(r.violations.empty() ? "problem is not second order" : r.violations.front());

  Collector c{cfg, {}, 0};
  try {
    LambdaTermOracle oracle;
    std::vector<std::vector<Term>> cands;
    for (const auto& [name, sort] : p.metas) {
      std::vector<Term> all;
      for (unsigned s = 1; s <= cfg.size_bound; ++s) {
        const auto& terms = oracle.normal(sort.ctx, sort.ty, s);
        all.insert(all.end(), terms.begin(), terms.end());
      }
      cands.push_back(std::move(all));
    }
    std::vector<const Term*> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (c.full()) return;
      if (j == cands.size()) {
        ++c.checked;
        MetaSubst theta = assignment(p, chosen);
        if (check_solution(p, theta, cfg.fuel)) c.found.push_back(std::move(theta));
        return;
      }
      for (const auto& t : cands[j]) {
        chosen.push_back(&t);
        rec(j + 1);
        chosen.pop_back();
        if (c.full()) return;
      }
    };
    rec(0);
    return finish(p, c);
  } catch (const FuelExhausted& e) {
    return Aborted{e.what()};
  }
}

}  // namespace lsf
