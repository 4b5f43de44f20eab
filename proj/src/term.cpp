#include "lsf/term.hpp"

#include <cassert>

#include "lsf/error.hpp"
#include "overloaded.hpp"

namespace lsf {

using detail::overloaded;

std::string render_path(const Path& path) {
  if (path.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

Term Term::index(std::uint32_t n) {
  assert(n >= 1);
  return Term(std::make_shared<const Node>(Index{n}));
}
Term Term::meta(std::string name) { return Term(std::make_shared<const Node>(Meta{std::move(name)})); }
Term Term::app(Term fun, Term arg) {
  return Term(std::make_shared<const Node>(App{std::move(fun), std::move(arg)}));
}
Term Term::lam(Term body) { return Term(std::make_shared<const Node>(Lam{std::move(body)})); }
Term Term::closure(Term body, Subst subst) {
  return Term(std::make_shared<const Node>(Closure{std::move(body), std::move(subst)}));
}

Subst Subst::shift(std::uint32_t k) { return Subst(std::make_shared<const Node>(Shift{k})); }
Subst Subst::cons(Term head, Subst tail) {
  return Subst(std::make_shared<const Node>(Cons{std::move(head), std::move(tail)}));
}
Subst Subst::comp(Subst first, Subst second) {
  return Subst(std::make_shared<const Node>(Comp{std::move(first), std::move(second)}));
}

bool Subst::is_shift(std::uint32_t k) const {
  const auto* s = as<Shift>();
  return s && s->k == k;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  return std::visit(
      overloaded{
          [&](const Index& x) { return x.n == b.as<Index>()->n; },
          [&](const Meta& x) { return x.name == b.as<Meta>()->name; },
          [&](const App& x) {
            const auto* y = b.as<App>();
            return x.fun == y->fun && x.arg == y->arg;
          },
          [&](const Lam& x) { return x.body == b.as<Lam>()->body; },
          [&](const Closure& x) {
            const auto* y = b.as<Closure>();
            return x.body == y->body && x.subst == y->subst;
          },
      },
      *a.node_);
}

bool operator==(const Subst& a, const Subst& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  return std::visit(overloaded{
                        [&](const Shift& x) { return x.k == b.as<Shift>()->k; },
                        [&](const Cons& x) {
                          const auto* y = b.as<Cons>();
                          return x.head == y->head && x.tail == y->tail;
                        },
                        [&](const Comp& x) {
                          const auto* y = b.as<Comp>();
                          return x.first == y->first && x.second == y->second;
                        },
                    },
                    *a.node_);
}

MetaSubst::MetaSubst(Map bindings) : bindings_(std::move(bindings)) {
  for (const auto& [name, term] : bindings_) {
    for (const auto& m : free_metavars(term)) {
      if (bindings_.count(m)) {
        throw Error("metavariable substitution is not idempotent: " + name + " is bound to a term mentioning " + m);
      }
    }
  }
}

const Term* MetaSubst::find(const std::string& name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

namespace {

bool simple_subst(const Subst& s);

bool simple_term(const Term& t) {
  return std::visit(overloaded{
                        [](const Index&) { return true; },
                        [](const Meta&) { return true; },
                        [](const App& x) { return simple_term(x.fun) && simple_term(x.arg); },
                        [](const Lam& x) { return simple_term(x.body); },
                        [](const Closure& x) {
                          if (x.body.is<Meta>() && !x.subst.is<Shift>()) return false;
                          return simple_term(x.body) && simple_subst(x.subst);
                        },
                    },
                    t.node());
}

bool simple_subst(const Subst& s) {
  return std::visit(overloaded{
                        [](const Shift&) { return true; },
                        [](const Cons& x) { return simple_term(x.head) && simple_subst(x.tail); },
                        [](const Comp& x) { return simple_subst(x.first) && simple_subst(x.second); },
                    },
                    s.node());
}

}  // namespace

bool is_simple(const Term& t) { return simple_term(t); }

bool is_simple_subst(const MetaSubst& theta) {
  for (const auto& [name, term] : theta) {
    if (!is_simple(term)) return false;
  }
  return true;
}

Term graft(const MetaSubst& theta, const Term& t) {
  if (theta.empty()) return t;
  return std::visit(overloaded{
                        [&](const Index&) { return t; },
                        [&](const Meta& x) {
                          const Term* bound = theta.find(x.name);
                          return bound ? *bound : t;
                        },
                        [&](const App& x) { return Term::app(graft(theta, x.fun), graft(theta, x.arg)); },
                        [&](const Lam& x) { return Term::lam(graft(theta, x.body)); },
                        [&](const Closure& x) {
                          return Term::closure(graft(theta, x.body), graft(theta, x.subst));
                        },
                    },
                    t.node());
}

Subst graft(const MetaSubst& theta, const Subst& s) {
  if (theta.empty()) return s;
  return std::visit(overloaded{
                        [&](const Shift&) { return s; },
                        [&](const Cons& x) { return Subst::cons(graft(theta, x.head), graft(theta, x.tail)); },
                        [&](const Comp& x) { return Subst::comp(graft(theta, x.first), graft(theta, x.second)); },
                    },
                    s.node());
}

Subst canonicalize_shifts(const Subst& s) {
  return std::visit(overloaded{
                        [&](const Shift&) { return s; },
                        [&](const Cons& x) {
                          return Subst::cons(canonicalize_shifts(x.head), canonicalize_shifts(x.tail));
                        },
                        [&](const Comp& x) {
                          Subst first = canonicalize_shifts(x.first);
                          Subst second = canonicalize_shifts(x.second);
                          const auto* i = first.as<Shift>();
                          const auto* j = second.as<Shift>();
                          if (i && j) return Subst::shift(i->k + j->k);
                          return Subst::comp(std::move(first), std::move(second));
                        },
                    },
                    s.node());
}

Term canonicalize_shifts(const Term& t) {
  return std::visit(overloaded{
                        [&](const Index&) { return t; },
                        [&](const Meta&) { return t; },
                        [&](const App& x) {
                          return Term::app(canonicalize_shifts(x.fun), canonicalize_shifts(x.arg));
                        },
                        [&](const Lam& x) { return Term::lam(canonicalize_shifts(x.body)); },
                        [&](const Closure& x) {
                          return Term::closure(canonicalize_shifts(x.body), canonicalize_shifts(x.subst));
                        },
                    },
                    t.node());
}

namespace {

void collect_metas(const Subst& s, std::set<std::string>& out);

void collect_metas(const Term& t, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const Index&) {},
                 [&](const Meta& x) { out.insert(x.name); },
                 [&](const App& x) {
                   collect_metas(x.fun, out);
                   collect_metas(x.arg, out);
                 },
                 [&](const Lam& x) { collect_metas(x.body, out); },
                 [&](const Closure& x) {
                   collect_metas(x.body, out);
                   collect_metas(x.subst, out);
                 },
             },
             t.node());
}

void collect_metas(const Subst& s, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const Shift&) {},
                 [&](const Cons& x) {
                   collect_metas(x.head, out);
                   collect_metas(x.tail, out);
                 },
                 [&](const Comp& x) {
                   collect_metas(x.first, out);
                   collect_metas(x.second, out);
                 },
             },
             s.node());
}

}  // namespace

std::set<std::string> free_metavars(const Term& t) {
  std::set<std::string> out;
  collect_metas(t, out);
  return out;
}

std::set<std::string> free_metavars(const Subst& s) {
  std::set<std::string> out;
  collect_metas(s, out);
  return out;
}

std::size_t term_size(const Term& t) {
  return std::visit(overloaded{
                        [](const Index&) -> std::size_t { return 1; },
                        [](const Meta&) -> std::size_t { return 1; },
                        [](const App& x) { return 1 + term_size(x.fun) + term_size(x.arg); },
                        [](const Lam& x) { return 1 + term_size(x.body); },
                        [](const Closure& x) { return 1 + term_size(x.body) + subst_size(x.subst); },
                    },
                    t.node());
}

std::size_t subst_size(const Subst& s) {
  return std::visit(overloaded{
                        [](const Shift&) -> std::size_t { return 1; },
                        [](const Cons& x) { return 1 + term_size(x.head) + subst_size(x.tail); },
                        [](const Comp& x) { return 1 + subst_size(x.first) + subst_size(x.second); },
                    },
                    s.node());
}

namespace {

void visit_subst(const Subst& s, const std::function<void(const Term&)>& fn);

void visit_term(const Term& t, const std::function<void(const Term&)>& fn) {
  fn(t);
  std::visit(overloaded{
                 [](const Index&) {},
                 [](const Meta&) {},
                 [&](const App& x) {
                   visit_term(x.fun, fn);
                   visit_term(x.arg, fn);
                 },
                 [&](const Lam& x) { visit_term(x.body, fn); },
                 [&](const Closure& x) {
                   visit_term(x.body, fn);
                   visit_subst(x.subst, fn);
                 },
             },
             t.node());
}

void visit_subst(const Subst& s, const std::function<void(const Term&)>& fn) {
  std::visit(overloaded{
                 [](const Shift&) {},
                 [&](const Cons& x) {
                   visit_term(x.head, fn);
                   visit_subst(x.tail, fn);
                 },
                 [&](const Comp& x) {
                   visit_subst(x.first, fn);
                   visit_subst(x.second, fn);
                 },
             },
             s.node());
}

}  // namespace

void for_each_subterm(const Term& t, const std::function<void(const Term&)>& fn) { visit_term(t, fn); }

bool has_closure(const Term& t) {
  bool found = false;
  for_each_subterm(t, [&](const Term& u) { found = found || u.is<Closure>(); });
  return found;
}

bool is_ground(const Term& t) { return free_metavars(t).empty(); }

}  // namespace lsf

namespace lsf {

namespace {

Term precook_at(const Term& t, std::uint32_t depth) {
  return std::visit(detail::overloaded{
                        [&](const Index&) { return t; },
                        [&](const Meta&) { return depth == 0 ? t : Term::closure(t, Subst::shift(depth)); },
                        [&](const App& x) { return Term::app(precook_at(x.fun, depth), precook_at(x.arg, depth)); },
                        [&](const Lam& x) { return Term::lam(precook_at(x.body, depth + 1)); },
                        [&](const Closure&) -> Term { throw Error("precook expects a term without closures"); },
                    },
                    t.node());
}

}  // namespace

Term precook_term(const Term& t) { return precook_at(t, 0); }

}  // namespace lsf
