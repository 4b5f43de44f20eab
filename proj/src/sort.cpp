#include "lsf/sort.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "overloaded.hpp"

namespace lsf {

using detail::overloaded;

SimpleType SimpleType::base(std::string name) {
  SimpleType t;
  t.name_ = std::move(name);
  return t;
}

SimpleType SimpleType::arrow(SimpleType dom, SimpleType cod) {
  SimpleType t;
  t.arrow_ = std::make_shared<const std::pair<SimpleType, SimpleType>>(std::move(dom), std::move(cod));
  return t;
}

SimpleType SimpleType::arrows(const std::vector<SimpleType>& args, SimpleType result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, std::move(result));
  return result;
}

bool operator==(const SimpleType& a, const SimpleType& b) {
  if (a.is_base() != b.is_base()) return false;
  if (a.is_base()) return a.name_ == b.name_;
  return a.arrow_ == b.arrow_ || (a.dom() == b.dom() && a.cod() == b.cod());
}

Context extend(const SimpleType& ty, const Context& ctx) {
  Context out;
  out.reserve(ctx.size() + 1);
  out.push_back(ty);
  out.insert(out.end(), ctx.begin(), ctx.end());
  return out;
}

Context drop(const Context& ctx, std::size_t k) {
  if (k >= ctx.size()) return {};
  return Context(ctx.begin() + static_cast<std::ptrdiff_t>(k), ctx.end());
}

void MetaTable::declare(std::string name, Sort sort) {
  if (contains(name)) throw Error("duplicate metavariable " + name);
  entries_.emplace_back(std::move(name), std::move(sort));
}

const Sort* MetaTable::find(const std::string& name) const {
  for (const auto& [n, s] : entries_) {
    if (n == name) return &s;
  }
  return nullptr;
}

std::vector<std::string> MetaTable::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

std::string render_type(const SimpleType& ty) {
  if (ty.is_base()) return ty.name();
  std::string dom = render_type(ty.dom());
  if (ty.dom().is_arrow()) dom = "(" + dom + ")";
  return dom + " -> " + render_type(ty.cod());
}

unsigned order_of_type(const SimpleType& ty) {
  if (ty.is_base()) return 1;
  return std::max(order_of_type(ty.dom()) + 1, order_of_type(ty.cod()));
}

unsigned arity(const SimpleType& ty) { return ty.is_base() ? 0 : 1 + arity(ty.cod()); }

std::vector<SimpleType> arg_types(const SimpleType& ty) {
  std::vector<SimpleType> out;
  const SimpleType* cur = &ty;
  while (cur->is_arrow()) {
    out.push_back(cur->dom());
    cur = &cur->cod();
  }
  return out;
}

const SimpleType& result_type(const SimpleType& ty) { return ty.is_base() ? ty : result_type(ty.cod()); }

bool check_second_order_context(const Context& ctx) {
  return std::all_of(ctx.begin(), ctx.end(), [](const SimpleType& t) { return order_of_type(t) <= 2; });
}

namespace {

std::string render_context(const Context& ctx) {
  std::string out = "[";
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ", ";
    out += render_type(ctx[i]);
  }
  return out + "]";
}

// Abstractions carry no domain annotation, so checking is type inference: every
// binder gets a type variable and constraints are solved by first-order unification
// as they arise. Terms whose type still contains a variable are rejected only where
// a concrete type has to be reported.
class Checker {
 public:
  explicit Checker(const MetaTable& metas) : metas_(metas) {}

  // Runs f with child appended to the current path.
  template <class F>
  decltype(auto) at(std::uint8_t child, F&& f) {
    struct Pop {
      Path& p;
      ~Pop() { p.pop_back(); }
    };
    path_.push_back(child);
    Pop pop{path_};
    return f();
  }

  [[noreturn]] void fail(const std::string& reason) { throw IllTyped(reason, path_); }

  using Ctx = std::vector<int>;

  Ctx import_context(const Context& ctx) {
    Ctx out;
    for (const auto& ty : ctx) out.push_back(import(ty));
    return out;
  }

  int import(const SimpleType& ty) {
    if (ty.is_base()) return make(Node{Kind::Base, ty.name(), -1, -1});
    int dom = import(ty.dom());
    int cod = import(ty.cod());
    return make(Node{Kind::Arrow, "", dom, cod});
  }

  std::optional<SimpleType> resolve(int t) {
    t = find(t);
    const Node& n = nodes_[t];
    if (n.kind == Kind::Base) return SimpleType::base(n.name);
    if (n.kind == Kind::Var) return std::nullopt;
    auto dom = resolve(n.dom);
    auto cod = resolve(n.cod);
    if (!dom || !cod) return std::nullopt;
    return SimpleType::arrow(*dom, *cod);
  }

  SimpleType concrete(int t, const std::string& what) {
    auto ty = resolve(t);
    if (!ty) fail("cannot infer the " + what + " (an abstraction's domain is undetermined)");
    return *ty;
  }

  int infer(const Ctx& ctx, const Term& t) {
    return std::visit(
        overloaded{
            [&](const Index& x) -> int {
              if (x.n > ctx.size()) {
                fail("index " + std::to_string(x.n) + " out of range in context of length " +
                     std::to_string(ctx.size()));
              }
              return ctx[x.n - 1];
            },
            [&](const Meta& x) -> int {
              const Sort& sort = meta_sort(x.name);
              bool fits = sort.ctx.size() == ctx.size();
              for (std::size_t i = 0; fits && i < ctx.size(); ++i) fits = unify(ctx[i], import(sort.ctx[i]));
              if (!fits) {
                fail("metavariable ?" + x.name + " declared in context " + render_context(sort.ctx) +
                     " used in context " + show_context(ctx));
              }
              return import(sort.ty);
            },
            [&](const App& x) -> int {
              int fun = at(0, [&] { return infer(ctx, x.fun); });
              int arg = at(1, [&] { return infer(ctx, x.arg); });
              int f = find(fun);
              if (nodes_[f].kind == Kind::Base) fail("application of a term of non-arrow type " + show(f));
              if (nodes_[f].kind == Kind::Var) {
                int result = fresh();
                unify(f, make(Node{Kind::Arrow, "", arg, result}));
                return result;
              }
              if (!unify(nodes_[f].dom, arg)) {
                at(1, [&] {
                  fail("argument of type " + show(arg) + " where " + show(nodes_[f].dom) + " is expected");
                  return 0;
                });
              }
              return nodes_[f].cod;
            },
            [&](const Lam& x) -> int {
              int dom = fresh();
              int cod = at(0, [&] { return infer(extend_ctx(dom, ctx), x.body); });
              return make(Node{Kind::Arrow, "", dom, cod});
            },
            [&](const Closure& x) -> int {
              Ctx inner = at(1, [&] { return target(ctx, x.subst); });
              return at(0, [&] { return infer(inner, x.body); });
            },
        },
        t.node());
  }

  void check(const Ctx& ctx, const Term& t, int expected) {
    if (const auto* lam = t.as<Lam>()) {
      int e = find(expected);
      if (nodes_[e].kind == Kind::Base) fail("abstraction checked against non-arrow type " + show(e));
      if (nodes_[e].kind == Kind::Var) unify(e, make(Node{Kind::Arrow, "", fresh(), fresh()}));
      e = find(e);
      int dom = nodes_[e].dom;
      int cod = nodes_[e].cod;
      at(0, [&] {
        check(extend_ctx(dom, ctx), lam->body, cod);
        return 0;
      });
      return;
    }
    if (const auto* c = t.as<Closure>()) {
      Ctx inner = at(1, [&] { return target(ctx, c->subst); });
      at(0, [&] {
        check(inner, c->body, expected);
        return 0;
      });
      return;
    }
    int actual = infer(ctx, t);
    if (!unify(actual, expected)) fail("type " + show(actual) + " where " + show(expected) + " is expected");
  }

  Ctx target(const Ctx& ctx, const Subst& s) {
    return std::visit(overloaded{
                          [&](const Shift& x) -> Ctx {
                            if (x.k > ctx.size()) {
                              fail("shift ^" + std::to_string(x.k) + " applied to context of length " +
                                   std::to_string(ctx.size()));
                            }
                            return Ctx(ctx.begin() + x.k, ctx.end());
                          },
                          [&](const Cons& x) -> Ctx {
                            int head = at(0, [&] { return infer(ctx, x.head); });
                            Ctx tail = at(1, [&] { return target(ctx, x.tail); });
                            return extend_ctx(head, tail);
                          },
                          [&](const Comp& x) -> Ctx {
                            Ctx mid = at(1, [&] { return target(ctx, x.second); });
                            return at(0, [&] { return target(mid, x.first); });
                          },
                      },
                      s.node());
  }

  bool unify_contexts(const Ctx& a, const Ctx& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!unify(a[i], b[i])) return false;
    }
    return true;
  }

  bool unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (nodes_[a].kind == Kind::Var) return bind(a, b);
    if (nodes_[b].kind == Kind::Var) return bind(b, a);
    if (nodes_[a].kind != nodes_[b].kind) return false;
    if (nodes_[a].kind == Kind::Base) return nodes_[a].name == nodes_[b].name;
    return unify(nodes_[a].dom, nodes_[b].dom) && unify(nodes_[a].cod, nodes_[b].cod);
  }

  std::string show(int t) {
    t = find(t);
    const Node& n = nodes_[t];
    if (n.kind == Kind::Base) return n.name;
    if (n.kind == Kind::Var) return "'t" + std::to_string(t);
    std::string dom = show(n.dom);
    if (nodes_[find(n.dom)].kind == Kind::Arrow) dom = "(" + dom + ")";
    return dom + " -> " + show(n.cod);
  }

  std::string show_context(const Ctx& ctx) {
    std::string out = "[";
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (i) out += ", ";
      out += show(ctx[i]);
    }
    return out + "]";
  }

 private:
  enum class Kind { Base, Arrow, Var };
  struct Node {
    Kind kind;
    std::string name;
    int dom;
    int cod;
    int bound = -1;
  };

  int make(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
  }
  int fresh() { return make(Node{Kind::Var, "", -1, -1}); }

  int find(int t) {
    while (nodes_[t].kind == Kind::Var && nodes_[t].bound >= 0) t = nodes_[t].bound;
    return t;
  }

  bool occurs(int v, int t) {
    t = find(t);
    if (t == v) return true;
    if (nodes_[t].kind != Kind::Arrow) return false;
    return occurs(v, nodes_[t].dom) || occurs(v, nodes_[t].cod);
  }

  bool bind(int var, int t) {
    if (occurs(var, t)) return false;
    nodes_[var].bound = t;
    return true;
  }

  static Ctx extend_ctx(int ty, const Ctx& ctx) {
    Ctx out;
    out.reserve(ctx.size() + 1);
    out.push_back(ty);
    out.insert(out.end(), ctx.begin(), ctx.end());
    return out;
  }

  const Sort& meta_sort(const std::string& name) {
    const Sort* sort = metas_.find(name);
    if (!sort) fail("undeclared metavariable ?" + name);
    return *sort;
  }

  const MetaTable& metas_;
  std::vector<Node> nodes_;
  Path path_;
};

}  // namespace

SimpleType sort_check_term(const Context& ctx, const MetaTable& metas, const Term& t) {
  Checker c(metas);
  int ty = c.infer(c.import_context(ctx), t);
  return c.concrete(ty, "type of the term");
}

void check_term(const Context& ctx, const MetaTable& metas, const Term& t, const SimpleType& expected) {
  Checker c(metas);
  c.check(c.import_context(ctx), t, c.import(expected));
}

Context sort_check_subst(const Context& ctx, const MetaTable& metas, const Subst& s) {
  Checker c(metas);
  Checker::Ctx target = c.target(c.import_context(ctx), s);
  Context out;
  for (int ty : target) out.push_back(c.concrete(ty, "target context of the substitution"));
  return out;
}

void check_subst(const Context& ctx, const MetaTable& metas, const Subst& s, const Context& expected_target) {
  Checker c(metas);
  Checker::Ctx actual = c.target(c.import_context(ctx), s);
  Checker::Ctx expected = c.import_context(expected_target);
  if (!c.unify_contexts(actual, expected)) {
    c.fail("substitution targets " + c.show_context(actual) + " where " + render_context(expected_target) +
           " is expected");
  }
}

bool ValidationReport::ok() const {
  return std::all_of(flags.begin(), flags.end(), [](const Flag& f) { return f.passed; });
}

void ValidationReport::add(std::string name, bool passed) { flags.push_back({std::move(name), passed}); }

std::string ValidationReport::render() const {
  std::ostringstream out;
  for (const auto& f : flags) out << (f.passed ? "PASS" : "FAIL") << "  " << f.name << "\n";
  for (const auto& v : violations) out << "  - " << v << "\n";
  return out.str();
}

UnifProblem explicit_form(const UnifProblem& p) {
  if (p.mode != Mode::LambdaSigma || has_closure(p.lhs) || has_closure(p.rhs)) return p;
  UnifProblem out = p;
  out.lhs = precook_term(p.lhs);
  out.rhs = precook_term(p.rhs);
  return out;
}

SimpleType equation_type(const UnifProblem& p) {
  UnifProblem e = explicit_form(p);
  Checker c(e.metas);
  Checker::Ctx ctx = c.import_context(e.ctx);
  auto side = [&](const Term& t, const char* which) {
    try {
      return c.infer(ctx, t);
    } catch (const IllTyped& err) {
      throw IllTyped(std::string(which) + ": " + err.reason(), err.path());
    }
  };
  int lhs = side(e.lhs, "left-hand side");
  int rhs = side(e.rhs, "right-hand side");
  if (!c.unify(lhs, rhs)) c.fail("the sides have types " + c.show(lhs) + " and " + c.show(rhs));
  return c.concrete(lhs, "type of the equation");
}

ValidationReport validate_problem(const UnifProblem& p) {
  ValidationReport report;
  bool typed = false;
  bool atomic = false;
  try {
    SimpleType ty = equation_type(p);
    typed = true;
    atomic = ty.is_base();
    if (!atomic) report.violations.push_back("equation has non-atomic type " + render_type(ty));
  } catch (const IllTyped& err) {
    report.violations.push_back(err.what());
  }
  report.add("sides sort-check with equal type", typed);
  report.add("common type is atomic", atomic);

  bool ctx_ok = check_second_order_context(p.ctx);
  if (!ctx_ok) report.violations.push_back("context " + render_context(p.ctx) + " is not second order");
  report.add("context is second order", ctx_ok);

  bool metas_ok = true;
  for (const auto& [name, sort] : p.metas) {
    if (order_of_type(sort.ty) > 2) {
      metas_ok = false;
      report.violations.push_back("metavariable ?" + name + " has type " + render_type(sort.ty) + " of order " +
                                  std::to_string(order_of_type(sort.ty)));
    }
  }
  report.add("metavariable types have order <= 2", metas_ok);

  bool bases_ok = true;
  auto declared = [&](const SimpleType& ty) {
    std::vector<const SimpleType*> stack{&ty};
    while (!stack.empty()) {
      const SimpleType* cur = stack.back();
      stack.pop_back();
      if (cur->is_base()) {
        if (std::find(p.base_types.begin(), p.base_types.end(), cur->name()) == p.base_types.end()) {
          report.violations.push_back("undeclared base type " + cur->name());
          return false;
        }
      } else {
        stack.push_back(&cur->dom());
        stack.push_back(&cur->cod());
      }
    }
    return true;
  };
  for (const auto& ty : p.ctx) bases_ok = declared(ty) && bases_ok;
  for (const auto& [name, sort] : p.metas) {
    bases_ok = declared(sort.ty) && bases_ok;
    for (const auto& ty : sort.ctx) bases_ok = declared(ty) && bases_ok;
  }
  report.add("base types are declared", bases_ok);
  return report;
}

}  // namespace lsf
