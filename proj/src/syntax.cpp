#include "lsf/syntax.hpp"

#include <algorithm>
#include <cctype>

#include "lsf/error.hpp"
#include "overloaded.hpp"

namespace lsf {

namespace {

using detail::overloaded;

// ---- s-expression reader ----

struct Sexp {
  bool atom = false;
  std::string text;
  std::vector<Sexp> items;
  SourcePos pos;
};

[[noreturn]] void fail_at(SourcePos pos, const std::string& what) { throw ParseError(pos.line, pos.col, what); }

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Sexp read_one() {
    skip();
    if (at_end()) fail_at(pos_, "expected an s-expression");
    Sexp s = read();
    skip();
    if (!at_end()) fail_at(pos_, "expected end of input");
    return s;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }

  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  void skip() {
    while (!at_end()) {
      char c = text_[i_];
      if (c == ';') {
        while (!at_end() && text_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Sexp read() {
    Sexp s;
    s.pos = pos_;
    char c = text_[i_];
    if (c == ')') fail_at(pos_, "unexpected ')'");
    if (c == '(') {
      advance();
      for (;;) {
        skip();
        if (at_end()) fail_at(pos_, "expected ')' to close the list opened at " + std::to_string(s.pos.line) + ":" +
                                        std::to_string(s.pos.col));
        if (text_[i_] == ')') {
          advance();
          return s;
        }
        s.items.push_back(read());
      }
    }
    s.atom = true;
    while (!at_end()) {
      char d = text_[i_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      s.text += d;
      advance();
    }
    return s;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

bool is_atom(const Sexp& s, std::string_view text) { return s.atom && s.text == text; }

bool is_number(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::uint32_t read_number(const Sexp& s, const std::string& what) {
  if (!s.atom || !is_number(s.text) || s.text.size() > 9) fail_at(s.pos, "expected " + what);
  return static_cast<std::uint32_t>(std::stoul(s.text));
}

const std::string& head_of(const Sexp& s) {
  static const std::string kNone;
  if (s.atom || s.items.empty() || !s.items[0].atom) return kNone;
  return s.items[0].text;
}

// ---- surface syntax ----

SimpleType read_type(const Sexp& s) {
  if (s.atom) {
    if (s.text.empty() || s.text == "->" || is_number(s.text)) fail_at(s.pos, "expected a type");
    return SimpleType::base(s.text);
  }
  if (head_of(s) != "->" || s.items.size() < 3) fail_at(s.pos, "expected a type (-> A B ...)");
  std::vector<SimpleType> parts;
  for (std::size_t i = 1; i < s.items.size(); ++i) parts.push_back(read_type(s.items[i]));
  SimpleType result = parts.back();
  parts.pop_back();
  return SimpleType::arrows(parts, result);
}

NamedSubst read_subst(const Sexp& s);

NamedTerm read_term(const Sexp& s) {
  NamedTerm t;
  t.pos = s.pos;
  if (s.atom) {
    if (is_number(s.text)) {
      std::uint32_t n = read_number(s, "an index");
      if (n == 0) fail_at(s.pos, "expected an index >= 1");
      t.node = NamedTerm::RawIndex{n};
    } else if (s.text.size() > 1 && s.text[0] == '?') {
      t.node = NamedTerm::MetaRef{s.text.substr(1)};
    } else if (s.text == "?" || s.text == "app" || s.text == "lam" || s.text == "clos") {
      fail_at(s.pos, "expected a term");
    } else {
      t.node = NamedTerm::Var{s.text};
    }
    return t;
  }
  const std::string& head = head_of(s);
  if (head == "app") {
    if (s.items.size() < 3) fail_at(s.pos, "expected (app f a ...)");
    NamedTerm::Apply a;
    a.fun = std::make_shared<NamedTerm>(read_term(s.items[1]));
    for (std::size_t i = 2; i < s.items.size(); ++i) a.args.push_back(read_term(s.items[i]));
    t.node = std::move(a);
  } else if (head == "lam") {
    NamedTerm::Abs a;
    if (s.items.size() == 2) {
      a.body = std::make_shared<NamedTerm>(read_term(s.items[1]));
    } else if (s.items.size() == 3) {
      const Sexp& b = s.items[1];
      if (b.atom && !b.text.empty() && !is_number(b.text) && b.text[0] != '?') {
        a.binder = b.text;
      } else if (!b.atom && b.items.size() == 2 && b.items[0].atom && !is_number(b.items[0].text) &&
                 b.items[0].text[0] != '?') {
        read_type(b.items[1]);
        a.binder = b.items[0].text;
      } else {
        fail_at(b.pos, "expected a binder name or (name type)");
      }
      a.body = std::make_shared<NamedTerm>(read_term(s.items[2]));
    } else {
      fail_at(s.pos, "expected (lam body) or (lam binder body)");
    }
    t.node = std::move(a);
  } else if (head == "clos") {
    if (s.items.size() != 3) fail_at(s.pos, "expected (clos term subst)");
    t.node = NamedTerm::Clos{std::make_shared<NamedTerm>(read_term(s.items[1])),
                             std::make_shared<NamedSubst>(read_subst(s.items[2]))};
  } else {
    fail_at(s.pos, "expected a term");
  }
  return t;
}

NamedSubst read_subst(const Sexp& s) {
  NamedSubst r;
  r.pos = s.pos;
  if (s.atom) {
    if (s.text == "id") {
      r.node = NamedSubst::ShiftBy{0};
    } else if (s.text.size() > 1 && s.text[0] == '^' && is_number(s.text.substr(1))) {
      Sexp num = s;
      num.text = s.text.substr(1);
      r.node = NamedSubst::ShiftBy{read_number(num, "a shift amount")};
    } else {
      fail_at(s.pos, "expected a substitution");
    }
    return r;
  }
  const std::string& head = head_of(s);
  if (head == "shift") {
    if (s.items.size() != 2) fail_at(s.pos, "expected (shift k)");
    r.node = NamedSubst::ShiftBy{read_number(s.items[1], "a shift amount")};
  } else if (head == "cons") {
    if (s.items.size() != 3) fail_at(s.pos, "expected (cons term subst)");
    r.node = NamedSubst::ConsOf{read_term(s.items[1]), std::make_shared<NamedSubst>(read_subst(s.items[2]))};
  } else if (head == "comp") {
    if (s.items.size() != 3) fail_at(s.pos, "expected (comp subst subst)");
    r.node = NamedSubst::CompOf{std::make_shared<NamedSubst>(read_subst(s.items[1])),
                                std::make_shared<NamedSubst>(read_subst(s.items[2]))};
  } else {
    fail_at(s.pos, "expected a substitution");
  }
  return r;
}

// ---- elaboration ----

NameEnv push_front(std::optional<std::string> name, const NameEnv& env) {
  NameEnv out;
  out.reserve(env.size() + 1);
  out.push_back(std::move(name));
  out.insert(out.end(), env.begin(), env.end());
  return out;
}

NameEnv drop_env(const NameEnv& env, std::size_t k) {
  if (k >= env.size()) return {};
  return NameEnv(env.begin() + static_cast<std::ptrdiff_t>(k), env.end());
}

bool visible(const NameEnv& env, const std::string& name) {
  return std::any_of(env.begin(), env.end(), [&](const auto& n) { return n && *n == name; });
}

class Elaborator {
 public:
  explicit Elaborator(bool located, const MetaTable* metas = nullptr) : located_(located), metas_(metas) {}

  Term term(const NamedTerm& nt, const NameEnv& env) {
    return std::visit(
        overloaded{
            [&](const NamedTerm::Var& v) -> Term {
              for (std::size_t i = 0; i < env.size(); ++i) {
                if (env[i] && *env[i] == v.name) return Term::index(static_cast<std::uint32_t>(i + 1));
              }
              if (located_) fail_at(nt.pos, "unbound name " + v.name);
              throw UnboundName(v.name);
            },
            [&](const NamedTerm::RawIndex& r) { return Term::index(r.n); },
            [&](const NamedTerm::MetaRef& m) {
              if (metas_ && !metas_->contains(m.name)) fail_at(nt.pos, "undeclared metavariable ?" + m.name);
              return Term::meta(m.name);
            },
            [&](const NamedTerm::Apply& a) {
              Term out = term(*a.fun, env);
              for (const auto& arg : a.args) out = Term::app(out, term(arg, env));
              return out;
            },
            [&](const NamedTerm::Abs& a) {
              if (a.binder && visible(env, *a.binder)) fail_at(nt.pos, "binder " + *a.binder + " shadows a visible name");
              return Term::lam(term(*a.body, push_front(a.binder, env)));
            },
            [&](const NamedTerm::Clos& c) {
              return Term::closure(term(*c.body, target(*c.subst, env)), subst(*c.subst, env));
            },
        },
        nt.node);
  }

  Subst subst(const NamedSubst& ns, const NameEnv& env) {
    return std::visit(overloaded{
                          [&](const NamedSubst::ShiftBy& s) { return Subst::shift(s.k); },
                          [&](const NamedSubst::ConsOf& c) {
                            return Subst::cons(term(c.head, env), subst(*c.tail, env));
                          },
                          [&](const NamedSubst::CompOf& c) {
                            return Subst::comp(subst(*c.first, target(*c.second, env)), subst(*c.second, env));
                          },
                      },
                      ns.node);
  }

  // Names visible to a term placed under the substitution.
  static NameEnv target(const NamedSubst& ns, const NameEnv& env) {
    return std::visit(overloaded{
                          [&](const NamedSubst::ShiftBy& s) { return drop_env(env, s.k); },
                          [&](const NamedSubst::ConsOf& c) { return push_front(std::nullopt, target(*c.tail, env)); },
                          [&](const NamedSubst::CompOf& c) { return target(*c.first, target(*c.second, env)); },
                      },
                      ns.node);
  }

 private:
  bool located_;
  const MetaTable* metas_;
};

NameEnv subst_target(const Subst& s, const NameEnv& env) {
  return std::visit(overloaded{
                        [&](const Shift& x) { return drop_env(env, x.k); },
                        [&](const Cons& x) { return push_front(std::nullopt, subst_target(x.tail, env)); },
                        [&](const Comp& x) { return subst_target(x.first, subst_target(x.second, env)); },
                    },
                    s.node());
}

// ---- rendering ----

std::string fresh_binder(const NameEnv& env) {
  for (unsigned k = 1;; ++k) {
    std::string name = "x" + std::to_string(k);
    if (!visible(env, name)) return name;
  }
}

std::string index_name(std::uint32_t n, const NameEnv& env) {
  if (n >= 1 && n <= env.size() && env[n - 1]) return *env[n - 1];
  return std::to_string(n);
}

class TextRenderer {
 public:
  explicit TextRenderer(RenderStyle style) : style_(style) {}

  std::string term(const Term& t, const NameEnv& env) {
    return std::visit(
        overloaded{
            [&](const Index& x) { return named() ? index_name(x.n, env) : std::to_string(x.n); },
            [&](const Meta& x) { return "?" + x.name; },
            [&](const App& x) {
              std::string f = x.fun.is<Lam>() ? paren(term(x.fun, env)) : term(x.fun, env);
              std::string a = (x.arg.is<App>() || x.arg.is<Lam>()) ? paren(term(x.arg, env)) : term(x.arg, env);
              return f + " " + a;
            },
            [&](const Lam& x) {
              if (!named()) return "λ." + term(x.body, push_front(std::nullopt, env));
              std::string b = fresh_binder(env);
              return "λ" + b + ". " + term(x.body, push_front(b, env));
            },
            [&](const Closure& x) {
              NameEnv inner = subst_target(x.subst, env);
              std::string body = (x.body.is<App>() || x.body.is<Lam>()) ? paren(term(x.body, inner))
                                                                          : term(x.body, inner);
              return body + "[" + subst(x.subst, env) + "]";
            },
        },
        t.node());
  }

  std::string subst(const Subst& s, const NameEnv& env) {
    return std::visit(overloaded{
                          [&](const Shift& x) { return "^" + std::to_string(x.k); },
                          [&](const Cons& x) {
                            std::string h = x.head.is<Lam>() ? paren(term(x.head, env)) : term(x.head, env);
                            std::string tail = x.tail.is<Comp>() ? paren(subst(x.tail, env)) : subst(x.tail, env);
                            return h + " . " + tail;
                          },
                          [&](const Comp& x) {
                            NameEnv mid = subst_target(x.second, env);
                            std::string a = x.first.is<Shift>() ? subst(x.first, mid) : paren(subst(x.first, mid));
                            std::string b = x.second.is<Cons>() ? paren(subst(x.second, env)) : subst(x.second, env);
                            return a + " ∘ " + b;
                          },
                      },
                      s.node());
  }

 private:
  bool named() const { return style_ == RenderStyle::Named; }
  static std::string paren(const std::string& s) { return "(" + s + ")"; }
  RenderStyle style_;
};

std::string sexp_type(const SimpleType& ty) {
  if (ty.is_base()) return ty.name();
  std::string out = "(->";
  const SimpleType* cur = &ty;
  while (cur->is_arrow()) {
    out += " " + sexp_type(cur->dom());
    cur = &cur->cod();
  }
  return out + " " + sexp_type(*cur) + ")";
}

std::string sexp_subst(const Subst& s, const NameEnv& env);

std::string sexp_term(const Term& t, const NameEnv& env) {
  return std::visit(overloaded{
                        [&](const Index& x) { return index_name(x.n, env); },
                        [&](const Meta& x) { return "?" + x.name; },
                        [&](const App&) {
                          std::vector<const Term*> args;
                          const Term* cur = &t;
                          while (const auto* a = cur->as<App>()) {
                            args.push_back(&a->arg);
                            cur = &a->fun;
                          }
                          std::string out = "(app " + sexp_term(*cur, env);
                          for (auto it = args.rbegin(); it != args.rend(); ++it) out += " " + sexp_term(**it, env);
                          return out + ")";
                        },
                        [&](const Lam& x) {
                          std::string b = fresh_binder(env);
                          return "(lam " + b + " " + sexp_term(x.body, push_front(b, env)) + ")";
                        },
                        [&](const Closure& x) {
                          return "(clos " + sexp_term(x.body, subst_target(x.subst, env)) + " " +
                                 sexp_subst(x.subst, env) + ")";
                        },
                    },
                    t.node());
}

std::string sexp_subst(const Subst& s, const NameEnv& env) {
  return std::visit(overloaded{
                        [&](const Shift& x) { return "(shift " + std::to_string(x.k) + ")"; },
                        [&](const Cons& x) {
                          return "(cons " + sexp_term(x.head, env) + " " + sexp_subst(x.tail, env) + ")";
                        },
                        [&](const Comp& x) {
                          return "(comp " + sexp_subst(x.first, subst_target(x.second, env)) + " " +
                                 sexp_subst(x.second, env) + ")";
                        },
                    },
                    s.node());
}

// ---- problem files ----

NameEnv names_to_env(const std::vector<std::string>& names) { return NameEnv(names.begin(), names.end()); }

bool valid_name(const std::string& s) { return !s.empty() && !is_number(s) && s[0] != '?' && s[0] != '^'; }

}  // namespace

Term to_de_bruijn(const NamedTerm& nt, const NameEnv& env) { return Elaborator(false).term(nt, env); }

Subst to_de_bruijn(const NamedSubst& ns, const NameEnv& env) { return Elaborator(false).subst(ns, env); }

NameEnv problem_env(const ProblemFile& pf) { return names_to_env(pf.ctx_names); }

NameEnv meta_env(const ProblemFile& pf, const std::string& name) {
  const Sort* sort = pf.problem.metas.find(name);
  if (!sort) throw UnknownMeta(name);
  const Context& ctx = pf.problem.ctx;
  if (sort->ctx.size() >= ctx.size()) {
    std::size_t extra = sort->ctx.size() - ctx.size();
    if (drop(sort->ctx, extra) == ctx) {
      NameEnv env(extra, std::nullopt);
      env.insert(env.end(), pf.ctx_names.begin(), pf.ctx_names.end());
      return env;
    }
  }
  return NameEnv(sort->ctx.size(), std::nullopt);
}

ProblemFile parse_problem(std::string_view text) {
  Sexp top = Reader(text).read_one();
  if (head_of(top) != "problem") fail_at(top.pos, "expected (problem ...)");

  std::vector<std::string> base_types;
  std::vector<std::string> ctx_names;
  Context ctx;
  Mode mode = Mode::LambdaSigma;
  std::optional<Expectation> expect;
  std::vector<CertificateEntry> certificate;
  const Sexp* equation = nullptr;
  const Sexp* metavars = nullptr;
  std::vector<std::string> seen;
  for (std::size_t i = 1; i < top.items.size(); ++i) {
    const Sexp& section = top.items[i];
    const std::string& head = head_of(section);
    if (head.empty()) fail_at(section.pos, "expected a section");
    if (std::find(seen.begin(), seen.end(), head) != seen.end()) fail_at(section.pos, "duplicate section " + head);
    seen.push_back(head);
    if (head == "base-types") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const Sexp& b = section.items[j];
        if (!b.atom || !valid_name(b.text)) fail_at(b.pos, "expected a base type name");
        base_types.push_back(b.text);
      }
    } else if (head == "context") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const Sexp& e = section.items[j];
        if (e.atom || e.items.size() != 2 || !e.items[0].atom || !valid_name(e.items[0].text)) {
          fail_at(e.pos, "expected (name type)");
        }
        if (std::find(ctx_names.begin(), ctx_names.end(), e.items[0].text) != ctx_names.end()) {
          fail_at(e.pos, "duplicate context name " + e.items[0].text);
        }
        ctx_names.push_back(e.items[0].text);
        ctx.push_back(read_type(e.items[1]));
      }
      std::reverse(ctx_names.begin(), ctx_names.end());
      std::reverse(ctx.begin(), ctx.end());
    } else if (head == "metavars") {
      metavars = &section;
    } else if (head == "mode") {
      if (section.items.size() != 2) fail_at(section.pos, "expected (mode sigma|lambdasigma)");
      if (is_atom(section.items[1], "sigma")) {
        mode = Mode::SigmaOnly;
      } else if (is_atom(section.items[1], "lambdasigma")) {
        mode = Mode::LambdaSigma;
      } else {
        fail_at(section.items[1].pos, "expected sigma or lambdasigma");
      }
    } else if (head == "equation") {
      if (section.items.size() != 3) fail_at(section.pos, "expected (equation lhs rhs)");
      equation = &section;
    } else if (head == "expect") {
      if (section.items.size() != 4 || !is_atom(section.items[2], ":bound")) {
        fail_at(section.pos, "expected (expect solvable|no-solution :bound N)");
      }
      Expectation e{};
      if (is_atom(section.items[1], "solvable")) {
        e.solvable = true;
      } else if (is_atom(section.items[1], "no-solution")) {
        e.solvable = false;
      } else {
        fail_at(section.items[1].pos, "expected solvable or no-solution");
      }
      e.bound = read_number(section.items[3], "a bound");
      expect = e;
    } else if (head == "certificate") {
      if (section.items.size() != 2 || head_of(section.items[1]) != "map") {
        fail_at(section.pos, "expected (certificate (map (X Y n) ...))");
      }
      const Sexp& map = section.items[1];
      for (std::size_t j = 1; j < map.items.size(); ++j) {
        const Sexp& e = map.items[j];
        if (e.atom || e.items.size() != 3 || !e.items[0].atom || !e.items[1].atom) fail_at(e.pos, "expected (X Y n)");
        certificate.push_back({e.items[0].text, e.items[1].text, read_number(e.items[2], "an arity")});
      }
    } else {
      fail_at(section.pos, "unknown section " + head);
    }
  }
  if (!equation) fail_at(top.pos, "expected an (equation lhs rhs) section");

  MetaTable metas;
  if (metavars) {
    for (std::size_t j = 1; j < metavars->items.size(); ++j) {
      const Sexp& e = metavars->items[j];
      if (e.atom || e.items.size() < 2 || e.items.size() > 3 || !e.items[0].atom || !valid_name(e.items[0].text)) {
        fail_at(e.pos, "expected (name type) or (name type (ctx ...))");
      }
      Sort sort{ctx, read_type(e.items[1])};
      if (e.items.size() == 3) {
        const Sexp& c = e.items[2];
        if (head_of(c) != "ctx") fail_at(c.pos, "expected (ctx type ...)");
        Context mctx;
        for (std::size_t k = 1; k < c.items.size(); ++k) mctx.push_back(read_type(c.items[k]));
        std::reverse(mctx.begin(), mctx.end());
        sort.ctx = std::move(mctx);
      }
      const std::string& name = e.items[0].text;
      if (metas.contains(name)) fail_at(e.pos, "duplicate metavariable " + name);
      metas.declare(name, std::move(sort));
    }
  }

  NameEnv env = names_to_env(ctx_names);
  Elaborator elab(true, &metas);
  Term lhs = elab.term(read_term(equation->items[1]), env);
  Term rhs = elab.term(read_term(equation->items[2]), env);
  return ProblemFile{UnifProblem{std::move(base_types), std::move(ctx), std::move(metas), lhs, rhs, mode},
                     std::move(ctx_names), expect, std::move(certificate)};
}

Term parse_term(std::string_view text, const ProblemFile& pf) {
  Sexp s = Reader(text).read_one();
  return Elaborator(true, &pf.problem.metas).term(read_term(s), problem_env(pf));
}

Term parse_term(std::string_view text, const NameEnv& env) {
  Sexp s = Reader(text).read_one();
  return Elaborator(true).term(read_term(s), env);
}

MetaSubst parse_subst(std::string_view text, const ProblemFile& pf) {
  Sexp top = Reader(text).read_one();
  if (head_of(top) != "subst") fail_at(top.pos, "expected (subst (?X term) ...)");
  MetaSubst::Map bindings;
  Elaborator elab(true, &pf.problem.metas);
  for (std::size_t i = 1; i < top.items.size(); ++i) {
    const Sexp& b = top.items[i];
    if (b.atom || b.items.size() != 2 || !b.items[0].atom || b.items[0].text.size() < 2 || b.items[0].text[0] != '?') {
      fail_at(b.pos, "expected (?X term)");
    }
    std::string name = b.items[0].text.substr(1);
    if (!pf.problem.metas.contains(name)) fail_at(b.items[0].pos, "undeclared metavariable ?" + name);
    if (bindings.count(name)) fail_at(b.pos, "duplicate binding for ?" + name);
    bindings.emplace(name, elab.term(read_term(b.items[1]), meta_env(pf, name)));
  }
  return MetaSubst(std::move(bindings));
}

std::string render_term(const Term& t, const NameEnv& env, RenderStyle style) { return TextRenderer(style).term(t, env); }

std::string render_subst(const Subst& s, const NameEnv& env, RenderStyle style) {
  return TextRenderer(style).subst(s, env);
}

std::string render_equation(const ProblemFile& pf, RenderStyle style) {
  NameEnv env = problem_env(pf);
  return render_term(pf.problem.lhs, env, style) + " = " + render_term(pf.problem.rhs, env, style);
}

std::string render_sexp_term(const Term& t, const NameEnv& env) { return sexp_term(t, env); }

std::string render_problem(const ProblemFile& pf) {
  const UnifProblem& p = pf.problem;
  std::string out = "(problem\n  (base-types";
  for (const auto& b : p.base_types) out += " " + b;
  out += ")\n  (context";
  for (std::size_t i = p.ctx.size(); i-- > 0;) {
    out += " (" + pf.ctx_names.at(i) + " " + sexp_type(p.ctx[i]) + ")";
  }
  out += ")\n  (metavars";
  for (const auto& [name, sort] : p.metas) {
    out += " (" + name + " " + sexp_type(sort.ty);
    if (sort.ctx != p.ctx) {
      out += " (ctx";
      for (std::size_t i = sort.ctx.size(); i-- > 0;) out += " " + sexp_type(sort.ctx[i]);
      out += ")";
    }
    out += ")";
  }
  out += ")\n  (mode ";
  out += p.mode == Mode::SigmaOnly ? "sigma" : "lambdasigma";
  NameEnv env = problem_env(pf);
  out += ")\n  (equation " + sexp_term(p.lhs, env) + " " + sexp_term(p.rhs, env) + ")";
  if (pf.expect) {
    out += "\n  (expect ";
    out += pf.expect->solvable ? "solvable" : "no-solution";
    out += " :bound " + std::to_string(pf.expect->bound) + ")";
  }
  if (!pf.certificate.empty()) {
    out += "\n  (certificate (map";
    for (const auto& e : pf.certificate) out += " (" + e.source + " " + e.fresh + " " + std::to_string(e.arity) + ")";
    out += "))";
  }
  return out + ")\n";
}

}  // namespace lsf
