#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lsf/sort.hpp"
#include "lsf/term.hpp"
#include "lsf/transform.hpp"

namespace lsf {

/// Names of context entries by position (position 0 is Index 1). Unnamed entries
/// can only be referred to by a raw index.
using NameEnv = std::vector<std::optional<std::string>>;

struct SourcePos {
  int line = 1;
  int col = 1;
};

struct NamedTerm;
struct NamedSubst;

/// Surface terms before scope resolution. Annotated binders keep their annotation
/// text but it plays no part in elaboration.
struct NamedTerm {
  struct Var {
    std::string name;
  };
  struct RawIndex {
    std::uint32_t n;
  };
  struct MetaRef {
    std::string name;
  };
  struct Apply {
    std::shared_ptr<NamedTerm> fun;
    std::vector<NamedTerm> args;
  };
  struct Abs {
    std::optional<std::string> binder;
    std::shared_ptr<NamedTerm> body;
  };
  struct Clos {
    std::shared_ptr<NamedTerm> body;
    std::shared_ptr<NamedSubst> subst;
  };
  std::variant<Var, RawIndex, MetaRef, Apply, Abs, Clos> node;
  SourcePos pos;
};

struct NamedSubst {
  struct ShiftBy {
    std::uint32_t k;
  };
  struct ConsOf {
    NamedTerm head;
    std::shared_ptr<NamedSubst> tail;
  };
  struct CompOf {
    std::shared_ptr<NamedSubst> first;
    std::shared_ptr<NamedSubst> second;
  };
  std::variant<ShiftBy, ConsOf, CompOf> node;
  SourcePos pos;
};

/// Innermost binder is Index 1, then the entries of env. Throws UnboundName, and
/// ParseError when a binder shadows a visible name.
Term to_de_bruijn(const NamedTerm& nt, const NameEnv& env);
Subst to_de_bruijn(const NamedSubst& ns, const NameEnv& env);

struct Expectation {
  bool solvable;
  unsigned bound;
  friend bool operator==(const Expectation&, const Expectation&) = default;
};

struct ProblemFile {
  UnifProblem problem;
  /// Context names by position, parallel to problem.ctx.
  std::vector<std::string> ctx_names;
  std::optional<Expectation> expect;
  std::vector<CertificateEntry> certificate;
};

/// Throws ParseError (with line and column) on malformed input, undeclared names
/// and shadowing.
ProblemFile parse_problem(std::string_view text);
/// Parses a term against a problem's context and unknowns.
Term parse_term(std::string_view text, const ProblemFile& pf);
/// Parses a term against bare names; unknowns are not checked against any table.
Term parse_term(std::string_view text, const NameEnv& env);
/// `(subst (?X TERM) ...)`; each term is read in the name environment of its unknown.
MetaSubst parse_subst(std::string_view text, const ProblemFile& pf);

/// Names visible in the context of unknown `name`: the problem's context names when
/// the problem context is a suffix of it, otherwise none.
NameEnv meta_env(const ProblemFile& pf, const std::string& name);
NameEnv problem_env(const ProblemFile& pf);

enum class RenderStyle { Named, DeBruijn };

/// Text form: `λx1. x1` or `λ.1`, `f a`, `t[s]`, `a . s`, `^k`, `s ∘ t`.
std::string render_term(const Term& t, const NameEnv& env, RenderStyle style);
std::string render_subst(const Subst& s, const NameEnv& env, RenderStyle style);
std::string render_equation(const ProblemFile& pf, RenderStyle style);

/// The s-expression file format; parse_problem(render_problem(pf)) reproduces pf.
std::string render_problem(const ProblemFile& pf);
std::string render_sexp_term(const Term& t, const NameEnv& env);

}  // namespace lsf
