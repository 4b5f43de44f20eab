#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace lsf {

// Terms and substitutions of the lambda-sigma calculus with metavariables.
// Both are immutable handles onto shared nodes; copying is cheap.

struct Index;
struct Meta;
struct App;
struct Lam;
struct Closure;
struct Shift;
struct Cons;
struct Comp;

class Term;
class Subst;

/// Child positions from the root: for terms App = {0 fun, 1 arg}, Lam = {0 body},
/// Closure = {0 body, 1 subst}; for substitutions Cons = {0 head, 1 tail},
/// Comp = {0 first, 1 second}.
using Path = std::vector<std::uint8_t>;

std::string render_path(const Path& path);

class Term {
 public:
  using Node = std::variant<Index, Meta, App, Lam, Closure>;

  /// de Bruijn index, n >= 1.
  static Term index(std::uint32_t n);
  static Term meta(std::string name);
  static Term app(Term fun, Term arg);
  static Term lam(Term body);
  static Term closure(Term body, Subst subst);

  const Node& node() const;

  template <class T>
  const T* as() const;
  template <class T>
  bool is() const;

  /// Structural equality.
  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class Subst {
 public:
  using Node = std::variant<Shift, Cons, Comp>;

  /// ^k; shift(0) is the identity substitution.
  static Subst shift(std::uint32_t k);
  static Subst id() { return shift(0); }
  static Subst cons(Term head, Subst tail);
  static Subst comp(Subst first, Subst second);

  const Node& node() const;

  template <class T>
  const T* as() const;
  template <class T>
  bool is() const;

  bool is_shift(std::uint32_t k) const;

  friend bool operator==(const Subst& a, const Subst& b);

 private:
  explicit Subst(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Index {
  std::uint32_t n;
};
struct Meta {
  std::string name;
};
struct App {
  Term fun;
  Term arg;
};
struct Lam {
  Term body;
};
struct Closure {
  Term body;
  Subst subst;
};
struct Shift {
  std::uint32_t k;
};
struct Cons {
  Term head;
  Subst tail;
};
/// first o second: a[first o second] = a[first][second].
struct Comp {
  Subst first;
  Subst second;
};

inline const Term::Node& Term::node() const { return *node_; }
template <class T>
const T* Term::as() const {
  return std::get_if<T>(node_.get());
}
template <class T>
bool Term::is() const {
  return std::holds_alternative<T>(*node_);
}

inline const Subst::Node& Subst::node() const { return *node_; }
template <class T>
const T* Subst::as() const {
  return std::get_if<T>(node_.get());
}
template <class T>
bool Subst::is() const {
  return std::holds_alternative<T>(*node_);
}

/// Finite map from metavariable names to terms, idempotent on its own domain.
class MetaSubst {
 public:
  using Map = std::map<std::string, Term>;

  MetaSubst() = default;
  /// Throws lsf::Error when a bound term mentions a domain metavariable.
  explicit MetaSubst(Map bindings);

  const Term* find(const std::string& name) const;
  bool contains(const std::string& name) const { return bindings_.count(name) != 0; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const Map& bindings() const { return bindings_; }
  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  friend bool operator==(const MetaSubst&, const MetaSubst&) = default;

 private:
  Map bindings_;
};

/// Every X[s] subterm has s = ^k; bare metavariables count as X[^0].
bool is_simple(const Term& t);
bool is_simple_subst(const MetaSubst& theta);

/// Replaces metavariables literally, without adjusting indices.
Term graft(const MetaSubst& theta, const Term& t);
Subst graft(const MetaSubst& theta, const Subst& s);

/// Collapses every Comp(^i, ^j) into ^(i+j), bottom-up.
Subst canonicalize_shifts(const Subst& s);
Term canonicalize_shifts(const Term& t);

std::set<std::string> free_metavars(const Term& t);
std::set<std::string> free_metavars(const Subst& s);

/// Number of Term and Subst constructors.
std::size_t term_size(const Term& t);
std::size_t subst_size(const Subst& s);

bool has_closure(const Term& t);
bool is_ground(const Term& t);

/// Calls fn on every Term node, including those nested in substitutions (pre-order).
void for_each_subterm(const Term& t, const std::function<void(const Term&)>& fn);

}  // namespace lsf

namespace lsf {

/// Translation of a closure-free lambda term into lambda-sigma: a metavariable
/// under k binders becomes X[^k] (bare X at depth 0). Everything else is kept.
Term precook_term(const Term& t);

}  // namespace lsf
