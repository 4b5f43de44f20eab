#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsf/error.hpp"
#include "lsf/term.hpp"

namespace lsf {

class SimpleType {
 public:
  static SimpleType base(std::string name);
  static SimpleType arrow(SimpleType dom, SimpleType cod);
  /// A_1 -> ... -> A_n -> result
  static SimpleType arrows(const std::vector<SimpleType>& args, SimpleType result);

  bool is_base() const { return arrow_ == nullptr; }
  bool is_arrow() const { return arrow_ != nullptr; }
  const std::string& name() const { return name_; }
  const SimpleType& dom() const { return arrow_->first; }
  const SimpleType& cod() const { return arrow_->second; }

  friend bool operator==(const SimpleType& a, const SimpleType& b);

 private:
  SimpleType() = default;
  std::string name_;
  std::shared_ptr<const std::pair<SimpleType, SimpleType>> arrow_;
};

/// Position 0 is the most recently bound entry, i.e. the type of Index 1.
using Context = std::vector<SimpleType>;

Context extend(const SimpleType& ty, const Context& ctx);
Context drop(const Context& ctx, std::size_t k);

struct Sort {
  Context ctx;
  SimpleType ty;
  friend bool operator==(const Sort&, const Sort&) = default;
};

/// Metavariable declarations in declaration order.
class MetaTable {
 public:
  using Entry = std::pair<std::string, Sort>;

  /// Throws lsf::Error on a duplicate name.
  void declare(std::string name, Sort sort);
  const Sort* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::vector<std::string> names() const;

  friend bool operator==(const MetaTable&, const MetaTable&) = default;

 private:
  std::vector<Entry> entries_;
};

enum class Mode { SigmaOnly, LambdaSigma };

struct UnifProblem {
  std::vector<std::string> base_types;
  Context ctx;
  MetaTable metas;
  Term lhs;
  Term rhs;
  Mode mode = Mode::LambdaSigma;

  friend bool operator==(const UnifProblem&, const UnifProblem&) = default;
};

class IllTyped : public Error {
 public:
  IllTyped(std::string reason, Path path)
      : Error("ill-typed at " + render_path(path) + ": " + reason), reason_(std::move(reason)), path_(std::move(path)) {}
  const std::string& reason() const { return reason_; }
  const Path& path() const { return path_; }

 private:
  std::string reason_;
  Path path_;
};

std::string render_type(const SimpleType& ty);

/// order(base) = 1, order(A -> B) = max(order(A) + 1, order(B)).
unsigned order_of_type(const SimpleType& ty);
/// Number of leading arrows.
unsigned arity(const SimpleType& ty);
std::vector<SimpleType> arg_types(const SimpleType& ty);
const SimpleType& result_type(const SimpleType& ty);

bool check_second_order_context(const Context& ctx);

/// Synthesizes the type of t in ctx. Unannotated abstractions are typed from the
/// arguments they are applied to; a bare abstraction in synthesis position is an error.
SimpleType sort_check_term(const Context& ctx, const MetaTable& metas, const Term& t);
/// Checks t against an expected type; accepts bare abstractions.
void check_term(const Context& ctx, const MetaTable& metas, const Term& t, const SimpleType& expected);
/// Returns the target context of s: a[s] is typed in ctx when a is typed in the target.
Context sort_check_subst(const Context& ctx, const MetaTable& metas, const Subst& s);
void check_subst(const Context& ctx, const MetaTable& metas, const Subst& s, const Context& expected_target);

struct ValidationReport {
  struct Flag {
    std::string name;
    bool passed;
  };
  std::vector<Flag> flags;
  std::vector<std::string> violations;

  bool ok() const;
  void add(std::string name, bool passed);
  /// One line per flag, "PASS  name" or "FAIL  name", then "  - violation" lines.
  std::string render() const;
};

/// The problem as lambda-sigma sees it: a closure-free LambdaSigma problem is read
/// through precook_term, anything else is returned unchanged.
UnifProblem explicit_form(const UnifProblem& p);

/// Common type of the two sides of explicit_form(p); throws IllTyped.
SimpleType equation_type(const UnifProblem& p);

ValidationReport validate_problem(const UnifProblem& p);

}  // namespace lsf
