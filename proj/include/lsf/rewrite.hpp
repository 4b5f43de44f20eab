#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "lsf/error.hpp"
#include "lsf/term.hpp"

namespace lsf {

// Rewrite rules, with a = term, s/t = substitutions, ^k = shift:
//   Beta          (λa) b         -> a[b . ^0]
//   App           (a b)[s]       -> a[s] b[s]
//   Abs           (λa)[s]        -> λ(a[1 . (s o ^1)])
//   Clos          a[s][t]        -> a[s o t]
//   VarConsHit    1[a . s]       -> a
//   VarConsSkip   n[a . s]       -> (n-1)[s]            n > 1
//   VarShift      n[^k]          -> n+k
//   IdSub         a[^0]          -> a
//   ShiftCons     ^k o (a . s)   -> ^(k-1) o s          k > 1,  ^1 o (a . s) -> s
//   ShiftComp     ^i o ^j        -> ^(i+j),              ^i o (^j o s) -> ^(i+j) o s
//   MapCons       (a . s) o t    -> a[t] . (s o t)
//   AssocComp     (s o t) o u    -> s o (t o u)
//   IdL           ^0 o s         -> s
//   IdR           s o ^0         -> s
//   EtaConsShift  1[s] . (^1 o s) -> s,                  n . ^n -> ^(n-1)
// The sigma rules are all of them except Beta.
enum class RuleId {
  Beta,
  App,
  Abs,
  Clos,
  VarConsHit,
  VarConsSkip,
  VarShift,
  IdSub,
  ShiftCons,
  ShiftComp,
  MapCons,
  AssocComp,
  IdL,
  IdR,
  EtaConsShift,
};

std::string_view rule_name(RuleId rule);

enum class RuleSet { SigmaOnly, LambdaSigma };

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Redex selection: leftmost-outermost, or uniformly random among all redexes.
class Strategy {
 public:
  static Strategy leftmost_outermost() { return Strategy(); }
  static Strategy randomized(std::uint64_t seed) {
    Strategy s;
    s.rng_.emplace(seed);
    return s;
  }
  bool is_random() const { return rng_.has_value(); }
  std::mt19937_64* rng() { return rng_ ? &*rng_ : nullptr; }

 private:
  Strategy() = default;
  std::optional<std::mt19937_64> rng_;
};

struct Redex {
  Path position;
  RuleId rule;
};

struct StepResult {
  Term term;
  Path position;
  RuleId rule;
};

struct TraceStep {
  Path position;
  RuleId rule;
  Term after;
};

struct RewriteTrace {
  Term initial;
  std::vector<TraceStep> steps;
  std::uint64_t fuel_spent = 0;

  const Term& last() const { return steps.empty() ? initial : steps.back().after; }
};

class FuelExhausted : public Error {
 public:
  FuelExhausted(std::uint64_t fuel, RewriteTrace partial)
      : Error("fuel exhausted after " + std::to_string(fuel) + " rewrite steps"),
        fuel_(fuel), partial_(std::move(partial)) {}
  std::uint64_t fuel() const { return fuel_; }
  /// Steps are only recorded by normalize_traced; otherwise initial holds the last term reached.
  const RewriteTrace& partial() const { return partial_; }

 private:
  std::uint64_t fuel_;
  RewriteTrace partial_;
};

/// Every redex of t in pre-order (outermost first, left to right); several rules may
/// share one position.
std::vector<Redex> redexes(const Term& t, RuleSet ruleset);

/// Contracts the redex of the given rule at the given position; throws lsf::Error
/// when there is none.
Term contract(const Term& t, const Path& position, RuleId rule);

std::optional<StepResult> step(const Term& t, RuleSet ruleset, Strategy& strategy);

Term normalize(const Term& t, RuleSet ruleset, Strategy& strategy, std::uint64_t fuel = kDefaultFuel);
Term normalize_sigma(const Term& t, std::uint64_t fuel = kDefaultFuel);
Term normalize_lambda_sigma(const Term& t, std::uint64_t fuel = kDefaultFuel);
std::pair<Term, RewriteTrace> normalize_traced(const Term& t, RuleSet ruleset, Strategy& strategy,
                                               std::uint64_t fuel = kDefaultFuel);

/// Checks the replay invariant: every step contracts its recorded redex in the
/// previous term and yields the recorded term.
bool replay(const RewriteTrace& trace);

/// Syntactic identity of sigma-normal forms after shift canonicalization.
bool sigma_equal(const Term& a, const Term& b, std::uint64_t fuel = kDefaultFuel);
bool lambda_sigma_equal(const Term& a, const Term& b, std::uint64_t fuel = kDefaultFuel);

// The pure encoding uses only index 1, ^0 and ^1: n = 1[^1 o (... o ^1)] with n-1
// shifts and ^k = ^1 o (... o ^1). normalize_pure rewrites it with the textbook
// rules only (1[a . s] -> a, ^1 o (a . s) -> s, 1 . ^1 -> ^0, no primitive index
// arithmetic), so it is an independent route to the same normal forms.
Term to_pure(const Term& t);
Term from_pure(const Term& t);
Term normalize_pure(const Term& t, RuleSet ruleset, std::uint64_t fuel = kDefaultFuel);

}  // namespace lsf
