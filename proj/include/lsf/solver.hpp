#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "lsf/rewrite.hpp"
#include "lsf/sort.hpp"
#include "lsf/term.hpp"

namespace lsf {

struct SearchConfig {
  unsigned size_bound = 4;
  /// Tree depth of candidate terms (an index or a bare unknown has depth 1).
  unsigned depth_bound = 8;
  std::uint64_t fuel = kDefaultFuel;
  bool find_all = false;
  unsigned max_solutions = 16;
};

struct Solved {
  std::vector<MetaSubst> solutions;
};
/// "No" is only ever "no within these bounds".
struct ExhaustedNoSolution {
  unsigned size_bound;
  unsigned depth_bound;
  std::uint64_t candidates;
};
struct Aborted {
  std::string reason;
};
using SearchOutcome = std::variant<Solved, ExhaustedNoSolution, Aborted>;

/// Sort-correct simple terms in nondecreasing size with the precedence
/// index < application < abstraction < unknown inside one size. Applications are
/// headed by an index; unknowns from the pool appear as Z (size 1) or Z[^k] (size 3).
class SimpleTermEnumerator {
 public:
  SimpleTermEnumerator(MetaTable pool, unsigned depth_bound);

  const std::vector<Term>& of_size(const Context& ctx, const SimpleType& ty, unsigned size);
  std::vector<Term> up_to(const Context& ctx, const SimpleType& ty, unsigned size_bound);

 private:
  const std::vector<Term>& exact(const Context& ctx, const SimpleType& ty, unsigned size, unsigned depth);
  void spines(const Context& ctx, std::uint32_t head, const std::vector<SimpleType>& args, unsigned budget,
              unsigned depth, std::vector<Term>& out);

  MetaTable pool_;
  unsigned depth_bound_;
  std::map<std::string, std::vector<Term>> memo_;
};

std::vector<Term> enumerate_simple_terms(const Sort& sort, const MetaTable& pool, const SearchConfig& cfg);

/// Exhaustive search over assignments of enumerated simple, closed terms to every
/// declared unknown, in product order (first unknown varies slowest).
SearchOutcome solve_sigma(const UnifProblem& p, const SearchConfig& cfg);

/// solve_sigma for a problem with one ground side; partial assignments whose
/// sigma-normal rigid structure already disagrees with the ground side are pruned.
SearchOutcome match_sigma(const UnifProblem& p, const SearchConfig& cfg);

/// Grafts theta into explicit_form(p) and compares under p.mode's equality.
/// Throws IllTyped for an ill-sorted binding and lsf::Error when theta misses an unknown.
bool check_solution(const UnifProblem& p, const MetaSubst& theta, std::uint64_t fuel = kDefaultFuel);

/// Brute-force lambda-side search over beta-normal terms of each unknown's type.
SearchOutcome decide_small_lambda(const UnifProblem& p, const SearchConfig& cfg);

/// Bounds for the reduced problem that cover every beta-normal solution of the
/// source within cfg: eta-expanding X := t of arity n at the top adds at most 2n to
/// the size and n to the depth.
SearchConfig sigma_config_for(const UnifProblem& source, const SearchConfig& cfg);

bool solved(const SearchOutcome& o);
const std::vector<MetaSubst>& solutions(const SearchOutcome& o);

}  // namespace lsf
