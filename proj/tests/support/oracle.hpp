#pragma once

#include <cstdint>
#include <vector>

#include "lsf/term.hpp"

namespace lsf::testing {

// Normal forms computed by evaluation instead of rewriting. A substitution value is
// a list of already normal terms followed by a shift: index i reads item i when
// there is one and otherwise becomes i - |items| + shift.
struct SubstValue {
  std::vector<Term> items;
  std::uint32_t shift = 0;
};

/// sigma-normal form; beta-redexes are left in place.
Term eval_sigma(const Term& t);
/// lambda-sigma normal form; beta is performed during evaluation.
Term eval_lambda_sigma(const Term& t);

/// Closed-form value of a substitution in the identity environment.
SubstValue eval_subst(const Subst& s, bool beta);
/// a_1 . ... . a_k . ^n with trailing n . ^n pairs contracted.
Subst reify(const SubstValue& v);

/// Naive literal replacement, written independently of lsf::graft.
Term naive_graft(const MetaSubst& theta, const Term& t);

/// Counts constructors by a direct recursive walk.
std::size_t count_nodes(const Term& t);

}  // namespace lsf::testing
