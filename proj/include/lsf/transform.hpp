#pragma once

#include <string>
#include <vector>

#include "lsf/rewrite.hpp"
#include "lsf/sort.hpp"
#include "lsf/term.hpp"

namespace lsf {

/// One unknown X of arity n replaced by the fresh atomic unknown `fresh`.
struct CertificateEntry {
  std::string source;
  std::string fresh;
  unsigned arity;
  friend bool operator==(const CertificateEntry&, const CertificateEntry&) = default;
};

struct ReductionCertificate {
  std::vector<CertificateEntry> var_map;
  UnifProblem source;
  UnifProblem target;

  const CertificateEntry* by_source(const std::string& name) const;
  const CertificateEntry* by_fresh(const std::string& name) const;
};

/// Tags every metavariable under k binders with ^k. Requires a closure-free
/// LambdaSigma problem; the result is sort-checked (IllTyped propagates).
UnifProblem precook(const UnifProblem& p);

struct LiftingSubst {
  MetaSubst subst;                      // X -> λ...λ Y
  std::vector<CertificateEntry> var_map;
  MetaTable fresh_metas;                // Y : (A_n ... A_1 . Γ, B)
};

/// Fresh names are X'k with one counter per problem, skipping declared names.
/// Throws OrderTooHigh for an unknown of order above 2.
LiftingSubst build_lifting_subst(const UnifProblem& p);

/// Grafts the lifting substitution into the precooked sides and takes their
/// lambda-sigma normal forms; the target problem is SigmaOnly over the fresh unknowns.
ReductionCertificate reduce_problem(const UnifProblem& p, std::uint64_t fuel = kDefaultFuel);

/// Structural checks on a reduced problem: second-order context, atomic unknowns in
/// second-order contexts, and X[c_1 ... c_p . ^n] with every c_i of first-order type.
ValidationReport validate_reduced_problem(const UnifProblem& target);
ValidationReport validate_reduced_problem(const ReductionCertificate& cert);

/// Y -> c becomes X -> λ^n c. Throws UnknownMeta for unknowns outside the certificate.
MetaSubst lift_solution(const ReductionCertificate& cert, const MetaSubst& target_solution);
/// X -> λ^n c becomes Y -> c. Throws ShapeMismatch when a binding lacks its binders.
MetaSubst project_solution(const ReductionCertificate& cert, const MetaSubst& source_solution);

struct AgreementResult {
  bool agree;
  Term lambda_sigma_nf;
  Term sigma_nf;
  RewriteTrace sigma_trace;
};

/// For a normal atomic a over atomic unknowns whose closure arguments are first
/// order, and a simple well-sorted normal theta, compares the lambda-sigma and the
/// sigma normal forms of graft(theta, a). Throws PreconditionViolated otherwise.
AgreementResult sigma_agreement(const Context& ctx, const MetaTable& metas, const Term& a, const MetaSubst& theta,
                                std::uint64_t fuel = kDefaultFuel);
bool check_sigma_agreement(const Context& ctx, const MetaTable& metas, const Term& a, const MetaSubst& theta,
                           std::uint64_t fuel = kDefaultFuel);

}  // namespace lsf
