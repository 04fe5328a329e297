#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "priomatch/core.hpp"
#include "priomatch/matching.hpp"
#include "priomatch/problem.hpp"
#include "priomatch/relation.hpp"

namespace priomatch {

// Per-school sets of ordered pairs (i, j) whose priority of i over j may be
// violated. Deliberately unstructured: pairs outside the school's priority
// relation (including loops) are legal and inert under set difference.
class ViolationSet {
 public:
  ViolationSet() = default;
  ViolationSet(int num_students, std::vector<std::vector<IdPair>> per_school)
      : per_school_(std::move(per_school)) {
    for (auto& pairs : per_school_) {
      for (const auto& [i, j] : pairs)
        if (i < 0 || i >= num_students || j < 0 || j >= num_students)
          throw InputError("violation pair references unknown student");
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }
  }

  static ViolationSet empty(int num_schools) {
    ViolationSet c;
    c.per_school_.assign(num_schools, {});
    return c;
  }

  int num_schools() const { return static_cast<int>(per_school_.size()); }
  const std::vector<IdPair>& allowed(SchoolId s) const { return per_school_[s]; }
  bool allows(SchoolId s, StudentId i, StudentId j) const {
    const auto& v = per_school_[s];
    return std::binary_search(v.begin(), v.end(), IdPair{i, j});
  }
  bool operator==(const ViolationSet& o) const {
    return per_school_ == o.per_school_;
  }

 private:
  std::vector<std::vector<IdPair>> per_school_;
};

inline void validate_violation_set(const Problem& prob, const ViolationSet& c) {
  if (c.num_schools() != prob.num_schools())
    throw InputError("violation set must cover every school");
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    for (const auto& [i, j] : c.allowed(s))
      if (i >= prob.num_students() || j >= prob.num_students())
        throw InputError("violation pair references unknown student");
}

// The priority that actually binds once the allowed pairs are forgiven.
// Subsets preserve asymmetry and acyclicity for free.
inline PriorityRelation effective_priority(const PriorityRelation& rel,
                                           const std::vector<IdPair>& allowed) {
  return relation_difference(rel, allowed);
}

inline std::vector<PriorityRelation> effective_priorities(
    const Problem& prob, const ViolationSet& c) {
  validate_violation_set(prob, c);
  std::vector<PriorityRelation> out;
  out.reserve(prob.num_schools());
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    out.push_back(effective_priority(prob.priority(s), c.allowed(s)));
  return out;
}

// Like StabilityReport, but the fairness clause only counts priority
// violations whose pair is not forgiven by the violation set.
struct PartialStabilityReport {
  bool individually_rational = true;
  std::vector<StudentId> unacceptable;
  std::vector<WastefulWitness> wasteful;
  std::vector<ViolationWitness> uncovered;

  bool partially_stable() const {
    return individually_rational && wasteful.empty() && uncovered.empty();
  }
};

// Evaluates partial stability twice — directly from the definition (every
// priority violation must be an allowed pair) and as plain stability under
// the effective priorities — and insists the two routes agree witness for
// witness before answering.
inline PartialStabilityReport partial_stability_report(const Problem& prob,
                                                       const ViolationSet& c,
                                                       const Matching& mu) {
  validate_violation_set(prob, c);

  StabilityReport full = stability_report(prob, mu);
  PartialStabilityReport direct;
  direct.individually_rational = full.individually_rational;
  direct.unacceptable = full.unacceptable;
  direct.wasteful = full.wasteful;
  for (const ViolationWitness& w : full.violations)
    if (!c.allows(w.school, w.student, w.incumbent)) direct.uncovered.push_back(w);

  StabilityReport reduced = stability_report(prob, mu, effective_priorities(prob, c));
  if (direct.individually_rational != reduced.individually_rational ||
      direct.unacceptable != reduced.unacceptable ||
      direct.wasteful != reduced.wasteful ||
      direct.uncovered != reduced.violations)
    throw InternalError(
        "partial stability disagrees between the direct definition and "
        "stability under the effective priorities");
  return direct;
}

inline bool is_partially_stable(const Problem& prob, const ViolationSet& c,
                                const Matching& mu) {
  return partial_stability_report(prob, c, mu).partially_stable();
}

// An acyclic relation rewritten as a total order plus forgiven pairs: extend
// with the lowest-index chooser, forgive exactly the pairs the extension
// invented. Round-trips: effective_priority over the output returns rel.
struct ViolationRealization {
  TotalOrder order;
  std::vector<IdPair> allowed;
};

inline ViolationRealization realize_as_violation_model(const PriorityRelation& rel) {
  ViolationRealization out;
  out.order = smo_extend(rel);
  const PriorityRelation full = out.order.as_relation();
  for (const auto& p : full.pairs())
    if (!rel.contains(p.first, p.second)) out.allowed.push_back(p);
  std::sort(out.allowed.begin(), out.allowed.end());
  return out;
}

// All partially stable matchings, by exhaustion. Every candidate goes
// through the double-route evaluation, so a route disagreement anywhere in
// the space surfaces here too.
inline std::vector<Matching> partially_stable_set_oracle(
    const Problem& prob, const ViolationSet& c, EnumerationGuard guard = {}) {
  std::vector<Matching> out;
  for (const Matching& mu : enumerate_matchings(prob, guard))
    if (is_partially_stable(prob, c, mu)) out.push_back(mu);
  return out;
}

// Constrained efficient = partially stable and not Pareto dominated by any
// other partially stable matching. Oracle only; no mechanism is offered for
// the general acyclic case.
inline std::vector<Matching> constrained_efficient_oracle(
    const Problem& prob, const ViolationSet& c, EnumerationGuard guard = {}) {
  std::vector<Matching> pstable = partially_stable_set_oracle(prob, c, guard);
  std::vector<Matching> out;
  for (const Matching& mu : pstable) {
    bool dominated = false;
    for (const Matching& nu : pstable)
      if (pareto_dominates(prob, nu, mu)) dominated = true;
    if (!dominated) out.push_back(mu);
  }
  return out;
}

}  // namespace priomatch
