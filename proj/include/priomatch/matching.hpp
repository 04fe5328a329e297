#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "priomatch/core.hpp"
#include "priomatch/problem.hpp"

namespace priomatch {

// An assignment of students to schools (or kNullSchool), capacity-checked
// against a Problem at construction. Rosters are derived from the assignment
// vector, so the two views cannot disagree.
class Matching {
 public:
  Matching() = default;

  Matching(const Problem& prob, std::vector<SchoolId> assignment)
      : assignment_(std::move(assignment)) {
    const int n = prob.num_students();
    const int m = prob.num_schools();
    if (static_cast<int>(assignment_.size()) != n)
      throw InputError("matching assignment has wrong student count");
    rosters_.assign(m, {});
    for (StudentId i = 0; i < n; ++i) {
      SchoolId s = assignment_[i];
      if (s == kNullSchool) continue;
      if (s < 0 || s >= m)
        throw InputError("matching assigns student " + std::to_string(i) +
                         " to unknown school " + std::to_string(s));
      rosters_[s].push_back(i);
    }
    for (SchoolId s = 0; s < m; ++s)
      if (static_cast<int>(rosters_[s].size()) > prob.capacity(s))
        throw InputError("matching overfills school " + std::to_string(s) +
                         ": " + std::to_string(rosters_[s].size()) + " > " +
                         std::to_string(prob.capacity(s)));
  }

  SchoolId school_of(StudentId i) const { return assignment_[i]; }
  const std::vector<SchoolId>& assignment() const { return assignment_; }
  // Sorted ascending per school.
  const std::vector<StudentId>& roster(SchoolId s) const { return rosters_[s]; }
  int num_students() const { return static_cast<int>(assignment_.size()); }

  bool operator==(const Matching& o) const { return assignment_ == o.assignment_; }
  bool operator<(const Matching& o) const { return assignment_ < o.assignment_; }

 private:
  std::vector<SchoolId> assignment_;
  std::vector<std::vector<StudentId>> rosters_;
};

struct WastefulWitness {
  StudentId student;
  SchoolId school;  // preferred to the student's match and undersubscribed
  bool operator==(const WastefulWitness& o) const {
    return student == o.student && school == o.school;
  }
};

struct ViolationWitness {
  StudentId student;    // desires `school` at least weakly
  StudentId incumbent;  // holds a seat there despite lower priority
  SchoolId school;
  bool operator==(const ViolationWitness& o) const {
    return student == o.student && incumbent == o.incumbent && school == o.school;
  }
};

struct StabilityReport {
  bool individually_rational = true;
  std::vector<StudentId> unacceptable;        // students at unlisted schools
  std::vector<WastefulWitness> wasteful;
  std::vector<ViolationWitness> violations;

  bool stable() const {
    return individually_rational && wasteful.empty() && violations.empty();
  }
};

// Stability of `mu` with `priorities` substituted for the instance's own
// (used for extension profiles and effective priorities; the two share all
// non-priority clauses).
inline StabilityReport stability_report(
    const Problem& prob, const Matching& mu,
    const std::vector<PriorityRelation>& priorities) {
  const int n = prob.num_students();
  const int m = prob.num_schools();
  StabilityReport rep;
  for (StudentId i = 0; i < n; ++i)
    if (!prob.acceptable(i, mu.school_of(i))) rep.unacceptable.push_back(i);
  rep.individually_rational = rep.unacceptable.empty();
  for (StudentId i = 0; i < n; ++i)
    for (SchoolId s = 0; s < m; ++s)
      if (prob.prefers(i, s, mu.school_of(i)) &&
          static_cast<int>(mu.roster(s).size()) < prob.capacity(s))
        rep.wasteful.push_back({i, s});
  for (SchoolId s = 0; s < m; ++s)
    for (StudentId i = 0; i < n; ++i) {
      if (mu.school_of(i) == s) continue;
      if (!prob.weakly_prefers(i, s, mu.school_of(i))) continue;
      for (StudentId j : mu.roster(s))
        if (priorities[s].contains(i, j)) rep.violations.push_back({i, j, s});
    }
  return rep;
}

inline StabilityReport stability_report(const Problem& prob, const Matching& mu) {
  return stability_report(prob, mu, prob.priorities());
}

inline bool is_stable(const Problem& prob, const Matching& mu) {
  return stability_report(prob, mu).stable();
}

// Does `a` make every student at least as well off as `b` and someone
// strictly better off?
inline bool pareto_dominates(const Problem& prob, const Matching& a,
                             const Matching& b) {
  bool strict = false;
  for (StudentId i = 0; i < prob.num_students(); ++i) {
    if (!prob.weakly_prefers(i, a.school_of(i), b.school_of(i))) return false;
    if (prob.prefers(i, a.school_of(i), b.school_of(i))) strict = true;
  }
  return strict;
}

struct EnumerationGuard {
  int max_students = 7;
  int max_schools = 5;
};

// Every capacity-respecting assignment, acceptability ignored, visited once
// in lexicographic order of the assignment vector (kNullSchool first).
inline void for_each_matching(const Problem& prob,
                              const std::function<void(const Matching&)>& visit,
                              EnumerationGuard guard = {}) {
  if (prob.num_students() > guard.max_students)
    throw GuardError("matching enumeration: " + std::to_string(prob.num_students()) +
                     " students exceeds guard of " + std::to_string(guard.max_students));
  if (prob.num_schools() > guard.max_schools)
    throw GuardError("matching enumeration: " + std::to_string(prob.num_schools()) +
                     " schools exceeds guard of " + std::to_string(guard.max_schools));
  const int n = prob.num_students();
  const int m = prob.num_schools();
  std::vector<SchoolId> assignment(n, kNullSchool);
  std::vector<int> load(m, 0);
  auto rec = [&](auto&& self, StudentId i) -> void {
    if (i == n) {
      visit(Matching(prob, assignment));
      return;
    }
    assignment[i] = kNullSchool;
    self(self, i + 1);
    for (SchoolId s = 0; s < m; ++s) {
      if (load[s] == prob.capacity(s)) continue;
      ++load[s];
      assignment[i] = s;
      self(self, i + 1);
      assignment[i] = kNullSchool;
      --load[s];
    }
  };
  rec(rec, 0);
}

inline std::vector<Matching> enumerate_matchings(const Problem& prob,
                                                 EnumerationGuard guard = {}) {
  std::vector<Matching> out;
  for_each_matching(prob, [&](const Matching& mu) { out.push_back(mu); }, guard);
  return out;
}

// Brute force: filter the full enumeration by the stability report.
inline std::vector<Matching> stable_set_oracle(const Problem& prob,
                                               EnumerationGuard guard = {}) {
  std::vector<Matching> out;
  for_each_matching(
      prob,
      [&](const Matching& mu) {
        if (is_stable(prob, mu)) out.push_back(mu);
      },
      guard);
  return out;
}

// Stable matchings no other stable matching Pareto-dominates.
inline std::vector<Matching> sosm_set_oracle(const Problem& prob,
                                             EnumerationGuard guard = {}) {
  std::vector<Matching> stable = stable_set_oracle(prob, guard);
  std::vector<Matching> out;
  for (const Matching& mu : stable) {
    bool dominated = false;
    for (const Matching& nu : stable)
      if (pareto_dominates(prob, nu, mu)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(mu);
  }
  return out;
}

}  // namespace priomatch
