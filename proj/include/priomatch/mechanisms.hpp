#pragma once

#include <algorithm>
#include <cassert>
#include <numeric>
#include <string>
#include <vector>

#include "priomatch/core.hpp"
#include "priomatch/matching.hpp"
#include "priomatch/problem.hpp"
#include "priomatch/relation.hpp"
#include "priomatch/rng.hpp"

namespace priomatch {

// One total order per school, normally a schoolwise linear extension of the
// instance's priorities.
struct ExtensionProfile {
  std::vector<TotalOrder> orders;

  bool operator==(const ExtensionProfile& o) const { return orders == o.orders; }
  bool operator<(const ExtensionProfile& o) const {
    return std::lexicographical_compare(orders.begin(), orders.end(),
                                        o.orders.begin(), o.orders.end());
  }
};

// Shape check only: one order per school over all students.
inline void validate_profile_shape(const Problem& prob,
                                   const ExtensionProfile& profile) {
  if (static_cast<int>(profile.orders.size()) != prob.num_schools())
    throw InputError("extension profile must have one order per school");
  for (const TotalOrder& t : profile.orders)
    if (t.num_students() != prob.num_students())
      throw InputError("extension profile order has wrong student count");
}

// Shape plus the defining property: each order extends its school's priority.
inline void validate_extension_profile(const Problem& prob,
                                       const ExtensionProfile& profile) {
  validate_profile_shape(prob, profile);
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    if (!is_extension(prob.priority(s), profile.orders[s]))
      throw InputError("order for school " + prob.school_names()[s] +
                       " does not extend its priority relation");
}

namespace detail {

// Student-proposing deferred acceptance over a subproblem. `prefs` are the
// (possibly truncated) working preference lists; `pos[s][i]` is i's position
// in school s's total order (lower = higher priority). Inactive students do
// not participate and end up at kNullSchool. Rounds are simultaneous: every
// currently free student proposes, each school keeps the top `capacity` of
// holds plus proposers. The outcome is the student-optimal stable matching
// of the subproblem, which is independent of proposal scheduling.
inline std::vector<SchoolId> da_assign(
    int num_students, int num_schools, const std::vector<int>& capacities,
    const std::vector<std::vector<SchoolId>>& prefs,
    const std::vector<std::vector<int>>& pos,
    const std::vector<char>& active_student) {
  std::vector<int> next(num_students, 0);
  std::vector<SchoolId> match(num_students, kNullSchool);
  std::vector<std::vector<StudentId>> held(num_schools);
  std::vector<std::vector<StudentId>> proposals(num_schools);
  for (;;) {
    for (auto& p : proposals) p.clear();
    bool any = false;
    for (StudentId i = 0; i < num_students; ++i) {
      if (!active_student[i] || match[i] != kNullSchool) continue;
      if (next[i] >= static_cast<int>(prefs[i].size())) continue;
      proposals[prefs[i][next[i]]].push_back(i);
      any = true;
    }
    if (!any) break;
    for (SchoolId s = 0; s < num_schools; ++s) {
      if (proposals[s].empty()) continue;
      std::vector<StudentId>& pool = held[s];
      pool.insert(pool.end(), proposals[s].begin(), proposals[s].end());
      std::sort(pool.begin(), pool.end(),
                [&](StudentId a, StudentId b) { return pos[s][a] < pos[s][b]; });
      while (static_cast<int>(pool.size()) > capacities[s]) {
        StudentId rejected = pool.back();
        pool.pop_back();
        match[rejected] = kNullSchool;
        ++next[rejected];
      }
      for (StudentId i : pool) match[i] = s;
    }
  }
  return match;
}

inline std::vector<std::vector<int>> positions_of(const ExtensionProfile& p) {
  std::vector<std::vector<int>> pos;
  pos.reserve(p.orders.size());
  for (const TotalOrder& t : p.orders) {
    std::vector<int> row(t.num_students());
    for (StudentId i = 0; i < t.num_students(); ++i) row[i] = t.position(i);
    pos.push_back(std::move(row));
  }
  return pos;
}

}  // namespace detail

// The profile's orders as full priority relations.
inline std::vector<PriorityRelation> profile_relations(
    const ExtensionProfile& profile) {
  std::vector<PriorityRelation> rels;
  rels.reserve(profile.orders.size());
  for (const TotalOrder& t : profile.orders) rels.push_back(t.as_relation());
  return rels;
}

inline bool is_stable_for_profile(const Problem& prob, const Matching& mu,
                                  const ExtensionProfile& profile) {
  return stability_report(prob, mu, profile_relations(profile)).stable();
}

// Deferred acceptance with the profile's orders substituted for the
// instance's priorities. The profile need not extend anything here; it is
// simply the strict priority input the mechanism runs on.
inline Matching deferred_acceptance(const Problem& prob,
                                    const ExtensionProfile& profile) {
  validate_profile_shape(prob, profile);
  std::vector<char> active(prob.num_students(), 1);
  Matching mu(prob,
              detail::da_assign(prob.num_students(), prob.num_schools(),
                                prob.capacities(), prob.preferences(),
                                detail::positions_of(profile), active));
  assert(is_stable_for_profile(prob, mu, profile));
  return mu;
}

// Requires every priority to already be a total order.
inline Matching deferred_acceptance(const Problem& prob) {
  ExtensionProfile profile;
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    if (classify(prob.priority(s)).label != RelationLabel::kTotal)
      throw NotTotalOrderError(
          "deferred acceptance needs total-order priorities, but school " +
          prob.school_names()[s] + " is not one; extend it first");
    profile.orders.push_back(smo_extend(prob.priority(s)));
  }
  return deferred_acceptance(prob, profile);
}

enum class TiebreakKind { kSingle, kMultiple };

// Per-school rank bijections steering the rank-chooser extension of each
// school's priority. "Single" means one common bijection for all schools.
class TiebreakProfile {
 public:
  explicit TiebreakProfile(std::vector<std::vector<int>> ranks)
      : ranks_(std::move(ranks)) {
    if (ranks_.empty()) throw InputError("tiebreak profile has no schools");
    const int n = static_cast<int>(ranks_[0].size());
    for (const auto& r : ranks_) validate_rank_bijection(r, n);
  }

  static TiebreakProfile single(std::vector<int> rank, int num_schools) {
    return TiebreakProfile(
        std::vector<std::vector<int>>(num_schools, std::move(rank)));
  }

  static TiebreakProfile random_single(int num_students, int num_schools,
                                       std::uint64_t seed) {
    detail::Rng rng(seed);
    return single(random_rank(num_students, rng), num_schools);
  }

  static TiebreakProfile random_multiple(int num_students, int num_schools,
                                         std::uint64_t seed) {
    detail::Rng rng(seed);
    std::vector<std::vector<int>> ranks;
    for (int s = 0; s < num_schools; ++s)
      ranks.push_back(random_rank(num_students, rng));
    return TiebreakProfile(std::move(ranks));
  }

  TiebreakKind kind() const {
    for (const auto& r : ranks_)
      if (r != ranks_[0]) return TiebreakKind::kMultiple;
    return TiebreakKind::kSingle;
  }

  const std::vector<std::vector<int>>& ranks() const { return ranks_; }

 private:
  static std::vector<int> random_rank(int n, detail::Rng& rng) {
    std::vector<int> r(n);
    std::iota(r.begin(), r.end(), 1);
    detail::shuffle(r, rng);
    return r;
  }

  std::vector<std::vector<int>> ranks_;
};

// Schoolwise rank-steered extension. Fails with CyclicRelationError if some
// priority has no extension.
inline ExtensionProfile extend_profile_tiebreak(const Problem& prob,
                                                const TiebreakProfile& tau) {
  if (static_cast<int>(tau.ranks().size()) != prob.num_schools())
    throw InputError("tiebreak profile must have one rank vector per school");
  ExtensionProfile out;
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    try {
      out.orders.push_back(smo_extend_tiebreak(prob.priority(s), tau.ranks()[s]));
    } catch (const CyclicRelationError&) {
      throw CyclicRelationError("priority of school " + prob.school_names()[s] +
                                " is cyclic; no extension exists");
    }
  }
  return out;
}

struct ProfileGuard {
  int max_students = 8;          // per-school extension enumeration
  std::uint64_t max_profiles = 20000;  // product over schools
};

// Product of schoolwise linear-extension counts, saturating at UINT64_MAX.
inline std::uint64_t count_extension_profiles(const Problem& prob) {
  std::uint64_t product = 1;
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    std::uint64_t c = count_extensions(prob.priority(s));
    if (c == 0) return 0;
    if (product > UINT64_MAX / c) return UINT64_MAX;
    product *= c;
  }
  return product;
}

// Full Cartesian product of schoolwise extensions, last school fastest.
// Empty if any school is cyclic. The product size is checked against the
// guard before anything is materialized.
inline std::vector<ExtensionProfile> enumerate_extension_profiles(
    const Problem& prob, ProfileGuard guard = {}) {
  const int m = prob.num_schools();
  std::vector<std::vector<TotalOrder>> per_school;
  for (SchoolId s = 0; s < m; ++s)
    per_school.push_back(
        enumerate_extensions(prob.priority(s), guard.max_students));
  std::uint64_t product = 1;
  for (const auto& exts : per_school) {
    if (exts.empty()) return {};
    product *= static_cast<std::uint64_t>(exts.size());
    if (product > guard.max_profiles)
      throw GuardError("extension profile enumeration: product exceeds guard of " +
                       std::to_string(guard.max_profiles));
  }
  std::vector<ExtensionProfile> out;
  out.reserve(product);
  std::vector<std::size_t> idx(m, 0);
  for (;;) {
    ExtensionProfile p;
    p.orders.reserve(m);
    for (int s = 0; s < m; ++s) p.orders.push_back(per_school[s][idx[s]]);
    out.push_back(std::move(p));
    int s = m - 1;
    while (s >= 0 && ++idx[s] == per_school[s].size()) idx[s--] = 0;
    if (s < 0) break;
  }
  return out;
}

// Profiles reachable with one common rank bijection across schools: all n!
// bijections tried, outputs deduplicated and sorted.
inline std::vector<ExtensionProfile> enumerate_single_tiebreak_profiles(
    const Problem& prob, int max_students = 8) {
  const int n = prob.num_students();
  if (n > max_students)
    throw GuardError("single tiebreak enumeration: " + std::to_string(n) +
                     " students exceeds guard of " + std::to_string(max_students));
  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 1);
  std::vector<ExtensionProfile> out;
  do {
    out.push_back(
        extend_profile_tiebreak(prob, TiebreakProfile::single(rank, prob.num_schools())));
  } while (std::next_permutation(rank.begin(), rank.end()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct EadamOptions {
  // Re-scan for newly underdemanded schools within the same round until a
  // fixed point, instead of one settling pass per round. Both settle the
  // same students overall; the flag only reshuffles round boundaries.
  bool refilter_removals = false;
};

struct EadamRound {
  int round = 0;                          // 1-based
  std::vector<SchoolId> settled_schools;  // underdemanded, removed this round
  std::vector<StudentId> removed_students;
  // (student, school) entries dropped from working preferences this round.
  std::vector<std::pair<StudentId, SchoolId>> deletions;
  Matching matching;  // subproblem outcome after this round's rerun
};

struct EadamResult {
  Matching start;  // round-0 outcome on the full problem
  std::vector<EadamRound> rounds;
  Matching matching;  // final: every student settled
};

// Iterated settling of underdemanded schools on top of deferred acceptance.
// `start` must be a schoolwise linear extension of the instance's priorities;
// round 0 runs plain DA under it. Each later round settles every school
// nobody still wants to trade up into (the null school is treated as such a
// school at every individually rational matching, so unmatched students
// settle immediately), then shields the settled students' remaining priority
// claims: a remaining student loses access to a school where a just-removed
// student with higher *original* priority still wanted in. Extension-only
// priority pairs carry no such claim, which is what lets later rounds Pareto
// improve on round 0 without breaking stability for the base relation.
inline EadamResult eadam_trace(const Problem& prob, const ExtensionProfile& start,
                               EadamOptions options = {}) {
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    if (!classify(prob.priority(s)).acyclic)
      throw CyclicRelationError("priority of school " + prob.school_names()[s] +
                                " is cyclic; no extension exists");
  validate_extension_profile(prob, start);
  const int n = prob.num_students();
  const int m = prob.num_schools();
  const auto pos = detail::positions_of(start);

  std::vector<char> active_student(n, 1);
  std::vector<char> active_school(m, 1);
  std::vector<std::vector<SchoolId>> work = prob.preferences();
  std::vector<SchoolId> settled(n, kNullSchool);

  auto rerun = [&]() {
    return detail::da_assign(n, m, prob.capacities(), work, pos, active_student);
  };
  // position of s in i's working list; list length for kNullSchool
  auto work_rank = [&](StudentId i, SchoolId s) {
    if (s == kNullSchool) return static_cast<int>(work[i].size());
    auto it = std::find(work[i].begin(), work[i].end(), s);
    return it == work[i].end() ? kUnlistedRank
                               : static_cast<int>(it - work[i].begin());
  };

  EadamResult result;
  std::vector<SchoolId> mu = rerun();
  result.start = Matching(prob, mu);

  int rounds = 0;
  while (std::count(active_school.begin(), active_school.end(), 1) > 0) {
    // Every round settles a school or removes a student (checked below), so
    // n + m rounds is a hard ceiling; the expected bound of m + 1 is asserted
    // by the test suite, not here, to keep diagnostics useful if it slips.
    if (++rounds > n + m + 2)
      throw InternalError("settling did not terminate within the round bound");
    EadamRound log;
    log.round = rounds;

    std::vector<char> settle_school(m, 0), remove_student(n, 0);
    for (;;) {
      bool changed = false;
      for (SchoolId s = 0; s < m; ++s) {
        if (!active_school[s] || settle_school[s]) continue;
        bool desired = false;
        for (StudentId i = 0; i < n && !desired; ++i) {
          if (!active_student[i] || remove_student[i]) continue;
          if (work_rank(i, s) < work_rank(i, mu[i])) desired = true;
        }
        if (!desired) {
          settle_school[s] = 1;
          changed = true;
        }
      }
      for (StudentId i = 0; i < n; ++i) {
        if (!active_student[i] || remove_student[i]) continue;
        if (mu[i] == kNullSchool || settle_school[mu[i]]) {
          remove_student[i] = 1;
          changed = true;
        }
      }
      if (!options.refilter_removals || !changed) break;
    }

    if (std::count(settle_school.begin(), settle_school.end(), 1) == 0 &&
        std::count(remove_student.begin(), remove_student.end(), 1) == 0)
      throw InternalError("settling round made no progress");

    for (SchoolId s = 0; s < m; ++s)
      if (settle_school[s]) {
        active_school[s] = 0;
        log.settled_schools.push_back(s);
      }
    for (StudentId i = 0; i < n; ++i)
      if (remove_student[i]) {
        active_student[i] = 0;
        settled[i] = mu[i];
        log.removed_students.push_back(i);
      }

    // shield the removed students' remaining original-priority claims
    for (StudentId i = 0; i < n; ++i) {
      if (!remove_student[i]) continue;
      for (SchoolId s = 0; s < m; ++s) {
        if (!active_school[s]) continue;
        if (!(work_rank(i, s) < work_rank(i, settled[i]))) continue;
        for (StudentId j = 0; j < n; ++j) {
          if (!active_student[j] || !prob.priority(s).contains(i, j)) continue;
          auto it = std::find(work[j].begin(), work[j].end(), s);
          if (it != work[j].end()) {
            work[j].erase(it);
            log.deletions.emplace_back(j, s);
          }
        }
      }
    }
    // drop settled schools from the remaining working lists
    for (StudentId j = 0; j < n; ++j) {
      if (!active_student[j]) continue;
      std::erase_if(work[j], [&](SchoolId s) { return !active_school[s]; });
    }
    std::sort(log.deletions.begin(), log.deletions.end());

    bool anything_left =
        std::count(active_school.begin(), active_school.end(), 1) > 0;
    if (anything_left) mu = rerun();
    std::vector<SchoolId> snapshot = settled;
    for (StudentId i = 0; i < n; ++i)
      if (active_student[i]) snapshot[i] = mu[i];
    log.matching = Matching(prob, snapshot);
    result.rounds.push_back(std::move(log));
    if (!anything_left) break;
  }

  for (StudentId i = 0; i < n; ++i)
    if (active_student[i]) settled[i] = mu[i];
  result.matching = Matching(prob, settled);
  return result;
}

inline Matching eadam(const Problem& prob, const ExtensionProfile& start,
                      EadamOptions options = {}) {
  return eadam_trace(prob, start, options).matching;
}

}  // namespace priomatch
