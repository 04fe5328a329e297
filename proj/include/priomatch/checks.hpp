#pragma once

#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "priomatch/augment.hpp"
#include "priomatch/core.hpp"
#include "priomatch/json_io.hpp"
#include "priomatch/matching.hpp"
#include "priomatch/mechanisms.hpp"
#include "priomatch/problem.hpp"
#include "priomatch/relation.hpp"
#include "priomatch/violations.hpp"

namespace priomatch {

enum class Verdict { kHolds, kCounterexample, kSkipped };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kCounterexample: return "counterexample";
    case Verdict::kSkipped: return "skipped";
  }
  return "?";
}

// One claim evaluated on one instance. Counterexamples carry everything
// needed to replay them: the instance plus the offending matching/profile.
struct CheckReport {
  std::string claim;
  std::string instance;
  Verdict verdict = Verdict::kSkipped;
  Json witness = Json::object();

  bool ok() const { return verdict != Verdict::kCounterexample; }
  Json to_json() const {
    return Json{{"claim", claim},
                {"instance", instance},
                {"verdict", to_string(verdict)},
                {"witness", witness}};
  }
};

struct CheckGuards {
  EnumerationGuard matchings{};
  ProfileGuard profiles{};
};

namespace detail {

// Index-parallel map with deterministic merge: slot i always receives f(i),
// and the lowest-index worker exception wins. Collapses to a plain loop on
// single-core hosts or small inputs.
template <class F>
void parallel_for(std::size_t count, F&& f) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  const unsigned workers = hw < 8u ? hw : 8u;
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w)
    threads.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < count; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::string describe_instance(const Problem& prob) {
  std::string out = std::to_string(prob.num_students()) + " students x " +
                    std::to_string(prob.num_schools()) + " schools, priorities [";
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    if (s) out += ", ";
    out += to_string(classify(prob.priority(s)).label);
  }
  return out + "]";
}

inline Json matchings_to_json(const Problem& prob, const std::vector<Matching>& v) {
  Json out = Json::array();
  for (const Matching& mu : v) out.push_back(matching_to_json(prob, mu));
  return out;
}

inline void require_acyclic(const Problem& prob, const std::string& claim) {
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    if (!classify(prob.priority(s)).acyclic)
      throw InputError(claim + ": priority of school " + prob.school_names()[s] +
                       " is cyclic");
}

inline void require_transitive(const Problem& prob, const std::string& claim) {
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    const RelationClass cls = classify(prob.priority(s));
    if (!cls.acyclic || !cls.transitive)
      throw InputError(claim + ": priority of school " + prob.school_names()[s] +
                       " is not a strict partial order");
  }
}

inline bool digraph_acyclic(int n, const std::vector<std::vector<char>>& adj) {
  std::vector<int> indeg(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (adj[a][b]) ++indeg[b];
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  int seen = 0;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    ++seen;
    for (int w = 0; w < n; ++w)
      if (adj[v][w] && --indeg[w] == 0) queue.push_back(w);
  }
  return seen == n;
}

// The pairs a total order must respect for mu to be fair at school s: the
// school's own priority plus "every seated student above every claimant".
inline std::vector<std::vector<char>> fairness_digraph(const Problem& prob,
                                                       const Matching& mu,
                                                       SchoolId s) {
  const int n = prob.num_students();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : prob.priority(s).pairs()) adj[a][b] = 1;
  for (StudentId r : mu.roster(s))
    for (StudentId d = 0; d < n; ++d)
      if (mu.school_of(d) != s && prob.weakly_prefers(d, s, mu.school_of(d)))
        adj[r][d] = 1;
  return adj;
}

}  // namespace detail

// Is mu stable under at least one schoolwise linear extension of the
// priorities? Fairness decomposes over schools, so this reduces to one
// acyclicity test per school: an extension works at s exactly when the
// school's priority can be linearized with the whole roster ahead of every
// student who would rather be there.
inline bool stable_for_some_extension(const Problem& prob, const Matching& mu) {
  const StabilityReport rep = stability_report(prob, mu);
  if (!rep.individually_rational || !rep.wasteful.empty()) return false;
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    if (!detail::digraph_acyclic(prob.num_students(),
                                 detail::fairness_digraph(prob, mu, s)))
      return false;
  return true;
}

// A concrete profile witnessing stable_for_some_extension, when one exists:
// linearize each school's fairness digraph.
inline std::optional<ExtensionProfile> supporting_extension_profile(
    const Problem& prob, const Matching& mu) {
  if (!stable_for_some_extension(prob, mu)) return std::nullopt;
  ExtensionProfile profile;
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    const auto adj = detail::fairness_digraph(prob, mu, s);
    std::vector<IdPair> pairs;
    for (StudentId a = 0; a < prob.num_students(); ++a)
      for (StudentId b = 0; b < prob.num_students(); ++b)
        if (adj[a][b]) pairs.push_back({a, b});
    profile.orders.push_back(
        smo_extend(PriorityRelation(prob.num_students(), pairs)));
  }
  if (!is_stable_for_profile(prob, mu, profile))
    throw InternalError("constructed supporting profile fails to stabilize");
  return profile;
}

// Deferred-acceptance outcomes across a set of profiles, deduplicated.
inline std::vector<Matching> da_outcomes(const Problem& prob,
                                         const std::vector<ExtensionProfile>& ps) {
  std::vector<Matching> out(ps.size());
  detail::parallel_for(ps.size(),
                       [&](std::size_t k) { out[k] = deferred_acceptance(prob, ps[k]); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Settled-improvement outcomes across a set of start profiles, deduplicated.
inline std::vector<Matching> eadam_outcomes(const Problem& prob,
                                            const std::vector<ExtensionProfile>& ps,
                                            EadamOptions options = {}) {
  std::vector<Matching> out(ps.size());
  detail::parallel_for(
      ps.size(), [&](std::size_t k) { out[k] = eadam(prob, ps[k], options); });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Anything stable under some extension profile is stable for the base
// priorities outright.
inline CheckReport check_profile_stable_implies_stable(const Problem& prob,
                                                       CheckGuards guards = {}) {
  CheckReport report{"lemma1", detail::describe_instance(prob)};
  detail::require_acyclic(prob, report.claim);
  std::vector<Matching> all;
  try {
    all = enumerate_matchings(prob, guards.matchings);
  } catch (const GuardError& e) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = e.what();
    return report;
  }
  report.verdict = Verdict::kHolds;
  for (const Matching& mu : all) {
    if (!stable_for_some_extension(prob, mu)) continue;
    if (!is_stable(prob, mu)) {
      report.verdict = Verdict::kCounterexample;
      report.witness["problem"] = problem_to_json(prob);
      report.witness["matching"] = matching_to_json(prob, mu);
      report.witness["profile"] =
          profile_to_json(prob, *supporting_extension_profile(prob, mu));
      report.witness["violations"] = Json::array();
      for (const auto& w : stability_report(prob, mu).violations)
        report.witness["violations"].push_back(
            {{"student", prob.student_names()[w.student]},
             {"incumbent", prob.student_names()[w.incumbent]},
             {"school", prob.school_names()[w.school]}});
      return report;
    }
  }
  return report;
}

// The stable set is nonempty, and its student-optimal members sit inside it.
inline CheckReport check_stable_set_nonempty(const Problem& prob,
                                             CheckGuards guards = {}) {
  CheckReport report{"cor1", detail::describe_instance(prob)};
  detail::require_acyclic(prob, report.claim);
  std::vector<Matching> stable;
  try {
    stable = stable_set_oracle(prob, guards.matchings);
  } catch (const GuardError& e) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = e.what();
    return report;
  }
  std::vector<Matching> optimal = sosm_set_oracle(prob, guards.matchings);
  for (const Matching& mu : optimal)
    if (std::find(stable.begin(), stable.end(), mu) == stable.end())
      throw InternalError("student-optimal set escaped the stable set");
  if (stable.empty() || optimal.empty()) {
    report.verdict = Verdict::kCounterexample;
    report.witness["problem"] = problem_to_json(prob);
    report.witness["stable_count"] = stable.size();
  } else {
    report.verdict = Verdict::kHolds;
    report.witness["stable_count"] = stable.size();
    report.witness["optimal_count"] = optimal.size();
    report.witness["example"] = matching_to_json(prob, optimal.front());
  }
  return report;
}

// The stable set equals the union of stable sets over all extension
// profiles, and every student-optimal stable matching is some profile's
// deferred-acceptance outcome.
inline CheckReport check_stable_set_profile_decomposition(const Problem& prob,
                                                          CheckGuards guards = {}) {
  CheckReport report{"cor2", detail::describe_instance(prob)};
  detail::require_acyclic(prob, report.claim);
  std::vector<Matching> all;
  try {
    all = enumerate_matchings(prob, guards.matchings);
  } catch (const GuardError& e) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = e.what();
    return report;
  }
  std::vector<Matching> stable, profile_stable;
  for (const Matching& mu : all) {
    if (is_stable(prob, mu)) stable.push_back(mu);
    if (stable_for_some_extension(prob, mu)) profile_stable.push_back(mu);
  }
  if (stable != profile_stable) {
    report.verdict = Verdict::kCounterexample;
    report.witness["part"] = "stable-set equality";
    report.witness["problem"] = problem_to_json(prob);
    Json missing = Json::array();
    for (const Matching& mu : stable)
      if (std::find(profile_stable.begin(), profile_stable.end(), mu) ==
          profile_stable.end())
        missing.push_back(matching_to_json(prob, mu));
    report.witness["stable_but_unsupported"] = std::move(missing);
    return report;
  }

  const std::uint64_t count = count_extension_profiles(prob);
  if (count > guards.profiles.max_profiles) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = "extension profile count exceeds guard";
    report.witness["profile_count"] = count;
    return report;
  }
  std::vector<Matching> optimal = sosm_set_oracle(prob, guards.matchings);
  std::vector<Matching> reach =
      da_outcomes(prob, enumerate_extension_profiles(prob, guards.profiles));
  report.verdict = Verdict::kHolds;
  for (const Matching& mu : optimal)
    if (!std::binary_search(reach.begin(), reach.end(), mu)) {
      report.verdict = Verdict::kCounterexample;
      report.witness["part"] = "student-optimal inclusion";
      report.witness["problem"] = problem_to_json(prob);
      report.witness["matching"] = matching_to_json(prob, mu);
      report.witness["profile_count"] = count;
      return report;
    }
  report.witness["profile_count"] = count;
  report.witness["stable_count"] = stable.size();
  return report;
}

// Every student-optimal stable matching is reachable by deferred acceptance
// under some single-tiebreak extension (one common rank bijection for all
// schools).
inline CheckReport check_single_tiebreak_coverage(const Problem& prob,
                                                  CheckGuards guards = {}) {
  CheckReport report{"cor4", detail::describe_instance(prob)};
  detail::require_acyclic(prob, report.claim);
  std::vector<Matching> optimal;
  std::vector<ExtensionProfile> profiles;
  try {
    optimal = sosm_set_oracle(prob, guards.matchings);
    profiles =
        enumerate_single_tiebreak_profiles(prob, guards.profiles.max_students);
  } catch (const GuardError& e) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = e.what();
    return report;
  }
  std::vector<Matching> reach = da_outcomes(prob, profiles);
  report.verdict = Verdict::kHolds;
  report.witness["single_tiebreak_profiles"] = profiles.size();
  for (const Matching& mu : optimal)
    if (!std::binary_search(reach.begin(), reach.end(), mu)) {
      report.verdict = Verdict::kCounterexample;
      report.witness["problem"] = problem_to_json(prob);
      report.witness["matching"] = matching_to_json(prob, mu);
      break;
    }
  return report;
}

// The student-optimal stable set is exactly the set of settled-improvement
// outcomes over all extension profiles.
inline CheckReport check_settling_reaches_optimal_set(const Problem& prob,
                                                      CheckGuards guards = {},
                                                      EadamOptions options = {}) {
  CheckReport report{"cor5", detail::describe_instance(prob)};
  detail::require_transitive(prob, report.claim);
  const std::uint64_t count = count_extension_profiles(prob);
  if (count > guards.profiles.max_profiles) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = "extension profile count exceeds guard";
    report.witness["profile_count"] = count;
    return report;
  }
  std::vector<Matching> optimal;
  try {
    optimal = sosm_set_oracle(prob, guards.matchings);
  } catch (const GuardError& e) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = e.what();
    return report;
  }
  std::vector<Matching> reach = eadam_outcomes(
      prob, enumerate_extension_profiles(prob, guards.profiles), options);
  report.witness["profile_count"] = count;
  if (optimal == reach) {
    report.verdict = Verdict::kHolds;
    report.witness["optimal_count"] = optimal.size();
    return report;
  }
  report.verdict = Verdict::kCounterexample;
  report.witness["problem"] = problem_to_json(prob);
  report.witness["optimal_set"] = detail::matchings_to_json(prob, optimal);
  report.witness["settled_outcomes"] = detail::matchings_to_json(prob, reach);
  return report;
}

// Among matchings weakly improving on a given stable mu, the student-optimal
// stable ones are exactly the settled-improvement outcomes started from
// extensions of the mu-augmented priorities.
inline CheckReport check_settling_from_augmented(const Problem& prob,
                                                 const Matching& mu,
                                                 CheckGuards guards = {},
                                                 EadamOptions options = {}) {
  CheckReport report{"cor6", detail::describe_instance(prob)};
  detail::require_transitive(prob, report.claim);
  if (!is_stable(prob, mu))
    throw InputError(report.claim + ": matching is not stable for the instance");

  std::vector<AugmentedPriority> augmented = augment(prob, {mu});
  std::vector<PriorityRelation> rels;
  for (const auto& a : augmented) rels.push_back(a.result);
  Problem augmented_prob = with_priorities(prob, rels);

  const std::uint64_t count = count_extension_profiles(augmented_prob);
  if (count > guards.profiles.max_profiles) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = "augmented extension profile count exceeds guard";
    report.witness["profile_count"] = count;
    return report;
  }
  std::vector<Matching> optimal;
  try {
    optimal = sosm_set_oracle(prob, guards.matchings);
  } catch (const GuardError& e) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = e.what();
    return report;
  }
  std::vector<Matching> lhs;
  for (const Matching& nu : optimal)
    if (nu == mu || pareto_dominates(prob, nu, mu)) lhs.push_back(nu);
  std::vector<Matching> rhs = eadam_outcomes(
      prob, enumerate_extension_profiles(augmented_prob, guards.profiles), options);
  report.witness["profile_count"] = count;
  report.witness["matching"] = matching_to_json(prob, mu);
  if (lhs == rhs) {
    report.verdict = Verdict::kHolds;
    report.witness["improving_optimal_count"] = lhs.size();
    return report;
  }
  report.verdict = Verdict::kCounterexample;
  report.witness["problem"] = problem_to_json(prob);
  report.witness["improving_optimal_set"] = detail::matchings_to_json(prob, lhs);
  report.witness["settled_outcomes"] = detail::matchings_to_json(prob, rhs);
  return report;
}

// Every maximal Pareto chain of stable matchings is supported by a single
// extension profile under which all its members stay stable. For transitive
// priorities the augmentation route must always produce one; otherwise the
// claim is checked by brute force and may genuinely fail.
inline CheckReport check_chain_support(const Problem& prob,
                                       CheckGuards guards = {}) {
  CheckReport report{"thm1", detail::describe_instance(prob)};
  detail::require_acyclic(prob, report.claim);
  bool transitive = true;
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    if (!classify(prob.priority(s)).transitive) transitive = false;
  report.witness["hypothesis_satisfied"] = transitive;

  std::vector<Matching> stable;
  try {
    stable = stable_set_oracle(prob, guards.matchings);
  } catch (const GuardError& e) {
    report.verdict = Verdict::kSkipped;
    report.witness["reason"] = e.what();
    return report;
  }
  const auto chains = maximal_pareto_chains(prob, stable);
  report.witness["chain_count"] = chains.size();
  std::size_t longest = 0;
  bool unresolved = false;

  for (const auto& chain : chains) {
    longest = chain.size() > longest ? chain.size() : longest;
    const auto augmented = augment(prob, chain);
    bool all_acyclic = true;
    for (const auto& a : augmented) all_acyclic = all_acyclic && a.acyclic;

    Json chain_json = detail::matchings_to_json(prob, chain);
    if (all_acyclic) {
      ExtensionProfile profile = witness_extension(prob, chain);
      for (const Matching& mu : chain)
        if (!is_stable_for_profile(prob, mu, profile)) {
          report.verdict = Verdict::kCounterexample;
          report.witness["problem"] = problem_to_json(prob);
          report.witness["chain"] = std::move(chain_json);
          report.witness["profile"] = profile_to_json(prob, profile);
          report.witness["unstable_member"] = matching_to_json(prob, mu);
          return report;
        }
      continue;
    }
    // Cyclic augmentation (reachable only outside transitive priorities):
    // search all extension profiles of the base priorities directly.
    const std::uint64_t count = count_extension_profiles(prob);
    if (count > guards.profiles.max_profiles) {
      unresolved = true;
      continue;
    }
    bool supported = false;
    for (const auto& profile :
         enumerate_extension_profiles(prob, guards.profiles)) {
      bool all_stable = true;
      for (const Matching& mu : chain)
        all_stable = all_stable && is_stable_for_profile(prob, mu, profile);
      if (all_stable) {
        supported = true;
        break;
      }
    }
    if (!supported) {
      report.verdict = Verdict::kCounterexample;
      report.witness["problem"] = problem_to_json(prob);
      report.witness["chain"] = std::move(chain_json);
      report.witness["profile_count"] = count;
      report.witness["note"] = "no extension profile keeps the chain stable";
      return report;
    }
  }
  report.witness["longest_chain"] = longest;
  report.verdict = unresolved ? Verdict::kSkipped : Verdict::kHolds;
  if (unresolved)
    report.witness["reason"] = "extension profile count exceeds guard";
  return report;
}

// A partially stable matching always exists for acyclic priorities with any
// violation set: run deferred acceptance on an extension of the effective
// priorities.
inline CheckReport check_partially_stable_exists(const Problem& prob,
                                                 const ViolationSet& c,
                                                 CheckGuards guards = {}) {
  CheckReport report{"cor7", detail::describe_instance(prob)};
  detail::require_acyclic(prob, report.claim);
  Problem reduced = with_priorities(prob, effective_priorities(prob, c));
  ExtensionProfile profile;
  for (SchoolId s = 0; s < reduced.num_schools(); ++s)
    profile.orders.push_back(smo_extend(reduced.priority(s)));
  Matching exhibit = deferred_acceptance(reduced, profile);
  if (!is_partially_stable(prob, c, exhibit))
    throw InternalError(
        "deferred acceptance over extended effective priorities is not "
        "partially stable");
  std::vector<Matching> pstable;
  try {
    pstable = partially_stable_set_oracle(prob, c, guards.matchings);
  } catch (const GuardError& e) {
    report.verdict = Verdict::kHolds;  // the exhibit already proves existence
    report.witness["exhibit"] = matching_to_json(prob, exhibit);
    report.witness["note"] = e.what();
    return report;
  }
  if (pstable.empty()) {
    report.verdict = Verdict::kCounterexample;
    report.witness["problem"] = problem_to_json(prob);
    return report;
  }
  report.verdict = Verdict::kHolds;
  report.witness["exhibit"] = matching_to_json(prob, exhibit);
  report.witness["partially_stable_count"] = pstable.size();
  return report;
}

// Dispatch by the stable claim tokens the command line exposes. cor6
// quantifies over a matching, so the dispatcher checks every stable matching
// of the instance and merges: counterexample beats skipped beats holds.
inline CheckReport run_claim(const std::string& claim, const Problem& prob,
                             CheckGuards guards = {}, EadamOptions options = {}) {
  if (claim == "lemma1") return check_profile_stable_implies_stable(prob, guards);
  if (claim == "cor1") return check_stable_set_nonempty(prob, guards);
  if (claim == "cor2") return check_stable_set_profile_decomposition(prob, guards);
  if (claim == "cor4") return check_single_tiebreak_coverage(prob, guards);
  if (claim == "cor5")
    return check_settling_reaches_optimal_set(prob, guards, options);
  if (claim == "thm1") return check_chain_support(prob, guards);
  if (claim == "cor6") {
    CheckReport merged{"cor6", detail::describe_instance(prob)};
    detail::require_transitive(prob, merged.claim);
    std::vector<Matching> stable;
    try {
      stable = stable_set_oracle(prob, guards.matchings);
    } catch (const GuardError& e) {
      merged.verdict = Verdict::kSkipped;
      merged.witness["reason"] = e.what();
      return merged;
    }
    merged.verdict = Verdict::kHolds;
    merged.witness["stable_count"] = stable.size();
    for (const Matching& mu : stable) {
      CheckReport sub = check_settling_from_augmented(prob, mu, guards, options);
      if (sub.verdict == Verdict::kCounterexample) return sub;
      if (sub.verdict == Verdict::kSkipped) {
        merged.verdict = Verdict::kSkipped;
        merged.witness["reason"] = sub.witness.value("reason", "skipped");
      }
    }
    return merged;
  }
  throw InputError("unknown claim: " + claim);
}

}  // namespace priomatch
