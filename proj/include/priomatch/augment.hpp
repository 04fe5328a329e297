#pragma once

#include <string>
#include <vector>

#include "priomatch/core.hpp"
#include "priomatch/matching.hpp"
#include "priomatch/mechanisms.hpp"
#include "priomatch/problem.hpp"
#include "priomatch/relation.hpp"

namespace priomatch {

// One school's priority after absorbing the claims a chain of stable
// matchings needs protected. `added` collects, over every chain member mu_k,
// the pairs (i, j) where i holds a seat at the school and j strictly prefers
// it to mu_k(j): exactly the pairs an extension must keep in this direction
// for mu_k to stay fair at the school.
struct AugmentedPriority {
  PriorityRelation base;
  std::vector<IdPair> added;
  PriorityRelation result;  // base plus added
  bool acyclic = false;
};

// Absorbs a Pareto-ordered chain of stable matchings into the priorities.
// The chain must be ordered so later members dominate earlier ones, and every
// member must be stable for the instance's own (partial) priorities; both are
// verified. With stability verified, the union never breaks asymmetry, and
// when every school's priority is transitive the result is acyclic as well;
// either failing is an internal invariant violation, not an input error.
// Outside the transitive case the result may legitimately be cyclic, which
// the per-school flag records.
inline std::vector<AugmentedPriority> augment(const Problem& prob,
                                              const std::vector<Matching>& chain) {
  for (std::size_t k = 0; k < chain.size(); ++k)
    if (!is_stable(prob, chain[k]))
      throw InputError("chain member " + std::to_string(k) +
                       " is not stable for the instance priorities");
  for (std::size_t k = 0; k + 1 < chain.size(); ++k)
    for (std::size_t k2 = k + 1; k2 < chain.size(); ++k2)
      if (!pareto_dominates(prob, chain[k2], chain[k]))
        throw InputError("chain member " + std::to_string(k2) +
                         " does not Pareto dominate member " + std::to_string(k));

  bool all_transitive = true;
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    if (!classify(prob.priority(s)).transitive) all_transitive = false;

  std::vector<AugmentedPriority> out;
  out.reserve(prob.num_schools());
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    AugmentedPriority aug;
    aug.base = prob.priority(s);
    for (const Matching& mu : chain)
      for (StudentId i : mu.roster(s))
        for (StudentId j = 0; j < prob.num_students(); ++j)
          if (prob.prefers(j, s, mu.school_of(j)))
            aug.added.push_back({i, j});
    std::sort(aug.added.begin(), aug.added.end());
    aug.added.erase(std::unique(aug.added.begin(), aug.added.end()),
                    aug.added.end());
    try {
      aug.result = relation_union(
          aug.base, PriorityRelation(prob.num_students(), aug.added));
    } catch (const InputError&) {
      throw InternalError(
          "augmenting with a verified stable chain broke asymmetry at school " +
          prob.school_names()[s]);
    }
    aug.acyclic = classify(aug.result).acyclic;
    if (all_transitive && !aug.acyclic)
      throw InternalError(
          "augmenting transitive priorities with a verified stable chain "
          "produced a cycle at school " + prob.school_names()[s]);
    out.push_back(std::move(aug));
  }
  return out;
}

// A single extension profile under which every chain member is stable: extend
// each augmented priority. Fails with CyclicRelationError when some school's
// augmented relation is cyclic, in which case no such profile exists.
inline ExtensionProfile witness_extension(const Problem& prob,
                                          const std::vector<Matching>& chain) {
  std::vector<AugmentedPriority> augmented = augment(prob, chain);
  ExtensionProfile profile;
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    if (!augmented[s].acyclic)
      throw CyclicRelationError("augmented priority of school " +
                                prob.school_names()[s] +
                                " is cyclic; no witness profile exists");
    profile.orders.push_back(smo_extend(augmented[s].result));
  }
  return profile;
}

// All inclusion-maximal Pareto chains over a set of matchings, each ordered
// so later members dominate earlier ones. Maximal chains of a finite strict
// order are exactly the source-to-sink paths of its cover digraph, so the
// enumeration walks covers. Matchings dominating and dominated by nothing
// come back as singleton chains.
inline std::vector<std::vector<Matching>> maximal_pareto_chains(
    const Problem& prob, const std::vector<Matching>& set,
    std::size_t max_chains = 10000) {
  const int n = static_cast<int>(set.size());
  std::vector<std::vector<char>> dom(n, std::vector<char>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) dom[a][b] = pareto_dominates(prob, set[b], set[a]);

  auto covers = [&](int a, int b) {  // b covers a: no c strictly between
    if (!dom[a][b]) return false;
    for (int c = 0; c < n; ++c)
      if (dom[a][c] && dom[c][b]) return false;
    return true;
  };

  std::vector<std::vector<Matching>> chains;
  std::vector<int> path;
  auto walk = [&](auto&& self, int v) -> void {
    path.push_back(v);
    bool extended = false;
    for (int w = 0; w < n; ++w)
      if (covers(v, w)) {
        extended = true;
        self(self, w);
      }
    if (!extended) {
      if (chains.size() >= max_chains)
        throw GuardError("maximal chain enumeration exceeds guard of " +
                         std::to_string(max_chains));
      std::vector<Matching> chain;
      for (int idx : path) chain.push_back(set[idx]);
      chains.push_back(std::move(chain));
    }
    path.pop_back();
  };
  for (int v = 0; v < n; ++v) {
    bool minimal = true;
    for (int u = 0; u < n; ++u)
      if (dom[u][v]) minimal = false;
    if (minimal) walk(walk, v);
  }
  return chains;
}

}  // namespace priomatch
