// Brute-force reference implementations the tests judge the library against.
// Everything here deliberately takes the slowest, most literal route: filter
// all permutations, walk all profiles, re-derive closure properties from the
// definition. No shortcuts shared with the code under test.
#pragma once

#include <algorithm>
#include <vector>

#include "priomatch/priomatch.hpp"

namespace oracles {

using namespace priomatch;

// Every total order on n students containing rel, by filtering all n!
// permutations. The library's backtracking enumerator must match this.
inline std::vector<TotalOrder> extensions_by_filter(const PriorityRelation& rel) {
  const int n = rel.num_students();
  std::vector<StudentId> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::vector<TotalOrder> out;
  do {
    TotalOrder order(perm);
    if (is_extension(rel, order)) out.push_back(order);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end());
  return out;
}

// Literal union over every extension profile of the stable set under that
// profile. Cross-validates the per-matching supporting-extension test the
// library checkers use.
inline std::vector<Matching> profile_union_stable(const Problem& prob,
                                                  ProfileGuard guard = {}) {
  std::vector<Matching> out;
  for (const ExtensionProfile& profile :
       enumerate_extension_profiles(prob, guard))
    for (const Matching& mu : enumerate_matchings(prob))
      if (is_stable_for_profile(prob, mu, profile)) out.push_back(mu);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Transitivity and acyclicity recomputed from scratch (Floyd–Warshall
// reachability) as a check on classify().
struct ClosureFacts {
  bool transitive = false;
  bool acyclic = false;
};

inline ClosureFacts closure_facts(const PriorityRelation& rel) {
  const int n = rel.num_students();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : rel.pairs()) reach[a][b] = 1;
  ClosureFacts facts;
  facts.transitive = true;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (reach[a][b] && reach[b][c] && !reach[a][c]) facts.transitive = false;
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (reach[a][k] && reach[k][b]) reach[a][b] = 1;
  facts.acyclic = true;
  for (int a = 0; a < n; ++a)
    if (reach[a][a]) facts.acyclic = false;
  return facts;
}

// All asymmetric relations on n students: each unordered pair independently
// takes one of three states. Exhaustive for small n.
inline std::vector<PriorityRelation> all_asymmetric_relations(int n) {
  std::vector<IdPair> slots;
  for (StudentId a = 0; a < n; ++a)
    for (StudentId b = a + 1; b < n; ++b) slots.push_back({a, b});
  std::vector<PriorityRelation> out;
  std::vector<int> state(slots.size(), 0);
  for (;;) {
    std::vector<IdPair> pairs;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (state[k] == 1) pairs.push_back(slots[k]);
      if (state[k] == 2) pairs.push_back({slots[k].second, slots[k].first});
    }
    out.emplace_back(n, std::move(pairs));
    std::size_t k = 0;
    while (k < slots.size() && state[k] == 2) state[k++] = 0;
    if (k == slots.size()) break;
    ++state[k];
  }
  return out;
}

// A random asymmetric relation: each unordered pair oriented one way or the
// other with probability density/2 each, absent otherwise. May be cyclic.
inline PriorityRelation random_asymmetric(int n, double density, detail::Rng& rng) {
  std::vector<IdPair> pairs;
  for (StudentId a = 0; a < n; ++a)
    for (StudentId b = a + 1; b < n; ++b) {
      const double u = detail::uniform_unit(rng);
      if (u < density / 2) pairs.push_back({a, b});
      else if (u < density) pairs.push_back({b, a});
    }
  return PriorityRelation(n, std::move(pairs));
}

// A random violation set: every ordered pair (including pairs outside the
// priority relation) admitted independently.
inline ViolationSet random_violations(const Problem& prob, double p, detail::Rng& rng) {
  std::vector<std::vector<IdPair>> allowed(prob.num_schools());
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    for (StudentId a = 0; a < prob.num_students(); ++a)
      for (StudentId b = 0; b < prob.num_students(); ++b)
        if (a != b && detail::bernoulli(rng, p)) allowed[s].push_back({a, b});
  return ViolationSet(prob.num_students(), std::move(allowed));
}

}  // namespace oracles
