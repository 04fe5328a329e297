#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "priomatch/core.hpp"
#include "priomatch/problem.hpp"
#include "priomatch/relation.hpp"
#include "priomatch/rng.hpp"

namespace priomatch {

// Which class the generated priorities must land in. The plain classes are
// cumulative (a total order satisfies kPartial); the *Exactly targets demand
// the class and nothing finer, which is what the classifier's label reports.
enum class ClassTarget {
  kTotal,
  kWeak,
  kPartial,
  kAcyclic,
  kWeakExactly,     // weak but not total
  kPartialExactly,  // partial but not weak
  kAcyclicExactly,  // acyclic but not partial
};

inline const char* to_string(ClassTarget t) {
  switch (t) {
    case ClassTarget::kTotal: return "T";
    case ClassTarget::kWeak: return "W";
    case ClassTarget::kPartial: return "P";
    case ClassTarget::kAcyclic: return "A";
    case ClassTarget::kWeakExactly: return "W\\T";
    case ClassTarget::kPartialExactly: return "P\\W";
    case ClassTarget::kAcyclicExactly: return "A\\P";
  }
  return "?";
}

struct RandomSpec {
  int num_students = 4;
  int num_schools = 3;
  int min_capacity = 1;
  int max_capacity = 2;
  ClassTarget target = ClassTarget::kPartial;
  double density = 0.5;  // pair/layer survival probability
  std::uint64_t seed = 0;
};

namespace detail {

// Subset of a random total order: acyclic by construction.
inline std::vector<IdPair> sample_suborder(int n, double density, Rng& rng) {
  std::vector<StudentId> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::vector<IdPair> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (bernoulli(rng, density)) pairs.emplace_back(order[a], order[b]);
  return pairs;
}

inline std::vector<IdPair> transitive_closure(int n, std::vector<IdPair> pairs) {
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : pairs) adj[a][b] = 1;
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (adj[a][k] && adj[k][b]) adj[a][b] = 1;
  std::vector<IdPair> out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (adj[a][b]) out.emplace_back(a, b);
  return out;
}

// Random ordered partition into indifference layers; higher density makes
// finer layers (more retained boundaries), density 1 gives a total order.
inline std::vector<IdPair> sample_layered(int n, double density, Rng& rng) {
  std::vector<StudentId> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::vector<int> layer(n, 0);
  int current = 0;
  for (int p = 1; p < n; ++p) {
    if (bernoulli(rng, density)) ++current;
    layer[order[p]] = current;
  }
  std::vector<IdPair> pairs;
  for (StudentId a = 0; a < n; ++a)
    for (StudentId b = 0; b < n; ++b)
      if (layer[a] < layer[b]) pairs.emplace_back(a, b);
  return pairs;
}

}  // namespace detail

// Samples a relation in the requested class, verifying membership with the
// classifier before returning. Exact-class targets resample until the finer
// classes are excluded; sizes where the class is empty (e.g. non-transitive
// relations on two students) run out of attempts and report that.
inline PriorityRelation random_relation(int n, ClassTarget target, double density,
                                        detail::Rng& rng, int max_attempts = 1000) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<IdPair> pairs;
    switch (target) {
      case ClassTarget::kTotal:
        pairs = detail::sample_suborder(n, 1.0, rng);
        break;
      case ClassTarget::kWeak:
      case ClassTarget::kWeakExactly:
        pairs = detail::sample_layered(n, density, rng);
        break;
      case ClassTarget::kPartial:
      case ClassTarget::kPartialExactly:
        pairs = detail::transitive_closure(
            n, detail::sample_suborder(n, density, rng));
        break;
      case ClassTarget::kAcyclic:
      case ClassTarget::kAcyclicExactly:
        pairs = detail::sample_suborder(n, density, rng);
        break;
    }
    PriorityRelation rel(n, std::move(pairs));
    const RelationClass cls = classify(rel);
    bool ok = false;
    switch (target) {
      case ClassTarget::kTotal: ok = cls.label == RelationLabel::kTotal; break;
      case ClassTarget::kWeak: ok = cls.negatively_transitive; break;
      case ClassTarget::kPartial: ok = cls.transitive; break;
      case ClassTarget::kAcyclic: ok = cls.acyclic; break;
      case ClassTarget::kWeakExactly: ok = cls.label == RelationLabel::kWeak; break;
      case ClassTarget::kPartialExactly:
        ok = cls.label == RelationLabel::kPartial;
        break;
      case ClassTarget::kAcyclicExactly:
        ok = cls.label == RelationLabel::kAcyclic;
        break;
    }
    if (!cls.acyclic)
      throw InternalError("sampled priority relation is cyclic");
    if (ok) return rel;
  }
  throw InputError(std::string("could not sample a relation in class ") +
                   to_string(target) + " on " + std::to_string(n) +
                   " students; the class may be empty at this size");
}

// A full problem with every school's priority in the target class.
// Preference lists are uniform-length prefixes of random school orders, so
// empty lists and full lists both occur.
inline Problem random_problem(const RandomSpec& spec) {
  if (spec.num_students < 1 || spec.num_schools < 1)
    throw InputError("random instance needs at least one student and school");
  if (spec.min_capacity < 1 || spec.max_capacity < spec.min_capacity)
    throw InputError("random instance capacity range is empty");
  if (spec.density < 0.0 || spec.density > 1.0)
    throw InputError("density must lie in [0, 1]");
  detail::Rng rng(spec.seed);
  const int n = spec.num_students;
  const int m = spec.num_schools;

  std::vector<int> capacities(m);
  for (int s = 0; s < m; ++s)
    capacities[s] =
        spec.min_capacity +
        static_cast<int>(detail::uniform_below(
            rng, static_cast<std::uint64_t>(spec.max_capacity - spec.min_capacity + 1)));

  std::vector<std::vector<SchoolId>> preferences(n);
  for (int i = 0; i < n; ++i) {
    std::vector<SchoolId> all(m);
    std::iota(all.begin(), all.end(), 0);
    detail::shuffle(all, rng);
    const int len = static_cast<int>(detail::uniform_below(
        rng, static_cast<std::uint64_t>(m) + 1));
    preferences[i].assign(all.begin(), all.begin() + len);
  }

  std::vector<PriorityRelation> priorities;
  priorities.reserve(m);
  for (int s = 0; s < m; ++s)
    priorities.push_back(random_relation(n, spec.target, spec.density, rng));

  return Problem(n, m, std::move(capacities), std::move(preferences),
                 std::move(priorities));
}

}  // namespace priomatch
