#pragma once

#include <optional>
#include <string>

#include "priomatch/matching.hpp"
#include "priomatch/problem.hpp"

namespace priomatch {

// Two small instances used throughout the tests and exposed by the CLI as
// built-in fixtures. Their interesting structure: a priority relation that is
// acyclic but not transitive (fixture 1, school "s"), and one that is
// transitive but not negatively transitive (fixture 2, school "s3").

// Three students, two unit schools.
//   prefs   i0: s > sp   i1: s > sp   i2: sp > s
//   i1 beats i2 and i2 beats i0 at s; sp ranks i2 > i1 > i0.
inline Problem example1() {
  return Problem({"i0", "i1", "i2"}, {"s", "sp"}, {1, 1},
                 {{0, 1}, {0, 1}, {1, 0}},
                 {PriorityRelation(3, {{1, 2}, {2, 0}}),
                  PriorityRelation(3, {{2, 1}, {2, 0}, {1, 0}})});
}

// The matching {i0->s, i1->null, i2->sp}: stable and Pareto-undominated, yet
// unreachable as a stable matching of any linear extension profile.
inline Matching example1_matching() {
  Problem prob = example1();
  return Matching(prob, {0, kNullSchool, 1});
}

// Four students, three unit schools.
//   prefs   i1: s3 > s1   i2: s1 > s2   i3: s2 > s3   i4: s3
//   s1 and s2 have empty priorities; s3 only ranks i4 above i1.
inline Problem example2() {
  return Problem({"i1", "i2", "i3", "i4"}, {"s1", "s2", "s3"}, {1, 1, 1},
                 {{2, 0}, {0, 1}, {1, 2}, {2}},
                 {PriorityRelation(4), PriorityRelation(4),
                  PriorityRelation(4, {{3, 0}})});
}

// The matching {i1->s1, i2->s2, i3->s3, i4->null}: reachable exactly under
// extension profiles ranking i1 over i2 at s1, i2 over i3 at s2, and i3 over
// both i1 and i4 at s3.
inline Matching example2_matching() {
  Problem prob = example2();
  return Matching(prob, {0, 1, 2, kNullSchool});
}

inline std::optional<Problem> fixture_by_name(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  return std::nullopt;
}

}  // namespace priomatch
