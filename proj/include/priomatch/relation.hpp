#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "priomatch/core.hpp"
#include "priomatch/rng.hpp"

namespace priomatch {

// An asymmetric, irreflexive binary relation over students 0..n-1.
// (i,j) present means i has strictly higher priority than j. Construction
// rejects out-of-range ids, loops (i,i), and symmetric pairs. Stored twice:
// a sorted unique pair list (canonical form, iteration, serialization) and a
// dense boolean table (O(1) membership in the hot loops).
class PriorityRelation {
 public:
  PriorityRelation() = default;

  explicit PriorityRelation(int num_students) : n_(num_students) {
    if (num_students < 0) throw InputError("negative ground set size");
    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
  }

  PriorityRelation(int num_students, std::vector<IdPair> pairs)
      : PriorityRelation(num_students) {
    for (const auto& [i, j] : pairs) {
      if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw InputError("relation pair out of range: (" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
      if (i == j)
        throw InputError("relation pair is a loop: (" + std::to_string(i) +
                         "," + std::to_string(i) + ")");
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (const auto& [i, j] : pairs) {
      if (std::binary_search(pairs.begin(), pairs.end(), IdPair{j, i}))
        throw InputError("relation not asymmetric: both (" + std::to_string(i) +
                         "," + std::to_string(j) + ") and its reverse present");
      adj_[cell(i, j)] = 1;
    }
    pairs_ = std::move(pairs);
  }

  int num_students() const { return n_; }

  bool contains(StudentId i, StudentId j) const { return adj_[cell(i, j)] != 0; }

  // Sorted lexicographically, no duplicates.
  const std::vector<IdPair>& pairs() const { return pairs_; }

  bool operator==(const PriorityRelation& o) const {
    return n_ == o.n_ && pairs_ == o.pairs_;
  }

 private:
  std::size_t cell(StudentId i, StudentId j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<IdPair> pairs_;
  std::vector<std::uint8_t> adj_;
};

// Throws InputError if ground sets differ or the union breaks asymmetry.
inline PriorityRelation relation_union(const PriorityRelation& a,
                                       const PriorityRelation& b) {
  if (a.num_students() != b.num_students())
    throw InputError("relation union over different ground sets");
  std::vector<IdPair> pairs = a.pairs();
  pairs.insert(pairs.end(), b.pairs().begin(), b.pairs().end());
  return PriorityRelation(a.num_students(), std::move(pairs));
}

inline PriorityRelation relation_difference(const PriorityRelation& a,
                                            const std::vector<IdPair>& remove) {
  std::vector<IdPair> keep;
  auto removed = remove;
  std::sort(removed.begin(), removed.end());
  for (const auto& p : a.pairs())
    if (!std::binary_search(removed.begin(), removed.end(), p)) keep.push_back(p);
  return PriorityRelation(a.num_students(), std::move(keep));
}

/// Finest class a relation falls into, coarsening left to right:
// total orders < weak orders < (strict) partial orders < acyclic < cyclic.
enum class RelationLabel { kTotal, kWeak, kPartial, kAcyclic, kCyclic };

inline const char* to_string(RelationLabel label) {
  switch (label) {
    case RelationLabel::kTotal: return "total";
    case RelationLabel::kWeak: return "weak";
    case RelationLabel::kPartial: return "partial";
    case RelationLabel::kAcyclic: return "acyclic";
    case RelationLabel::kCyclic: return "cyclic";
  }
  return "?";
}

struct RelationClass {
  bool complete = false;
  bool transitive = false;
  bool negatively_transitive = false;
  bool acyclic = false;
  RelationLabel label = RelationLabel::kCyclic;
};

// Evaluates each defining quantifier directly (O(n^3) loops); acyclicity by
// elimination of sources. Label is the first failure along the chain.
inline RelationClass classify(const PriorityRelation& rel) {
  const int n = rel.num_students();
  RelationClass c;

  c.complete = true;
  for (StudentId i = 0; i < n && c.complete; ++i)
    for (StudentId j = i + 1; j < n && c.complete; ++j)
      if (!rel.contains(i, j) && !rel.contains(j, i)) c.complete = false;

  c.transitive = true;
  for (StudentId i = 0; i < n && c.transitive; ++i)
    for (StudentId j = 0; j < n && c.transitive; ++j)
      for (StudentId k = 0; k < n && c.transitive; ++k)
        if (rel.contains(i, j) && rel.contains(j, k) && !rel.contains(i, k))
          c.transitive = false;

  c.negatively_transitive = true;
  for (StudentId i = 0; i < n && c.negatively_transitive; ++i)
    for (StudentId j = 0; j < n && c.negatively_transitive; ++j)
      for (StudentId k = 0; k < n && c.negatively_transitive; ++k)
        if (i != j && j != k && i != k && !rel.contains(i, j) &&
            !rel.contains(j, k) && rel.contains(i, k))
          c.negatively_transitive = false;

  // repeatedly strip undominated elements; leftovers mean a cycle
  std::vector<int> indeg(n, 0);
  for (const auto& p : rel.pairs()) ++indeg[p.second];
  std::vector<StudentId> queue;
  for (StudentId v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  int removed = 0;
  while (!queue.empty()) {
    StudentId v = queue.back();
    queue.pop_back();
    ++removed;
    for (StudentId w = 0; w < n; ++w)
      if (rel.contains(v, w) && --indeg[w] == 0) queue.push_back(w);
  }
  c.acyclic = removed == n;

  if (!c.acyclic)
    c.label = RelationLabel::kCyclic;
  else if (!c.transitive)
    c.label = RelationLabel::kAcyclic;
  else if (!c.negatively_transitive)
    c.label = RelationLabel::kPartial;
  else if (!c.complete)
    c.label = RelationLabel::kWeak;
  else
    c.label = RelationLabel::kTotal;
  return c;
}

// Members of `subset` that no other member of `subset` dominates. `subset`
// must be duplicate-free and within the ground set. Result sorted ascending.
// Empty iff the relation restricted to `subset` has no undominated element,
// which for nonempty subsets means a cycle through them.
inline std::vector<StudentId> maximal_set(const PriorityRelation& rel,
                                          const std::vector<StudentId>& subset) {
  std::vector<char> seen(rel.num_students(), 0);
  for (StudentId i : subset) {
    if (i < 0 || i >= rel.num_students())
      throw InputError("maximal_set: id out of range: " + std::to_string(i));
    if (seen[i]) throw InputError("maximal_set: duplicate id: " + std::to_string(i));
    seen[i] = 1;
  }
  std::vector<StudentId> out;
  for (StudentId i : subset) {
    bool dominated = false;
    for (StudentId j : subset)
      if (j != i && rel.contains(j, i)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// A strict total order over students 0..n-1; order()[0] has highest priority.
class TotalOrder {
 public:
  TotalOrder() = default;

  explicit TotalOrder(std::vector<StudentId> order) : order_(std::move(order)) {
    const int n = static_cast<int>(order_.size());
    pos_.assign(n, -1);
    for (int p = 0; p < n; ++p) {
      StudentId i = order_[p];
      if (i < 0 || i >= n)
        throw InputError("total order: id out of range: " + std::to_string(i));
      if (pos_[i] != -1)
        throw InputError("total order: duplicate id: " + std::to_string(i));
      pos_[i] = p;
    }
  }

  int num_students() const { return static_cast<int>(order_.size()); }
  const std::vector<StudentId>& order() const { return order_; }
  int position(StudentId i) const { return pos_[i]; }
  bool ranks_above(StudentId i, StudentId j) const { return pos_[i] < pos_[j]; }

  // All n(n-1)/2 implied pairs.
  PriorityRelation as_relation() const {
    std::vector<IdPair> pairs;
    const int n = num_students();
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) pairs.emplace_back(order_[a], order_[b]);
    return PriorityRelation(n, std::move(pairs));
  }

  bool operator==(const TotalOrder& o) const { return order_ == o.order_; }
  bool operator<(const TotalOrder& o) const { return order_ < o.order_; }

 private:
  std::vector<StudentId> order_;
  std::vector<int> pos_;
};

// Does `total` linearly extend `rel`? Ground sets must agree.
inline bool is_extension(const PriorityRelation& rel, const TotalOrder& total) {
  if (rel.num_students() != total.num_students())
    throw InputError("is_extension: ground set size mismatch");
  for (const auto& [i, j] : rel.pairs())
    if (!total.ranks_above(i, j)) return false;
  return true;
}

// Picks one element of a nonempty candidate set (always sorted ascending).
using Chooser = std::function<StudentId(const std::vector<StudentId>&)>;

inline Chooser lowest_index_chooser() {
  return [](const std::vector<StudentId>& candidates) { return candidates.front(); };
}

// Uniform over candidates; every extension is reachable with positive
// probability. Stateful: consecutive calls advance one shared engine.
inline Chooser random_chooser(std::uint64_t seed) {
  auto rng = std::make_shared<detail::Rng>(seed);
  return [rng](const std::vector<StudentId>& candidates) {
    return candidates[detail::uniform_below(*rng, candidates.size())];
  };
}

// Minimum-rank member. `rank` must be a bijection onto 1..n.
inline Chooser rank_chooser(std::vector<int> rank) {
  return [rank = std::move(rank)](const std::vector<StudentId>& candidates) {
    StudentId best = candidates.front();
    for (StudentId i : candidates)
      if (rank[i] < rank[best]) best = i;
    return best;
  };
}

inline void validate_rank_bijection(const std::vector<int>& rank, int n) {
  if (static_cast<int>(rank.size()) != n)
    throw InputError("rank vector has wrong size");
  std::vector<char> seen(n + 1, 0);
  for (int r : rank) {
    if (r < 1 || r > n || seen[r])
      throw InputError("rank vector is not a bijection onto 1..n");
    seen[r] = 1;
  }
}

// Sequentially places some maximal element of the remainder until all are
// placed. Succeeds exactly when the relation is acyclic; otherwise the
// remainder's maximal set goes empty and CyclicRelationError is thrown.
inline TotalOrder smo_extend(const PriorityRelation& rel,
                             const Chooser& choose = lowest_index_chooser()) {
  const int n = rel.num_students();
  std::vector<StudentId> remaining(n);
  for (StudentId i = 0; i < n; ++i) remaining[i] = i;
  std::vector<StudentId> order;
  order.reserve(n);
  while (!remaining.empty()) {
    std::vector<StudentId> m = maximal_set(rel, remaining);
    if (m.empty())
      throw CyclicRelationError("relation is cyclic: no maximal element among " +
                                std::to_string(remaining.size()) + " remaining");
    StudentId pick = choose(m);
    if (std::find(m.begin(), m.end(), pick) == m.end())
      throw InputError("chooser returned an element outside the candidate set");
    order.push_back(pick);
    remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
  }
  return TotalOrder(std::move(order));
}

// Rank-steered variant: at each step the minimum-rank member of the maximal
// set is placed. `rank` must be a bijection onto 1..n.
inline TotalOrder smo_extend_tiebreak(const PriorityRelation& rel,
                                      const std::vector<int>& rank) {
  validate_rank_bijection(rank, rel.num_students());
  return smo_extend(rel, rank_chooser(rank));
}

// All linear extensions, in lexicographic order of the placement sequence.
// Returns an empty list for cyclic relations (no extension exists; that is a
// legitimate answer here, unlike in smo_extend). Branching over every maximal
// choice reaches each extension exactly once.
inline std::vector<TotalOrder> enumerate_extensions(const PriorityRelation& rel,
                                                    int max_students = 8) {
  if (rel.num_students() > max_students)
    throw GuardError("enumerate_extensions: " + std::to_string(rel.num_students()) +
                     " students exceeds guard of " + std::to_string(max_students));
  const int n = rel.num_students();
  std::vector<TotalOrder> out;
  std::vector<StudentId> remaining(n), acc;
  for (StudentId i = 0; i < n; ++i) remaining[i] = i;
  acc.reserve(n);

  auto rec = [&](auto&& self) -> void {
    if (remaining.empty()) {
      out.emplace_back(acc);
      return;
    }
    const std::vector<StudentId> m = maximal_set(rel, remaining);
    for (StudentId pick : m) {
      acc.push_back(pick);
      remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
      self(self);
      remaining.insert(std::lower_bound(remaining.begin(), remaining.end(), pick),
                       pick);
      acc.pop_back();
    }
  };
  rec(rec);
  return out;
}

// Number of linear extensions without materializing them. Same traversal as
// enumerate_extensions; used for pre-materialization guards.
inline std::uint64_t count_extensions(const PriorityRelation& rel) {
  const int n = rel.num_students();
  std::vector<StudentId> remaining(n);
  for (StudentId i = 0; i < n; ++i) remaining[i] = i;
  auto rec = [&](auto&& self) -> std::uint64_t {
    if (remaining.empty()) return 1;
    std::uint64_t total = 0;
    const std::vector<StudentId> m = maximal_set(rel, remaining);
    for (StudentId pick : m) {
      remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
      total += self(self);
      remaining.insert(std::lower_bound(remaining.begin(), remaining.end(), pick),
                       pick);
    }
    return total;
  };
  return rec(rec);
}

}  // namespace priomatch
