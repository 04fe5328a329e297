#pragma once

#include <limits>
#include <string>
#include <vector>

#include "priomatch/core.hpp"
#include "priomatch/relation.hpp"

namespace priomatch {

// Rank value for schools a student did not list: strictly below kNullSchool,
// mutually unranked. No implemented predicate ever needs to order two
// unlisted schools against each other.
inline constexpr int kUnlistedRank = std::numeric_limits<int>::max() / 2;

// A school-choice instance: students with strict preference lists over a
// subset of schools, schools with capacities and (possibly partial) priority
// relations over all students. Immutable after construction.
class Problem {
 public:
  Problem() = default;

  Problem(std::vector<std::string> student_names,
          std::vector<std::string> school_names, std::vector<int> capacities,
          std::vector<std::vector<SchoolId>> preferences,
          std::vector<PriorityRelation> priorities)
      : student_names_(std::move(student_names)),
        school_names_(std::move(school_names)),
        capacities_(std::move(capacities)),
        preferences_(std::move(preferences)),
        priorities_(std::move(priorities)) {
    validate();
  }

  // Index-only construction; names default to i0..,s0..
  Problem(int num_students, int num_schools, std::vector<int> capacities,
          std::vector<std::vector<SchoolId>> preferences,
          std::vector<PriorityRelation> priorities)
      : capacities_(std::move(capacities)),
        preferences_(std::move(preferences)),
        priorities_(std::move(priorities)) {
    for (int i = 0; i < num_students; ++i)
      student_names_.push_back("i" + std::to_string(i));
    for (int s = 0; s < num_schools; ++s)
      school_names_.push_back("s" + std::to_string(s));
    validate();
  }

  int num_students() const { return static_cast<int>(student_names_.size()); }
  int num_schools() const { return static_cast<int>(school_names_.size()); }
  const std::vector<std::string>& student_names() const { return student_names_; }
  const std::vector<std::string>& school_names() const { return school_names_; }
  int capacity(SchoolId s) const { return capacities_[s]; }
  const std::vector<int>& capacities() const { return capacities_; }
  const std::vector<SchoolId>& preference(StudentId i) const {
    return preferences_[i];
  }
  const std::vector<std::vector<SchoolId>>& preferences() const {
    return preferences_;
  }
  const PriorityRelation& priority(SchoolId s) const { return priorities_[s]; }
  const std::vector<PriorityRelation>& priorities() const { return priorities_; }

  // Position of s in i's ranking of schools-or-null: listed schools first
  // (0-based list position), then kNullSchool, then everything unlisted.
  int preference_rank(StudentId i, SchoolId s) const {
    if (s == kNullSchool) return static_cast<int>(preferences_[i].size());
    int r = pref_rank_[static_cast<std::size_t>(i) * num_schools() + s];
    return r >= 0 ? r : kUnlistedRank;
  }

  bool acceptable(StudentId i, SchoolId s) const {
    return s == kNullSchool || preference_rank(i, s) != kUnlistedRank;
  }

  // a strictly before b in i's ranking. Two unlisted schools are unordered:
  // both directions false.
  bool prefers(StudentId i, SchoolId a, SchoolId b) const {
    return preference_rank(i, a) < preference_rank(i, b);
  }

  bool weakly_prefers(StudentId i, SchoolId a, SchoolId b) const {
    return a == b || prefers(i, a, b);
  }

 private:
  void validate() {
    const int n = num_students();
    const int m = num_schools();
    if (n < 1) throw InputError("problem needs at least one student");
    if (static_cast<int>(capacities_.size()) != m)
      throw InputError("capacity count does not match school count");
    for (int s = 0; s < m; ++s)
      if (capacities_[s] < 1)
        throw InputError("capacity of school " + std::to_string(s) +
                         " must be at least 1");
    if (static_cast<int>(preferences_.size()) != n)
      throw InputError("preference list count does not match student count");
    if (static_cast<int>(priorities_.size()) != m)
      throw InputError("priority relation count does not match school count");
    for (int s = 0; s < m; ++s)
      if (priorities_[s].num_students() != n)
        throw InputError("priority relation of school " + std::to_string(s) +
                         " has wrong ground set size");
    pref_rank_.assign(static_cast<std::size_t>(n) * m, -1);
    for (StudentId i = 0; i < n; ++i) {
      for (std::size_t p = 0; p < preferences_[i].size(); ++p) {
        SchoolId s = preferences_[i][p];
        if (s < 0 || s >= m)
          throw InputError("preference of student " + std::to_string(i) +
                           " lists unknown school " + std::to_string(s));
        auto& slot = pref_rank_[static_cast<std::size_t>(i) * m + s];
        if (slot != -1)
          throw InputError("preference of student " + std::to_string(i) +
                           " lists school " + std::to_string(s) + " twice");
        slot = static_cast<int>(p);
      }
    }
  }

  std::vector<std::string> student_names_;
  std::vector<std::string> school_names_;
  std::vector<int> capacities_;
  std::vector<std::vector<SchoolId>> preferences_;
  std::vector<PriorityRelation> priorities_;
  std::vector<int> pref_rank_;  // n*m, -1 = unlisted
};

// Same instance with the priority profile swapped out (e.g. for an extension
// profile or an effective priority profile).
inline Problem with_priorities(const Problem& prob,
                               std::vector<PriorityRelation> priorities) {
  return Problem(prob.student_names(), prob.school_names(), prob.capacities(),
                 prob.preferences(), std::move(priorities));
}

}  // namespace priomatch
