#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "priomatch/core.hpp"
#include "priomatch/matching.hpp"
#include "priomatch/mechanisms.hpp"
#include "priomatch/problem.hpp"
#include "priomatch/relation.hpp"
#include "priomatch/violations.hpp"

namespace priomatch {

using Json = nlohmann::json;

// All serialization goes through nlohmann's default (key-sorted) object
// representation, so equal values dump to identical bytes.

namespace detail {

inline void require_keys(const Json& j, const std::vector<std::string>& required,
                         const std::vector<std::string>& optional,
                         const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    bool known = false;
    for (const auto& k : required) known = known || k == key;
    for (const auto& k : optional) known = known || k == key;
    if (!known) throw InputError(where + ": unknown key \"" + key + "\"");
  }
  for (const auto& k : required)
    if (!j.contains(k)) throw InputError(where + ": missing key \"" + k + "\"");
}

inline std::vector<std::string> parse_name_array(const Json& j,
                                                 const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of names");
  std::vector<std::string> names;
  for (const auto& e : j) {
    if (!e.is_string() || e.get<std::string>().empty())
      throw InputError(where + ": names must be nonempty strings");
    names.push_back(e.get<std::string>());
  }
  for (std::size_t a = 0; a < names.size(); ++a)
    for (std::size_t b = a + 1; b < names.size(); ++b)
      if (names[a] == names[b])
        throw InputError(where + ": duplicate name \"" + names[a] + "\"");
  return names;
}

class NameTable {
 public:
  explicit NameTable(const std::vector<std::string>& names) {
    for (std::size_t k = 0; k < names.size(); ++k)
      index_[names[k]] = static_cast<int>(k);
  }
  int at(const std::string& name, const std::string& where) const {
    auto it = index_.find(name);
    if (it == index_.end())
      throw InputError(where + ": unknown name \"" + name + "\"");
    return it->second;
  }

 private:
  std::unordered_map<std::string, int> index_;
};

inline std::vector<IdPair> parse_pairs(const Json& j, const NameTable& students,
                                       const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of pairs");
  std::vector<IdPair> pairs;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw InputError(where + ": each pair must be [student, student]");
    pairs.push_back({students.at(e[0].get<std::string>(), where),
                     students.at(e[1].get<std::string>(), where)});
  }
  return pairs;
}

}  // namespace detail

// A problem plus the optional blocks an instance file may carry.
struct InstanceFile {
  Problem problem;
  std::optional<ViolationSet> violations;
  std::optional<ExtensionProfile> extension_profile;
};

inline ExtensionProfile parse_profile_block(const Problem& prob, const Json& j,
                                            const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected {school: [students]}");
  detail::NameTable schools(prob.school_names());
  detail::NameTable students(prob.student_names());
  std::vector<char> seen(prob.num_schools(), 0);
  std::vector<TotalOrder> orders(prob.num_schools());
  for (const auto& item : j.items()) {
    const int s = schools.at(item.key(), where);
    const auto names = detail::parse_name_array(item.value(), where + "." + item.key());
    if (static_cast<int>(names.size()) != prob.num_students())
      throw InputError(where + "." + item.key() + ": order must list every student");
    std::vector<StudentId> order;
    for (const auto& name : names)
      order.push_back(students.at(name, where + "." + item.key()));
    orders[s] = TotalOrder(order);
    seen[s] = 1;
  }
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    if (!seen[s])
      throw InputError(where + ": missing order for school \"" +
                       prob.school_names()[s] + "\"");
  return ExtensionProfile{std::move(orders)};
}

inline InstanceFile parse_instance(const Json& j) {
  detail::require_keys(
      j, {"students", "schools", "capacities", "preferences", "priorities"},
      {"violations", "extension_profile"}, "instance");
  auto student_names = detail::parse_name_array(j.at("students"), "students");
  auto school_names = detail::parse_name_array(j.at("schools"), "schools");
  detail::NameTable students(student_names);
  detail::NameTable schools(school_names);
  const int n = static_cast<int>(student_names.size());
  const int m = static_cast<int>(school_names.size());

  const Json& caps = j.at("capacities");
  if (!caps.is_object()) throw InputError("capacities: expected {school: count}");
  std::vector<int> capacities(m, 0);
  for (const auto& item : caps.items()) {
    if (!item.value().is_number_integer())
      throw InputError("capacities." + item.key() + ": expected an integer");
    capacities[schools.at(item.key(), "capacities")] = item.value().get<int>();
  }
  for (int s = 0; s < m; ++s)
    if (!caps.contains(school_names[s]))
      throw InputError("capacities: missing school \"" + school_names[s] + "\"");

  const Json& prefs = j.at("preferences");
  if (!prefs.is_object())
    throw InputError("preferences: expected {student: [schools]}");
  std::vector<std::vector<SchoolId>> preferences(n);
  for (const auto& item : prefs.items()) {
    const int i = students.at(item.key(), "preferences");
    const std::string where = "preferences." + item.key();
    const auto names = detail::parse_name_array(item.value(), where);
    for (const auto& name : names)
      preferences[i].push_back(schools.at(name, where));
  }
  for (int i = 0; i < n; ++i)
    if (!prefs.contains(student_names[i]))
      throw InputError("preferences: missing student \"" + student_names[i] + "\"");

  const Json& prios = j.at("priorities");
  if (!prios.is_object()) throw InputError("priorities: expected {school: [pairs]}");
  std::vector<PriorityRelation> priorities(m, PriorityRelation(n));
  for (const auto& item : prios.items()) {
    const int s = schools.at(item.key(), "priorities");
    priorities[s] = PriorityRelation(
        n, detail::parse_pairs(item.value(), students, "priorities." + item.key()));
  }
  for (int s = 0; s < m; ++s)
    if (!prios.contains(school_names[s]))
      throw InputError("priorities: missing school \"" + school_names[s] + "\"");

  InstanceFile out{Problem(student_names, school_names, capacities, preferences,
                           priorities),
                   std::nullopt, std::nullopt};

  if (j.contains("violations")) {
    const Json& v = j.at("violations");
    if (!v.is_object()) throw InputError("violations: expected {school: [pairs]}");
    std::vector<std::vector<IdPair>> per_school(m);
    for (const auto& item : v.items()) {
      const int s = schools.at(item.key(), "violations");
      per_school[s] =
          detail::parse_pairs(item.value(), students, "violations." + item.key());
    }
    out.violations = ViolationSet(n, std::move(per_school));
  }
  if (j.contains("extension_profile"))
    out.extension_profile = parse_profile_block(out.problem, j.at("extension_profile"),
                                                "extension_profile");
  return out;
}

inline Json instance_to_json(const InstanceFile& file) {
  const Problem& prob = file.problem;
  Json j;
  j["students"] = prob.student_names();
  j["schools"] = prob.school_names();
  Json caps = Json::object();
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    caps[prob.school_names()[s]] = prob.capacities()[s];
  j["capacities"] = std::move(caps);
  Json prefs = Json::object();
  for (StudentId i = 0; i < prob.num_students(); ++i) {
    Json list = Json::array();
    for (SchoolId s : prob.preferences()[i]) list.push_back(prob.school_names()[s]);
    prefs[prob.student_names()[i]] = std::move(list);
  }
  j["preferences"] = std::move(prefs);
  Json prios = Json::object();
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    Json list = Json::array();
    for (const auto& [a, b] : prob.priority(s).pairs())
      list.push_back(Json::array(
          {prob.student_names()[a], prob.student_names()[b]}));
    prios[prob.school_names()[s]] = std::move(list);
  }
  j["priorities"] = std::move(prios);
  if (file.violations) {
    Json v = Json::object();
    for (SchoolId s = 0; s < prob.num_schools(); ++s) {
      Json list = Json::array();
      for (const auto& [a, b] : file.violations->allowed(s))
        list.push_back(Json::array(
            {prob.student_names()[a], prob.student_names()[b]}));
      v[prob.school_names()[s]] = std::move(list);
    }
    j["violations"] = std::move(v);
  }
  if (file.extension_profile) {
    Json p = Json::object();
    for (SchoolId s = 0; s < prob.num_schools(); ++s) {
      Json list = Json::array();
      for (StudentId i : file.extension_profile->orders[s].order())
        list.push_back(prob.student_names()[i]);
      p[prob.school_names()[s]] = std::move(list);
    }
    j["extension_profile"] = std::move(p);
  }
  return j;
}

inline Json problem_to_json(const Problem& prob) {
  return instance_to_json({prob, std::nullopt, std::nullopt});
}

inline Json matching_to_json(const Problem& prob, const Matching& mu) {
  Json a = Json::object();
  for (StudentId i = 0; i < prob.num_students(); ++i) {
    const SchoolId s = mu.school_of(i);
    if (s == kNullSchool)
      a[prob.student_names()[i]] = nullptr;
    else
      a[prob.student_names()[i]] = prob.school_names()[s];
  }
  return Json{{"assignment", std::move(a)}};
}

inline Matching parse_matching(const Problem& prob, const Json& j) {
  detail::require_keys(j, {"assignment"}, {}, "matching");
  const Json& a = j.at("assignment");
  if (!a.is_object()) throw InputError("assignment: expected {student: school|null}");
  detail::NameTable students(prob.student_names());
  detail::NameTable schools(prob.school_names());
  std::vector<SchoolId> assignment(prob.num_students(), kNullSchool);
  for (const auto& item : a.items()) {
    const int i = students.at(item.key(), "assignment");
    if (item.value().is_null())
      assignment[i] = kNullSchool;
    else if (item.value().is_string())
      assignment[i] = schools.at(item.value().get<std::string>(), "assignment");
    else
      throw InputError("assignment." + item.key() + ": expected school or null");
  }
  for (StudentId i = 0; i < prob.num_students(); ++i)
    if (!a.contains(prob.student_names()[i]))
      throw InputError("assignment: missing student \"" +
                       prob.student_names()[i] + "\"");
  return Matching(prob, assignment);
}

// Standalone relation files: {"students": [...], "pairs": [[a, b], ...]}.
struct RelationFile {
  std::vector<std::string> student_names;
  PriorityRelation relation;
};

inline RelationFile parse_relation(const Json& j) {
  detail::require_keys(j, {"students", "pairs"}, {}, "relation");
  auto names = detail::parse_name_array(j.at("students"), "students");
  detail::NameTable students(names);
  auto pairs = detail::parse_pairs(j.at("pairs"), students, "pairs");
  const int n = static_cast<int>(names.size());
  return RelationFile{std::move(names), PriorityRelation(n, std::move(pairs))};
}

inline Json relation_to_json(const std::vector<std::string>& student_names,
                             const PriorityRelation& rel) {
  Json pairs = Json::array();
  for (const auto& [a, b] : rel.pairs())
    pairs.push_back(Json::array({student_names[a], student_names[b]}));
  return Json{{"students", student_names}, {"pairs", std::move(pairs)}};
}

inline Json order_to_json(const std::vector<std::string>& student_names,
                          const TotalOrder& order) {
  Json names = Json::array();
  for (StudentId i : order.order()) names.push_back(student_names[i]);
  return Json{{"order", std::move(names)}};
}

inline Json profile_to_json(const Problem& prob, const ExtensionProfile& profile) {
  Json p = Json::object();
  for (SchoolId s = 0; s < prob.num_schools(); ++s) {
    Json list = Json::array();
    for (StudentId i : profile.orders[s].order())
      list.push_back(prob.student_names()[i]);
    p[prob.school_names()[s]] = std::move(list);
  }
  return Json{{"extension_profile", std::move(p)}};
}

inline Json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

inline InstanceFile load_instance(const std::string& path) {
  try {
    return parse_instance(load_json_file(path));
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace priomatch
