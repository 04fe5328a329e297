#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "oracles.hpp"
#include "priomatch/priomatch.hpp"

using namespace priomatch;

namespace {

const std::string kInstanceDir = PRIOMATCH_INSTANCE_DIR;

Json minimal_instance() {
  return Json::parse(R"({
    "students": ["a", "b"],
    "schools": ["x"],
    "capacities": {"x": 1},
    "preferences": {"a": ["x"], "b": []},
    "priorities": {"x": [["a", "b"]]}
  })");
}

}  // namespace

TEST_CASE("shipped instance files match the embedded fixtures") {
  const InstanceFile f1 = load_instance(kInstanceDir + "/example1.json");
  CHECK(instance_to_json(f1) == problem_to_json(example1()));
  CHECK_FALSE(f1.violations.has_value());
  CHECK_FALSE(f1.extension_profile.has_value());

  const InstanceFile f2 = load_instance(kInstanceDir + "/example2.json");
  CHECK(instance_to_json(f2) == problem_to_json(example2()));

  CHECK_NOTHROW(load_instance(kInstanceDir + "/single_tiebreak_gap.json"));
}

TEST_CASE("instances survive an emit-parse round trip") {
  std::vector<Problem> probs{example1(), example2()};
  for (int trial = 0; trial < 20; ++trial) {
    RandomSpec spec;
    spec.seed = 20000 + trial;
    spec.target = trial % 2 ? ClassTarget::kPartial : ClassTarget::kWeak;
    probs.push_back(random_problem(spec));
  }
  for (const Problem& prob : probs) {
    const Json emitted = problem_to_json(prob);
    const InstanceFile parsed = parse_instance(emitted);
    CHECK(instance_to_json(parsed) == emitted);
    CHECK(emitted.dump(2) == problem_to_json(prob).dump(2));
  }
}

TEST_CASE("violations and extension profiles ride along in instance files") {
  Json j = minimal_instance();
  j["violations"] = Json{{"x", Json::array({Json::array({"a", "b"})})}};
  j["extension_profile"] = Json{{"x", Json::array({"a", "b"})}};
  const InstanceFile file = parse_instance(j);
  REQUIRE(file.violations.has_value());
  CHECK(file.violations->allows(0, 0, 1));
  REQUIRE(file.extension_profile.has_value());
  CHECK(file.extension_profile->orders[0] == TotalOrder({0, 1}));
  CHECK(instance_to_json(file) == j);

  // Absent violations block means none, not an error.
  const InstanceFile bare = parse_instance(minimal_instance());
  CHECK_FALSE(bare.violations.has_value());
}

TEST_CASE("instance parsing rejects structural mistakes") {
  CHECK_THROWS_AS(parse_instance(Json::parse("[]")), InputError);

  Json j = minimal_instance();
  j["extra"] = 1;
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = minimal_instance();
  j["students"] = Json::array({"a", "a"});
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = minimal_instance();
  j["capacities"].erase("x");
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = minimal_instance();
  j["capacities"]["x"] = 0;
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = minimal_instance();
  j["preferences"].erase("b");
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = minimal_instance();
  j["preferences"]["a"] = Json::array({"y"});
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = minimal_instance();
  j["priorities"]["x"] = Json::array({Json::array({"a", "zzz"})});
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = minimal_instance();
  j["priorities"]["x"] =
      Json::array({Json::array({"a", "b"}), Json::array({"b", "a"})});
  CHECK_THROWS_AS(parse_instance(j), InputError);

  j = minimal_instance();
  j["extension_profile"] = Json{{"x", Json::array({"a"})}};
  CHECK_THROWS_AS(parse_instance(j), InputError);
}

TEST_CASE("matchings serialize with explicit nulls") {
  const Problem prob = example1();
  const Matching mu = example1_matching();
  const Json j = matching_to_json(prob, mu);
  CHECK(j.at("assignment").at("i1").is_null());
  CHECK(j.at("assignment").at("i0") == "s");
  CHECK(parse_matching(prob, j) == mu);

  Json missing = j;
  missing["assignment"].erase("i2");
  CHECK_THROWS_AS(parse_matching(prob, missing), InputError);
  Json unknown = j;
  unknown["assignment"]["i2"] = "nowhere";
  CHECK_THROWS_AS(parse_matching(prob, unknown), InputError);
  Json overfull = j;
  overfull["assignment"]["i1"] = "sp";  // capacity 1, already holds i2
  CHECK_THROWS_AS(parse_matching(prob, overfull), InputError);
}

TEST_CASE("relations and orders round-trip") {
  const Json j = Json::parse(R"({
    "students": ["p", "q", "r"],
    "pairs": [["p", "q"], ["q", "r"]]
  })");
  const RelationFile file = parse_relation(j);
  CHECK(file.student_names == std::vector<std::string>{"p", "q", "r"});
  CHECK(file.relation == PriorityRelation(3, {{0, 1}, {1, 2}}));
  CHECK(relation_to_json(file.student_names, file.relation) == j);

  CHECK_THROWS_AS(parse_relation(Json::parse(
                      R"({"students": ["p"], "pairs": [["p", "p"]]})")),
                  InputError);
}

TEST_CASE("parse errors carry the source context") {
  try {
    parse_json_text("{nope", "somefile.json");
    FAIL("expected an InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("somefile.json") != std::string::npos);
  }
  CHECK_THROWS_AS(load_json_file("/definitely/not/a/file.json"), InputError);
}

TEST_CASE("profile serialization uses the instance's names") {
  const Problem prob = example2();
  ExtensionProfile p;
  p.orders.push_back(TotalOrder({0, 1, 2, 3}));
  p.orders.push_back(TotalOrder({3, 2, 1, 0}));
  p.orders.push_back(TotalOrder({2, 3, 0, 1}));
  const Json j = profile_to_json(prob, p);
  CHECK(j.at("extension_profile").at("s2") ==
        Json::array({"i4", "i3", "i2", "i1"}));
  const ExtensionProfile back =
      parse_profile_block(prob, j.at("extension_profile"), "extension_profile");
  CHECK(back == p);
}
