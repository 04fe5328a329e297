// Command-line front end: instance I/O, mechanism runs, claim checking,
// violation-model utilities, and random instance generation.
//
// Exit codes: 0 success (all claims hold or skip), 1 counterexample found /
// matching not (partially) stable, 2 input error, 3 enumeration guard
// exceeded, 4 internal invariant failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "priomatch/priomatch.hpp"

using namespace priomatch;

namespace {

struct InputArgs {
  std::string input;
  std::string fixture;
};

void add_input_options(CLI::App* cmd, InputArgs& args) {
  auto* in = cmd->add_option("--input", args.input, "instance JSON file");
  auto* fx = cmd->add_option("--fixture", args.fixture,
                             "built-in instance: example1 or example2");
  in->excludes(fx);
}

InstanceFile resolve_instance(const InputArgs& args) {
  if (!args.fixture.empty()) {
    std::optional<Problem> prob = fixture_by_name(args.fixture);
    if (!prob) throw InputError("unknown fixture: " + args.fixture);
    return InstanceFile{*prob, std::nullopt, std::nullopt};
  }
  if (args.input.empty()) throw InputError("need --input or --fixture");
  return load_instance(args.input);
}

struct ProfileArgs {
  std::string profile_file;
  std::string tiebreak;  // "single" | "multiple" | ""
  std::string rank_file;
  std::uint64_t seed = 0;
};

void add_profile_options(CLI::App* cmd, ProfileArgs& args) {
  cmd->add_option("--profile", args.profile_file,
                  "extension profile JSON file ({\"extension_profile\": ...})");
  cmd->add_option("--tiebreak", args.tiebreak,
                  "draw a tiebreak profile: single or multiple")
      ->check(CLI::IsMember({"single", "multiple"}));
  cmd->add_option("--rank-file", args.rank_file,
                  "tiebreak ranks: {\"rank\": {student: r}} or "
                  "{\"ranks\": {school: {student: r}}}");
  cmd->add_option("--seed", args.seed, "seed for --tiebreak (default 0)");
}

std::vector<int> parse_rank_object(const Problem& prob, const Json& j,
                                   const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected {student: rank}");
  std::vector<int> rank(prob.num_students(), 0);
  std::vector<char> seen(prob.num_students(), 0);
  for (const auto& item : j.items()) {
    int i = -1;
    for (StudentId k = 0; k < prob.num_students(); ++k)
      if (prob.student_names()[k] == item.key()) i = k;
    if (i < 0) throw InputError(where + ": unknown student \"" + item.key() + "\"");
    if (!item.value().is_number_integer())
      throw InputError(where + "." + item.key() + ": expected an integer rank");
    rank[i] = item.value().get<int>();
    seen[i] = 1;
  }
  for (StudentId i = 0; i < prob.num_students(); ++i)
    if (!seen[i])
      throw InputError(where + ": missing student \"" +
                       prob.student_names()[i] + "\"");
  return rank;
}

void require_extendable(const Problem& prob) {
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    if (!classify(prob.priority(s)).acyclic)
      throw CyclicRelationError("priority of school " + prob.school_names()[s] +
                                " is cyclic; no extension exists");
}

// Priority of sources: explicit profile file, tiebreak draw, rank file,
// profile embedded in the instance, deterministic lowest-index extension.
ExtensionProfile resolve_profile(const InstanceFile& file, const ProfileArgs& args) {
  const Problem& prob = file.problem;
  require_extendable(prob);
  if (!args.profile_file.empty()) {
    Json j = load_json_file(args.profile_file);
    detail::require_keys(j, {"extension_profile"}, {}, "profile file");
    ExtensionProfile p =
        parse_profile_block(prob, j.at("extension_profile"), "extension_profile");
    validate_extension_profile(prob, p);
    return p;
  }
  if (!args.tiebreak.empty()) {
    TiebreakProfile tau =
        args.tiebreak == "single"
            ? TiebreakProfile::random_single(prob.num_students(),
                                             prob.num_schools(), args.seed)
            : TiebreakProfile::random_multiple(prob.num_students(),
                                               prob.num_schools(), args.seed);
    return extend_profile_tiebreak(prob, tau);
  }
  if (!args.rank_file.empty()) {
    Json j = load_json_file(args.rank_file);
    detail::require_keys(j, {}, {"rank", "ranks"}, "rank file");
    if (j.contains("rank") == j.contains("ranks"))
      throw InputError("rank file: need exactly one of \"rank\" or \"ranks\"");
    TiebreakProfile tau = [&] {
      if (j.contains("rank"))
        return TiebreakProfile::single(
            parse_rank_object(prob, j.at("rank"), "rank"), prob.num_schools());
      std::vector<std::vector<int>> ranks(prob.num_schools());
      std::vector<char> seen(prob.num_schools(), 0);
      for (const auto& item : j.at("ranks").items()) {
        int s = -1;
        for (SchoolId k = 0; k < prob.num_schools(); ++k)
          if (prob.school_names()[k] == item.key()) s = k;
        if (s < 0)
          throw InputError("ranks: unknown school \"" + item.key() + "\"");
        ranks[s] = parse_rank_object(prob, item.value(), "ranks." + item.key());
        seen[s] = 1;
      }
      for (SchoolId s = 0; s < prob.num_schools(); ++s)
        if (!seen[s])
          throw InputError("ranks: missing school \"" +
                           prob.school_names()[s] + "\"");
      return TiebreakProfile(std::move(ranks));
    }();
    return extend_profile_tiebreak(prob, tau);
  }
  if (file.extension_profile) {
    validate_extension_profile(prob, *file.extension_profile);
    return *file.extension_profile;
  }
  ExtensionProfile p;
  for (SchoolId s = 0; s < prob.num_schools(); ++s)
    p.orders.push_back(smo_extend(prob.priority(s)));
  return p;
}

void emit(const Json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(output);
  if (!out) throw InputError("cannot write file: " + output);
  out << j.dump(2) << "\n";
}

Json class_to_json(const RelationClass& cls) {
  return Json{{"label", to_string(cls.label)},
              {"complete", cls.complete},
              {"transitive", cls.transitive},
              {"negatively_transitive", cls.negatively_transitive},
              {"acyclic", cls.acyclic}};
}

ClassTarget parse_class_token(const std::string& token) {
  if (token == "T") return ClassTarget::kTotal;
  if (token == "W") return ClassTarget::kWeak;
  if (token == "P") return ClassTarget::kPartial;
  if (token == "A") return ClassTarget::kAcyclic;
  if (token == "W\\T") return ClassTarget::kWeakExactly;
  if (token == "P\\W") return ClassTarget::kPartialExactly;
  if (token == "A\\P") return ClassTarget::kAcyclicExactly;
  throw InputError("unknown priority class: " + token +
                   " (expected T, W, P, A, W\\T, P\\W, or A\\P)");
}

Json round_to_json(const Problem& prob, const EadamRound& round) {
  Json settled = Json::array();
  for (SchoolId s : round.settled_schools)
    settled.push_back(prob.school_names()[s]);
  Json removed = Json::array();
  for (StudentId i : round.removed_students)
    removed.push_back(prob.student_names()[i]);
  Json deletions = Json::array();
  for (const auto& [i, s] : round.deletions)
    deletions.push_back(
        Json::array({prob.student_names()[i], prob.school_names()[s]}));
  return Json{{"round", round.round},
              {"settled_schools", std::move(settled)},
              {"removed_students", std::move(removed)},
              {"deletions", std::move(deletions)},
              {"matching", matching_to_json(prob, round.matching)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"school-choice matching under partially ordered priorities"};
  app.require_subcommand(1);

  // classify
  auto* c_classify = app.add_subcommand(
      "classify", "report each school's priority relation class");
  InputArgs classify_in;
  add_input_options(c_classify, classify_in);
  bool classify_json = false;
  c_classify->add_flag("--json", classify_json, "emit JSON instead of text");

  // extend
  auto* c_extend =
      app.add_subcommand("extend", "produce linear extension profiles");
  InputArgs extend_in;
  ProfileArgs extend_profile;
  add_input_options(c_extend, extend_in);
  add_profile_options(c_extend, extend_profile);
  bool extend_enumerate = false;
  int extend_max_students = 8;
  std::uint64_t extend_max_profiles = 20000;
  std::string extend_output;
  c_extend->add_flag("--enumerate", extend_enumerate,
                     "stream every extension profile as JSON lines");
  c_extend->add_option("--max-students", extend_max_students,
                       "guard for --enumerate (default 8)");
  c_extend->add_option("--max-profiles", extend_max_profiles,
                       "guard for --enumerate (default 20000)");
  c_extend->add_option("--output", extend_output, "write to file instead of stdout");

  // da / eadam
  auto* c_da = app.add_subcommand("da", "student-proposing deferred acceptance");
  InputArgs da_in;
  ProfileArgs da_profile;
  std::string da_output;
  add_input_options(c_da, da_in);
  add_profile_options(c_da, da_profile);
  c_da->add_option("--output", da_output, "write matching to file");

  auto* c_eadam = app.add_subcommand(
      "eadam", "deferred acceptance plus iterated settling of underdemanded schools");
  InputArgs eadam_in;
  ProfileArgs eadam_profile;
  std::string eadam_output;
  bool eadam_show_trace = false;
  bool eadam_refilter = false;
  add_input_options(c_eadam, eadam_in);
  add_profile_options(c_eadam, eadam_profile);
  c_eadam->add_option("--output", eadam_output, "write matching to file");
  c_eadam->add_flag("--trace", eadam_show_trace, "emit round log as JSON lines");
  c_eadam->add_flag("--refilter-removals", eadam_refilter,
                    "re-scan for newly underdemanded schools within each round");

  // check
  auto* c_check = app.add_subcommand("check", "evaluate a claim over instances");
  std::string check_claim, check_fixture, check_instances, check_class = "P";
  bool check_random = false, check_refilter = false;
  int check_count = 20, check_students = 4, check_schools = 3;
  int check_min_cap = 1, check_max_cap = 2;
  double check_density = 0.5;
  std::uint64_t check_seed = 0, check_max_profiles = 20000;
  int check_max_students = 7;
  c_check->add_option("--claim", check_claim,
                      "one of lemma1, cor1, cor2, cor4, cor5, cor6, thm1")
      ->required()
      ->check(CLI::IsMember(
          {"lemma1", "cor1", "cor2", "cor4", "cor5", "cor6", "thm1"}));
  c_check->add_option("--fixture", check_fixture, "check a built-in instance");
  c_check->add_option("--instances", check_instances,
                      "instance file (JSON or JSON lines), or the word random");
  c_check->add_flag("--random", check_random, "check randomly generated instances");
  c_check->add_option("--count", check_count, "number of random instances");
  c_check->add_option("--seed", check_seed, "base seed for random instances");
  c_check->add_option("--students", check_students, "random instance students");
  c_check->add_option("--schools", check_schools, "random instance schools");
  c_check->add_option("--class", check_class,
                      "random priority class (default P)");
  c_check->add_option("--density", check_density, "random priority density");
  c_check->add_option("--min-capacity", check_min_cap, "random capacity lower bound");
  c_check->add_option("--max-capacity", check_max_cap, "random capacity upper bound");
  c_check->add_option("--max-students", check_max_students,
                      "matching/profile enumeration guard (default 7)");
  c_check->add_option("--max-profiles", check_max_profiles,
                      "extension profile enumeration guard (default 20000)");
  c_check->add_flag("--refilter-removals", check_refilter,
                    "settling variant used by cor5/cor6");

  // pstable
  auto* c_pstable = app.add_subcommand(
      "pstable", "evaluate partial stability of a matching");
  InputArgs pstable_in;
  std::string pstable_matching;
  add_input_options(c_pstable, pstable_in);
  c_pstable->add_option("--matching", pstable_matching, "matching JSON file")
      ->required();

  // reduce
  auto* c_reduce = app.add_subcommand(
      "reduce", "replace priorities with the effective (violation-reduced) ones");
  InputArgs reduce_in;
  std::string reduce_output;
  add_input_options(c_reduce, reduce_in);
  c_reduce->add_option("--output", reduce_output, "write to file instead of stdout");

  // realize
  auto* c_realize = app.add_subcommand(
      "realize", "rewrite an acyclic relation as a total order plus violations");
  std::string realize_input, realize_output;
  c_realize->add_option("--input", realize_input, "relation JSON file")->required();
  c_realize->add_option("--output", realize_output, "write to file instead of stdout");

  // gen
  auto* c_gen = app.add_subcommand("gen", "generate a random instance");
  RandomSpec gen_spec;
  std::string gen_class = "P", gen_output;
  c_gen->add_option("--students", gen_spec.num_students, "student count");
  c_gen->add_option("--schools", gen_spec.num_schools, "school count");
  c_gen->add_option("--min-capacity", gen_spec.min_capacity, "capacity lower bound");
  c_gen->add_option("--max-capacity", gen_spec.max_capacity, "capacity upper bound");
  c_gen->add_option("--class", gen_class, "priority class (default P)");
  c_gen->add_option("--density", gen_spec.density, "priority density in [0,1]");
  c_gen->add_option("--seed", gen_spec.seed, "seed");
  c_gen->add_option("--output", gen_output, "write to file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_classify) {
      InstanceFile file = resolve_instance(classify_in);
      const Problem& prob = file.problem;
      if (classify_json) {
        Json out = Json::object();
        for (SchoolId s = 0; s < prob.num_schools(); ++s)
          out[prob.school_names()[s]] = class_to_json(classify(prob.priority(s)));
        emit(Json{{"schools", out}}, "");
      } else {
        for (SchoolId s = 0; s < prob.num_schools(); ++s) {
          const RelationClass cls = classify(prob.priority(s));
          std::cout << prob.school_names()[s] << ": " << to_string(cls.label)
                    << " (complete=" << (cls.complete ? "yes" : "no")
                    << " transitive=" << (cls.transitive ? "yes" : "no")
                    << " negatively_transitive="
                    << (cls.negatively_transitive ? "yes" : "no")
                    << " acyclic=" << (cls.acyclic ? "yes" : "no") << ")\n";
        }
      }
      return 0;
    }

    if (*c_extend) {
      InstanceFile file = resolve_instance(extend_in);
      if (extend_enumerate) {
        require_extendable(file.problem);
        ProfileGuard guard{extend_max_students, extend_max_profiles};
        for (const ExtensionProfile& p :
             enumerate_extension_profiles(file.problem, guard))
          std::cout << profile_to_json(file.problem, p).dump() << "\n";
        return 0;
      }
      emit(profile_to_json(file.problem, resolve_profile(file, extend_profile)),
           extend_output);
      return 0;
    }

    if (*c_da) {
      InstanceFile file = resolve_instance(da_in);
      ExtensionProfile profile = resolve_profile(file, da_profile);
      emit(matching_to_json(file.problem,
                            deferred_acceptance(file.problem, profile)),
           da_output);
      return 0;
    }

    if (*c_eadam) {
      InstanceFile file = resolve_instance(eadam_in);
      ExtensionProfile profile = resolve_profile(file, eadam_profile);
      EadamResult result =
          eadam_trace(file.problem, profile, EadamOptions{eadam_refilter});
      if (eadam_show_trace) {
        std::cout << Json{{"round", 0},
                          {"matching", matching_to_json(file.problem, result.start)}}
                         .dump()
                  << "\n";
        for (const EadamRound& round : result.rounds)
          std::cout << round_to_json(file.problem, round).dump() << "\n";
      }
      if (!eadam_output.empty() || !eadam_show_trace)
        emit(matching_to_json(file.problem, result.matching), eadam_output);
      return 0;
    }

    if (*c_check) {
      CheckGuards guards;
      guards.matchings.max_students = check_max_students;
      guards.profiles.max_students = check_max_students > 8 ? check_max_students : 8;
      guards.profiles.max_profiles = check_max_profiles;
      EadamOptions options{check_refilter};

      std::vector<Problem> instances;
      if (!check_fixture.empty()) {
        std::optional<Problem> prob = fixture_by_name(check_fixture);
        if (!prob) throw InputError("unknown fixture: " + check_fixture);
        instances.push_back(*prob);
      } else if (!check_instances.empty() && check_instances != "random") {
        std::ifstream in(check_instances);
        if (!in) throw InputError("cannot open file: " + check_instances);
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        try {
          instances.push_back(parse_instance(parse_json_text(text, check_instances))
                                  .problem);
        } catch (const InputError&) {
          std::istringstream lines(text);
          std::string line;
          std::size_t lineno = 0;
          while (std::getline(lines, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            instances.push_back(
                parse_instance(parse_json_text(
                                   line, check_instances + ":" +
                                             std::to_string(lineno)))
                    .problem);
          }
        }
      } else if (check_random || check_instances == "random") {
        RandomSpec spec;
        spec.num_students = check_students;
        spec.num_schools = check_schools;
        spec.min_capacity = check_min_cap;
        spec.max_capacity = check_max_cap;
        spec.target = parse_class_token(check_class);
        spec.density = check_density;
        for (int k = 0; k < check_count; ++k) {
          spec.seed = check_seed + static_cast<std::uint64_t>(k);
          instances.push_back(random_problem(spec));
        }
      } else {
        throw InputError("need --fixture, --instances, or --random");
      }

      int counterexamples = 0, holds = 0, skipped = 0;
      for (const Problem& prob : instances) {
        CheckReport report = run_claim(check_claim, prob, guards, options);
        std::cout << report.to_json().dump() << "\n";
        if (report.verdict == Verdict::kCounterexample) ++counterexamples;
        if (report.verdict == Verdict::kHolds) ++holds;
        if (report.verdict == Verdict::kSkipped) ++skipped;
      }
      std::cerr << check_claim << ": " << holds << " hold, " << counterexamples
                << " counterexamples, " << skipped << " skipped\n";
      return counterexamples > 0 ? 1 : 0;
    }

    if (*c_pstable) {
      InstanceFile file = resolve_instance(pstable_in);
      const Problem& prob = file.problem;
      ViolationSet c =
          file.violations ? *file.violations : ViolationSet::empty(prob.num_schools());
      Matching mu = parse_matching(prob, load_json_file(pstable_matching));
      PartialStabilityReport report = partial_stability_report(prob, c, mu);
      Json uncovered = Json::array();
      for (const auto& w : report.uncovered)
        uncovered.push_back(Json{{"student", prob.student_names()[w.student]},
                                 {"incumbent", prob.student_names()[w.incumbent]},
                                 {"school", prob.school_names()[w.school]}});
      Json wasted = Json::array();
      for (const auto& w : report.wasteful)
        wasted.push_back(Json{{"student", prob.student_names()[w.student]},
                              {"school", prob.school_names()[w.school]}});
      Json unaccept = Json::array();
      for (StudentId i : report.unacceptable)
        unaccept.push_back(prob.student_names()[i]);
      emit(Json{{"partially_stable", report.partially_stable()},
                {"individually_rational", report.individually_rational},
                {"unacceptable", std::move(unaccept)},
                {"wasteful", std::move(wasted)},
                {"uncovered_violations", std::move(uncovered)}},
           "");
      return report.partially_stable() ? 0 : 1;
    }

    if (*c_reduce) {
      InstanceFile file = resolve_instance(reduce_in);
      ViolationSet c = file.violations
                           ? *file.violations
                           : ViolationSet::empty(file.problem.num_schools());
      InstanceFile out{with_priorities(file.problem,
                                       effective_priorities(file.problem, c)),
                       std::nullopt, file.extension_profile};
      emit(instance_to_json(out), reduce_output);
      return 0;
    }

    if (*c_realize) {
      RelationFile file = parse_relation(load_json_file(realize_input));
      ViolationRealization real = realize_as_violation_model(file.relation);
      Json order = Json::array();
      for (StudentId i : real.order.order())
        order.push_back(file.student_names[i]);
      Json allowed = Json::array();
      for (const auto& [a, b] : real.allowed)
        allowed.push_back(
            Json::array({file.student_names[a], file.student_names[b]}));
      emit(Json{{"order", std::move(order)}, {"violations", std::move(allowed)}},
           realize_output);
      return 0;
    }

    if (*c_gen) {
      gen_spec.target = parse_class_token(gen_class);
      emit(problem_to_json(random_problem(gen_spec)), gen_output);
      return 0;
    }
  } catch (const GuardError& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal invariant failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
