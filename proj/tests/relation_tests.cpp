#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "priomatch/priomatch.hpp"

using namespace priomatch;

TEST_CASE("classification labels on the embedded fixtures") {
  const Problem ex1 = example1();
  const RelationClass s = classify(ex1.priority(0));
  CHECK(s.label == RelationLabel::kAcyclic);
  CHECK(s.acyclic);
  CHECK_FALSE(s.transitive);
  CHECK_FALSE(s.complete);
  const RelationClass sp = classify(ex1.priority(1));
  CHECK(sp.label == RelationLabel::kTotal);
  CHECK(sp.complete);
  CHECK(sp.transitive);
  CHECK(sp.negatively_transitive);

  const Problem ex2 = example2();
  CHECK(classify(ex2.priority(0)).label == RelationLabel::kWeak);
  CHECK(classify(ex2.priority(1)).label == RelationLabel::kWeak);
  const RelationClass s3 = classify(ex2.priority(2));
  CHECK(s3.label == RelationLabel::kPartial);
  CHECK(s3.transitive);
  CHECK_FALSE(s3.negatively_transitive);
  CHECK_FALSE(s3.complete);
}

TEST_CASE("empty and degenerate relations") {
  CHECK(classify(PriorityRelation(1)).label == RelationLabel::kTotal);
  CHECK(classify(PriorityRelation(0)).label == RelationLabel::kTotal);
  CHECK(classify(PriorityRelation(2)).label == RelationLabel::kWeak);
  CHECK(classify(PriorityRelation(5)).label == RelationLabel::kWeak);
}

TEST_CASE("a chain missing its shortcut is acyclic but not transitive") {
  const PriorityRelation rel(3, {{0, 1}, {1, 2}});
  const RelationClass cls = classify(rel);
  CHECK(cls.acyclic);
  CHECK_FALSE(cls.transitive);
  CHECK(cls.label == RelationLabel::kAcyclic);
}

TEST_CASE("cycles are labelled cyclic and refuse extension") {
  const PriorityRelation cycle(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(classify(cycle).label == RelationLabel::kCyclic);
  CHECK_FALSE(classify(cycle).acyclic);
  CHECK_THROWS_AS(smo_extend(cycle), CyclicRelationError);
  CHECK(enumerate_extensions(cycle).empty());
  CHECK(count_extensions(cycle) == 0);
}

TEST_CASE("relation constructor rejects malformed pairs") {
  CHECK_THROWS_AS(PriorityRelation(2, {{0, 0}}), InputError);
  CHECK_THROWS_AS(PriorityRelation(2, {{0, 1}, {1, 0}}), InputError);
  CHECK_THROWS_AS(PriorityRelation(2, {{0, 2}}), InputError);
  CHECK_THROWS_AS(PriorityRelation(2, {{-1, 0}}), InputError);
  // Duplicate mention of the same pair collapses.
  CHECK(PriorityRelation(2, {{0, 1}, {0, 1}}).pairs().size() == 1);
}

TEST_CASE("classify agrees with from-scratch closure computation") {
  detail::Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(detail::uniform_below(rng, 5));
    const PriorityRelation rel =
        oracles::random_asymmetric(n, detail::uniform_unit(rng), rng);
    const RelationClass cls = classify(rel);
    const oracles::ClosureFacts facts = oracles::closure_facts(rel);
    REQUIRE(cls.transitive == facts.transitive);
    REQUIRE(cls.acyclic == facts.acyclic);
  }
}

TEST_CASE("class derivations hold over every asymmetric relation on 4 students") {
  for (const PriorityRelation& rel : oracles::all_asymmetric_relations(4)) {
    const RelationClass cls = classify(rel);
    if (cls.complete && cls.acyclic) CHECK(cls.transitive);
    if (cls.complete && cls.transitive) CHECK(cls.negatively_transitive);
    if (cls.transitive) CHECK(cls.acyclic);
    // The label chain: total => weak => partial => acyclic.
    if (cls.label == RelationLabel::kTotal)
      CHECK((cls.complete && cls.transitive && cls.negatively_transitive));
    if (cls.label != RelationLabel::kCyclic) CHECK(cls.acyclic);
  }
}

TEST_CASE("maximal set picks exactly the undominated students") {
  const Problem ex1 = example1();
  CHECK(maximal_set(ex1.priority(0), {0, 1, 2}) == std::vector<StudentId>{1});
  const PriorityRelation s3(4, {{3, 0}});
  CHECK(maximal_set(s3, {0, 1, 2, 3}) == std::vector<StudentId>{1, 2, 3});
  CHECK(maximal_set(s3, {0}) == std::vector<StudentId>{0});
  CHECK_THROWS_AS(maximal_set(s3, {0, 0}), InputError);
}

TEST_CASE("sequential maximal ordering yields an extension") {
  detail::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(detail::uniform_below(rng, 6));
    const PriorityRelation rel =
        oracles::random_asymmetric(n, detail::uniform_unit(rng), rng);
    if (!classify(rel).acyclic) {
      CHECK_THROWS_AS(smo_extend(rel), CyclicRelationError);
      continue;
    }
    const TotalOrder order = smo_extend(rel);
    CHECK(is_extension(rel, order));
  }
}

TEST_CASE("extension enumeration equals the permutation filter") {
  // Exhaustive on 3 students; the acceptance suite widens this to 4 plus
  // large random relations.
  for (const PriorityRelation& rel : oracles::all_asymmetric_relations(3)) {
    const auto mine = enumerate_extensions(rel);
    const auto ref = oracles::extensions_by_filter(rel);
    REQUIRE(mine == ref);
    REQUIRE(count_extensions(rel) == ref.size());
    REQUIRE(mine.empty() == !classify(rel).acyclic);
  }
}

TEST_CASE("fixture extension counts are exact") {
  const Problem ex1 = example1();
  const auto exts_s = enumerate_extensions(ex1.priority(0));
  REQUIRE(exts_s.size() == 1);
  CHECK(exts_s[0] == TotalOrder({1, 2, 0}));
  const auto exts_sp = enumerate_extensions(ex1.priority(1));
  REQUIRE(exts_sp.size() == 1);
  CHECK(exts_sp[0] == TotalOrder({2, 1, 0}));

  const Problem ex2 = example2();
  CHECK(enumerate_extensions(ex2.priority(0)).size() == 24);
  CHECK(enumerate_extensions(ex2.priority(1)).size() == 24);
  CHECK(enumerate_extensions(ex2.priority(2)).size() == 12);
}

TEST_CASE("extension enumeration guard") {
  CHECK_THROWS_AS(enumerate_extensions(PriorityRelation(9)), GuardError);
  CHECK_NOTHROW(enumerate_extensions(PriorityRelation(9), 9));
}

TEST_CASE("tiebreaking chooser takes the lowest rank in the maximal set") {
  const Problem ex2 = example2();
  // Identity ranks at the school with base pair (i4, i1): i1 leaves the
  // maximal set until i4 is placed, so the order is i2 i3 i4 i1.
  const TotalOrder order =
      smo_extend_tiebreak(ex2.priority(2), {1, 2, 3, 4});
  CHECK(order == TotalOrder({1, 2, 3, 0}));
  CHECK(is_extension(ex2.priority(2), order));
  // On an empty relation the tiebreak order is the rank order itself.
  CHECK(smo_extend_tiebreak(PriorityRelation(4), {4, 3, 2, 1}) ==
        TotalOrder({3, 2, 1, 0}));
}

TEST_CASE("rank vectors must be bijections onto 1..n") {
  CHECK_THROWS_AS(validate_rank_bijection({0, 1, 2}, 3), InputError);
  CHECK_THROWS_AS(validate_rank_bijection({1, 1, 2}, 3), InputError);
  CHECK_THROWS_AS(validate_rank_bijection({1, 2, 4}, 3), InputError);
  CHECK_THROWS_AS(validate_rank_bijection({1, 2}, 3), InputError);
  CHECK_NOTHROW(validate_rank_bijection({3, 1, 2}, 3));
}

TEST_CASE("random chooser is deterministic under a fixed seed") {
  const PriorityRelation rel(6, {{0, 3}, {2, 5}});
  const TotalOrder a = smo_extend(rel, random_chooser(99));
  const TotalOrder b = smo_extend(rel, random_chooser(99));
  CHECK(a == b);
  CHECK(is_extension(rel, a));
}

TEST_CASE("relation union and difference") {
  const PriorityRelation a(3, {{0, 1}});
  const PriorityRelation b(3, {{1, 2}});
  CHECK(relation_union(a, b).pairs() ==
        std::vector<IdPair>{{0, 1}, {1, 2}});
  CHECK_THROWS_AS(relation_union(a, PriorityRelation(3, {{1, 0}})), InputError);
  CHECK_THROWS_AS(relation_union(a, PriorityRelation(4)), InputError);

  const PriorityRelation chain(3, {{0, 1}, {1, 2}});
  CHECK(relation_difference(chain, {{0, 1}}).pairs() ==
        std::vector<IdPair>{{1, 2}});
  // Pairs outside the relation are inert.
  CHECK(relation_difference(chain, {{2, 0}}).pairs() == chain.pairs());
}

TEST_CASE("total order round-trips through its relation view") {
  const TotalOrder order({2, 0, 1});
  const PriorityRelation rel = order.as_relation();
  CHECK(rel.pairs().size() == 3);
  CHECK(rel.contains(2, 0));
  CHECK(rel.contains(2, 1));
  CHECK(rel.contains(0, 1));
  CHECK(classify(rel).label == RelationLabel::kTotal);
  CHECK(order.position(2) == 0);
  CHECK(order.position(1) == 2);
  CHECK_FALSE(is_extension(PriorityRelation(3, {{1, 2}}), order));
}
