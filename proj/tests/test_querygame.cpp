#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "provgame/querygame.hpp"
#include "support.hpp"

using namespace provgame;

namespace {

const char* kQabc = "A(X) :- B(X,Y), not C(Y).";
const char* kDabc = "B(a,b). B(b,a). C(a).";
const char* kQ3hop = "3Hop(X,Y) :- hop(X,Z1), hop(Z1,Z2), hop(Z2,Y).";
const char* kD3hop = "hop(a,a) @p. hop(a,b) @q. hop(b,a) @r. hop(b,c) @s.";

typed_game build_abc(build_variant v = build_variant::full) {
  return build_game(parse_program(kQabc), parse_database(kDabc), v);
}

std::map<node_kind, int> kind_histogram(const typed_game& tg) {
  std::map<node_kind, int> out;
  for (const auto& [_, n] : tg.nodes) ++out[n.kind];
  return out;
}

}  // namespace

TEST_CASE("node ids serialize canonically") {
  CHECK(game_node::relation({"A", {"a"}}).id() == "rel:A(a)");
  CHECK(game_node::neg_relation({"B", {"a", "b"}}).id() == "neg:B(a,b)");
  CHECK(game_node::rule_instance(1, {"a", "b"}).id() == "rule:r1(a,b)");
  CHECK(game_node::goal(1, 2, {"C", {"b"}}).id() == "goal:g1_2(b)");
  CHECK(game_node::goal(1, 0, {"C", {"b"}}).id() == "goal:g1(b)");
  CHECK(game_node::fact_rule({"B", {"a", "b"}}).id() == "fact:r_B(a,b)");
}

TEST_CASE("the abc game has the expected 29 nodes") {
  auto tg = build_abc();
  CHECK(tg.graph.position_count() == 29);

  auto kinds = kind_histogram(tg);
  // Relation and negated relation nodes per predicate over adom {a,b}:
  // A/1 twice, B/2 four times, C/1 twice = 8 of each polarity.
  CHECK(kinds[node_kind::relation] == 8);
  CHECK(kinds[node_kind::neg_relation] == 8);
  CHECK(kinds[node_kind::rule_instance] == 4);   // r1 over (X,Y)
  CHECK(kinds[node_kind::goal] == 6);            // 4 of g1_1 + 2 of g1_2
  CHECK(kinds[node_kind::fact_rule] == 3);       // |D|

  int g11 = 0, g12 = 0;
  for (const auto& [id, n] : tg.nodes) {
    if (n.kind != node_kind::goal) continue;
    (n.goal_position == 1 ? g11 : g12)++;
  }
  CHECK(g11 == 4);
  CHECK(g12 == 2);
}

TEST_CASE("three-hop rule nodes bind variables in name order") {
  auto tg = build_game(parse_program(kQ3hop), parse_database(kD3hop),
                       build_variant::full);
  // Binding is (X, Y, Z1, Z2).
  CHECK(tg.has_node("rule:r1(a,a,b,a)"));
  const auto& n = tg.node("rule:r1(a,a,b,a)");
  CHECK(n.rule_index == 1);
  CHECK(n.args == std::vector<std::string>{"a", "a", "b", "a"});
  // That instance's goals carry their own arguments.
  CHECK(tg.graph.has_move("rule:r1(a,a,b,a)", "goal:g1_1(a,b)"));
  CHECK(tg.graph.has_move("rule:r1(a,a,b,a)", "goal:g1_2(b,a)"));
  CHECK(tg.graph.has_move("rule:r1(a,a,b,a)", "goal:g1_3(a,a)"));
}

TEST_CASE("the empty program and database build the empty game") {
  auto tg = build_game(program(), database(), build_variant::full);
  CHECK(tg.graph.empty());
}

TEST_CASE("edges follow the six schema-level move types") {
  auto tg = build_abc();
  std::map<std::string, int> in_degree, out_degree;
  for (const auto& [src, dst] : tg.graph.moves()) {
    ++out_degree[src];
    ++in_degree[dst];
    node_kind a = tg.node(src).kind;
    node_kind b = tg.node(dst).kind;
    bool ok =
        (a == node_kind::neg_relation && b == node_kind::relation) ||
        (a == node_kind::relation && (b == node_kind::rule_instance ||
                                      b == node_kind::fact_rule)) ||
        (a == node_kind::rule_instance && b == node_kind::goal) ||
        (a == node_kind::goal && (b == node_kind::relation ||
                                  b == node_kind::neg_relation));
    CHECK(ok);
  }
  for (const auto& [id, n] : tg.nodes) {
    if (n.kind == node_kind::fact_rule) {
      CHECK(in_degree[id] == 1);
      CHECK(out_degree[id] == 0);
    }
    if (n.kind == node_kind::relation)
      CHECK(tg.graph.has_move("neg:" + id.substr(4), id));
  }
}

TEST_CASE("the abc game solves to the expected truth values") {
  auto sq = solve_query_game(parse_program(kQabc), parse_database(kDabc),
                             build_variant::full);
  CHECK(sq.solution.value_of("rel:A(a)") == node_value::won);
  CHECK(sq.solution.value_of("rel:A(b)") == node_value::lost);
  CHECK(sq.solution.value_of("rel:B(a,b)") == node_value::won);
  CHECK(sq.solution.value_of("rel:B(b,b)") == node_value::lost);
  CHECK(sq.solution.value_of("rel:C(a)") == node_value::won);
  CHECK(sq.solution.value_of("rel:C(b)") == node_value::lost);
  for (const auto& [_, v] : sq.solution.gamma)
    CHECK(v != node_value::drawn);
}

TEST_CASE("a lost three-hop claim") {
  auto sq = solve_query_game(parse_program(kQ3hop), parse_database(kD3hop),
                             build_variant::full);
  CHECK(sq.solution.value_of("rel:3Hop(c,a)") == node_value::lost);
  CHECK(sq.solution.value_of("rel:3Hop(a,a)") == node_value::won);
}

TEST_CASE("query games are acyclic and draw-free") {
  std::mt19937 rng(2718);
  for (int i = 0; i < 50; ++i) {
    auto instance = provgame::testing::random_program(rng, true);
    auto sq = solve_query_game(instance.prog, instance.db,
                               build_variant::full);
    for (const auto& [_, v] : sq.solution.gamma)
      CHECK(v != node_value::drawn);

    // Kahn-style peeling proves acyclicity.
    std::map<std::string, int> in_degree;
    for (const auto& [src, dst] : sq.game.graph.moves()) ++in_degree[dst];
    std::vector<std::string> queue;
    for (const auto& p : sq.game.graph.positions())
      if (in_degree[p] == 0) queue.push_back(p);
    std::size_t peeled = 0;
    while (!queue.empty()) {
      std::string p = queue.back();
      queue.pop_back();
      ++peeled;
      for (const auto& y : sq.game.graph.followers(p))
        if (--in_degree[y] == 0) queue.push_back(y);
    }
    CHECK(peeled == sq.game.graph.position_count());
  }
}

TEST_CASE("relation node values track stratified evaluation") {
  std::mt19937 rng(1618);
  int instances = 0;
  while (instances < 100) {
    auto instance = provgame::testing::random_program(rng, true);
    ++instances;
    auto truths = evaluate_stratified(instance.prog, instance.db);
    auto sq = solve_query_game(instance.prog, instance.db,
                               build_variant::full);
    for (const auto& [id, n] : sq.game.nodes) {
      if (n.kind != node_kind::relation) continue;
      if (!instance.prog.is_idb(n.pred)) continue;
      bool derived = truths.count(n.atom()) != 0;
      bool won = sq.solution.value_of(id) == node_value::won;
      CHECK(derived == won);
    }
  }
}

TEST_CASE("the trio variant is the goal-position quotient of the full one") {
  std::mt19937 rng(6174);
  for (int i = 0; i < 30; ++i) {
    auto instance = provgame::testing::random_program(rng, true);
    auto full = build_game(instance.prog, instance.db, build_variant::full);
    auto trio = build_game(instance.prog, instance.db, build_variant::trio);

    auto collapse = [&full](const std::string& id) {
      const game_node& n = full.node(id);
      if (n.kind != node_kind::goal) return id;
      return game_node::goal(n.rule_index, 0, n.atom()).id();
    };

    std::set<std::string> quotient_nodes;
    for (const auto& p : full.graph.positions())
      quotient_nodes.insert(collapse(p));
    std::set<std::pair<std::string, std::string>> quotient_edges;
    for (const auto& [src, dst] : full.graph.moves())
      quotient_edges.emplace(collapse(src), collapse(dst));

    std::set<std::string> trio_nodes;
    for (const auto& p : trio.graph.positions()) trio_nodes.insert(p);
    std::set<std::pair<std::string, std::string>> trio_edges;
    for (const auto& [src, dst] : trio.graph.moves())
      trio_edges.emplace(src, dst);

    CHECK(quotient_nodes == trio_nodes);
    CHECK(quotient_edges == trio_edges);
  }
}

TEST_CASE("claims for the six move types") {
  auto tg = build_abc();
  CHECK(move_claim(tg, "rel:A(a)", "rule:r1(a,b)") ==
        "A(a) is true: it's the head of this instance of r1.");
  CHECK(move_claim(tg, "rule:r1(a,b)", "goal:g1_1(a,b)") ==
        "Positive goal g1_1 (=B(a,b)) in your rule body fails!");
  CHECK(move_claim(tg, "goal:g1_1(a,b)", "neg:B(a,b)") ==
        "No! Its negation ¬B(a,b) fails and B(a,b) is true.");
  CHECK(move_claim(tg, "neg:B(a,b)", "rel:B(a,b)") ==
        "No: atom B(a,b) fails!");
  CHECK(move_claim(tg, "rule:r1(a,b)", "goal:g1_2(b)") ==
        "Negative goal ¬C(b) in the rule body fails.");
  CHECK(move_claim(tg, "goal:g1_2(b)", "rel:C(b)") ==
        "No: ¬C(b) succeeds, but C(b) fails.");
  CHECK(move_claim(tg, "rel:B(a,b)", "fact:r_B(a,b)") ==
        "B(a,b) is true: it's the head of this instance of r_B.");
  CHECK_THROWS_AS(move_claim(tg, "rel:A(a)", "rel:A(b)"), position_error);
}

TEST_CASE("building rejects bad program/database combinations") {
  CHECK_THROWS_AS(build_game(parse_program("A(X) :- B(X,X)."),
                             parse_database("A(a)."), build_variant::full),
                  validation_error);
  CHECK_THROWS_AS(build_game(parse_program("A(X) :- B(X,Y)."),
                             parse_database("B(a)."), build_variant::full),
                  validation_error);
}

TEST_CASE("rule constants reach the active domain and the game") {
  auto tg = build_game(parse_program("P(c) :- E(c,c)."), database(),
                       build_variant::full);
  CHECK(tg.has_node("rel:P(c)"));
  CHECK(tg.has_node("rel:E(c,c)"));
  CHECK(tg.has_node("rule:r1()"));
}

TEST_CASE("a bodyless rule is a lost sink that wins its head") {
  auto sq = solve_query_game(parse_program("P(a)."), database(),
                             build_variant::full);
  CHECK(sq.solution.value_of("rule:r1()") == node_value::lost);
  CHECK(sq.solution.length_of("rule:r1()") == game_length::of(0));
  CHECK(sq.solution.value_of("rel:P(a)") == node_value::won);
}
