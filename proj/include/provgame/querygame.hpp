#pragma once

/// Query evaluation games: the reduction from a non-recursive program
/// plus database to a win-move game whose relation nodes are won
/// exactly for the true atoms.
///
/// Node identifiers are structured terms rendered canonically as
///
///   rel:P(c1,...,cn)      claim "P(c1,...,cn) holds"
///   neg:P(c1,...,cn)      claim "P(c1,...,cn) fails"
///   rule:r<i>(c1,...,ck)  rule i instantiated; constants bind the
///                         rule's variables in name order
///   goal:g<i>_<j>(...)    goal j of rule i with the goal's own argument
///                         constants ("goal:g<i>(...)" in the trio
///                         variant, which drops the position)
///   fact:r_P(c1,...,cn)   the bodyless rule standing for a stored fact
///
/// Moves come in five families over the active domain: neg->rel for
/// every tuple of every predicate, rel->rule for every instance of a
/// rule under its head, rule->goal for every body position, goal->neg
/// for positive goals but goal->rel for negative ones (the role swap),
/// and rel->fact for every stored fact. Fact nodes are sinks: reaching
/// a relation node wins iff the fact is stored.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "provgame/datalog.hpp"
#include "provgame/errors.hpp"
#include "provgame/game.hpp"

namespace provgame {

enum class node_kind : std::uint8_t {
  relation,
  neg_relation,
  rule_instance,
  goal,
  fact_rule
};

inline std::string to_string(node_kind k) {
  switch (k) {
    case node_kind::relation:
      return "relation";
    case node_kind::neg_relation:
      return "neg_relation";
    case node_kind::rule_instance:
      return "rule";
    case node_kind::goal:
      return "goal";
    case node_kind::fact_rule:
      return "fact_rule";
  }
  throw internal_error("invalid node_kind");
}

enum class build_variant : std::uint8_t { full, trio };

/// A structured game position. Relation-ish nodes carry a predicate and
/// tuple; rule nodes carry the rule index and variable binding; goal
/// nodes carry rule index, body position (0 once collapsed by the trio
/// variant) and the goal's own arguments.
struct game_node {
  node_kind kind;
  std::string pred;
  int rule_index = 0;
  int goal_position = 0;
  std::vector<std::string> args;

  static game_node relation(const gatom& a) {
    return {node_kind::relation, a.pred, 0, 0, a.args};
  }
  static game_node neg_relation(const gatom& a) {
    return {node_kind::neg_relation, a.pred, 0, 0, a.args};
  }
  static game_node rule_instance(int index,
                                 const std::vector<std::string>& binding) {
    return {node_kind::rule_instance, "", index, 0, binding};
  }
  static game_node goal(int rule_index, int position, const gatom& a) {
    return {node_kind::goal, a.pred, rule_index, position, a.args};
  }
  static game_node fact_rule(const gatom& a) {
    return {node_kind::fact_rule, a.pred, 0, 0, a.args};
  }

  gatom atom() const {
    if (kind == node_kind::rule_instance)
      throw internal_error("rule nodes carry no atom");
    return gatom{pred, args};
  }

  std::string tuple_text() const {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i];
    }
    return out + ")";
  }

  /// Canonical serialization; injective over all node kinds.
  std::string id() const {
    switch (kind) {
      case node_kind::relation:
        return "rel:" + pred + tuple_text();
      case node_kind::neg_relation:
        return "neg:" + pred + tuple_text();
      case node_kind::rule_instance:
        return "rule:r" + std::to_string(rule_index) + tuple_text();
      case node_kind::goal:
        if (goal_position == 0)
          return "goal:g" + std::to_string(rule_index) + tuple_text();
        return "goal:g" + std::to_string(rule_index) + "_" +
               std::to_string(goal_position) + tuple_text();
      case node_kind::fact_rule:
        return "fact:r_" + pred + tuple_text();
    }
    throw internal_error("invalid node_kind");
  }
};

/// The built game over canonical node ids, keeping the structured nodes
/// and the inputs around for claims, reports, and rendering.
struct typed_game {
  game_graph graph;
  std::map<std::string, game_node> nodes;
  build_variant variant = build_variant::full;
  program prog;
  database db;

  const game_node& node(const std::string& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw position_error("unknown node: " + id);
    return it->second;
  }

  bool has_node(const std::string& id) const { return nodes.count(id) != 0; }
};

namespace detail {

inline void enumerate_tuples(const std::vector<std::string>& adom, int arity,
                             std::vector<std::string>& current,
                             const std::function<void(
                                 const std::vector<std::string>&)>& emit) {
  if ((int)current.size() == arity) {
    emit(current);
    return;
  }
  for (const auto& c : adom) {
    current.push_back(c);
    enumerate_tuples(adom, arity, current, emit);
    current.pop_back();
  }
}

}  // namespace detail

/// Builds the game over the active domain of program and database plus
/// any extra constants (a queried atom can mention constants the inputs
/// do not; its claims still need positions to live on).
inline typed_game build_game(const program& p, const database& d,
                             build_variant v,
                             const std::vector<std::string>& extra_constants) {
  check_compatible(p, d);
  typed_game out;
  out.variant = v;
  out.prog = p;
  out.db = d;

  auto intern = [&out](const game_node& n) {
    std::string id = n.id();
    out.nodes.emplace(id, n);
    out.graph.add_position(id);
    return id;
  };
  auto edge = [&out, &intern](const game_node& src, const game_node& dst) {
    out.graph.add_move(intern(src), intern(dst));
  };

  std::set<std::string> domain;
  for (const auto& c : active_domain(p, d)) domain.insert(c);
  domain.insert(extra_constants.begin(), extra_constants.end());
  std::vector<std::string> adom(domain.begin(), domain.end());

  // Every predicate of program or database, with its arity.
  std::map<std::string, int> preds;
  for (const auto& pr : p.predicates()) preds.emplace(pr, p.arity(pr));
  for (const auto& f : d.facts()) preds.emplace(f.pred, (int)f.args.size());

  // Family 1: neg:R(t) -> rel:R(t) over the full domain product.
  for (const auto& [pred, arity] : preds) {
    std::vector<std::string> tuple;
    detail::enumerate_tuples(
        adom, arity, tuple, [&](const std::vector<std::string>& t) {
          gatom a{pred, t};
          edge(game_node::neg_relation(a), game_node::relation(a));
        });
  }

  // Families 2-4: rule instances, their goals, and the goal's relation
  // node (negated for positive goals, plain for negative ones).
  for (const auto& g : ground(p, adom)) {
    game_node rule_node = game_node::rule_instance(g.rule_index, g.binding);
    edge(game_node::relation(g.head), rule_node);
    for (const auto& goal : g.goals) {
      int position = v == build_variant::trio ? 0 : goal.position;
      game_node goal_node =
          game_node::goal(g.rule_index, position, goal.a);
      edge(rule_node, goal_node);
      if (goal.positive)
        edge(goal_node, game_node::neg_relation(goal.a));
      else
        edge(goal_node, game_node::relation(goal.a));
    }
  }

  // Family 5: stored facts become sink rule nodes under their relation.
  for (const auto& f : d.facts())
    edge(game_node::relation(f), game_node::fact_rule(f));

  return out;
}

inline typed_game build_game(const program& p, const database& d,
                             build_variant v) {
  return build_game(p, d, v, {});
}

struct solved_query_game {
  typed_game game;
  solved_game solution;
};

/// Builds and solves; the game of a non-recursive program is acyclic,
/// so a drawn position can only mean a bug.
inline solved_query_game solve_query_game(
    const program& p, const database& d, build_variant v,
    const std::vector<std::string>& extra_constants) {
  solved_query_game out;
  out.game = build_game(p, d, v, extra_constants);
  out.solution = solve(out.game.graph);
  for (const auto& [pos, val] : out.solution.gamma)
    if (val == node_value::drawn)
      throw internal_error("drawn position " + pos +
                           " in a query evaluation game");
  return out;
}

inline solved_query_game solve_query_game(const program& p, const database& d,
                                          build_variant v) {
  return solve_query_game(p, d, v, {});
}

/// The game for answering questions about one atom: its constants join
/// the domain so the claim has a position even when the inputs never
/// mention them.
inline solved_query_game solve_query_game_for(const program& p,
                                              const database& d,
                                              build_variant v,
                                              const gatom& target) {
  return solve_query_game(p, d, v, target.args);
}

/// The claim a player makes by taking a move, per the schema-level move
/// type of its endpoints.
inline std::string move_claim(const typed_game& tg, const std::string& src,
                              const std::string& dst) {
  if (!tg.graph.has_move(src, dst))
    throw position_error("no move " + src + " -> " + dst);
  const game_node& a = tg.node(src);
  const game_node& b = tg.node(dst);

  auto rule_name = [](const game_node& n) {
    return n.kind == node_kind::fact_rule ? "r_" + n.pred
                                          : "r" + std::to_string(n.rule_index);
  };
  auto goal_name = [](const game_node& n) {
    std::string out = "g" + std::to_string(n.rule_index);
    if (n.goal_position != 0) out += "_" + std::to_string(n.goal_position);
    return out;
  };

  switch (a.kind) {
    case node_kind::relation:
      return a.atom().to_string() +
             " is true: it's the head of this instance of " + rule_name(b) +
             ".";
    case node_kind::rule_instance: {
      std::string atom_text = b.atom().to_string();
      if (tg.node(dst).kind != node_kind::goal)
        throw internal_error("rule node moving to a non-goal");
      // A goal is positive iff the play continues through the negated
      // relation node.
      bool positive = false;
      for (const auto& y : tg.graph.followers(dst))
        positive = tg.node(y).kind == node_kind::neg_relation;
      if (positive)
        return "Positive goal " + goal_name(b) + " (=" + atom_text +
               ") in your rule body fails!";
      return "Negative goal ¬" + atom_text + " in the rule body fails.";
    }
    case node_kind::goal: {
      std::string atom_text = b.atom().to_string();
      if (b.kind == node_kind::neg_relation)
        return "No! Its negation ¬" + atom_text + " fails and " +
               atom_text + " is true.";
      return "No: ¬" + atom_text + " succeeds, but " + atom_text +
             " fails.";
    }
    case node_kind::neg_relation:
      return "No: atom " + b.atom().to_string() + " fails!";
    case node_kind::fact_rule:
      throw internal_error("fact rule nodes are sinks");
  }
  throw internal_error("invalid node_kind");
}

inline std::string relation_id(const gatom& a) {
  return game_node::relation(a).id();
}

inline std::string neg_relation_id(const gatom& a) {
  return game_node::neg_relation(a).id();
}

}  // namespace provgame
