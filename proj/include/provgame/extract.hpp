#pragma once

/// Reading provenance out of a solved query game.
///
/// For positive programs the provenance subgraph of a won relation node
/// relabels into an operator DAG: fact-rule sinks carry their
/// annotation, every other lost node multiplies its children, every
/// other won node sums them. Evaluating the DAG bottom-up (shared
/// children count once) yields the atom's annotation polynomial.
///
/// With negation in play the polynomial reading is off the table, but
/// the subgraph still explains outcomes: its sinks are exactly the
/// stored facts used (fact-rule nodes) and the missing facts relied on
/// (bare relation nodes), which is what the why and why-not reports
/// surface.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "provgame/datalog.hpp"
#include "provgame/errors.hpp"
#include "provgame/game.hpp"
#include "provgame/polynomial.hpp"
#include "provgame/querygame.hpp"

namespace provgame {

enum class op_kind : std::uint8_t { plus, times, leaf };

struct op_node {
  op_kind kind;
  std::string annotation;  // leaf only
};

/// Same shape as the provenance subgraph it was made from, plus the
/// operator labels.
struct op_dag {
  std::string root;
  std::set<std::string> nodes;
  std::map<std::string, std::map<std::string, edge_label>> edges;
  std::map<std::string, op_node> labels;
};

using annotation_map = std::map<gatom, std::string>;

inline annotation_map annotations_of(const database& d) {
  annotation_map out;
  for (const auto& f : d.facts()) out.emplace(f, d.annotation(f));
  return out;
}

/// Relabels a won relation node's provenance subgraph into an operator
/// DAG. Rejects graphs whose sinks are not all fact rules: a bare
/// relation sink stands for a missing fact, which has no annotation to
/// propagate.
inline op_dag omega(const provenance_subgraph& g, const typed_game& tg,
                    const annotation_map& ann) {
  const game_node& root = tg.node(g.root);
  if (root.kind != node_kind::relation || g.root_value != node_value::won)
    throw negation_error("operator DAG wants a won relation node, got " +
                         g.root);
  op_dag out;
  out.root = g.root;
  out.nodes = g.nodes;
  out.edges = g.edges;
  for (const auto& id : g.nodes) {
    const game_node& n = tg.node(id);
    if (g.is_sink(id)) {
      if (n.kind != node_kind::fact_rule)
        throw negation_error("leaf " + id +
                             " is not a stored fact; no polynomial exists "
                             "in the scope of negation");
      auto it = ann.find(n.atom());
      if (it == ann.end())
        throw validation_error("no annotation for fact " +
                               n.atom().to_string());
      out.labels.emplace(id, op_node{op_kind::leaf, it->second});
    } else {
      // Values inside a won node's provenance alternate: lost inner
      // nodes multiply, won inner nodes sum.
      bool lost = false;
      for (const auto& [dst, l] : g.edges.at(id))
        lost = (l == edge_label::delaying);
      out.labels.emplace(
          id, op_node{lost ? op_kind::times : op_kind::plus, ""});
    }
  }
  return out;
}

inline op_dag omega(const provenance_subgraph& g, const typed_game& tg) {
  return omega(g, tg, annotations_of(tg.db));
}

/// Bottom-up evaluation with shared-subexpression reuse; a child counts
/// once no matter how many parents share it.
inline polynomial eval_dag(const op_dag& dag, semiring k) {
  std::map<std::string, polynomial> memo;
  // Iterative post-order; the DAG is acyclic by construction.
  std::vector<std::pair<std::string, bool>> stack{{dag.root, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (memo.count(id)) continue;
    const op_node& label = dag.labels.at(id);
    if (label.kind == op_kind::leaf) {
      memo.emplace(id, polynomial::variable(label.annotation).in_semiring(k));
      continue;
    }
    auto children = dag.edges.find(id);
    if (!expanded) {
      stack.push_back({id, true});
      if (children != dag.edges.end())
        for (const auto& [dst, _] : children->second)
          stack.push_back({dst, false});
      continue;
    }
    polynomial acc = label.kind == op_kind::times ? polynomial::one()
                                                  : polynomial::zero();
    if (children != dag.edges.end())
      for (const auto& [dst, _] : children->second)
        acc = label.kind == op_kind::times ? acc.times(memo.at(dst), k)
                                           : acc.plus(memo.at(dst), k);
    memo.emplace(id, std::move(acc));
  }
  return memo.at(dag.root);
}

/// End to end: builds the variant matching the semiring (trio drops the
/// goal positions, everything else keeps them), solves, takes the won
/// relation node's provenance, and evaluates its operator DAG.
inline polynomial provenance_polynomial(const program& p, const database& d,
                                        const gatom& a, semiring k) {
  if (!p.is_positive())
    throw negation_error(
        "provenance polynomials are defined for positive programs only");
  build_variant v =
      k == semiring::triox ? build_variant::trio : build_variant::full;
  solved_query_game sq = solve_query_game_for(p, d, v, a);
  std::string id = relation_id(a);
  if (!sq.game.has_node(id))
    throw validation_error("atom " + a.to_string() +
                           " has no node in the game; check the predicate "
                           "and active domain");
  if (sq.solution.value_of(id) != node_value::won)
    throw not_derived_error("atom " + a.to_string() + " is not derived");
  auto gamma = provenance(sq.solution, id);
  return eval_dag(omega(gamma, sq.game), k);
}

/// Sink classification of a provenance subgraph: stored facts used vs.
/// ground atoms relied on to be absent.
struct why_leaf_report {
  std::set<gatom> present;
  std::set<gatom> absent;
};

inline why_leaf_report why_leaves(const provenance_subgraph& g,
                                  const typed_game& tg) {
  why_leaf_report out;
  for (const auto& id : g.nodes) {
    if (!g.is_sink(id)) continue;
    const game_node& n = tg.node(id);
    if (n.kind == node_kind::fact_rule)
      out.present.insert(n.atom());
    else if (n.kind == node_kind::relation)
      out.absent.insert(n.atom());
  }
  return out;
}

/// Why explanation for a derived atom: the successful rule
/// instantiations inside its provenance, each with the stored facts it
/// uses and the absent facts it relies on. An atom stored directly in
/// the database is reported as such.
struct why_derivation {
  bool via_stored_fact = false;
  int rule_index = 0;
  std::vector<std::pair<std::string, std::string>> binding;  // var -> const
  std::set<gatom> uses;
  std::set<gatom> relies_on_absent;
};

struct why_report_t {
  gatom target;
  std::vector<why_derivation> derivations;
};

inline why_report_t why_report(const program& p, const database& d,
                               const gatom& a) {
  solved_query_game sq = solve_query_game_for(p, d, build_variant::full, a);
  std::string id = relation_id(a);
  if (!sq.game.has_node(id))
    throw validation_error("atom " + a.to_string() +
                           " has no node in the game; check the predicate "
                           "and active domain");
  if (sq.solution.value_of(id) != node_value::won)
    throw not_derived_error("atom " + a.to_string() +
                            " is not derived; ask whynot instead");

  why_report_t out;
  out.target = a;
  auto gamma = provenance(sq.solution, id);
  for (const auto& [child, _] : gamma.edges.at(id)) {
    const game_node& cn = sq.game.node(child);
    why_derivation der;
    if (cn.kind == node_kind::fact_rule) {
      der.via_stored_fact = true;
      der.uses.insert(cn.atom());
    } else {
      der.rule_index = cn.rule_index;
      const rule& r = sq.game.prog.rules()[cn.rule_index - 1];
      auto vars = r.variables();
      for (std::size_t i = 0; i < vars.size(); ++i)
        der.binding.emplace_back(vars[i], cn.args[i]);
      auto leaves = why_leaves(provenance(sq.solution, child), sq.game);
      der.uses = std::move(leaves.present);
      der.relies_on_absent = std::move(leaves.absent);
    }
    out.derivations.push_back(std::move(der));
  }
  return out;
}

/// Why-not explanation: every instantiation of every rule that could
/// have derived the atom, the goals it founders on, and the terminal
/// facts (missing or blocking) under each failed goal.
struct why_not_goal {
  int position;  // body position; 0 in the trio variant
  bool positive;
  gatom goal_atom;
  std::set<gatom> missing;   // absent facts this failure rests on
  std::set<gatom> blocking;  // stored facts this failure rests on
};

struct why_not_explanation {
  int rule_index;
  std::vector<std::pair<std::string, std::string>> binding;  // var -> const
  std::vector<why_not_goal> failing_goals;
};

struct whynot_report {
  gatom target;
  std::vector<why_not_explanation> instantiations;
};

inline whynot_report why_not_report(const program& p, const database& d,
                                    const gatom& a) {
  solved_query_game sq = solve_query_game_for(p, d, build_variant::full, a);
  std::string id = relation_id(a);
  if (!sq.game.has_node(id))
    throw validation_error("atom " + a.to_string() +
                           " has no node in the game; check the predicate "
                           "and active domain");
  if (sq.solution.value_of(id) != node_value::lost)
    throw derived_error("atom " + a.to_string() +
                        " is derived; ask why instead");

  whynot_report out;
  out.target = a;
  for (const auto& rule_id : sq.solution.graph.followers(id)) {
    const game_node& rn = sq.game.node(rule_id);
    if (rn.kind != node_kind::rule_instance) continue;  // stored-fact edge
    why_not_explanation ex;
    ex.rule_index = rn.rule_index;
    const rule& r = sq.game.prog.rules()[rn.rule_index - 1];
    auto vars = r.variables();
    for (std::size_t i = 0; i < vars.size(); ++i)
      ex.binding.emplace_back(vars[i], rn.args[i]);
    // The winning moves of the (won) rule node point at its failed
    // goals; each failed goal's own provenance bottoms out in the facts
    // responsible.
    for (const auto& goal_id : sq.solution.graph.followers(rule_id)) {
      if (sq.solution.value_of(goal_id) != node_value::lost) continue;
      const game_node& gn = sq.game.node(goal_id);
      why_not_goal fg;
      fg.position = gn.goal_position;
      fg.goal_atom = gn.atom();
      fg.positive = r.body[gn.goal_position - 1].positive;
      auto leaves =
          why_leaves(provenance(sq.solution, goal_id), sq.game);
      fg.missing = std::move(leaves.absent);
      fg.blocking = std::move(leaves.present);
      ex.failing_goals.push_back(std::move(fg));
    }
    out.instantiations.push_back(std::move(ex));
  }
  return out;
}

}  // namespace provgame
