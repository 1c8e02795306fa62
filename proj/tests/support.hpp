#pragma once

// Test-side machinery: independent value oracles, random instance
// generators, and the solved-game invariant checker. Everything here
// stays deliberately separate from the solver implementations it
// checks.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "provgame/datalog.hpp"
#include "provgame/game.hpp"

namespace provgame::testing {

// ---------------------------------------------------------------------
// Brute-force minimax value oracle: literal depth-bounded game search.
// A position is won if some move forces a loss, lost if it is a sink or
// every move forces a win, drawn otherwise. Depth 2|V|+2 is enough for
// every forced outcome.

class minimax_oracle {
 public:
  explicit minimax_oracle(const game_graph& g)
      : g_(g), depth_(2 * g.position_count() + 2) {}

  node_value value(const std::string& x) {
    if (forces_win(x, depth_))
      return node_value::won;
    if (forces_loss(x, depth_))
      return node_value::lost;
    return node_value::drawn;
  }

 private:
  bool forces_win(const std::string& x, std::size_t d) {
    if (d == 0) return false;
    auto key = std::make_pair(x, d);
    auto it = win_memo_.find(key);
    if (it != win_memo_.end()) return it->second;
    bool out = false;
    for (const auto& y : g_.followers(x))
      if (forces_loss(y, d - 1)) {
        out = true;
        break;
      }
    win_memo_.emplace(key, out);
    return out;
  }

  bool forces_loss(const std::string& x, std::size_t d) {
    const auto& followers = g_.followers(x);
    if (followers.empty()) return true;
    if (d == 0) return false;
    auto key = std::make_pair(x, d);
    auto it = loss_memo_.find(key);
    if (it != loss_memo_.end()) return it->second;
    bool out = true;
    for (const auto& y : followers)
      if (!forces_win(y, d - 1)) {
        out = false;
        break;
      }
    loss_memo_.emplace(key, out);
    return out;
  }

  const game_graph& g_;
  std::size_t depth_;
  std::map<std::pair<std::string, std::size_t>, bool> win_memo_;
  std::map<std::pair<std::string, std::size_t>, bool> loss_memo_;
};

// ---------------------------------------------------------------------
// Fair-pick solver variant: labels one node at a time in a shuffled
// order instead of whole rounds. Values must agree with the round-based
// solver; lengths are not defined for this variant.

inline std::map<std::string, node_value> fair_pick_values(const game_graph& g,
                                                          unsigned seed) {
  std::mt19937 rng(seed);
  std::map<std::string, node_value> label;
  std::vector<std::string> order = g.positions();
  bool changed = true;
  while (changed) {
    changed = false;
    std::shuffle(order.begin(), order.end(), rng);
    for (const auto& x : order) {
      if (label.count(x)) continue;
      const auto& followers = g.followers(x);
      bool some_lost = false, all_won = true;
      for (const auto& y : followers) {
        auto it = label.find(y);
        if (it == label.end())
          all_won = false;
        else if (it->second == node_value::lost)
          some_lost = true;
        else if (it->second != node_value::won)
          all_won = false;
      }
      if (some_lost) {
        label.emplace(x, node_value::won);
        changed = true;
      } else if (all_won) {  // sinks included: vacuously all won
        label.emplace(x, node_value::lost);
        changed = true;
      }
    }
  }
  for (const auto& x : order) label.emplace(x, node_value::drawn);
  return label;
}

// ---------------------------------------------------------------------
// Random instances.

inline game_graph random_graph(std::mt19937& rng) {
  std::uniform_int_distribution<int> size(0, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int n = size(rng);
  double density = unit(rng);
  game_graph g;
  for (int i = 0; i < n; ++i) g.add_position("p" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (unit(rng) < density)
        g.add_move("p" + std::to_string(i), "p" + std::to_string(j));
  return g;
}

struct random_instance {
  program prog;
  database db;
  std::string program_text;
  std::string database_text;
};

/// Random non-recursive programs (up to 3 rules of up to 3 goals) over
/// EDB predicates e1/1, e2/2 and layered IDB predicates i1..i3, with a
/// random annotated database over constants a, b, c.
inline random_instance random_program(std::mt19937& rng,
                                      bool allow_negation) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&rng](const std::vector<std::string>& from) {
    std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
    return from[d(rng)];
  };
  const std::vector<std::string> constants{"a", "b", "c"};
  const std::vector<std::string> vars{"X", "Y", "Z"};

  std::map<std::string, int> arity{{"e1", 1}, {"e2", 2}};
  std::uniform_int_distribution<int> idb_arity(1, 2);
  for (int i = 1; i <= 3; ++i)
    arity["i" + std::to_string(i)] = idb_arity(rng);

  std::uniform_int_distribution<int> rule_count(1, 3);
  std::uniform_int_distribution<int> goal_count(1, 3);
  int nrules = rule_count(rng);

  auto random_args = [&](const std::string& pred) {
    std::string out = "(";
    for (int i = 0; i < arity.at(pred); ++i) {
      if (i) out += ",";
      out += unit(rng) < 0.6 ? pick(vars) : pick(constants);
    }
    return out + ")";
  };

  std::string text;
  for (int t = 1; t <= nrules; ++t) {
    // Head predicate index never above the rule ordinal, bodies only
    // use strictly lower IDB predicates: acyclic by construction.
    std::uniform_int_distribution<int> head_pick(1, t > 3 ? 3 : t);
    int h = head_pick(rng);
    std::string head = "i" + std::to_string(h);
    text += head + random_args(head) + " :- ";
    int goals = goal_count(rng);
    std::vector<std::string> body_preds{"e1", "e2"};
    for (int j = 1; j < h; ++j) body_preds.push_back("i" + std::to_string(j));
    for (int k = 0; k < goals; ++k) {
      if (k) text += ", ";
      if (allow_negation && unit(rng) < 0.3) text += "not ";
      std::string pred = pick(body_preds);
      text += pred + random_args(pred);
    }
    text += ".\n";
  }

  std::string db_text;
  int annotation = 0;
  for (const auto& c : constants)
    if (unit(rng) < 0.5)
      db_text += "e1(" + c + ") @v" + std::to_string(++annotation) + ".\n";
  for (const auto& c1 : constants)
    for (const auto& c2 : constants)
      if (unit(rng) < 0.4)
        db_text += "e2(" + c1 + "," + c2 + ") @v" +
                   std::to_string(++annotation) + ".\n";

  random_instance out;
  out.program_text = text;
  out.database_text = db_text;
  out.prog = parse_program(text);
  out.db = parse_database(db_text);
  return out;
}

// ---------------------------------------------------------------------
// Solved-game invariant suite. Returns the first violation found, or
// nothing when all of the following hold: the value partition, the
// local won/lost/drawn conditions, the length recurrences and parity
// laws, edge-label totality, the regular structure of every position's
// provenance, and value preservation when re-solving the provenance
// subgraph on its own.

inline std::optional<std::string> find_invariant_violation(
    const solved_game& sg) {
  const auto& g = sg.graph;
  if (sg.gamma.size() != g.position_count() ||
      sg.len.size() != g.position_count())
    return "value/length maps do not cover the positions exactly";

  for (const auto& [x, followers] : g.adjacency()) {
    node_value vx = sg.value_of(x);
    game_length lx = sg.length_of(x);
    bool some_lost = false, some_drawn = false, all_won = true;
    std::optional<std::uint64_t> min_lost, max_any;
    for (const auto& y : followers) {
      node_value vy = sg.value_of(y);
      game_length ly = sg.length_of(y);
      if (vy != node_value::won) all_won = false;
      if (vy == node_value::drawn) some_drawn = true;
      if (vy == node_value::lost) {
        some_lost = true;
        if (!min_lost || ly.value() < *min_lost) min_lost = ly.value();
      }
      if (!ly.is_infinite() && (!max_any || ly.value() > *max_any))
        max_any = ly.value();
    }

    switch (vx) {
      case node_value::won:
        if (!some_lost) return x + " is won without a lost follower";
        if (lx.is_infinite() || lx.value() != 1 + *min_lost)
          return x + " violates the shortest-win recurrence";
        if (lx.value() % 2 != 1) return x + " is won with even length";
        break;
      case node_value::lost:
        if (!followers.empty()) {
          if (!all_won) return x + " is lost with a non-won follower";
          if (lx.is_infinite() || lx.value() != 1 + *max_any)
            return x + " violates the longest-delay recurrence";
        } else if (lx != game_length::of(0)) {
          return x + " is a sink with nonzero length";
        }
        if (lx.value() % 2 != 0) return x + " is lost with odd length";
        break;
      case node_value::drawn:
        if (!lx.is_infinite()) return x + " is drawn with finite length";
        if (some_lost) return x + " is drawn despite a lost follower";
        if (!some_drawn) return x + " is drawn without a drawn follower";
        break;
    }
  }

  try {
    label_edges(sg);
  } catch (const internal_error& e) {
    return std::string("edge labeling hit an impossible combination: ") +
           e.what();
  }

  for (const auto& [x, _] : g.adjacency()) {
    auto gamma = provenance(sg, x);
    if (!check_regular_structure(gamma))
      return "provenance of " + x + " is not regular";
    game_graph restricted;
    for (const auto& n : gamma.nodes) restricted.add_position(n);
    for (const auto& [src, dsts] : gamma.edges)
      for (const auto& [dst, label] : dsts) restricted.add_move(src, dst);
    if (solve(restricted).value_of(x) != sg.value_of(x))
      return "provenance of " + x + " does not determine its value";
  }
  return std::nullopt;
}

// The ten-position game used throughout the narrative examples: sinks
// b, f, h; a, d, e won; c, g lost in two; m, n drawn in a cycle.
inline game_graph narrative_game() {
  game_graph g;
  g.add_move("a", "b");
  g.add_move("c", "a");
  g.add_move("d", "f");
  g.add_move("e", "d");
  g.add_move("e", "h");
  g.add_move("e", "m");
  g.add_move("g", "d");
  g.add_move("m", "n");
  g.add_move("n", "m");
  g.add_position("b");
  g.add_position("f");
  g.add_position("h");
  return g;
}

}  // namespace provgame::testing
