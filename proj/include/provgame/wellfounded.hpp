#pragma once

/// Three-valued well-founded model of the single-rule game query
/// (win(X) :- move(X,Y), not win(Y)) computed by the alternating
/// fixpoint, directly on the move relation. Kept deliberately separate
/// from the game solver so the two can cross-check each other.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "provgame/game.hpp"

namespace provgame {

enum class three_valued : std::uint8_t { tv_true, tv_false, tv_undef };

inline std::string to_string(three_valued v) {
  switch (v) {
    case three_valued::tv_true:
      return "true";
    case three_valued::tv_false:
      return "false";
    case three_valued::tv_undef:
      return "undef";
  }
  throw internal_error("invalid three_valued");
}

/// One underestimate/overestimate pair per outer iteration.
template <typename Position>
struct alternating_fixpoint_trace {
  std::vector<std::set<Position>> under;  // U_0 = {} first
  std::vector<std::set<Position>> over;   // O_i = T(U_i)
};

/// Runs the alternating fixpoint and keeps the whole trace.
///
/// T(S) is "has a move to a position outside S". The underestimates
/// U_{i+1} = T(T(U_i)) grow toward the true atoms, the overestimates
/// O_i = T(U_i) shrink toward true-or-undefined; both are stable after
/// at most |V| steps.
template <typename Position>
alternating_fixpoint_trace<Position> alternating_fixpoint_steps(
    const basic_game_graph<Position>& g) {
  auto t = [&g](const std::set<Position>& s) {
    std::set<Position> out;
    for (const auto& [x, dsts] : g.adjacency())
      for (const auto& y : dsts)
        if (!s.count(y)) {
          out.insert(x);
          break;
        }
    return out;
  };

  alternating_fixpoint_trace<Position> trace;
  std::set<Position> under;
  while (true) {
    std::set<Position> over = t(under);
    trace.under.push_back(under);
    trace.over.push_back(over);
    std::set<Position> next = t(over);
    if (next == under) break;
    under = std::move(next);
  }
  return trace;
}

/// Final verdict per position: true on U^w, false outside O^w, undef in
/// the gap.
template <typename Position>
std::map<Position, three_valued> alternating_fixpoint(
    const basic_game_graph<Position>& g) {
  auto trace = alternating_fixpoint_steps(g);
  const auto& under = trace.under.back();
  const auto& over = trace.over.back();
  std::map<Position, three_valued> out;
  for (const auto& [p, _] : g.adjacency()) {
    if (under.count(p))
      out.emplace(p, three_valued::tv_true);
    else if (!over.count(p))
      out.emplace(p, three_valued::tv_false);
    else
      out.emplace(p, three_valued::tv_undef);
  }
  return out;
}

inline three_valued to_three_valued(node_value v) {
  switch (v) {
    case node_value::won:
      return three_valued::tv_true;
    case node_value::lost:
      return three_valued::tv_false;
    case node_value::drawn:
      return three_valued::tv_undef;
  }
  throw internal_error("invalid node_value");
}

}  // namespace provgame
