#pragma once

/// Finite two-player win-move games.
///
/// A game is a directed graph: two players alternate moving a token along
/// edges, and whoever cannot move loses. Solving assigns each position a
/// value (won / lost / drawn for the player about to move) and a length:
/// how fast a win can be forced, or how long a loss can be delayed.
/// Moves are then labeled winning / delaying / drawing / bad, and the
/// bad-move-free subgraph reachable from a position is its provenance:
/// the part of the game that explains the position's value.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "provgame/errors.hpp"

namespace provgame {

enum class node_value : std::uint8_t { won, lost, drawn };

inline char to_char(node_value v) {
  switch (v) {
    case node_value::won:
      return 'W';
    case node_value::lost:
      return 'L';
    case node_value::drawn:
      return 'D';
  }
  throw internal_error("invalid node_value");
}

/// Number of plies to the forced end of the game, or infinity for drawn
/// positions (play can go on forever).
class game_length {
 public:
  game_length() : finite_() {}

  static game_length infinity() { return game_length(); }

  static game_length of(std::uint64_t n) {
    game_length l;
    l.finite_ = n;
    return l;
  }

  bool is_infinite() const { return !finite_.has_value(); }

  std::uint64_t value() const {
    if (!finite_) throw internal_error("game_length: infinite has no value");
    return *finite_;
  }

  std::string to_string() const {
    return finite_ ? std::to_string(*finite_) : std::string("inf");
  }

  friend bool operator==(const game_length& a, const game_length& b) {
    return a.finite_ == b.finite_;
  }
  friend bool operator!=(const game_length& a, const game_length& b) {
    return !(a == b);
  }
  /// Finite lengths in numeric order, infinity greater than all of them.
  friend bool operator<(const game_length& a, const game_length& b) {
    if (a.finite_ && b.finite_) return *a.finite_ < *b.finite_;
    return a.finite_.has_value() && !b.finite_.has_value();
  }

 private:
  std::optional<std::uint64_t> finite_;
};

/// A finite game graph. Positions are totally ordered opaque tokens;
/// moves are a set of ordered pairs. Self-loops and cycles are allowed.
template <typename Position>
class basic_game_graph {
 public:
  using position_type = Position;
  using move_type = std::pair<Position, Position>;

  void add_position(const Position& p) { adjacency_[p]; }

  /// Inserts the move and both endpoints.
  void add_move(const Position& src, const Position& dst) {
    adjacency_[dst];
    if (adjacency_[src].insert(dst).second) ++move_count_;
  }

  bool has_position(const Position& p) const {
    return adjacency_.count(p) != 0;
  }

  bool has_move(const Position& src, const Position& dst) const {
    auto it = adjacency_.find(src);
    return it != adjacency_.end() && it->second.count(dst) != 0;
  }

  std::size_t position_count() const { return adjacency_.size(); }
  std::size_t move_count() const { return move_count_; }
  bool empty() const { return adjacency_.empty(); }

  const std::set<Position>& followers(const Position& p) const {
    auto it = adjacency_.find(p);
    if (it == adjacency_.end())
      throw position_error("unknown position: " + printable(p));
    return it->second;
  }

  bool is_sink(const Position& p) const { return followers(p).empty(); }

  std::vector<Position> positions() const {
    std::vector<Position> out;
    out.reserve(adjacency_.size());
    for (const auto& [p, _] : adjacency_) out.push_back(p);
    return out;
  }

  std::vector<move_type> moves() const {
    std::vector<move_type> out;
    out.reserve(move_count_);
    for (const auto& [src, dsts] : adjacency_)
      for (const auto& dst : dsts) out.emplace_back(src, dst);
    return out;
  }

  const std::map<Position, std::set<Position>>& adjacency() const {
    return adjacency_;
  }

  static std::string printable(const Position& p) {
    std::ostringstream os;
    os << p;
    return os.str();
  }

 private:
  std::map<Position, std::set<Position>> adjacency_;
  std::size_t move_count_ = 0;
};

/// A solved game: the graph plus a value and a length per position.
/// Immutable by convention once produced by solve().
template <typename Position>
struct basic_solved_game {
  basic_game_graph<Position> graph;
  std::map<Position, node_value> gamma;
  std::map<Position, game_length> len;

  node_value value_of(const Position& p) const {
    auto it = gamma.find(p);
    if (it == gamma.end())
      throw position_error("unknown position: " +
                           basic_game_graph<Position>::printable(p));
    return it->second;
  }

  game_length length_of(const Position& p) const {
    auto it = len.find(p);
    if (it == len.end())
      throw position_error("unknown position: " +
                           basic_game_graph<Position>::printable(p));
    return it->second;
  }
};

/// Solves a game by round-based backward induction.
///
/// Sinks are lost with length 0. Each round inspects all still-unlabeled
/// positions against the labels from previous rounds: a position with a
/// lost follower becomes won (length one beyond the quickest lost
/// follower), a position whose followers are all won becomes lost
/// (length one beyond the slowest). Whatever remains when nothing
/// changes any more is drawn with infinite length. The rounds make the
/// output deterministic and give won positions odd, lost positions even
/// lengths.
template <typename Position>
basic_solved_game<Position> solve(const basic_game_graph<Position>& g) {
  basic_solved_game<Position> out;
  out.graph = g;

  std::map<Position, node_value> label;
  std::map<Position, std::uint64_t> length;

  for (const auto& [p, dsts] : g.adjacency()) {
    if (dsts.empty()) {
      label.emplace(p, node_value::lost);
      length.emplace(p, 0);
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<Position, std::uint64_t>> new_won, new_lost;
    for (const auto& [p, dsts] : g.adjacency()) {
      if (label.count(p)) continue;
      bool all_won = true;
      std::optional<std::uint64_t> min_lost, max_won;
      for (const auto& y : dsts) {
        auto it = label.find(y);
        if (it == label.end()) {
          all_won = false;
        } else if (it->second == node_value::lost) {
          all_won = false;
          std::uint64_t l = length.at(y);
          if (!min_lost || l < *min_lost) min_lost = l;
        } else if (it->second == node_value::won) {
          std::uint64_t l = length.at(y);
          if (!max_won || l > *max_won) max_won = l;
        }
      }
      if (min_lost) {
        new_won.emplace_back(p, 1 + *min_lost);  // shortest win
      } else if (all_won) {
        new_lost.emplace_back(p, 1 + *max_won);  // longest delay
      }
    }
    for (const auto& [p, l] : new_won) {
      label.emplace(p, node_value::won);
      length.emplace(p, l);
      changed = true;
    }
    for (const auto& [p, l] : new_lost) {
      label.emplace(p, node_value::lost);
      length.emplace(p, l);
      changed = true;
    }
  }

  for (const auto& [p, _] : g.adjacency()) {
    auto it = label.find(p);
    if (it == label.end()) {
      out.gamma.emplace(p, node_value::drawn);
      out.len.emplace(p, game_length::infinity());
    } else {
      out.gamma.emplace(p, it->second);
      out.len.emplace(p, game_length::of(length.at(p)));
    }
  }
  return out;
}

template <typename Position>
node_value value(const basic_solved_game<Position>& sg, const Position& x) {
  return sg.value_of(x);
}

/// Move labels derived purely from the endpoint values.
///
///   won -> lost     winning   (the move that forces the opponent down)
///   lost -> won     delaying  (all a lost player can do)
///   drawn -> drawn  drawing
///   won -> won, won -> drawn, drawn -> won   bad
///
/// lost -> lost, lost -> drawn and drawn -> lost cannot occur in a
/// correctly solved game.
enum class edge_label : std::uint8_t { winning, delaying, drawing, bad };

inline std::string to_string(edge_label l) {
  switch (l) {
    case edge_label::winning:
      return "winning";
    case edge_label::delaying:
      return "delaying";
    case edge_label::drawing:
      return "drawing";
    case edge_label::bad:
      return "bad";
  }
  throw internal_error("invalid edge_label");
}

inline edge_label label_of(node_value src, node_value dst) {
  if (src == node_value::won)
    return dst == node_value::lost ? edge_label::winning : edge_label::bad;
  if (src == node_value::lost) {
    if (dst != node_value::won)
      throw internal_error("edge from a lost position to a non-won one");
    return edge_label::delaying;
  }
  // src drawn
  if (dst == node_value::drawn) return edge_label::drawing;
  if (dst == node_value::won) return edge_label::bad;
  throw internal_error("edge from a drawn position to a lost one");
}

template <typename Position>
std::map<std::pair<Position, Position>, edge_label> label_edges(
    const basic_solved_game<Position>& sg) {
  std::map<std::pair<Position, Position>, edge_label> out;
  for (const auto& [src, dsts] : sg.graph.adjacency())
    for (const auto& dst : dsts)
      out.emplace(std::make_pair(src, dst),
                  label_of(sg.value_of(src), sg.value_of(dst)));
  return out;
}

/// The provenance of a position: the subgraph reachable from it without
/// taking any bad move, with the surviving edges keeping their labels.
template <typename Position>
struct basic_provenance_subgraph {
  using move_type = std::pair<Position, Position>;

  Position root;
  node_value root_value;
  std::set<Position> nodes;
  /// Labeled out-edges per node; never contains a bad label.
  std::map<Position, std::map<Position, edge_label>> edges;

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& [_, dsts] : edges) n += dsts.size();
    return n;
  }

  bool has_edge(const Position& src, const Position& dst) const {
    auto it = edges.find(src);
    return it != edges.end() && it->second.count(dst) != 0;
  }

  edge_label label(const Position& src, const Position& dst) const {
    auto it = edges.find(src);
    if (it == edges.end() || !it->second.count(dst))
      throw position_error("edge not in provenance subgraph");
    return it->second.at(dst);
  }

  bool is_sink(const Position& p) const {
    auto it = edges.find(p);
    return it == edges.end() || it->second.empty();
  }

  std::vector<move_type> moves() const {
    std::vector<move_type> out;
    for (const auto& [src, dsts] : edges)
      for (const auto& [dst, _] : dsts) out.emplace_back(src, dst);
    return out;
  }
};

template <typename Position>
basic_provenance_subgraph<Position> provenance(
    const basic_solved_game<Position>& sg, const Position& x) {
  basic_provenance_subgraph<Position> out;
  out.root = x;
  out.root_value = sg.value_of(x);
  std::vector<Position> stack{x};
  out.nodes.insert(x);
  while (!stack.empty()) {
    Position p = stack.back();
    stack.pop_back();
    for (const auto& y : sg.graph.followers(p)) {
      edge_label l = label_of(sg.value_of(p), sg.value_of(y));
      if (l == edge_label::bad) continue;
      out.edges[p].emplace(y, l);
      if (out.nodes.insert(y).second) stack.push_back(y);
    }
  }
  return out;
}

/// Checks the regular structure of a provenance subgraph: starting from
/// a won root every path reads a prefix of g(rg)*, from a lost root a
/// prefix of (rg)*, and from a drawn root a nonempty run of y. Since
/// only prefixes are demanded, this amounts to checking the expected
/// label at every reachable (node, automaton-state) pair.
template <typename Position>
bool check_regular_structure(const basic_provenance_subgraph<Position>& p) {
  enum class state { expect_winning, expect_delaying, expect_drawing };
  state start;
  switch (p.root_value) {
    case node_value::won:
      start = state::expect_winning;
      break;
    case node_value::lost:
      start = state::expect_delaying;
      break;
    case node_value::drawn:
      start = state::expect_drawing;
      break;
    default:
      return false;
  }
  std::set<std::pair<Position, state>> seen;
  std::vector<std::pair<Position, state>> stack{{p.root, start}};
  seen.insert(stack.back());
  while (!stack.empty()) {
    auto [node, st] = stack.back();
    stack.pop_back();
    auto adj = p.edges.find(node);
    if (adj == p.edges.end()) continue;
    for (const auto& [dst, l] : adj->second) {
      state next;
      switch (st) {
        case state::expect_winning:
          if (l != edge_label::winning) return false;
          next = state::expect_delaying;
          break;
        case state::expect_delaying:
          if (l != edge_label::delaying) return false;
          next = state::expect_winning;
          break;
        case state::expect_drawing:
          if (l != edge_label::drawing) return false;
          next = state::expect_drawing;
          break;
      }
      if (seen.insert({dst, next}).second) stack.push_back({dst, next});
    }
  }
  return true;
}

/// All good (non-bad) moves out of x.
template <typename Position>
std::vector<std::pair<Position, Position>> optimal_moves(
    const basic_solved_game<Position>& sg, const Position& x) {
  std::vector<std::pair<Position, Position>> out;
  node_value vx = sg.value_of(x);
  for (const auto& y : sg.graph.followers(x))
    if (label_of(vx, sg.value_of(y)) != edge_label::bad)
      out.emplace_back(x, y);
  return out;
}

/// The subset of optimal_moves a best-playing engine would pick from:
/// quickest winning moves from won positions, longest-delaying moves
/// from lost ones, any drawing move from drawn ones.
template <typename Position>
std::vector<std::pair<Position, Position>> preferred_moves(
    const basic_solved_game<Position>& sg, const Position& x) {
  auto good = optimal_moves(sg, x);
  if (good.empty()) return good;
  node_value vx = sg.value_of(x);
  if (vx == node_value::drawn) return good;
  bool minimize = (vx == node_value::won);
  game_length best =
      minimize ? game_length::infinity() : game_length::of(0);
  for (const auto& m : good) {
    game_length l = sg.length_of(m.second);
    if (minimize ? l < best : best < l) best = l;
  }
  std::vector<std::pair<Position, Position>> out;
  for (const auto& m : good)
    if (sg.length_of(m.second) == best) out.push_back(m);
  return out;
}

// The library works with string-identified positions throughout; the
// templates stay available for other position types.
using game_graph = basic_game_graph<std::string>;
using solved_game = basic_solved_game<std::string>;
using provenance_subgraph = basic_provenance_subgraph<std::string>;

}  // namespace provgame
