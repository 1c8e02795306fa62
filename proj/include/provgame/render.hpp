#pragma once

/// Text, DOT, and JSON views of solved games and reports. All output is
/// deterministic: nodes and edges are emitted in canonical id order and
/// JSON objects keep their keys sorted.

#include <json.hpp>

#include <map>
#include <set>
#include <sstream>
#include <string>

#include "provgame/extract.hpp"
#include "provgame/game.hpp"
#include "provgame/querygame.hpp"

namespace provgame {

/// "rel:A(a) W 5" per relation node, in id order.
inline std::string render_listing(const solved_query_game& sq) {
  std::ostringstream os;
  for (const auto& [id, n] : sq.game.nodes) {
    if (n.kind != node_kind::relation) continue;
    os << id << " " << to_char(sq.solution.value_of(id)) << " "
       << sq.solution.length_of(id).to_string() << "\n";
  }
  return os.str();
}

/// Every position of a raw game, in id order.
inline std::string render_listing_raw(const solved_game& sg) {
  std::ostringstream os;
  for (const auto& [id, v] : sg.gamma)
    os << id << " " << to_char(v) << " " << sg.length_of(id).to_string()
       << "\n";
  return os.str();
}

namespace detail {

inline nlohmann::json length_json(const game_length& l) {
  if (l.is_infinite()) return "inf";
  return l.value();
}

inline std::string node_kind_text(const typed_game* tg,
                                  const std::string& id) {
  return tg ? to_string(tg->node(id).kind) : std::string("position");
}

/// Display label for diagrams: atoms plain, negated
/// atoms with a leading sign, rule and goal instances by their short
/// names.
inline std::string display_label(const typed_game* tg,
                                 const std::string& id) {
  if (!tg) return id;
  const game_node& n = tg->node(id);
  switch (n.kind) {
    case node_kind::relation:
      return n.atom().to_string();
    case node_kind::neg_relation:
      return "¬" + n.atom().to_string();
    case node_kind::rule_instance:
      return "r" + std::to_string(n.rule_index) + n.tuple_text();
    case node_kind::goal: {
      std::string out = "g" + std::to_string(n.rule_index);
      if (n.goal_position != 0) out += "_" + std::to_string(n.goal_position);
      return out + n.tuple_text();
    }
    case node_kind::fact_rule:
      return "r_" + n.pred + n.tuple_text();
  }
  throw internal_error("invalid node_kind");
}

}  // namespace detail

/// {nodes:[{id,kind,gamma,len}], edges:[{src,dst,label}]}, arrays in id
/// order. When a provenance subgraph is given, only its nodes and edges
/// are emitted.
inline std::string render_json(const solved_game& sg, const typed_game* tg,
                               const provenance_subgraph* scope) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json edges = nlohmann::json::array();
  if (scope) {
    for (const auto& id : scope->nodes)
      nodes.push_back({{"id", id},
                       {"kind", detail::node_kind_text(tg, id)},
                       {"gamma", std::string(1, to_char(sg.value_of(id)))},
                       {"len", detail::length_json(sg.length_of(id))}});
    for (const auto& [src, dsts] : scope->edges)
      for (const auto& [dst, label] : dsts)
        edges.push_back(
            {{"src", src}, {"dst", dst}, {"label", to_string(label)}});
  } else {
    for (const auto& [id, v] : sg.gamma)
      nodes.push_back({{"id", id},
                       {"kind", detail::node_kind_text(tg, id)},
                       {"gamma", std::string(1, to_char(v))},
                       {"len", detail::length_json(sg.length_of(id))}});
    for (const auto& [src, dsts] : sg.graph.adjacency())
      for (const auto& dst : dsts)
        edges.push_back({{"src", src},
                         {"dst", dst},
                         {"label", to_string(label_of(sg.value_of(src),
                                                      sg.value_of(dst)))}});
  }
  nlohmann::json out{{"nodes", nodes}, {"edges", edges}};
  return out.dump(2) + "\n";
}

/// DOT rendering: won nodes green, lost
/// red, drawn yellow; relation nodes as ellipses, rule and fact nodes
/// as boxes, goal nodes as rounded boxes; bad moves gray and dashed.
inline std::string render_dot(const solved_game& sg, const typed_game* tg,
                              const provenance_subgraph* scope) {
  auto node_color = [](node_value v) {
    switch (v) {
      case node_value::won:
        return "green";
      case node_value::lost:
        return "red";
      case node_value::drawn:
        return "yellow";
    }
    throw internal_error("invalid node_value");
  };
  auto node_shape = [tg](const std::string& id) {
    if (!tg) return "ellipse";
    switch (tg->node(id).kind) {
      case node_kind::relation:
      case node_kind::neg_relation:
        return "ellipse";
      case node_kind::goal:
        return "box, style=\"rounded,filled\"";
      default:
        return "box";
    }
  };
  auto edge_color = [](edge_label l) {
    switch (l) {
      case edge_label::winning:
        return "green";
      case edge_label::delaying:
        return "red";
      case edge_label::drawing:
        return "yellow";
      case edge_label::bad:
        return "gray";
    }
    throw internal_error("invalid edge_label");
  };

  std::ostringstream os;
  os << "digraph provenance_game {\n";
  auto emit_node = [&](const std::string& id) {
    const char* shape = node_shape(id);
    os << "  \"" << id << "\" [label=\"" << detail::display_label(tg, id)
       << "\\n" << to_char(sg.value_of(id)) << ","
       << sg.length_of(id).to_string() << "\", shape=" << shape;
    if (std::string(shape).find("style=") == std::string::npos)
      os << ", style=filled";
    os << ", fillcolor=" << node_color(sg.value_of(id)) << "];\n";
  };
  auto emit_edge = [&](const std::string& src, const std::string& dst,
                       edge_label l) {
    os << "  \"" << src << "\" -> \"" << dst << "\" [color="
       << edge_color(l)
       << (l == edge_label::bad ? ", style=dashed" : ", style=solid")
       << "];\n";
  };

  if (scope) {
    for (const auto& id : scope->nodes) emit_node(id);
    for (const auto& [src, dsts] : scope->edges)
      for (const auto& [dst, label] : dsts) emit_edge(src, dst, label);
  } else {
    for (const auto& [id, _] : sg.gamma) emit_node(id);
    for (const auto& [src, dsts] : sg.graph.adjacency())
      for (const auto& dst : dsts)
        emit_edge(src, dst,
                  label_of(sg.value_of(src), sg.value_of(dst)));
  }
  os << "}\n";
  return os.str();
}

namespace detail {

inline std::string binding_text(
    const std::vector<std::pair<std::string, std::string>>& binding) {
  std::string out;
  for (std::size_t i = 0; i < binding.size(); ++i) {
    if (i) out += ", ";
    out += binding[i].first + "/" + binding[i].second;
  }
  return out;
}

inline nlohmann::json binding_json(
    const std::vector<std::pair<std::string, std::string>>& binding) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [v, c] : binding) out[v] = c;
  return out;
}

inline nlohmann::json atoms_json(const std::set<gatom>& atoms) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : atoms) out.push_back(a.to_string());
  return out;
}

}  // namespace detail

inline std::string render_why_text(const why_report_t& r) {
  std::ostringstream os;
  os << r.target.to_string() << " is derived.\n";
  for (const auto& d : r.derivations) {
    if (d.via_stored_fact) {
      os << "  stored fact " << d.uses.begin()->to_string() << "\n";
      continue;
    }
    os << "  rule r" << d.rule_index;
    if (!d.binding.empty()) os << " with " << detail::binding_text(d.binding);
    os << "\n";
    for (const auto& a : d.uses) os << "    uses " << a.to_string() << "\n";
    for (const auto& a : d.relies_on_absent)
      os << "    relies on absent " << a.to_string() << "\n";
  }
  return os.str();
}

inline std::string render_why_json(const why_report_t& r) {
  nlohmann::json derivations = nlohmann::json::array();
  for (const auto& d : r.derivations) {
    if (d.via_stored_fact) {
      derivations.push_back({{"fact", d.uses.begin()->to_string()}});
      continue;
    }
    derivations.push_back({{"rule", d.rule_index},
                           {"binding", detail::binding_json(d.binding)},
                           {"uses", detail::atoms_json(d.uses)},
                           {"relies_on_absent",
                            detail::atoms_json(d.relies_on_absent)}});
  }
  nlohmann::json out{{"atom", r.target.to_string()},
                     {"derived", true},
                     {"derivations", derivations}};
  return out.dump(2) + "\n";
}

inline std::string render_whynot_text(const whynot_report& r) {
  std::ostringstream os;
  os << r.target.to_string() << " is not derived.\n";
  if (r.instantiations.empty())
    os << "  no rule instantiation can produce it\n";
  for (const auto& ex : r.instantiations) {
    os << "  rule r" << ex.rule_index;
    if (!ex.binding.empty())
      os << " with " << detail::binding_text(ex.binding);
    os << "\n";
    for (const auto& g : ex.failing_goals) {
      os << "    goal " << g.position << " ("
         << (g.positive ? "" : "not ") << g.goal_atom.to_string()
         << ") fails:";
      for (const auto& a : g.missing) os << " missing " << a.to_string();
      for (const auto& a : g.blocking)
        os << " blocked by stored " << a.to_string();
      os << "\n";
    }
  }
  return os.str();
}

inline std::string render_whynot_json(const whynot_report& r) {
  nlohmann::json instantiations = nlohmann::json::array();
  for (const auto& ex : r.instantiations) {
    nlohmann::json goals = nlohmann::json::array();
    for (const auto& g : ex.failing_goals)
      goals.push_back({{"position", g.position},
                       {"atom", g.goal_atom.to_string()},
                       {"positive", g.positive},
                       {"missing", detail::atoms_json(g.missing)},
                       {"blocking", detail::atoms_json(g.blocking)}});
    instantiations.push_back({{"rule", ex.rule_index},
                              {"binding", detail::binding_json(ex.binding)},
                              {"failing_goals", goals}});
  }
  nlohmann::json out{{"atom", r.target.to_string()},
                     {"derived", false},
                     {"instantiations", instantiations}};
  return out.dump(2) + "\n";
}

}  // namespace provgame
