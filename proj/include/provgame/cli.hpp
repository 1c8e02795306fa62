#pragma once

/// Command-line driver. Subcommands:
///
///   solve    list every relation node with its value and length
///   why      explain a derived atom from its provenance
///   whynot   explain a non-derived atom (failing instantiations)
///   poly     annotation polynomial of a derived atom (nx, bx, trio)
///   export   DOT or JSON of the full game or one atom's provenance
///   play     argue an atom against the engine on the terminal
///
/// Exit codes: 0 ok, 1 parse error, 2 validation error, 3 atom
/// derived/not derived as the case may be, 4 negation unsupported,
/// 5 unknown flag value.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "provgame/datalog.hpp"
#include "provgame/errors.hpp"
#include "provgame/extract.hpp"
#include "provgame/game.hpp"
#include "provgame/querygame.hpp"
#include "provgame/render.hpp"
#include "provgame/wellfounded.hpp"

namespace provgame::cli {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_output(const std::string& text, const std::string& out_path,
                         std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw error("cannot write " + out_path);
  f << text;
}

/// Raw game files, one item per line: "src dst" adds a move, a single
/// token adds an isolated position, '%' starts a comment.
inline game_graph parse_raw_game(const std::string& source) {
  game_graph g;
  std::istringstream in(source);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto cut = line.find('%');
    if (cut != std::string::npos) line.erase(cut);
    std::istringstream tokens(line);
    std::string src, dst, extra;
    if (!(tokens >> src)) continue;
    if (!(tokens >> dst)) {
      g.add_position(src);
      continue;
    }
    if (tokens >> extra)
      throw parse_error(lineno, 1, "expected 'src dst' or a single position");
    g.add_move(src, dst);
  }
  return g;
}

struct engine_state {
  std::optional<solved_query_game> query;  // program + database mode
  std::optional<solved_game> raw;          // raw-game mode

  const solved_game& solution() const {
    return query ? query->solution : *raw;
  }
  const typed_game* typed() const { return query ? &query->game : nullptr; }
};

inline engine_state load(const std::string& program_path,
                         const std::string& db_path,
                         const std::string& raw_path, build_variant v,
                         const std::vector<std::string>& extra_constants = {}) {
  engine_state st;
  if (!raw_path.empty()) {
    st.raw = solve(parse_raw_game(read_file(raw_path)));
    return st;
  }
  program p = parse_program(read_file(program_path));
  database d = db_path.empty() ? database()
                               : parse_database(read_file(db_path));
  st.query = solve_query_game(p, d, v, extra_constants);
  return st;
}

inline int play_loop(const solved_query_game& sq, const gatom& target,
                     const std::string& side, std::istream& in,
                     std::ostream& out) {
  std::string pos = relation_id(target);
  if (!sq.game.has_node(pos))
    throw validation_error("atom " + target.to_string() +
                           " has no node in the game");
  out << "Arguing about " << target.to_string() << ". You are player "
      << side << "; player I moves first.\n";

  int ply = 0;
  int human_bad_moves = 0;
  std::string loser;
  while (true) {
    std::string mover = (ply % 2 == 0) ? "I" : "II";
    const auto& followers = sq.solution.graph.followers(pos);
    if (followers.empty()) {
      loser = mover;
      out << "Player " << mover << " cannot move from " << pos << ".\n";
      break;
    }
    bool humans_move = (mover == side);
    std::string chosen;
    if (humans_move) {
      std::vector<std::string> options(followers.begin(), followers.end());
      out << "Your options from " << pos << ":\n";
      for (std::size_t i = 0; i < options.size(); ++i)
        out << "  [" << i + 1 << "] " << options[i] << "\n";
      while (chosen.empty()) {
        out << "your move [1-" << options.size() << "]: " << std::flush;
        std::string line;
        if (!std::getline(in, line)) {
          out << "\naborted.\n";
          return 0;
        }
        try {
          std::size_t k = std::stoul(line);
          if (k >= 1 && k <= options.size()) {
            chosen = options[k - 1];
            break;
          }
        } catch (const std::exception&) {
        }
        out << "invalid selection\n";
      }
    } else {
      // Quickest winning move, else a drawing one, else the longest
      // delay; ties break in id order.
      chosen = preferred_moves(sq.solution, pos).front().second;
    }

    edge_label l =
        label_of(sq.solution.value_of(pos), sq.solution.value_of(chosen));
    out << mover << " plays " << chosen << ": \""
        << move_claim(sq.game, pos, chosen) << "\"";
    if (humans_move && l == edge_label::bad) {
      ++human_bad_moves;
      out << " (bad move)";
    }
    out << "\n";
    pos = chosen;
    ++ply;
  }

  std::string winner = loser == "I" ? "II" : "I";
  out << "Player " << winner << " wins.";
  if (loser == side) {
    if (human_bad_moves > 0)
      out << " Your loss was avoidable: " << human_bad_moves
          << " bad move(s) gave the win away.";
    else
      out << " Your loss was forced from the start.";
  }
  out << "\n";
  return 0;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in,
               std::ostream& out, std::ostream& err) {
  CLI::App app{"win-move game engine with query provenance"};
  app.require_subcommand(1);

  std::string program_path, db_path, raw_path, atom_text, out_path;
  std::string semiring_name = "nx", variant_name = "full";
  std::string report_format = "text", export_format = "dot";
  std::string scope_name = "full", side = "I";
  bool use_wf = false;

  auto add_common = [&](CLI::App* cmd, bool needs_atom) {
    cmd->add_option("--program", program_path, "program file");
    cmd->add_option("--db", db_path, "database file");
    cmd->add_option("--out", out_path, "output path (default stdout)");
    if (needs_atom)
      cmd->add_option("atom", atom_text, "ground atom, e.g. A(a)")
          ->required();
  };

  CLI::App* cmd_solve = app.add_subcommand("solve", "solve the game");
  add_common(cmd_solve, false);
  cmd_solve->add_option("--variant", variant_name, "full|trio");
  cmd_solve->add_option("--raw-game", raw_path)->group("");
  cmd_solve->add_flag("--wf", use_wf)->group("");

  CLI::App* cmd_why = app.add_subcommand("why", "explain a derived atom");
  add_common(cmd_why, true);
  cmd_why->add_option("--format", report_format, "text|json");

  CLI::App* cmd_whynot =
      app.add_subcommand("whynot", "explain a non-derived atom");
  add_common(cmd_whynot, true);
  cmd_whynot->add_option("--format", report_format, "text|json");

  CLI::App* cmd_poly =
      app.add_subcommand("poly", "annotation polynomial of a derived atom");
  add_common(cmd_poly, true);
  cmd_poly->add_option("--semiring", semiring_name, "nx|bx|trio");

  CLI::App* cmd_export = app.add_subcommand("export", "emit DOT or JSON");
  add_common(cmd_export, false);
  cmd_export->add_option("atom", atom_text, "focus atom for --scope gamma");
  cmd_export->add_option("--format", export_format, "dot|json");
  cmd_export->add_option("--scope", scope_name, "full|gamma");
  cmd_export->add_option("--variant", variant_name, "full|trio");
  cmd_export->add_option("--raw-game", raw_path)->group("");

  CLI::App* cmd_play = app.add_subcommand("play", "argue against the engine");
  add_common(cmd_play, true);
  cmd_play->add_option("--as", side, "I|II");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    build_variant variant;
    if (variant_name == "full")
      variant = build_variant::full;
    else if (variant_name == "trio")
      variant = build_variant::trio;
    else {
      err << "error: unknown variant '" << variant_name << "'\n";
      return 5;
    }

    if (app.got_subcommand(cmd_solve)) {
      if (use_wf) {
        if (raw_path.empty()) {
          err << "error: --wf needs --raw-game\n";
          return 5;
        }
        auto values = alternating_fixpoint(
            detail::parse_raw_game(detail::read_file(raw_path)));
        std::ostringstream os;
        for (const auto& [p, v] : values)
          os << p << " " << to_string(v) << "\n";
        detail::write_output(os.str(), out_path, out);
        return 0;
      }
      auto st = detail::load(program_path, db_path, raw_path, variant);
      detail::write_output(st.query ? render_listing(*st.query)
                                    : render_listing_raw(st.solution()),
                           out_path, out);
      return 0;
    }

    if (app.got_subcommand(cmd_why)) {
      if (report_format != "text" && report_format != "json") {
        err << "error: unknown format '" << report_format << "'\n";
        return 5;
      }
      program p = parse_program(detail::read_file(program_path));
      database d = db_path.empty()
                       ? database()
                       : parse_database(detail::read_file(db_path));
      auto report = why_report(p, d, parse_ground_atom(atom_text));
      detail::write_output(report_format == "json" ? render_why_json(report)
                                                   : render_why_text(report),
                           out_path, out);
      return 0;
    }

    if (app.got_subcommand(cmd_whynot)) {
      if (report_format != "text" && report_format != "json") {
        err << "error: unknown format '" << report_format << "'\n";
        return 5;
      }
      program p = parse_program(detail::read_file(program_path));
      database d = db_path.empty()
                       ? database()
                       : parse_database(detail::read_file(db_path));
      auto report = why_not_report(p, d, parse_ground_atom(atom_text));
      detail::write_output(report_format == "json"
                               ? render_whynot_json(report)
                               : render_whynot_text(report),
                           out_path, out);
      return 0;
    }

    if (app.got_subcommand(cmd_poly)) {
      semiring k;
      if (semiring_name == "nx")
        k = semiring::nx;
      else if (semiring_name == "bx")
        k = semiring::bx;
      else if (semiring_name == "trio")
        k = semiring::triox;
      else {
        err << "error: unknown semiring '" << semiring_name << "'\n";
        return 5;
      }
      program p = parse_program(detail::read_file(program_path));
      database d = db_path.empty()
                       ? database()
                       : parse_database(detail::read_file(db_path));
      polynomial poly =
          provenance_polynomial(p, d, parse_ground_atom(atom_text), k);
      detail::write_output(poly.to_string() + "\n", out_path, out);
      return 0;
    }

    if (app.got_subcommand(cmd_export)) {
      if (export_format != "dot" && export_format != "json") {
        err << "error: unknown format '" << export_format << "'\n";
        return 5;
      }
      if (scope_name != "full" && scope_name != "gamma") {
        err << "error: unknown scope '" << scope_name << "'\n";
        return 5;
      }
      std::optional<gatom> focus;
      if (!atom_text.empty()) focus = parse_ground_atom(atom_text);
      auto st = detail::load(program_path, db_path, raw_path, variant,
                             focus ? focus->args : std::vector<std::string>{});
      std::optional<provenance_subgraph> scope;
      if (scope_name == "gamma") {
        if (!focus) throw validation_error("--scope gamma needs an atom");
        if (!st.query)
          throw validation_error("--scope gamma needs a program");
        // Provenance of the claim itself when it holds, of its negation
        // when it does not.
        std::string id = relation_id(*focus);
        if (!st.query->game.has_node(id))
          throw validation_error("atom " + focus->to_string() +
                                 " has no node in the game");
        if (st.solution().value_of(id) != node_value::won)
          id = neg_relation_id(*focus);
        scope = provenance(st.solution(), id);
      }
      std::string text =
          export_format == "json"
              ? render_json(st.solution(), st.typed(),
                            scope ? &*scope : nullptr)
              : render_dot(st.solution(), st.typed(),
                           scope ? &*scope : nullptr);
      detail::write_output(text, out_path, out);
      return 0;
    }

    if (app.got_subcommand(cmd_play)) {
      if (side != "I" && side != "II") {
        err << "error: unknown side '" << side << "' (use I or II)\n";
        return 5;
      }
      program p = parse_program(detail::read_file(program_path));
      database d = db_path.empty()
                       ? database()
                       : parse_database(detail::read_file(db_path));
      gatom target = parse_ground_atom(atom_text);
      auto sq = solve_query_game_for(p, d, build_variant::full, target);
      return detail::play_loop(sq, target, side, in, out);
    }
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const not_derived_error& e) {
    err << "error: " << e.what() << " (run whynot for an explanation)\n";
    return 3;
  } catch (const derived_error& e) {
    err << "error: " << e.what() << " (run why for an explanation)\n";
    return 3;
  } catch (const negation_error& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const position_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

inline int run(int argc, const char* const* argv, std::istream& in,
               std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, in, out, err);
}

}  // namespace provgame::cli
