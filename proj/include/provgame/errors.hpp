#pragma once

#include <stdexcept>
#include <string>

namespace provgame {

/// Base class for all recoverable errors raised by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error in a program, database, or atom source text.
struct parse_error : error {
  int line;
  int column;

  parse_error(int line_, int column_, const std::string& message)
      : error("parse error at " + std::to_string(line_) + ":" +
              std::to_string(column_) + ": " + message),
        line(line_),
        column(column_) {}
};

/// Semantic validation failure: recursion, arity conflicts, EDB/IDB
/// clashes, duplicate facts, non-ground atoms where ground ones are
/// required.
struct validation_error : error {
  using error::error;
};

/// A position was queried that is not part of the game.
struct position_error : error {
  using error::error;
};

/// The queried atom is not derived; why-not machinery applies instead.
struct not_derived_error : error {
  using error::error;
};

/// The queried atom is derived; why machinery applies instead.
struct derived_error : error {
  using error::error;
};

/// Polynomial extraction was requested for a program with negation.
struct negation_error : error {
  using error::error;
};

/// Invariant violation that indicates a bug, not bad input.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace provgame
