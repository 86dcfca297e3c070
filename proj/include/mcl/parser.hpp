#pragma once

#include <stdexcept>
#include <string>

#include "mcl/formula.hpp"

namespace mcl {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Parses one global MCL formula. `//` comments and whitespace are ignored.
/// Clock-pair terms whose middle clock equals the binding clock are rejected
/// here (the local semantics leaves c^d undefined for that case).
GlobalPtr parse(const std::string& text);

}  // namespace mcl
