#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "abc/syntax.hpp"

namespace abc {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& msg)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Parses a complete spec (declarations, agents, init). Names that are used but
// not declared are inferred from how they are used.
Spec parse_spec(std::string_view text);

// Parses a process expression against context and returns a copy of context
// with that expression as init. New action names are inferred.
Spec with_init(const Spec& context, std::string_view expr);

}  // namespace abc
