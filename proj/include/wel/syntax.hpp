// Concrete syntax for formulas.
//
//   formula  ::= iff
//   iff      ::= imp ( "<->" imp )*            left-associative
//   imp      ::= disj ( "->" imp )?            right-associative
//   disj     ::= conj ( "|" conj )*            left-associative
//   conj     ::= unary ( "&" unary )*          left-associative
//   unary    ::= "~" unary
//              | "K" ident unary
//              | ("E" | "C" | "D" | "F") group unary
//              | "true" | "false" | ident | "(" formula ")"
//   group    ::= "{" ident ( "," ident )* "}"
//   ident    ::= [a-zA-Z][a-zA-Z0-9_]*
//
// K, E, C, D, F, true and false are reserved and cannot name atoms.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wel/formula.hpp"

namespace wel {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t offset)
      : std::runtime_error("offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}
  /// Byte offset into the parsed text.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

Formula parse(std::string_view text);

/// One formula per nonblank line; '#' starts a comment.  Errors carry the
/// offset within the whole text.
std::vector<Formula> parse_formula_list(std::string_view text);

std::string render(const Formula& f);
std::string render(const Group& g);

}  // namespace wel
