#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "slowfast/symbolic/polynomial.hpp"

namespace slowfast {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Maps an identifier to a symbol; may intern or throw.
using SymbolResolver = std::function<SymbolId(const std::string&)>;

/// Parses a polynomial expression with + - * ^, parentheses, integer or
/// decimal literals, and division by nonzero constants ("3/2*k1*s").
Polynomial parse_polynomial(std::string_view text, const SymbolResolver& resolve);

/// Resolver that looks names up in `table` and throws on unknown names.
SymbolResolver strict_resolver(const SymbolTable& table);

}  // namespace slowfast
