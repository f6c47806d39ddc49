#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slowfast {

using SymbolId = std::uint32_t;

enum class SymbolKind { State, Parameter, Epsilon };

struct Symbol {
  std::string name;
  SymbolKind kind;
};

class SymbolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Append-only table of named symbols. Ids are stable, so a polynomial built
/// against a table stays valid against every extension of it.
///
/// Every table owns exactly one epsilon symbol, created at construction with
/// id 0 and name "eps".
class SymbolTable {
 public:
  SymbolTable();

  SymbolId add(std::string name, SymbolKind kind);
  /// Returns the existing id if `name` is present with the same kind.
  SymbolId intern(std::string_view name, SymbolKind kind);

  std::optional<SymbolId> find(std::string_view name) const;
  SymbolId require(std::string_view name) const;

  const Symbol& operator[](SymbolId id) const { return symbols_.at(id); }
  const std::string& name(SymbolId id) const { return symbols_.at(id).name; }
  SymbolKind kind(SymbolId id) const { return symbols_.at(id).kind; }
  SymbolId epsilon() const { return 0; }
  std::size_t size() const { return symbols_.size(); }

  std::vector<SymbolId> of_kind(SymbolKind kind) const;

 private:
  std::vector<Symbol> symbols_;
};

}  // namespace slowfast
