#include "slowfast/symbolic/symbol.hpp"

namespace slowfast {

SymbolTable::SymbolTable() { symbols_.push_back({"eps", SymbolKind::Epsilon}); }

SymbolId SymbolTable::add(std::string name, SymbolKind kind) {
  if (kind == SymbolKind::Epsilon) {
    throw SymbolError("a symbol table holds exactly one epsilon symbol");
  }
  if (name.empty()) throw SymbolError("empty symbol name");
  if (find(name)) throw SymbolError("duplicate symbol '" + name + "'");
  symbols_.push_back({std::move(name), kind});
  return static_cast<SymbolId>(symbols_.size() - 1);
}

SymbolId SymbolTable::intern(std::string_view name, SymbolKind kind) {
  if (auto id = find(name)) {
    if (symbols_[*id].kind != kind) {
      throw SymbolError("symbol '" + std::string(name) + "' redeclared with a different kind");
    }
    return *id;
  }
  return add(std::string(name), kind);
}

std::optional<SymbolId> SymbolTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].name == name) return static_cast<SymbolId>(i);
  }
  return std::nullopt;
}

SymbolId SymbolTable::require(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw SymbolError("unknown symbol '" + std::string(name) + "'");
}

std::vector<SymbolId> SymbolTable::of_kind(SymbolKind kind) const {
  std::vector<SymbolId> out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].kind == kind) out.push_back(static_cast<SymbolId>(i));
  }
  return out;
}

}  // namespace slowfast
