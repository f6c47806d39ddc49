#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slowfast/model/system.hpp"

namespace slowfast {

/// Sorted state indices.
using IndexSet = std::vector<std::size_t>;

/// True iff setting the J-states to zero annihilates every entry of h0.
/// Requires J to be a nonempty proper subset.
bool is_ltc_set(const PolyVector& h0, const std::vector<SymbolId>& states, const IndexSet& j);

/// Indices i such that no pure power z_i^k occurs in h0.
IndexSet candidate_slow_set(const PolyVector& h0, const std::vector<SymbolId>& states);

struct LtcReport {
  IndexSet slow_candidates;             // S
  std::vector<IndexSet> minimal_sets;   // sorted lexicographically
  std::uint64_t checked_count = 0;
  bool complete = true;
  std::string method;                   // "clique" or "enumeration"
};

constexpr std::uint64_t kLtcSearchLimit = std::uint64_t{1} << 20;

/// All minimal LTC sets. Degree <= degree_cap (at most 2) uses maximal
/// cliques of the compatibility graph on S; higher degrees use a pruned
/// enumeration of complements inside S, capped at `limit` subset tests.
LtcReport minimal_ltc_sets(const PolyVector& h0, const std::vector<SymbolId>& states, unsigned degree_cap = 2,
                           std::uint64_t limit = kLtcSearchLimit);
LtcReport minimal_ltc_sets(const EpsilonGradedSystem& sys);

struct ParameterConditions {
  /// Coefficients (in the parameters) of the monomials free of J-variables,
  /// normalized and deduplicated.
  std::vector<Polynomial> vanishing;
  /// Same, from the rows outside J (needed for full Tikhonov consistency).
  std::vector<Polynomial> full_ltc_extra;
  /// Parameters forced to zero, when every condition is a single parameter or
  /// a sum of nonnegative parameters.
  std::optional<Assignment> solved;
  /// Conditions the simple solver could not handle.
  std::vector<Polynomial> unsolved;
  /// A nonzero constant condition: no parameter value works.
  bool infeasible = false;
};

/// Conditions on the parameters for J to be an LTC set of h. By default only
/// the J rows are constrained (local consistency); with `full_ltc` all rows are.
ParameterConditions preassigned_ltc_conditions(const PolyVector& h, const std::vector<SymbolId>& states,
                                               const IndexSet& j, const std::set<SymbolId>& nonnegative,
                                               bool full_ltc = false);

std::string format_index_set(const IndexSet& set, const std::vector<SymbolId>& states, const SymbolTable& symbols);

}  // namespace slowfast
