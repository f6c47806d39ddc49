#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slowfast/symbolic/linalg.hpp"

namespace slowfast {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial value base * eps^order. The base is a rational or a named
/// constant (a parameter symbol); after scaling it denotes the starred value.
struct InitialValue {
  Polynomial base;
  int eps_order = 0;
};

/// h = sum_g eps^g h^(g), g >= lowest_order. Grades never contain eps.
///
/// Canonical storage keeps lowest_order = min(0, lowest nonzero grade), so
/// lowest_order is -1 exactly when a Laurent term is present.
struct EpsilonGradedSystem {
  SymbolTable symbols;
  std::vector<SymbolId> states;
  std::vector<PolyVector> grades;
  int lowest_order = 0;
  std::vector<InitialValue> initial_values;
  /// Parameters known to be nonnegative (rate constants).
  std::set<SymbolId> nonnegative;

  std::size_t dimension() const { return states.size(); }
  int highest_order() const { return lowest_order + static_cast<int>(grades.size()) - 1; }
  /// Grade g, or the zero vector when absent.
  PolyVector grade(int g) const;
  /// Adds `p` to entry `row` of grade g, extending storage as needed.
  void add_term(int g, std::size_t row, const Polynomial& p);
  void normalize();
  void validate() const;
  std::optional<std::size_t> index_of(SymbolId id) const;
  std::size_t require_index(const std::string& name) const;
  std::vector<SymbolId> parameters() const;
  bool is_state(SymbolId id) const;
  /// sum_g eps^g h^(g) with eps as a formal symbol; requires lowest_order >= 0.
  PolyVector combined() const;
};

bool same_field(const EpsilonGradedSystem& a, const EpsilonGradedSystem& b);

EpsilonGradedSystem make_system(SymbolTable symbols, std::vector<SymbolId> states);

/// Slow states x (size r) and fast states y (size s), as indices into states.
struct Partition {
  std::vector<std::size_t> slow;
  std::vector<std::size_t> fast;
};

/// Validates disjointness, coverage, r >= 1 and s >= 1.
Partition make_partition(const EpsilonGradedSystem& sys, const std::vector<std::size_t>& fast);
Partition make_partition(const EpsilonGradedSystem& sys, const std::vector<std::string>& fast_names);
std::vector<SymbolId> fast_symbols(const EpsilonGradedSystem& sys, const Partition& part);
std::vector<SymbolId> slow_symbols(const EpsilonGradedSystem& sys, const Partition& part);

enum class LtcKind { FullLtc, ConsistentOnly, Inconsistent };

struct LtcVerdict {
  LtcKind kind = LtcKind::FullLtc;
  /// First nonvanishing entry of h^(0) at y = 0 (g-block for Inconsistent,
  /// f-block for ConsistentOnly).
  std::optional<std::size_t> witness_row;
  Polynomial witness;
};

LtcVerdict check_ltc(const EpsilonGradedSystem& sys, const Partition& part);
std::string to_string(LtcKind kind);

struct ScaledSystem {
  EpsilonGradedSystem system;  // fast states keep their names and denote y*
  Partition partition;
  int laurent_flag = 0;        // lowest eps power present: -1 or 0
  bool iv_consistent = true;
};

/// Substitutes y = eps y*, divides the y rows by eps and regrades. Initial
/// values of scaled states lose one eps order, unless `assume_iv_consistent`
/// declares them already of order eps (then the base is taken as y0*).
ScaledSystem apply_scaling(const EpsilonGradedSystem& sys, const Partition& part,
                           bool assume_iv_consistent = false);

enum class TimeDirection { ToSlow, ToFast };
/// Multiplies (ToFast) or divides (ToSlow) the field by eps.
EpsilonGradedSystem time_rescale(const EpsilonGradedSystem& sys, TimeDirection direction);

/// Substitutes pi = pivot + eps * direction for the listed parameters and
/// collects powers of eps into grades.
EpsilonGradedSystem epsilon_grade(const EpsilonGradedSystem& sys, const Assignment& pivot,
                                  const std::map<SymbolId, Polynomial>& direction);
/// Shorthand: each listed parameter p becomes eps^order * p.
EpsilonGradedSystem grade_parameters(const EpsilonGradedSystem& sys, const std::map<SymbolId, int>& orders);

/// Left kernel over Q(parameters) of the coefficient structure of all grades
/// (or of grade 0 only when `fast_only`).
std::vector<RFVector> linear_first_integrals(const EpsilonGradedSystem& sys, bool fast_only = false);

/// Removes `state` using the linear first integral w . z = C. C becomes a
/// parameter named `constant` carrying eps order `constant_order`.
EpsilonGradedSystem eliminate_state(const EpsilonGradedSystem& sys, SymbolId state, const RFVector& w,
                                    const std::string& constant, int constant_order);
/// Picks an integral with a constant coefficient on `state` and derives the
/// constant's name and order from the initial values.
EpsilonGradedSystem eliminate_state(const EpsilonGradedSystem& sys, SymbolId state);

}  // namespace slowfast
