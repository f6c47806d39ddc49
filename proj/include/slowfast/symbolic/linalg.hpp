#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "slowfast/symbolic/matrix.hpp"

namespace slowfast {

/// Raised when an entry does not vanish on the subspace where it must.
class ConsistencyError : public std::runtime_error {
 public:
  ConsistencyError(const std::string& what, std::size_t entry, Polynomial residual)
      : std::runtime_error(what), entry_(entry), residual_(std::move(residual)) {}
  std::size_t entry() const { return entry_; }
  const Polynomial& residual() const { return residual_; }

 private:
  std::size_t entry_;
  Polynomial residual_;
};

class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LinearAlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent row of an augmented system after elimination.
struct NoSolution {
  std::size_t row;              // index in the input matrix
  RationalFunction residual;    // nonzero right-hand side left in that row
};

using SolveResult = std::variant<RFVector, NoSolution>;

/// Solves M x = b over the rational-function field by Gauss-Jordan
/// elimination. Free variables are set to zero.
SolveResult linear_solve(const RFMatrix& m, const RFVector& b);
/// Same, throwing LinearAlgebraError when there is no solution.
RFVector solve_or_throw(const RFMatrix& m, const RFVector& b);
/// Column-wise solve of M X = B.
std::optional<RFMatrix> linear_solve(const RFMatrix& m, const RFMatrix& b);

RationalFunction determinant(const RFMatrix& m);
/// Basis of {x : M x = 0}.
std::vector<RFVector> nullspace(const RFMatrix& m);
std::size_t symbolic_rank(const RFMatrix& m);

/// Coefficients of det(lambda I - M), leading coefficient first (always 1).
RFVector char_poly(const RFMatrix& m);
std::vector<Rational> char_poly(const QMatrix& m);

RFMatrix jacobian(const RFVector& f, const std::vector<SymbolId>& vars);
RFMatrix jacobian(const PolyVector& f, const std::vector<SymbolId>& vars);

QMatrix evaluate(const RFMatrix& m, const Assignment& at);
RFMatrix evaluate_partial(const RFMatrix& m, const Assignment& at);
RFMatrix substitute(const RFMatrix& m, const Bindings& bindings);
RFVector substitute(const RFVector& v, const Bindings& bindings);

/// Rank of a rational matrix together with the pivot columns chosen greedily,
/// scanning columns in the given order.
struct PivotChoice {
  std::size_t rank = 0;
  std::vector<std::size_t> columns;
};
PivotChoice greedy_columns(const QMatrix& m, const std::vector<std::size_t>& order);
std::size_t rank(const QMatrix& m);

/// Polynomial G with G * yvars = v. Each term is charged to the first listed
/// y-variable it contains. Throws ConsistencyError if some entry of v does
/// not vanish at y = 0.
RFMatrix hadamard_factor(const PolyVector& v, const std::vector<SymbolId>& yvars);

struct RankFactorization {
  std::size_t rank = 0;
  std::vector<std::size_t> columns;  // columns of M kept in G~, ascending
  RFMatrix g_tilde;                  // rows(M) x rank
  RFMatrix r;                        // rank x cols(M)
  Assignment sample;
};

/// M = G~ R with G~ made of independent columns of M. Columns are scanned
/// from the last to the first, so R carries an identity block on the right
/// whenever the trailing columns are independent.
RankFactorization rank_and_factor(const RFMatrix& m, const Assignment& sample);
/// Draws up to `attempts` random positive samples for `vars`.
RankFactorization rank_and_factor(const RFMatrix& m, const std::vector<SymbolId>& vars, std::mt19937_64& rng,
                                  int attempts = 5);

/// Random point in the open positive orthant with small numerators and
/// denominators.
Assignment random_positive_point(const std::vector<SymbolId>& vars, std::mt19937_64& rng);

}  // namespace slowfast
