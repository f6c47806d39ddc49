#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "slowfast/model/system.hpp"

namespace slowfast {

/// No factorization h0 = P mu was found in the supported search space.
class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reduction cannot proceed (singular D mu P, singular G0, inconsistent
/// scaling, ...). The message names the obstruction.
class ReductionRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// g1(x,0) is not in the column space of G~0: no w with g1 = G~0 w exists.
class NonstandardError : public ReductionRefused {
 public:
  NonstandardError(const std::string& what, std::size_t row, RationalFunction residual)
      : ReductionRefused(what), row_(row), residual_(std::move(residual)) {}
  std::size_t row() const { return row_; }
  const RationalFunction& residual() const { return residual_; }

 private:
  std::size_t row_;
  RationalFunction residual_;
};

/// Rank factorization data of the scaled fast block, G0(x,0) = G~0 R.
struct NonstandardData {
  RFMatrix g0;                        // s x s
  RFMatrix g_tilde;                   // s x s1
  RFMatrix r;                         // s1 x s
  RFVector w;                         // s1, with g1(x,0) = G~0 w
  std::size_t s1 = 0;
  std::vector<std::size_t> columns;   // columns of G0 kept in G~0
};

/// h0 = P mu on the state vector `vars`.
struct Decomposition {
  std::vector<SymbolId> vars;
  RFMatrix p;                         // n x r
  RFVector mu;                        // r
  RFMatrix dmu;                       // r x n
  RFMatrix dmu_p;                     // r x r
  std::vector<std::size_t> mu_rows;   // entries of h0 used as mu, if any
  /// "constant", "polynomial", "supplied", "standard" or "nonstandard".
  std::string method;
  std::optional<NonstandardData> nonstandard;
  Assignment sample;

  std::size_t rank() const { return mu.size(); }
};

/// Random positive values for every non-epsilon symbol of the table.
Assignment generic_sample(const SymbolTable& symbols, std::mt19937_64& rng);

/// mu is chosen greedily among the entries of h0 (fewest terms first, then
/// lowest index) with independent differentials at `sample`, and listed in
/// row order. P is searched with constant coefficients first, then with
/// polynomial coefficients up to the degree of h0.
Decomposition find_decomposition(const PolyVector& h0, const std::vector<SymbolId>& vars, const Assignment& sample);
/// Checks P mu = h0 symbolically and the rank conditions at `sample`.
Decomposition supplied_decomposition(const PolyVector& h0, const std::vector<SymbolId>& vars, RFMatrix p, RFVector mu,
                                     const Assignment& sample, std::string method = "supplied");
/// P = (F0(x,y); G0(x,y)) from the Hadamard factors of grade 0, mu = y, for a
/// Tikhonov consistent unscaled system.
Decomposition standard_decomposition(const EpsilonGradedSystem& sys, const Partition& part, const Assignment& sample);

/// Q = I - P (D mu P)^-1 D mu.
RFMatrix projection(const Decomposition& dec);
/// q = h1 - P gamma with D mu P gamma = D mu h1.
RFVector reduce_field(const Decomposition& dec, const RFVector& h1);

/// Lower-dimensional form of a reduced system.
struct EliminatedForm {
  std::vector<SymbolId> states;
  RFVector field;
  Bindings solved;                        // eliminated state -> expression
  std::vector<RationalFunction> integrals;  // relations w.z - C used
  bool complete = true;                   // every manifold equation solved
};

struct ReducedSystem {
  std::string kind;                       // "standard", "general" or "nonstandard"
  std::vector<SymbolId> states;
  RFVector field;
  RFVector manifold;                      // defining equations
  std::size_t manifold_dimension = 0;
  std::optional<Decomposition> decomposition;
  /// D mu P, or G0(x,0) in the standard case; its eigenvalues govern attraction.
  RFMatrix stability_matrix;
  EliminatedForm eliminated;
};

/// Solves equations one at a time for variables that occur linearly,
/// trying variables in the order of `preference`.
struct SequentialSolution {
  Bindings solved;
  RFVector leftover;                      // nonzero equations left unsolved
};
SequentialSolution solve_sequentially(const RFVector& equations, const std::vector<SymbolId>& preference);

/// Tikhonov-Fenichel reduction of a scaled system with grades 0 and 1.
ReducedSystem reduce(const ScaledSystem& scaled, const Decomposition& dec);
/// x' = f1(x,0) - F0(x,0) G0(x,0)^-1 g1(x,0) on the unscaled system.
ReducedSystem standard_reduce(const EpsilonGradedSystem& sys, const Partition& part);
/// Reduction through G0(x,0) = G~0 R and the manifold R (y* + w) = 0.
ReducedSystem nonstandard_reduce(const ScaledSystem& scaled, const Assignment& sample);

/// mu + eps (D mu P)^-1 D mu h1, returned as its two eps coefficients.
struct FirstOrderManifold {
  RFVector order0;
  RFVector order1;
};
FirstOrderManifold slow_manifold_first_order(const Decomposition& dec, const RFVector& h1);
/// eps^0 and eps^1 coefficients of D Phi (h0 + eps h1) - (L0 + eps L1) Phi
/// with L0 = D mu P and L1 = D Psi P, Psi = (D mu P)^-1 D mu h1.
std::pair<RFVector, RFVector> invariance_residual(const Decomposition& dec, const RFVector& h0, const RFVector& h1);

enum class Verdict { Pass, Fail, Indeterminate };
std::string to_string(Verdict v);

struct EigenSample {
  Assignment point;
  std::vector<double> real_parts;
  std::vector<Rational> hurwitz_minors;   // empty for degree > 4
  bool passed = false;
};

struct EigenCertificate {
  RFMatrix matrix;
  std::string method;                     // "routh_hurwitz_exact" or "numeric_sampling"
  std::vector<EigenSample> samples;
  std::size_t rejected = 0;
  Verdict verdict = Verdict::Indeterminate;
  double nu_margin = 0;
};

struct CertificateOptions {
  std::size_t samples = 25;
  double nu_min = 1e-9;
  std::uint64_t seed = 1;
  std::size_t max_attempts = 200;
};

/// Draws a point on the critical manifold, or nothing when the draw fails.
using ManifoldSampler = std::function<std::optional<Assignment>(std::mt19937_64&)>;

/// Hurwitz determinants of a monic polynomial (leading coefficient first).
std::vector<Rational> hurwitz_minors(const std::vector<Rational>& coefficients);
EigenCertificate eigen_certificate(const RFMatrix& m, const ManifoldSampler& sampler,
                                   const CertificateOptions& options = {});
/// Samples the free states and parameters in the positive orthant, fills in
/// the eliminated states and rejects points that leave the orthant or do not
/// satisfy the manifold equations exactly.
ManifoldSampler manifold_sampler(const ReducedSystem& reduced, const SymbolTable& symbols,
                                 const Assignment& fixed = {});
/// D mu P, or G0(x,0) for a standard reduction.
RFMatrix certificate_matrix(const ReducedSystem& reduced);

struct TransportedIntegral {
  RationalFunction value;                 // phi*
  int order = 0;                          // phi(x, eps y*, eps) = eps^order phi* + ...
  bool constant_on_manifold = false;
};

/// phi must be a first integral of the unscaled system (in all grades, eps
/// formal); throws std::invalid_argument with the Lie derivative otherwise.
TransportedIntegral transform_first_integral(const RationalFunction& phi, const EpsilonGradedSystem& sys,
                                             const Partition& part, const Bindings& manifold = {});

/// x - F0 G0^-1 y.
RFVector fast_integrals_approx(const RFMatrix& f0, const RFMatrix& g0, const std::vector<SymbolId>& x,
                               const std::vector<SymbolId>& y);

struct InitialValueResult {
  Bindings point;                         // every state -> value
  std::string method;                     // "exact" or "newton"
  int iterations = 0;
};

class InitialValueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kNewtonTolerance = 1e-12;
constexpr int kNewtonMaxIterations = 100;

/// Intersects {manifold = 0} with the level sets {psi = psi(z0)}. Exact
/// sequential solve first; Newton from z0 when every value is numeric.
InitialValueResult reduced_initial_value(const RFVector& manifold, const RFVector& integrals,
                                         const std::vector<SymbolId>& states, const Bindings& z0,
                                         const Assignment& parameters = {});
/// Fast-system integrals and manifold of a reduction, evaluated at the scaled
/// initial values of `scaled`.
InitialValueResult reduced_initial_value(const ReducedSystem& reduced, const ScaledSystem& scaled,
                                         const Assignment& parameters = {});

/// Initial point of the scaled system as bindings (eps -> 0 limit).
Bindings scaled_initial_point(const ScaledSystem& scaled);

}  // namespace slowfast
