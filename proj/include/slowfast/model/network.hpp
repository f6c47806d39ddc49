#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slowfast/model/system.hpp"

namespace slowfast {

struct Reaction {
  std::vector<unsigned> reactants;  // stoichiometry per species
  std::vector<unsigned> products;
  SymbolId rate = 0;
  int eps_order = 0;  // 0 or 1
};

/// Mass-action network over the species of `symbols`.
struct ReactionNetwork {
  SymbolTable symbols;
  std::vector<SymbolId> species;
  std::vector<Reaction> reactions;

  /// Adds a reaction from name -> coefficient maps; the rate is interned as a parameter.
  void add(const std::vector<std::pair<std::string, unsigned>>& reactants,
           const std::vector<std::pair<std::string, unsigned>>& products, const std::string& rate, int eps_order = 0);
};

ReactionNetwork make_network(const std::vector<std::string>& species);

/// Grade g collects rate * prod z^reactants * (products - reactants) over the
/// reactions whose rate constant has eps order g. Initial values default to 0.
EpsilonGradedSystem compile_network(const ReactionNetwork& net);

/// One transport contribution: eps^order * rate * (Theta . source) added to the
/// target species in every compartment. Theta is the 1-D Neumann Laplacian
/// unless an explicit N x N matrix is given.
struct TransportTerm {
  std::string target;
  std::string source;
  int eps_order = 1;
  Polynomial rate;
  std::optional<QMatrix> matrix;
};

struct TransportSpec {
  std::size_t compartments = 2;
  std::vector<TransportTerm> terms;

  /// Shorthand for a species diffusing with rate parameter `rate` (interned
  /// into the local system's table).
  void diffuse(SymbolTable& symbols, const std::string& species, const std::string& rate, int eps_order);
};

constexpr std::size_t kMaxCompartments = 64;

/// Rows of the discrete Neumann Laplacian: s_{a-1} - 2 s_a + s_{a+1} with
/// s_0 = s_1 and s_{N+1} = s_N.
QMatrix neumann_laplacian(std::size_t n);

/// Replicates `local` over N compartments and adds the transport terms.
/// States are ordered species-major and named <species>_<a> (a = 1..N).
/// A named initial constant c of the local system becomes c_<a>.
EpsilonGradedSystem build_transport_system(const EpsilonGradedSystem& local, const TransportSpec& spec);
EpsilonGradedSystem build_transport_system(const ReactionNetwork& net, const TransportSpec& spec);

/// Name of species `species` in compartment `a` (1-based).
std::string compartment_name(const std::string& species, std::size_t a);

}  // namespace slowfast
