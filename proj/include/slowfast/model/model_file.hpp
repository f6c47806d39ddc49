#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slowfast/model/network.hpp"

namespace slowfast {

/// User-supplied decomposition h0 = P mu, as polynomial text in the scaled
/// system's symbols.
struct DecompositionHint {
  std::vector<std::vector<std::string>> p;  // n rows
  std::vector<std::string> mu;
};

/// A model as read from a file or a builtin: the local (per-compartment)
/// system, optional transport, states to eliminate through first integrals,
/// and the default fast set.
struct Model {
  std::string name;
  std::string description;
  EpsilonGradedSystem local;
  std::optional<TransportSpec> transport;
  std::vector<std::string> eliminate;
  std::vector<std::string> fast;
  std::optional<DecompositionHint> decomposition;
  /// Default numeric values used by simulations (name -> value).
  std::map<std::string, Rational> values;
};

/// Applies transport and then the eliminations.
EpsilonGradedSystem assemble(const Model& model);

/// Species names may name a species of the local system; with transport they
/// expand to all of its compartment copies.
Partition resolve_partition(const EpsilonGradedSystem& sys, const std::vector<std::string>& names);

/// Switches the self-transport of the listed species to eps order 0.
void set_fast_transport(Model& model, const std::vector<std::string>& species);

/// Overrides the eps order of a state's initial value.
void set_initial_order(Model& model, const std::string& state, int order);

Model load_model_json(const std::string& text);
Model load_model_file(const std::string& path);

std::vector<std::string> builtin_names();
Model builtin_model(const std::string& name);
/// The embedded JSON source of a builtin.
const std::string& builtin_source(const std::string& name);

}  // namespace slowfast
