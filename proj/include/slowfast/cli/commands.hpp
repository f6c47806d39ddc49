#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "slowfast/model/model_file.hpp"
#include "slowfast/reduction/reduction.hpp"
#include "slowfast/sim/sim.hpp"

namespace slowfast::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kConsistencyFailure = 2,
  kReductionRefused = 3,
  kNumericFailure = 4,
};

/// Bad command-line input; maps to kUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string builtin;
  std::string model_file;
  std::vector<std::string> fast;            // empty: the model's default
  std::vector<std::string> fast_transport;
  std::map<std::string, int> iv_orders;     // state -> eps order of its initial value
  std::map<std::string, std::string> params;  // name -> rational or decimal text
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string out_dir;
  std::string mode = "auto";                // auto, standard, general, nonstandard
  std::vector<std::string> preassigned;     // ltc: sets to derive parameter conditions for
  std::vector<double> ladder = halving_ladder(1e-1, 1e-3);
  double t1 = 0.1;
  double t2 = 2.0;
  LinexDemoOptions demo;
};

/// "1e-1:1e-3" or "1e-1:1e-3:half" is a halving ladder; otherwise a comma list.
std::vector<double> parse_ladder(const std::string& text);
/// "a,b,c" -> {"a","b","c"}; empty items are dropped.
std::vector<std::string> split_list(const std::string& text);

/// The model after fast transport and initial-order overrides.
Model load_model(const RunOptions& options);

/// Model defaults, then 1 for anything unset, then overrides. Every
/// parameter symbol of `symbols` is bound.
Assignment numeric_parameters(const Model& model, const SymbolTable& symbols,
                              const std::map<std::string, std::string>& overrides);

struct ReductionRun {
  Model model;
  EpsilonGradedSystem system;
  Partition partition;
  LtcVerdict ltc;
  ScaledSystem scaled;
  ReducedSystem reduced;
  EigenCertificate certificate;
  std::vector<std::string> notes;           // fallbacks taken
};

/// Loads, checks and reduces according to `options.mode`. Throws
/// ReductionRefused or DecompositionError when no route applies.
ReductionRun run_reduction(const RunOptions& options);

nlohmann::json reduction_json(const ReductionRun& run, const Bindings* iv);

/// Each command writes its report to `out` and returns an ExitCode.
int cmd_check(const RunOptions& options, std::ostream& out);
int cmd_ltc(const RunOptions& options, std::ostream& out);
int cmd_reduce(const RunOptions& options, std::ostream& out);
int cmd_converge(const RunOptions& options, std::ostream& out);
int cmd_demo_linex(const RunOptions& options, std::ostream& out);

/// Runs a command and maps exceptions to exit codes, with messages on `err`.
int dispatch(const std::string& command, const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace slowfast::cli
