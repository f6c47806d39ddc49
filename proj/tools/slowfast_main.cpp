#include <CLI11.hpp>

#include <iostream>

#include "slowfast/cli/commands.hpp"

using namespace slowfast;

namespace {

struct Raw {
  std::string positional;
  std::string fast;
  std::string fast_transport;
  std::vector<std::string> params;
  std::vector<std::string> iv_orders;
  std::string ladder;
};

void model_options(CLI::App* cmd, cli::RunOptions& o, Raw& raw) {
  cmd->add_option("source", raw.positional, "Builtin name or model file");
  cmd->add_option("--builtin", o.builtin, "Builtin model name");
  cmd->add_option("--model", o.model_file, "Model file (JSON)");
  cmd->add_option("--fast-transport", raw.fast_transport, "Species whose transport is fast (comma list)");
  cmd->add_option("--iv-order", raw.iv_orders, "Override the eps order of an initial value, state=order");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

void partition_options(CLI::App* cmd, cli::RunOptions& o, Raw& raw) {
  cmd->add_option("--fast", raw.fast, "Fast states (comma list); default from the model");
  cmd->add_option("--seed", o.seed, "Seed for random samples");
  cmd->add_option("--param", raw.params, "Numeric parameter value, name=value (default 1)");
  cmd->add_option("--out", o.out_dir, "Directory for JSON and CSV reports");
}

std::pair<std::string, std::string> split_pair(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw cli::UsageError("expected name=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

void finish(cli::RunOptions& o, const Raw& raw, bool fast_given) {
  if (!raw.positional.empty()) {
    if (!o.builtin.empty() || !o.model_file.empty()) throw cli::UsageError("model given twice");
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), raw.positional) != names.end()) o.builtin = raw.positional;
    else o.model_file = raw.positional;
  }
  if (fast_given) {
    o.fast = cli::split_list(raw.fast);
    if (o.fast.empty()) throw cli::UsageError("empty partition: --fast names no state");
  }
  o.fast_transport = cli::split_list(raw.fast_transport);
  for (const auto& p : raw.params) o.params.insert(split_pair(p));
  for (const auto& p : raw.iv_orders) {
    const auto [state, order] = split_pair(p);
    try {
      o.iv_orders[state] = std::stoi(order);
    } catch (const std::exception&) {
      throw cli::UsageError("invalid order in --iv-order " + p);
    }
  }
  if (!raw.ladder.empty()) o.ladder = cli::parse_ladder(raw.ladder);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate scalings and Tikhonov-Fenichel reductions of polynomial ODEs"};
  app.require_subcommand(1);
  cli::RunOptions o;
  Raw raw;

  auto* check = app.add_subcommand("check", "Check local (Tikhonov) and initial-value consistency of a partition");
  model_options(check, o, raw);
  partition_options(check, o, raw);

  auto* ltc = app.add_subcommand("ltc", "Enumerate minimal LTC sets");
  model_options(ltc, o, raw);
  ltc->add_option("--preassigned", o.preassigned, "Fast set (comma list) to derive parameter conditions for");

  auto* reduce = app.add_subcommand("reduce", "Compute the reduced system");
  model_options(reduce, o, raw);
  partition_options(reduce, o, raw);
  reduce->add_option("--mode", o.mode, "Reduction route")
      ->check(CLI::IsMember({"auto", "standard", "general", "nonstandard"}));

  auto* converge = app.add_subcommand("converge", "Compare full and reduced trajectories over an eps ladder");
  model_options(converge, o, raw);
  partition_options(converge, o, raw);
  converge->add_option("--mode", o.mode, "Reduction route")
      ->check(CLI::IsMember({"auto", "standard", "general", "nonstandard"}));
  converge->add_option("--ladder", raw.ladder, "Eps values: comma list, or max:min[:half] for halving");
  converge->add_option("--t1", o.t1, "Start of the comparison window (slow time)");
  converge->add_option("--t2", o.t2, "End of the comparison window (slow time)");

  auto* demo = app.add_subcommand("demo-linex", "Initial-value inconsistency on x' = a x + b y, eps y' = c y");
  demo->add_option("--a", o.demo.a);
  demo->add_option("--b", o.demo.b);
  demo->add_option("--c", o.demo.c);
  demo->add_option("--x0", o.demo.x0);
  demo->add_option("--y0", o.demo.y0);
  demo->add_option("--tau", o.demo.tau);
  demo->add_flag("--consistent", o.demo.consistent, "Start the fast variable at y0 instead of y0/eps");
  demo->add_option("--ladder", raw.ladder, "Eps values: comma list, or max:min[:half] for halving");
  demo->add_option("--out", o.out_dir, "Directory for JSON and CSV reports");
  demo->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    const bool fast_given = chosen->get_option_no_throw("--fast") && chosen->count("--fast") > 0;
    finish(o, raw, fast_given);
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
  try {
    return cli::dispatch(chosen->get_name(), o, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
}
