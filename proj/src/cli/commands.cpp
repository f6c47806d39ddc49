#include "slowfast/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "slowfast/ltc/ltc_search.hpp"
#include "slowfast/symbolic/parser.hpp"

namespace slowfast::cli {

namespace {

using nlohmann::json;

class ConsistencyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? sep : "") + items[k];
  return out;
}

std::vector<std::string> names_of(const EpsilonGradedSystem& sys, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(sys.symbols.name(sys.states[i]));
  return out;
}

std::vector<std::string> names_of(const SymbolTable& t, const std::vector<SymbolId>& ids) {
  std::vector<std::string> out;
  for (auto id : ids) out.push_back(t.name(id));
  return out;
}

std::string render(const RationalFunction& f, const SymbolTable& t) { return f.to_string(t); }

json rf_json(const RationalFunction& f, const SymbolTable& t) {
  return {{"text", f.to_string(t)},
          {"numerator", f.numerator().to_string(t)},
          {"denominator", f.denominator().to_string(t)}};
}

json matrix_json(const RFMatrix& m, const SymbolTable& t) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string(t));
    rows.push_back(row);
  }
  return rows;
}

Rational parse_number(const std::string& name, const std::string& text) {
  SymbolTable empty;
  try {
    const Polynomial p = parse_polynomial(text, strict_resolver(empty));
    if (p.is_constant()) return p.constant_term();
  } catch (const std::exception&) {
  }
  throw UsageError("value of " + name + " is not a number: '" + text + "'");
}

void write_file(const RunOptions& o, const std::string& name, const std::string& content) {
  if (o.out_dir.empty()) return;
  std::filesystem::create_directories(o.out_dir);
  std::ofstream f(std::filesystem::path(o.out_dir) / name);
  if (!f) throw std::runtime_error("cannot write " + name + " in " + o.out_dir);
  f << content;
}

Partition partition_for(const RunOptions& o, const Model& model, const EpsilonGradedSystem& sys) {
  const std::vector<std::string>& names = o.fast.empty() ? model.fast : o.fast;
  if (names.empty()) throw UsageError("empty partition: name the fast states with --fast");
  try {
    return resolve_partition(sys, names);
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid partition: ") + e.what());
  }
}

std::string iv_text(const ScaledSystem& scaled) {
  const auto& sys = scaled.system;
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    const auto& iv = sys.initial_values[i];
    std::string s = sys.symbols.name(sys.states[i]) + "(0) = " + iv.base.to_string(sys.symbols);
    if (iv.eps_order != 0) s += " * eps^" + std::to_string(iv.eps_order);
    parts.push_back(s);
  }
  return join(parts, ", ");
}

Decomposition hinted_decomposition(const DecompositionHint& hint, const ScaledSystem& scaled, const Assignment& sample) {
  const auto& sys = scaled.system;
  const auto resolve = strict_resolver(sys.symbols);
  if (hint.p.size() != sys.dimension()) throw UsageError("the supplied P has the wrong number of rows");
  RFMatrix p(sys.dimension(), hint.mu.size());
  for (std::size_t i = 0; i < hint.p.size(); ++i) {
    if (hint.p[i].size() != hint.mu.size()) throw UsageError("the supplied P and mu do not match in size");
    for (std::size_t k = 0; k < hint.mu.size(); ++k) p(i, k) = parse_polynomial(hint.p[i][k], resolve);
  }
  RFVector mu;
  for (const auto& m : hint.mu) mu.push_back(parse_polynomial(m, resolve));
  return supplied_decomposition(sys.grade(0), sys.states, p, mu, sample);
}

Assignment explicit_parameters(const RunOptions& o, const SymbolTable& t) {
  Assignment a;
  for (const auto& [name, text] : o.params) {
    const auto id = t.find(name);
    if (!id || t.kind(*id) != SymbolKind::Parameter) throw UsageError("unknown parameter: " + name);
    a[*id] = parse_number(name, text);
  }
  return a;
}

void print_field(std::ostream& out, const SymbolTable& t, const std::vector<SymbolId>& states, const RFVector& field) {
  for (std::size_t i = 0; i < states.size(); ++i) out << "  " << t.name(states[i]) << "' = " << render(field[i], t) << '\n';
}

std::optional<InitialValueResult> try_initial_value(const ReductionRun& run, const Assignment& numeric,
                                                    std::string& note) {
  try {
    return reduced_initial_value(run.reduced, run.scaled);
  } catch (const std::exception&) {
  }
  try {
    return reduced_initial_value(run.reduced, run.scaled, numeric);
  } catch (const std::exception& e) {
    note = e.what();
  }
  return std::nullopt;
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << std::scientific << v;
  return s.str();
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_ladder(const std::string& text) {
  const auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("invalid ladder value '" + s + "'");
    }
    if (used != s.size()) throw UsageError("invalid ladder value '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("ladder range must be max:min[:half]");
    if (parts.size() == 3 && parts[2] != "half" && parts[2] != "\xe5\x8d\x8a")
      throw UsageError("only halving ladders are supported in range form");
    try {
      out = halving_ladder(number(parts[0]), number(parts[1]));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    for (const auto& s : split_list(text)) out.push_back(number(s));
  }
  if (out.empty()) throw UsageError("empty eps ladder");
  for (std::size_t k = 0; k < out.size(); ++k)
    if (!(out[k] > 0) || (k > 0 && !(out[k] < out[k - 1])))
      throw UsageError("the eps ladder must be positive and strictly decreasing");
  return out;
}

Model load_model(const RunOptions& o) {
  if (o.builtin.empty() == o.model_file.empty()) throw UsageError("give exactly one of --builtin or --model");
  Model model;
  if (!o.builtin.empty()) {
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), o.builtin) == names.end())
      throw UsageError("unknown builtin '" + o.builtin + "' (available: " + join(names, ", ") + ")");
    model = builtin_model(o.builtin);
  } else {
    model = load_model_file(o.model_file);
  }
  if (!o.fast_transport.empty()) set_fast_transport(model, o.fast_transport);
  for (const auto& [state, order] : o.iv_orders) set_initial_order(model, state, order);
  return model;
}

Assignment numeric_parameters(const Model& model, const SymbolTable& symbols,
                              const std::map<std::string, std::string>& overrides) {
  Assignment a;
  for (auto id : symbols.of_kind(SymbolKind::Parameter)) {
    auto it = model.values.find(symbols.name(id));
    a[id] = it != model.values.end() ? it->second : Rational(1);
  }
  for (const auto& [name, text] : overrides) {
    const auto id = symbols.find(name);
    if (!id || symbols.kind(*id) != SymbolKind::Parameter) throw UsageError("unknown parameter: " + name);
    a[*id] = parse_number(name, text);
  }
  return a;
}

ReductionRun run_reduction(const RunOptions& o) {
  static const std::vector<std::string> modes{"auto", "standard", "general", "nonstandard"};
  if (std::find(modes.begin(), modes.end(), o.mode) == modes.end())
    throw UsageError("unknown mode '" + o.mode + "' (auto, standard, general, nonstandard)");
  ReductionRun run;
  run.model = load_model(o);
  run.system = assemble(run.model);
  run.partition = partition_for(o, run.model, run.system);
  run.ltc = check_ltc(run.system, run.partition);
  if (run.ltc.kind == LtcKind::Inconsistent) throw ConsistencyFailure("the scaling is not locally consistent (" +
                             run.system.symbols.name(run.system.states[*run.ltc.witness_row]) +
                             "' = " + run.ltc.witness.to_string(run.system.symbols) + " at y = 0)");
  run.scaled = apply_scaling(run.system, run.partition);
  std::mt19937_64 rng(o.seed);
  const Assignment sample = generic_sample(run.system.symbols, rng);

  bool done = false;
  if (o.mode == "auto" || o.mode == "standard") {
    try {
      run.reduced = standard_reduce(run.system, run.partition);
      done = true;
    } catch (const ReductionRefused& e) {
      if (o.mode == "standard") throw;
      run.notes.push_back(std::string("standard reduction refused: ") + e.what());
    }
  }
  if (!done && (o.mode == "auto" || o.mode == "general")) {
    try {
      const Decomposition dec = run.model.decomposition
                                    ? hinted_decomposition(*run.model.decomposition, run.scaled, sample)
                                    : find_decomposition(run.scaled.system.grade(0), run.scaled.system.states, sample);
      run.reduced = reduce(run.scaled, dec);
      done = true;
    } catch (const DecompositionError& e) {
      if (o.mode == "general") throw;
      run.notes.push_back(std::string("no decomposition found: ") + e.what());
    }
  }
  if (!done) run.reduced = nonstandard_reduce(run.scaled, sample);

  CertificateOptions copt;
  copt.seed = o.seed;
  const Assignment fixed = explicit_parameters(o, run.system.symbols);
  run.certificate = eigen_certificate(certificate_matrix(run.reduced),
                                      manifold_sampler(run.reduced, run.system.symbols, fixed), copt);
  return run;
}

json reduction_json(const ReductionRun& run, const Bindings* iv) {
  const SymbolTable& t = run.system.symbols;
  const ReducedSystem& r = run.reduced;
  json j;
  j["model"] = run.model.name;
  j["slow"] = names_of(run.system, run.partition.slow);
  j["fast"] = names_of(run.system, run.partition.fast);
  j["ltc"] = to_string(run.ltc.kind);
  j["iv_consistent"] = run.scaled.iv_consistent;
  j["kind"] = r.kind;
  j["notes"] = run.notes;
  j["states"] = names_of(t, r.states);
  json field = json::object();
  for (std::size_t i = 0; i < r.states.size(); ++i) field[t.name(r.states[i])] = rf_json(r.field[i], t);
  j["field"] = field;
  json manifold = json::array();
  for (const auto& m : r.manifold) manifold.push_back(rf_json(m, t));
  j["manifold"] = manifold;
  j["manifold_dimension"] = r.manifold_dimension;
  json elim;
  elim["complete"] = r.eliminated.complete;
  elim["states"] = names_of(t, r.eliminated.states);
  json ef = json::object();
  for (std::size_t i = 0; i < r.eliminated.states.size(); ++i)
    ef[t.name(r.eliminated.states[i])] = rf_json(r.eliminated.field[i], t);
  elim["field"] = ef;
  json solved = json::object();
  for (const auto& [id, f] : r.eliminated.solved) solved[t.name(id)] = rf_json(f, t);
  elim["solved"] = solved;
  j["eliminated"] = elim;
  if (r.decomposition) {
    const auto& d = *r.decomposition;
    json dj;
    dj["method"] = d.method;
    dj["P"] = matrix_json(d.p, t);
    json mu = json::array();
    for (const auto& m : d.mu) mu.push_back(m.to_string(t));
    dj["mu"] = mu;
    dj["DmuP"] = matrix_json(d.dmu_p, t);
    j["decomposition"] = dj;
  }
  json cert;
  cert["verdict"] = to_string(run.certificate.verdict);
  cert["method"] = run.certificate.method;
  cert["samples"] = run.certificate.samples.size();
  cert["rejected"] = run.certificate.rejected;
  cert["nu_margin"] = run.certificate.nu_margin;
  cert["matrix"] = matrix_json(run.certificate.matrix, t);
  j["certificate"] = cert;
  if (iv) {
    json ivj = json::object();
    for (const auto& [id, f] : *iv) ivj[t.name(id)] = rf_json(f, t);
    j["initial_value"] = ivj;
  }
  return j;
}

int cmd_check(const RunOptions& o, std::ostream& out) {
  const Model model = load_model(o);
  const EpsilonGradedSystem sys = assemble(model);
  const Partition part = partition_for(o, model, sys);
  const LtcVerdict v = check_ltc(sys, part);
  const bool scalable = v.kind != LtcKind::Inconsistent;
  bool iv_ok = false;
  std::string ivs;
  if (scalable) {
    const ScaledSystem scaled = apply_scaling(sys, part);
    iv_ok = scaled.iv_consistent;
    ivs = iv_text(scaled);
  }
  std::string witness;
  if (v.witness_row) witness = sys.symbols.name(sys.states[*v.witness_row]) + ": " + v.witness.to_string(sys.symbols);
  const bool ok = v.kind == LtcKind::FullLtc && iv_ok;
  if (o.format == "json") {
    json j{{"model", model.name},
           {"slow", names_of(sys, part.slow)},
           {"fast", names_of(sys, part.fast)},
           {"ltc", to_string(v.kind)},
           {"iv_consistent", iv_ok},
           {"ok", ok}};
    if (v.witness_row) j["witness"] = witness;
    out << j.dump(2) << '\n';
  } else {
    out << "model: " << model.name << '\n';
    out << "slow: {" << join(names_of(sys, part.slow), ",") << "}  fast: {" << join(names_of(sys, part.fast), ",")
        << "}\n";
    out << "consistency: " << to_string(v.kind) << '\n';
    if (v.witness_row) out << "  nonvanishing at y = 0: " << witness << '\n';
    if (scalable) {
      out << "scaled initial values: " << ivs << '\n';
      out << "initial values: " << (iv_ok ? "consistent" : "inconsistent") << '\n';
      if (!iv_ok) out << "warning: a fast initial value is not of order eps; the reduction describes the limit only "
                         "after an initial layer that does not vanish\n";
    }
  }
  return ok ? kSuccess : kConsistencyFailure;
}

int cmd_ltc(const RunOptions& o, std::ostream& out) {
  const Model model = load_model(o);
  const EpsilonGradedSystem sys = assemble(model);
  const LtcReport rep = minimal_ltc_sets(sys);
  const auto& t = sys.symbols;
  std::vector<std::string> sets;
  for (const auto& s : rep.minimal_sets) sets.push_back(format_index_set(s, sys.states, t));

  json conditions = json::array();
  std::ostringstream text;
  for (const auto& list : o.preassigned) {
    IndexSet j;
    for (const auto& name : split_list(list)) {
      try {
        j.push_back(sys.require_index(name));
      } catch (const std::exception&) {
        throw UsageError("unknown state in --preassigned: " + name);
      }
    }
    std::sort(j.begin(), j.end());
    j.erase(std::unique(j.begin(), j.end()), j.end());
    if (j.empty() || j.size() >= sys.dimension()) throw UsageError("a preassigned set must be a nonempty proper subset");
    for (bool full : {false, true}) {
      const ParameterConditions c = preassigned_ltc_conditions(sys.grade(0), sys.states, j, sys.nonnegative, full);
      std::vector<std::string> van, extra, solved, unsolved;
      for (const auto& p : c.vanishing) van.push_back(p.to_string(t) + " = 0");
      for (const auto& p : c.full_ltc_extra) extra.push_back(p.to_string(t) + " = 0");
      if (c.solved)
        for (const auto& [id, v] : *c.solved) solved.push_back(t.name(id) + " = " + rational_to_string(v));
      for (const auto& p : c.unsolved) unsolved.push_back(p.to_string(t) + " = 0");
      const std::string label = format_index_set(j, sys.states, t) + (full ? " (full)" : " (local)");
      conditions.push_back({{"set", format_index_set(j, sys.states, t)},
                            {"full", full},
                            {"conditions", van},
                            {"full_extra", extra},
                            {"solved", solved},
                            {"unsolved", unsolved},
                            {"infeasible", c.infeasible}});
      text << "  " << label << ": ";
      if (c.infeasible) text << "infeasible";
      else if (van.empty() && extra.empty()) text << "no conditions";
      else text << join(van, ", ") << (extra.empty() ? "" : (van.empty() ? "" : ", ") + join(extra, ", "));
      if (!solved.empty()) text << "  [" << join(solved, ", ") << "]";
      text << '\n';
    }
  }

  if (o.format == "json") {
    json j{{"model", model.name},
           {"minimal_sets", sets},
           {"slow_candidates", format_index_set(rep.slow_candidates, sys.states, t)},
           {"checked", rep.checked_count},
           {"complete", rep.complete},
           {"method", rep.method}};
    if (!o.preassigned.empty()) j["preassigned"] = conditions;
    out << j.dump(2) << '\n';
  } else {
    out << "model: " << model.name << '\n';
    out << "minimal LTC sets: " << join(sets, ", ") << '\n';
    out << "search: " << rep.method << ", " << rep.checked_count << " checks"
        << (rep.complete ? "" : " (incomplete: search limit reached)") << '\n';
    if (!o.preassigned.empty()) out << "parameter conditions:\n" << text.str();
  }
  return kSuccess;
}

int cmd_reduce(const RunOptions& o, std::ostream& out) {
  const ReductionRun run = run_reduction(o);
  const SymbolTable& t = run.system.symbols;
  const ReducedSystem& r = run.reduced;
  std::string iv_note;
  const auto iv = try_initial_value(run, numeric_parameters(run.model, t, o.params), iv_note);
  const json j = reduction_json(run, iv ? &iv->point : nullptr);
  write_file(o, "reduction.json", j.dump(2) + "\n");

  if (o.format == "json") {
    out << j.dump(2) << '\n';
  } else {
    out << "model: " << run.model.name << '\n';
    out << "slow: {" << join(names_of(run.system, run.partition.slow), ",") << "}  fast: {"
        << join(names_of(run.system, run.partition.fast), ",") << "}\n";
    out << "consistency: " << to_string(run.ltc.kind) << ", initial values "
        << (run.scaled.iv_consistent ? "consistent" : "inconsistent") << '\n';
    for (const auto& n : run.notes) out << "note: " << n << '\n';
    out << "reduction: " << r.kind << " (manifold dimension " << r.manifold_dimension << ")\n";
    if (r.decomposition && r.kind != "standard") {
      const auto& d = *r.decomposition;
      out << "decomposition (" << d.method << "):\n";
      for (std::size_t i = 0; i < d.p.rows(); ++i) {
        std::vector<std::string> row;
        for (std::size_t k = 0; k < d.p.cols(); ++k) row.push_back(d.p(i, k).to_string(t));
        out << "  P[" << t.name(d.vars[i]) << "] = (" << join(row, ", ") << ")\n";
      }
      for (std::size_t k = 0; k < d.mu.size(); ++k) out << "  mu" << k + 1 << " = " << d.mu[k].to_string(t) << '\n';
    }
    out << "reduced system:\n";
    print_field(out, t, r.states, r.field);
    out << "critical manifold:\n";
    for (const auto& m : r.manifold) out << "  0 = " << render(m, t) << '\n';
    if (r.eliminated.states.size() < r.states.size()) {
      out << "eliminated form" << (r.eliminated.complete ? "" : " (partial)") << ":\n";
      print_field(out, t, r.eliminated.states, r.eliminated.field);
      for (const auto& [id, f] : r.eliminated.solved) out << "  " << t.name(id) << " = " << render(f, t) << '\n';
    }
    out << "eigenvalue certificate: " << to_string(run.certificate.verdict) << " (" << run.certificate.method << ", "
        << run.certificate.samples.size() << " samples)\n";
    if (iv) {
      out << "reduced initial value (" << iv->method << "):\n";
      for (const auto& [id, f] : iv->point) out << "  " << t.name(id) << "(0) = " << render(f, t) << '\n';
    } else {
      out << "reduced initial value: unavailable (" << iv_note << ")\n";
    }
  }
  return run.certificate.verdict == Verdict::Fail ? kReductionRefused : kSuccess;
}

int cmd_converge(const RunOptions& o, std::ostream& out) {
  const ReductionRun run = run_reduction(o);
  const SymbolTable& t = run.system.symbols;
  const Assignment params = numeric_parameters(run.model, t, o.params);
  ConvergenceOptions copt;
  copt.ladder = o.ladder;
  copt.t1 = o.t1;
  copt.t2 = o.t2;
  if (!(o.t2 > o.t1) || o.t1 < 0) throw UsageError("need 0 <= t1 < t2");
  const InitialValueResult iv = reduced_initial_value(run.reduced, run.scaled, params);
  const ConvergenceReport rep = convergence_study(run.scaled, run.reduced, iv.point, params, copt);

  json entries = json::array();
  for (const auto& e : rep.entries) {
    json ej{{"eps", e.eps}, {"ok", e.ok}, {"max_error", e.max_error}, {"errors", e.errors}, {"steps", e.stats.steps}};
    if (!e.ok) ej["failure"] = e.failure;
    entries.push_back(ej);
  }
  json j{{"model", run.model.name},
         {"reduction", run.reduced.kind},
         {"states", rep.states},
         {"t1", rep.t1},
         {"t2", rep.t2},
         {"entries", entries},
         {"strictly_decreasing", rep.strictly_decreasing},
         {"partial", rep.partial},
         {"verdict", rep.verdict}};
  j["order"] = rep.order ? json(*rep.order) : json(nullptr);
  write_file(o, "convergence.json", j.dump(2) + "\n");

  if (!o.out_dir.empty()) {
    // Full trajectory at the finest eps next to the reduced one.
    const double eps = o.ladder.back();
    const Trajectory full = integrate(slow_time_field(run.scaled, params, eps),
                                      scaled_initial_values(run.scaled, params, eps), 0.0, o.t2, copt.integrator);
    const ReducedSolution red(run.scaled, run.reduced, iv.point, params, o.t2, copt.integrator);
    std::ostringstream csv;
    csv << "tau";
    for (const auto& n : rep.states) csv << ',' << n;
    for (const auto& n : rep.states) csv << ',' << n << "_reduced";
    csv << '\n' << std::setprecision(17);
    const std::size_t points = 401;
    for (std::size_t k = 0; k < points; ++k) {
      const double tau = o.t2 * static_cast<double>(k) / static_cast<double>(points - 1);
      csv << tau;
      for (double v : full.at(tau)) csv << ',' << v;
      for (double v : red.at(tau)) csv << ',' << v;
      csv << '\n';
    }
    write_file(o, "trajectory.csv", csv.str());
  }

  if (o.format == "json") {
    out << j.dump(2) << '\n';
  } else {
    out << "model: " << run.model.name << " (" << run.reduced.kind << " reduction)\n";
    for (const auto& n : run.notes) out << "note: " << n << '\n';
    out << "sup-norm error on [" << rep.t1 << ", " << rep.t2 << "] over " << join(rep.states, ",") << ":\n";
    for (const auto& e : rep.entries) {
      out << "  eps = " << format_double(e.eps) << "  ";
      if (e.ok) out << "error = " << format_double(e.max_error);
      else out << "failed: " << e.failure;
      out << '\n';
    }
    out << "fitted order: " << (rep.order ? format_double(*rep.order) : std::string("n/a")) << '\n';
    out << "strictly decreasing: " << (rep.strictly_decreasing ? "yes" : "no") << '\n';
    out << "verdict: " << rep.verdict << '\n';
  }
  return rep.verdict == "converges" ? kSuccess : kNumericFailure;
}

int cmd_demo_linex(const RunOptions& o, std::ostream& out) {
  LinexDemoOptions d = o.demo;
  d.ladder = o.ladder;
  LinexDemoReport rep;
  try {
    rep = iv_inconsistency_demo(d);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json rows = json::array();
  std::ostringstream csv;
  csv << "eps,x,x_red,discrepancy\n" << std::setprecision(17);
  for (const auto& r : rep.rows) {
    rows.push_back({{"eps", r.eps}, {"x", r.x}, {"x_red", r.x_red}, {"discrepancy", r.discrepancy}});
    csv << r.eps << ',' << r.x << ',' << r.x_red << ',' << r.discrepancy << '\n';
  }
  json j{{"a", d.a},   {"b", d.b},         {"c", d.c},
         {"x0", d.x0}, {"y0", d.y0},       {"tau", d.tau},
         {"consistent", d.consistent},     {"rows", rows},
         {"extrapolated", rep.extrapolated}, {"closed_form", rep.closed_form},
         {"verdict", rep.verdict}};
  write_file(o, "demo.json", j.dump(2) + "\n");
  write_file(o, "demo.csv", csv.str());
  if (o.format == "json") {
    out << j.dump(2) << '\n';
  } else {
    out << "x' = " << d.a << " x + " << d.b << " y*,  eps y*' = " << d.c << " y*,  x(0) = " << d.x0 << ", y*(0) = "
        << (d.consistent ? "y0" : "y0/eps") << " with y0 = " << d.y0 << '\n';
    out << "discrepancy x(tau) - x_red(tau) at tau = " << d.tau << ":\n";
    for (const auto& r : rep.rows)
      out << "  eps = " << format_double(r.eps) << "  discrepancy = " << format_double(r.discrepancy) << '\n';
    out << "extrapolated limit: " << format_double(rep.extrapolated) << '\n';
    out << "closed form: " << format_double(rep.closed_form) << '\n';
    out << "verdict: " << rep.verdict << '\n';
  }
  return kSuccess;
}

int dispatch(const std::string& command, const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    if (o.format != "text" && o.format != "json") throw UsageError("--format must be text or json");
    if (command == "check") return cmd_check(o, out);
    if (command == "ltc") return cmd_ltc(o, out);
    if (command == "reduce") return cmd_reduce(o, out);
    if (command == "converge") return cmd_converge(o, out);
    if (command == "demo-linex") return cmd_demo_linex(o, out);
    throw UsageError("unknown command '" + command + "'");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NonstandardError& e) {
    err << "reduction refused: " << e.what() << '\n';
    return kReductionRefused;
  } catch (const ReductionRefused& e) {
    err << "reduction refused: " << e.what() << '\n';
    return kReductionRefused;
  } catch (const DecompositionError& e) {
    err << "reduction refused: " << e.what() << '\n';
    return kReductionRefused;
  } catch (const ConsistencyFailure& e) {
    err << "consistency failure: " << e.what() << '\n';
    return kConsistencyFailure;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const StiffnessError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const EvaluationError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const InitialValueError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace slowfast::cli
