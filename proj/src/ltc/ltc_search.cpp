#include "slowfast/ltc/ltc_search.hpp"

#include <algorithm>
#include <functional>

namespace slowfast {

namespace {

// Supports (as index bitmasks) of the state monomials occurring in h0.
std::vector<std::uint64_t> supports(const PolyVector& h0, const std::vector<SymbolId>& states, unsigned* degree) {
  if (states.size() > 64) throw std::invalid_argument("LTC search supports at most 64 states");
  std::map<SymbolId, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = i;
  std::set<std::uint64_t> seen;
  unsigned deg = 0;
  const auto is_state = [&index](SymbolId id) { return index.count(id) > 0; };
  for (const auto& p : h0) {
    for (const auto& [m, coeff] : p.split(is_state)) {
      std::uint64_t mask = 0;
      for (const auto& [id, e] : m.factors()) mask |= std::uint64_t{1} << index.at(id);
      deg = std::max(deg, m.degree());
      seen.insert(mask);
    }
  }
  if (degree) *degree = deg;
  return {seen.begin(), seen.end()};
}

IndexSet set_of(std::uint64_t mask, std::size_t n) {
  IndexSet s;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1) s.push_back(i);
  return s;
}

// A complement C is admissible iff no monomial support lies inside C.
bool admissible(std::uint64_t complement, const std::vector<std::uint64_t>& supp) {
  for (auto s : supp)
    if ((s & ~complement) == 0) return false;
  return true;
}

Polynomial normalize_condition(const Polynomial& p) {
  if (p.is_zero()) return p;
  Rational lead = p.leading_term().coefficient;
  return p.scaled(1 / lead);
}

}  // namespace

bool is_ltc_set(const PolyVector& h0, const std::vector<SymbolId>& states, const IndexSet& j) {
  if (j.empty() || j.size() >= states.size()) throw std::invalid_argument("LTC set must be a nonempty proper subset");
  Assignment zero;
  for (auto i : j) zero[states.at(i)] = 0;
  return std::all_of(h0.begin(), h0.end(), [&zero](const Polynomial& p) { return p.evaluate(zero).is_zero(); });
}

IndexSet candidate_slow_set(const PolyVector& h0, const std::vector<SymbolId>& states) {
  const auto supp = supports(h0, states, nullptr);
  IndexSet s;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    if (std::find(supp.begin(), supp.end(), bit) == supp.end()) s.push_back(i);
  }
  return s;
}

LtcReport minimal_ltc_sets(const PolyVector& h0, const std::vector<SymbolId>& states, unsigned degree_cap,
                           std::uint64_t limit) {
  const std::size_t n = states.size();
  unsigned degree = 0;
  const auto supp = supports(h0, states, &degree);
  LtcReport report;
  report.slow_candidates = candidate_slow_set(h0, states);
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  // A constant term rules out every LTC set.
  if (std::find(supp.begin(), supp.end(), 0) != supp.end()) {
    report.method = "constant term";
    return report;
  }
  const IndexSet& cand = report.slow_candidates;
  std::vector<std::uint64_t> maximal;

  if (degree <= std::min(degree_cap, 2u)) {
    report.method = "clique";
    // i ~ j iff z_i z_j does not occur; admissible complements are cliques in S.
    auto compatible = [&supp](std::size_t i, std::size_t j) {
      const std::uint64_t pair = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
      return std::find(supp.begin(), supp.end(), pair) == supp.end();
    };
    // Bron-Kerbosch without pivoting, candidates in ascending order.
    std::function<void(std::uint64_t, IndexSet, IndexSet)> expand = [&](std::uint64_t r, IndexSet p, IndexSet x) {
      ++report.checked_count;
      if (p.empty() && x.empty()) {
        if (r != 0) maximal.push_back(r);
        return;
      }
      while (!p.empty()) {
        const std::size_t v = p.front();
        IndexSet np, nx;
        for (auto u : p)
          if (u != v && compatible(u, v)) np.push_back(u);
        for (auto u : x)
          if (compatible(u, v)) nx.push_back(u);
        expand(r | (std::uint64_t{1} << v), np, nx);
        p.erase(p.begin());
        x.push_back(v);
      }
    };
    expand(0, cand, {});
  } else {
    report.method = "enumeration";
    // Admissibility is inherited by subsets, so a DFS over growing complements
    // in ascending index order visits every admissible complement once.
    std::function<void(std::uint64_t, std::size_t)> dfs = [&](std::uint64_t c, std::size_t start) {
      for (std::size_t k = start; k < cand.size(); ++k) {
        if (report.checked_count >= limit) {
          report.complete = false;
          return;
        }
        const std::uint64_t next = c | (std::uint64_t{1} << cand[k]);
        ++report.checked_count;
        if (!admissible(next, supp)) continue;
        dfs(next, k + 1);
      }
      if (c == 0) return;
      // c is maximal iff no candidate outside it can be added.
      for (auto i : cand) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        if (!(c & bit) && admissible(c | bit, supp)) return;
      }
      maximal.push_back(c);
    };
    dfs(0, 0);
  }

  std::set<IndexSet> result;
  for (auto c : maximal) {
    if (c == all) {
      // h0 = 0: every singleton is an LTC set.
      for (std::size_t i = 0; i < n; ++i) result.insert(IndexSet{i});
    } else {
      result.insert(set_of(all & ~c, n));
    }
  }
  report.minimal_sets.assign(result.begin(), result.end());
  return report;
}

LtcReport minimal_ltc_sets(const EpsilonGradedSystem& sys) { return minimal_ltc_sets(sys.grade(0), sys.states); }

ParameterConditions preassigned_ltc_conditions(const PolyVector& h, const std::vector<SymbolId>& states,
                                               const IndexSet& j, const std::set<SymbolId>& nonnegative,
                                               bool full_ltc) {
  if (h.size() != states.size()) throw std::invalid_argument("field and state list differ in length");
  std::set<SymbolId> jvars;
  for (auto i : j) jvars.insert(states.at(i));
  std::set<SymbolId> state_set(states.begin(), states.end());
  const auto is_state = [&state_set](SymbolId id) { return state_set.count(id) > 0; };

  ParameterConditions out;
  auto collect = [&](std::size_t row, std::vector<Polynomial>& into) {
    for (const auto& [m, coeff] : h[row].split(is_state)) {
      bool has_j = false;
      for (const auto& [id, e] : m.factors()) has_j = has_j || jvars.count(id);
      if (has_j) continue;
      const Polynomial c = normalize_condition(coeff);
      if (std::find(into.begin(), into.end(), c) == into.end()) into.push_back(c);
    }
  };
  for (std::size_t i = 0; i < h.size(); ++i) {
    const bool in_j = std::binary_search(j.begin(), j.end(), i);
    if (in_j) {
      collect(i, out.vanishing);
    } else {
      collect(i, out.full_ltc_extra);
    }
  }
  std::vector<Polynomial> to_solve = out.vanishing;
  if (full_ltc) {
    for (const auto& c : out.full_ltc_extra)
      if (std::find(to_solve.begin(), to_solve.end(), c) == to_solve.end()) to_solve.push_back(c);
  }

  Assignment zeros;
  for (const auto& c : to_solve) {
    if (c.is_constant()) {
      out.infeasible = true;
      out.unsolved.push_back(c);
      continue;
    }
    const auto vars = c.variables();
    if (vars.size() == 1 && c.size() == 1) {
      zeros[*vars.begin()] = 0;
      continue;
    }
    // A sum of nonnegative parameters with coefficients of one sign.
    bool linear_sum = true;
    int sign = 0;
    for (const auto& t : c.terms()) {
      const auto& f = t.monomial.factors();
      if (f.size() != 1 || f[0].second != 1 || !nonnegative.count(f[0].first)) {
        linear_sum = false;
        break;
      }
      const int sg = t.coefficient > 0 ? 1 : -1;
      if (sign != 0 && sg != sign) {
        linear_sum = false;
        break;
      }
      sign = sg;
    }
    if (linear_sum) {
      for (auto v : vars) zeros[v] = 0;
    } else {
      out.unsolved.push_back(c);
    }
  }
  if (out.unsolved.empty()) out.solved = zeros;
  return out;
}

std::string format_index_set(const IndexSet& set, const std::vector<SymbolId>& states, const SymbolTable& symbols) {
  std::string s = "{";
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (k) s += ",";
    s += symbols.name(states.at(set[k]));
  }
  return s + "}";
}

}  // namespace slowfast
