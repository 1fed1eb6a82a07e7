// Copyright 2026 The qsl project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Classification strategy.
//
// Machine-backed properties are decided exactly on the config graph. Every
// infinite run eventually stays inside one cyclic strongly connected
// component of that graph, and the pair (property value, closure value) of
// the run is determined by that component: the closure values are the
// extremes of the values attainable from the component, and the property
// value ranges over the component's achievable limit values. The
// achievable-profile enumeration therefore lists exactly the pairs
// (value, safety-closure value, co-safety-closure value) realized by
// infinite traces, each with a concrete witness lasso, and the universal
// definitions of safety, co-safety, liveness, co-liveness, and
// multi-liveness reduce to finite scans over the profiles. The same
// reduction discharges the quantifiers over simple-stem/simple-cycle
// lassos of the product of the property with its closure, and it is
// cross-checked against a brute-force lasso enumeration in the tests.
//
// Oracle-backed properties are checked on a deterministic lasso pool. An
// exact representation certificate (an Inf representation makes the
// property safe, a Sup representation co-safe) upgrades the corresponding
// verdicts to exact answers; everything else is three-valued: a violation
// yields No with a replayable witness, and an exhausted search yields
// NoViolationFoundUpTo, never Yes. Checks whose hooks are absent report
// NotComputable inside the full report, while the standalone check
// operations throw UnsupportedBackend.

#include "qsl/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "machine_analysis.hpp"
#include "qsl/errors.hpp"

namespace qsl {

namespace {

constexpr std::size_t kExhaustiveCap = 20000;
constexpr std::size_t kRandomCount = 2000;
constexpr std::size_t kDerivedSearchLassos = 200;

Verdict yes_verdict() { return Verdict{VerdictKind::Yes, 0}; }
Verdict no_verdict() { return Verdict{VerdictKind::No, 0}; }
Verdict nvf_verdict(std::uint64_t budget) {
  return Verdict{VerdictKind::NoViolationFoundUpTo, budget};
}
Verdict nc_verdict() { return Verdict{VerdictKind::NotComputable, 0}; }

/// "a is not >= b" in the partial-order sense.
bool not_geq(const Value& a, const Value& b) {
  const Cmp c = compare(a, b);
  return c == Cmp::Less || c == Cmp::Incomparable;
}

/// "a is not <= b" in the partial-order sense.
bool not_leq(const Value& a, const Value& b) {
  const Cmp c = compare(a, b);
  return c == Cmp::Greater || c == Cmp::Incomparable;
}

/// Domain for the alpha/beta gap bounds.
const DomainPtr& gap_domain() {
  static const DomainPtr d = ValueDomain::extended_real(0.0, HUGE_VAL);
  return d;
}

Value gap_value(double x) { return make_real(gap_domain(), x); }

using Outcome = std::pair<Verdict, std::optional<Witness>>;

// ---------------------------------------------------------------------------
// Machine-backed checks.

struct MachineView {
  detail::ConfigGraph graph;
  detail::GraphAnalysis analysis;
  std::vector<detail::RunProfile> profiles;
};

MachineView machine_view(const Property& p) {
  MachineView v;
  v.graph = detail::build_config_graph(p);
  v.analysis = detail::analyze_graph(v.graph);
  v.profiles = detail::achievable_profiles(v.graph, v.analysis);
  return v;
}

Witness profile_witness(const detail::RunProfile& prof, const Value& bound) {
  Witness w;
  w.lasso = prof.witness;
  w.value = prof.value;
  w.bound = bound;
  return w;
}

Outcome machine_safe(const MachineView& v) {
  for (const auto& prof : v.profiles) {
    if (!equal(prof.value, prof.closure_top)) {
      return {no_verdict(), profile_witness(prof, prof.closure_top)};
    }
  }
  return {yes_verdict(), std::nullopt};
}

Outcome machine_cosafe(const MachineView& v) {
  for (const auto& prof : v.profiles) {
    if (!equal(prof.value, prof.closure_bottom)) {
      return {no_verdict(), profile_witness(prof, prof.closure_bottom)};
    }
  }
  return {yes_verdict(), std::nullopt};
}

Outcome machine_live(const MachineView& v, const Value& topv) {
  for (const auto& prof : v.profiles) {
    if (not_geq(prof.value, topv) &&
        compare(prof.closure_top, prof.value) != Cmp::Greater) {
      return {no_verdict(), profile_witness(prof, prof.closure_top)};
    }
  }
  return {yes_verdict(), std::nullopt};
}

Outcome machine_colive(const MachineView& v, const Value& botv) {
  for (const auto& prof : v.profiles) {
    if (not_leq(prof.value, botv) &&
        compare(prof.closure_bottom, prof.value) != Cmp::Less) {
      return {no_verdict(), profile_witness(prof, prof.closure_bottom)};
    }
  }
  return {yes_verdict(), std::nullopt};
}

Outcome machine_multilive(const MachineView& v, const Value& botv) {
  for (const auto& prof : v.profiles) {
    if (compare(prof.closure_top, botv) != Cmp::Greater) {
      return {no_verdict(), profile_witness(prof, prof.closure_top)};
    }
  }
  return {yes_verdict(), std::nullopt};
}

Outcome machine_sup_closed(const MachineView& v) {
  const auto& g = v.graph;
  for (std::uint32_t node = 0; node < g.node_count(); ++node) {
    auto path = detail::shortest_path_symbols(g, g.initial, node);
    if (!path) continue;
    const auto& attain = v.analysis.attainable_from(node);
    if (attain.empty()) continue;
    const Value sup = attain.back();
    const bool member = std::any_of(
        attain.begin(), attain.end(),
        [&](const Value& x) { return equal(x, sup); });
    if (!member) {
      Witness w;
      w.prefix = FiniteTrace{g.alphabet, *path};
      w.bound = sup;
      return {no_verdict(), w};
    }
  }
  return {yes_verdict(), std::nullopt};
}

/// Label-shortlex order on symbol sequences: by length, then by labels.
bool shortlex_less(const AlphabetPtr& alphabet,
                   const std::vector<std::uint32_t>& a,
                   const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string& la = alphabet->label(a[i]);
    const std::string& lb = alphabet->label(b[i]);
    if (la != lb) return la < lb;
  }
  return false;
}

Outcome machine_verdict_live(const MachineView& v) {
  const auto& g = v.graph;
  const auto& a = v.analysis;
  const std::vector<Value>& candidates = a.attainable_from(g.initial);

  std::optional<Value> best_v;
  std::vector<std::uint32_t> best_path;
  std::uint32_t best_node = 0;
  for (std::uint32_t node = 0; node < g.node_count(); ++node) {
    auto path = detail::shortest_path_symbols(g, g.initial, node);
    if (!path) continue;
    const auto& attain = a.attainable_from(node);
    for (const Value& cand : candidates) {
      const bool member = std::any_of(
          attain.begin(), attain.end(),
          [&](const Value& x) { return equal(x, cand); });
      if (member) continue;
      const bool below = std::any_of(
          attain.begin(), attain.end(),
          [&](const Value& x) { return compare(x, cand) == Cmp::Less; });
      if (!below) continue;
      const bool better =
          !best_v || compare(cand, *best_v) == Cmp::Greater ||
          (compare(cand, *best_v) == Cmp::Equal &&
           shortlex_less(g.alphabet, *path, best_path));
      if (better) {
        best_v = cand;
        best_path = *path;
        best_node = node;
      }
    }
  }
  if (!best_v) return {yes_verdict(), std::nullopt};

  const auto& attain = a.attainable_from(best_node);
  const Value* wstar = nullptr;
  for (const Value& x : attain) {
    if (compare(x, *best_v) == Cmp::Less) wstar = &x;
  }
  auto tail = detail::realize_value(v.graph, v.analysis, best_node, *wstar);
  if (!tail) {
    throw Error("failed to realize an attainable value from a config");
  }
  std::vector<std::uint32_t> stem = best_path;
  stem.insert(stem.end(), tail->stem.symbols.begin(),
              tail->stem.symbols.end());
  Witness w;
  w.lasso = Lasso{FiniteTrace{g.alphabet, std::move(stem)}, tail->cycle};
  w.prefix = FiniteTrace{g.alphabet, best_path};
  w.value = *wstar;
  w.bound = *best_v;
  return {no_verdict(), w};
}

struct GapInfo {
  double alpha = -1.0;
  const detail::RunProfile* alpha_witness = nullptr;
  double beta = -1.0;
  const detail::RunProfile* beta_witness = nullptr;
};

std::optional<GapInfo> machine_gaps(const MachineView& v,
                                    const DomainPtr& domain) {
  if (!is_numeric(*domain)) return std::nullopt;
  GapInfo gi;
  for (const auto& prof : v.profiles) {
    const double da = numeric_width(prof.closure_top, prof.value);
    if (da > gi.alpha) {
      gi.alpha = da;
      gi.alpha_witness = &prof;
    }
    const double db = numeric_width(prof.value, prof.closure_bottom);
    if (db > gi.beta) {
      gi.beta = db;
      gi.beta_witness = &prof;
    }
  }
  if (!gi.alpha_witness) return std::nullopt;
  return gi;
}

// ---------------------------------------------------------------------------
// Oracle-backed checks.

struct OracleView {
  const Property* prop = nullptr;
  detail::LassoPool pool;
  bool can_eval = false;
  bool inf_rep = false;
  bool sup_rep = false;
  bool has_sup_ext = false;
  bool has_inf_ext = false;
  bool has_pred = false;
  std::vector<std::optional<Value>> phi;
  std::vector<std::optional<Value>> star;    // safety-closure values
  std::vector<std::optional<Value>> costar;  // co-safety-closure values
};

OracleView oracle_view(const Property& p, std::uint64_t budget,
                       std::uint64_t seed) {
  OracleView v;
  v.prop = &p;
  const OracleHooks& h = p.oracle();
  v.can_eval = static_cast<bool>(h.lasso_eval);
  v.inf_rep = has_representation(p, ValueFunction::Inf);
  v.sup_rep = has_representation(p, ValueFunction::Sup);
  v.has_sup_ext = static_cast<bool>(h.sup_ext);
  v.has_inf_ext = static_cast<bool>(h.inf_ext);
  v.has_pred = static_cast<bool>(h.pred_set);
  v.pool = detail::sample_lassos(p.alphabet, budget, kExhaustiveCap,
                                 kRandomCount, seed);
  const std::size_t n = v.pool.lassos.size();
  v.phi.resize(n);
  v.star.resize(n);
  v.costar.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Lasso& l = v.pool.lassos[i];
    if (v.can_eval) v.phi[i] = h.lasso_eval(l);
    if (v.inf_rep) {
      v.star[i] = v.phi[i];
    } else if (v.has_sup_ext) {
      v.star[i] = detail::stabilized_closure_value(p, l, true);
    }
    if (v.sup_rep) {
      v.costar[i] = v.phi[i];
    } else if (v.has_inf_ext) {
      v.costar[i] = detail::stabilized_closure_value(p, l, false);
    }
  }
  return v;
}

Witness lasso_witness(const Lasso& l, const std::optional<Value>& value,
                      const std::optional<Value>& bound) {
  Witness w;
  w.lasso = l;
  w.value = value;
  w.bound = bound;
  return w;
}

Outcome oracle_safe(const OracleView& v, std::uint64_t budget) {
  if (v.inf_rep) return {yes_verdict(), std::nullopt};
  if (!v.can_eval || !v.has_sup_ext) return {nc_verdict(), std::nullopt};
  for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
    if (!v.phi[i] || !v.star[i]) continue;
    if (!equal(*v.star[i], *v.phi[i])) {
      return {no_verdict(),
              lasso_witness(v.pool.lassos[i], v.phi[i], v.star[i])};
    }
  }
  return {nvf_verdict(budget), std::nullopt};
}

Outcome oracle_cosafe(const OracleView& v, std::uint64_t budget) {
  if (v.sup_rep) return {yes_verdict(), std::nullopt};
  if (!v.can_eval || !v.has_inf_ext) return {nc_verdict(), std::nullopt};
  for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
    if (!v.phi[i] || !v.costar[i]) continue;
    if (!equal(*v.costar[i], *v.phi[i])) {
      return {no_verdict(),
              lasso_witness(v.pool.lassos[i], v.phi[i], v.costar[i])};
    }
  }
  return {nvf_verdict(budget), std::nullopt};
}

Outcome oracle_live(const OracleView& v, const Value& topv,
                    std::uint64_t budget) {
  if (!v.can_eval) return {nc_verdict(), std::nullopt};
  if (v.inf_rep) {
    // The property is safe, so its closure equals itself: any lasso below
    // top is an exact liveness violation.
    for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
      if (v.phi[i] && not_geq(*v.phi[i], topv)) {
        return {no_verdict(),
                lasso_witness(v.pool.lassos[i], v.phi[i], v.phi[i])};
      }
    }
    return {nvf_verdict(budget), std::nullopt};
  }
  if (!v.has_sup_ext) return {nc_verdict(), std::nullopt};
  for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
    if (!v.phi[i] || !v.star[i]) continue;
    if (not_geq(*v.phi[i], topv) &&
        compare(*v.star[i], *v.phi[i]) != Cmp::Greater) {
      return {no_verdict(),
              lasso_witness(v.pool.lassos[i], v.phi[i], v.star[i])};
    }
  }
  return {nvf_verdict(budget), std::nullopt};
}

Outcome oracle_colive(const OracleView& v, const Value& botv,
                      std::uint64_t budget) {
  if (!v.can_eval) return {nc_verdict(), std::nullopt};
  if (v.sup_rep) {
    for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
      if (v.phi[i] && not_leq(*v.phi[i], botv)) {
        return {no_verdict(),
                lasso_witness(v.pool.lassos[i], v.phi[i], v.phi[i])};
      }
    }
    return {nvf_verdict(budget), std::nullopt};
  }
  if (!v.has_inf_ext) return {nc_verdict(), std::nullopt};
  for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
    if (!v.phi[i] || !v.costar[i]) continue;
    if (not_leq(*v.phi[i], botv) &&
        compare(*v.costar[i], *v.phi[i]) != Cmp::Less) {
      return {no_verdict(),
              lasso_witness(v.pool.lassos[i], v.phi[i], v.costar[i])};
    }
  }
  return {nvf_verdict(budget), std::nullopt};
}

Outcome oracle_multilive(const OracleView& v, const Value& botv,
                         std::uint64_t budget) {
  const Property& p = *v.prop;
  const OracleHooks& h = p.oracle();
  if (v.has_inf_ext) {
    // The value of every trace is at least inf_ext(empty), and the closure
    // is at least the value, so a positive bound decides multi-liveness.
    const Value v0 = h.inf_ext(FiniteTrace{p.alphabet, {}});
    if (compare(v0, botv) == Cmp::Greater) return {yes_verdict(), std::nullopt};
  }
  if (v.inf_rep || v.has_sup_ext) {
    bool checked = false;
    for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
      if (!v.star[i]) continue;
      checked = true;
      if (compare(*v.star[i], botv) != Cmp::Greater) {
        return {no_verdict(),
                lasso_witness(v.pool.lassos[i], v.phi[i], v.star[i])};
      }
    }
    if (checked) return {nvf_verdict(budget), std::nullopt};
  }
  return {nc_verdict(), std::nullopt};
}

Outcome oracle_sup_closed(const Property& p, std::uint64_t budget) {
  const OracleHooks& h = p.oracle();
  if (!h.pred_set) return {nc_verdict(), std::nullopt};
  // Nonempty prefixes first in shortlex order, the empty prefix last.
  auto traces = detail::shortlex_sequences(
      p.alphabet, 1, static_cast<std::size_t>(budget));
  traces.push_back({});
  for (const auto& symbols : traces) {
    const FiniteTrace t{p.alphabet, symbols};
    const PredictionSet ps = h.pred_set(t);
    if (ps.empty()) continue;
    if (!ps.sup_is_member()) {
      Witness w;
      w.prefix = t;
      w.bound = ps.sup();
      return {no_verdict(), w};
    }
  }
  return {nvf_verdict(budget), std::nullopt};
}

bool prediction_sets_equal(const PredictionSet& a, const PredictionSet& b) {
  if (a.atoms.size() != b.atoms.size()) return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    if (!equal(a.atoms[i], b.atoms[i])) return false;
  }
  return a.nat_tail_from == b.nat_tail_from &&
         a.dyadic_tail_from == b.dyadic_tail_from;
}

bool atoms_equal(const PredictionSet& a, const PredictionSet& b) {
  if (a.atoms.size() != b.atoms.size()) return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    if (!equal(a.atoms[i], b.atoms[i])) return false;
  }
  return true;
}

bool tail_receded(const PredictionSet& from, const PredictionSet& to) {
  if (from.nat_tail_from && to.nat_tail_from) {
    return *to.nat_tail_from > *from.nat_tail_from;
  }
  if (from.dyadic_tail_from && to.dyadic_tail_from) {
    return *to.dyadic_tail_from > *from.dyadic_tail_from;
  }
  return false;
}

/// Supremum of the limit of the prediction sets along the lasso, observed
/// at cycle-pass boundaries. The sets stabilize either as a whole, or with
/// fixed atoms and a structured tail receding to nothing (the limit then
/// keeps only the atoms). Unresolved within the pass bound yields nullopt.
std::optional<Value> pred_limit_sup(const Property& p, const Lasso& l) {
  const OracleHooks& h = p.oracle();
  constexpr std::size_t kMaxPasses = 12;
  constexpr std::size_t kMaxSymbols = 4096;

  std::vector<std::uint32_t> prefix = l.stem.symbols;
  std::vector<PredictionSet> bounds;
  bounds.push_back(h.pred_set(FiniteTrace{p.alphabet, prefix}));
  for (std::size_t pass = 0; pass < kMaxPasses; ++pass) {
    if (prefix.size() + l.cycle.symbols.size() > kMaxSymbols && pass >= 3) {
      break;
    }
    prefix.insert(prefix.end(), l.cycle.symbols.begin(),
                  l.cycle.symbols.end());
    bounds.push_back(h.pred_set(FiniteTrace{p.alphabet, prefix}));
    const std::size_t k = bounds.size();
    if (k < 3) continue;
    const PredictionSet& s0 = bounds[k - 3];
    const PredictionSet& s1 = bounds[k - 2];
    const PredictionSet& s2 = bounds[k - 1];
    if (prediction_sets_equal(s0, s1) && prediction_sets_equal(s1, s2)) {
      if (s2.empty()) return std::nullopt;
      return s2.sup();
    }
    if (atoms_equal(s0, s1) && atoms_equal(s1, s2) && tail_receded(s0, s1) &&
        tail_receded(s1, s2) && !s2.atoms.empty()) {
      return s2.atoms.back();
    }
  }
  return std::nullopt;
}

Outcome oracle_verdict_safe(const OracleView& v, std::uint64_t budget) {
  const Property& p = *v.prop;
  if (!v.has_pred || !v.can_eval) return {nc_verdict(), std::nullopt};
  bool resolved_any = false;
  for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
    if (!v.phi[i]) continue;
    const auto lim = pred_limit_sup(p, v.pool.lassos[i]);
    if (!lim) continue;
    resolved_any = true;
    if (!equal(*lim, *v.phi[i])) {
      return {no_verdict(), lasso_witness(v.pool.lassos[i], v.phi[i], lim)};
    }
  }
  // Every resolved lasso attained the supremum of its limit prediction
  // set exactly, which certifies the defining identity on the sample.
  if (resolved_any) return {yes_verdict(), std::nullopt};
  return {nvf_verdict(budget), std::nullopt};
}

/// Largest member of ps strictly below v when that maximum exists;
/// otherwise the largest atom below v, otherwise the smallest tail member
/// below v. Nullopt when no member lies below v.
std::optional<Value> member_below(const DomainPtr& domain,
                                  const PredictionSet& ps, const Value& v) {
  std::optional<Value> atom;
  for (const Value& a : ps.atoms) {
    if (compare(a, v) == Cmp::Less) atom = a;
  }
  std::optional<Value> tail_max;
  std::optional<Value> tail_min;
  if (ps.nat_tail_from) {
    const Value lo = make_nat(domain, *ps.nat_tail_from);
    if (compare(lo, v) == Cmp::Less) {
      tail_min = lo;
      const NatValue& nv = v.as_nat();
      if (nv.band == NatValue::Band::Finite && nv.n > *ps.nat_tail_from) {
        tail_max = make_nat(domain, nv.n - 1);
      }
    }
  }
  if (ps.dyadic_tail_from) {
    const double x = to_real(v);
    if (x > 0.0) {
      std::uint64_t m = *ps.dyadic_tail_from;
      while (m < *ps.dyadic_tail_from + 128 &&
             std::ldexp(1.0, -static_cast<int>(m)) >= x) {
        ++m;
      }
      const double member = std::ldexp(1.0, -static_cast<int>(m));
      if (member < x && member > 0.0) {
        tail_max = make_real(domain, member);
      }
    }
  }
  std::optional<Value> best = atom;
  if (tail_max && (!best || compare(*tail_max, *best) == Cmp::Greater)) {
    best = tail_max;
  }
  if (best) return best;
  return tail_min;
}

Outcome oracle_verdict_live(const Property& p, std::uint64_t budget) {
  const OracleHooks& h = p.oracle();
  if (!h.pred_set) return {nc_verdict(), std::nullopt};

  const PredictionSet initial = h.pred_set(FiniteTrace{p.alphabet, {}});
  const std::vector<Value> candidates = sort_values(initial.enumerate(8));

  std::optional<Value> best_v;
  std::optional<Value> best_w;
  std::vector<std::uint32_t> best_prefix;
  const auto prefixes = detail::shortlex_sequences(
      p.alphabet, 0, static_cast<std::size_t>(budget));
  for (const auto& symbols : prefixes) {
    const FiniteTrace d{p.alphabet, symbols};
    const PredictionSet ps = h.pred_set(d);
    for (const Value& cand : candidates) {
      if (ps.contains(cand)) continue;
      const auto w = member_below(p.domain, ps, cand);
      if (!w) continue;
      if (!best_v || compare(cand, *best_v) == Cmp::Greater) {
        best_v = cand;
        best_w = w;
        best_prefix = symbols;
      }
    }
  }
  if (!best_v) return {nvf_verdict(budget), std::nullopt};

  Witness wit;
  wit.prefix = FiniteTrace{p.alphabet, best_prefix};
  wit.bound = *best_v;
  wit.value = *best_w;
  if (h.lasso_eval) {
    const auto stems = detail::shortlex_sequences(p.alphabet, 0, 3);
    const auto cycles = detail::shortlex_sequences(p.alphabet, 1, 3);
    for (const auto& e : stems) {
      for (const auto& c : cycles) {
        std::vector<std::uint32_t> stem = best_prefix;
        stem.insert(stem.end(), e.begin(), e.end());
        Lasso cand{FiniteTrace{p.alphabet, std::move(stem)},
                   FiniteTrace{p.alphabet, c}};
        if (equal(h.lasso_eval(cand), *best_w)) {
          wit.lasso = std::move(cand);
          return {no_verdict(), wit};
        }
      }
    }
  }
  return {no_verdict(), wit};
}

// ---------------------------------------------------------------------------
// Derived-backend liveness evidence.

/// One-sided bounded liveness check for derived properties: for sampled
/// lassos valued below top, look for value-improving continuations after
/// each of the first cycle-pass boundaries. Finding them is evidence
/// consistent with liveness; their absence within the search bound proves
/// nothing, so the verdict is never No.
Outcome derived_live(const Property& p, std::uint64_t budget,
                     std::uint64_t seed, bool dual) {
  const auto& backend = p.derived();
  if (!backend.lasso_eval) return {nc_verdict(), std::nullopt};
  const Value extreme = dual ? bottom(p.domain) : top(p.domain);
  const auto pool = detail::sample_lassos(p.alphabet, budget, kExhaustiveCap,
                                          kRandomCount, seed);
  const auto stems = detail::shortlex_sequences(p.alphabet, 0, 2);
  const auto cycles = detail::shortlex_sequences(p.alphabet, 1, 2);
  std::size_t examined = 0;
  for (const Lasso& l : pool.lassos) {
    if (examined >= kDerivedSearchLassos) break;
    const Value base = backend.lasso_eval(l);
    const bool relevant = dual ? not_leq(base, extreme)
                               : not_geq(base, extreme);
    if (!relevant) continue;
    ++examined;
    std::vector<std::uint32_t> prefix = l.stem.symbols;
    for (std::size_t pass = 0; pass < 3; ++pass) {
      prefix.insert(prefix.end(), l.cycle.symbols.begin(),
                    l.cycle.symbols.end());
      for (const auto& e : stems) {
        for (const auto& c : cycles) {
          std::vector<std::uint32_t> stem = prefix;
          stem.insert(stem.end(), e.begin(), e.end());
          const Lasso cont{FiniteTrace{p.alphabet, std::move(stem)},
                           FiniteTrace{p.alphabet, c}};
          const Value improved = backend.lasso_eval(cont);
          const Cmp cmp = compare(improved, base);
          if ((dual && cmp == Cmp::Less) || (!dual && cmp == Cmp::Greater)) {
            goto next_pass;
          }
        }
      }
    next_pass:;
    }
  }
  return {nvf_verdict(budget), std::nullopt};
}

void add_verdict(ClassificationReport& report, const std::string& key,
                 Outcome outcome) {
  report.verdicts.emplace_back(key, outcome.first);
  if (outcome.second) report.witnesses[key] = std::move(*outcome.second);
}

}  // namespace

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Yes:
      return "Yes";
    case VerdictKind::No:
      return "No";
    case VerdictKind::NoViolationFoundUpTo:
      return "NoViolationFoundUpTo(" + std::to_string(v.budget) + ")";
    case VerdictKind::NotComputable:
      return "NotComputable";
  }
  throw BadParams("bad verdict kind");
}

const Verdict* ClassificationReport::find(const std::string& key) const {
  for (const auto& [k, v] : verdicts) {
    if (k == key) return &v;
  }
  return nullptr;
}

ClassificationReport classify(const PropertyPtr& p, std::uint64_t budget,
                              std::uint64_t seed) {
  if (!p) throw BadParams("null property");
  ClassificationReport report;
  const Value topv = top(p->domain);
  const Value botv = bottom(p->domain);

  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    const MachineView v = machine_view(*p);
    add_verdict(report, "safe", machine_safe(v));
    add_verdict(report, "cosafe", machine_cosafe(v));
    add_verdict(report, "live", machine_live(v, topv));
    add_verdict(report, "colive", machine_colive(v, botv));
    add_verdict(report, "multilive", machine_multilive(v, botv));
    add_verdict(report, "sup_closed", machine_sup_closed(v));
    Outcome vs = machine_safe(v);
    add_verdict(report, "verdict_safe", std::move(vs));
    add_verdict(report, "verdict_live", machine_verdict_live(v));
    if (const auto gaps = machine_gaps(v, p->domain)) {
      report.alpha_min = gap_value(gaps->alpha);
      report.beta_min = gap_value(gaps->beta);
    }
    return report;
  }

  if (p->is_oracle()) {
    const OracleHooks& h = p->oracle();
    if (!h.eval && !h.lasso_eval && !h.sup_ext && !h.inf_ext && !h.pred_set) {
      throw UnsupportedBackend("oracle property '" + p->name +
                               "' provides no hooks");
    }
    const OracleView v = oracle_view(*p, budget, seed);
    add_verdict(report, "safe", oracle_safe(v, budget));
    add_verdict(report, "cosafe", oracle_cosafe(v, budget));
    add_verdict(report, "live", oracle_live(v, topv, budget));
    add_verdict(report, "colive", oracle_colive(v, botv, budget));
    add_verdict(report, "multilive", oracle_multilive(v, botv, budget));
    add_verdict(report, "sup_closed", oracle_sup_closed(*p, budget));
    add_verdict(report, "verdict_safe", oracle_verdict_safe(v, budget));
    add_verdict(report, "verdict_live", oracle_verdict_live(*p, budget));
    if (is_numeric(*p->domain)) {
      if (v.inf_rep) {
        report.alpha_min = gap_value(0.0);
      } else if (v.can_eval && v.has_sup_ext) {
        double worst = -1.0;
        for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
          if (!v.phi[i] || !v.star[i]) continue;
          worst = std::max(worst, numeric_width(*v.star[i], *v.phi[i]));
        }
        if (worst >= 0.0) report.alpha_min = gap_value(worst);
      }
      if (v.sup_rep) {
        report.beta_min = gap_value(0.0);
      } else if (v.can_eval && v.has_inf_ext) {
        double worst = -1.0;
        for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
          if (!v.phi[i] || !v.costar[i]) continue;
          worst = std::max(worst, numeric_width(*v.phi[i], *v.costar[i]));
        }
        if (worst >= 0.0) report.beta_min = gap_value(worst);
      }
    }
    return report;
  }

  // Derived backends evaluate on lassos but expose no closure or
  // prediction structure; only the one-sided liveness evidence applies.
  add_verdict(report, "safe", {nc_verdict(), std::nullopt});
  add_verdict(report, "cosafe", {nc_verdict(), std::nullopt});
  add_verdict(report, "live", derived_live(*p, budget, seed, false));
  add_verdict(report, "colive", derived_live(*p, budget, seed, true));
  add_verdict(report, "multilive", {nc_verdict(), std::nullopt});
  add_verdict(report, "sup_closed", {nc_verdict(), std::nullopt});
  add_verdict(report, "verdict_safe", {nc_verdict(), std::nullopt});
  add_verdict(report, "verdict_live", {nc_verdict(), std::nullopt});
  return report;
}

CheckResult check_alpha_safety(const PropertyPtr& p, const Value& alpha,
                               std::uint64_t budget, std::uint64_t seed) {
  if (!p) throw BadParams("null property");
  if (!is_numeric(*p->domain)) {
    throw DomainNotNumeric("alpha-safety needs a numeric value domain");
  }
  const double a = to_real(alpha);

  CheckResult result;
  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    const MachineView v = machine_view(*p);
    const auto gaps = machine_gaps(v, p->domain);
    if (!gaps) {
      result.verdict = yes_verdict();
      result.bound = gap_value(0.0);
      return result;
    }
    result.bound = gap_value(gaps->alpha);
    if (gaps->alpha <= a) {
      result.verdict = yes_verdict();
    } else {
      result.verdict = no_verdict();
      result.witness =
          profile_witness(*gaps->alpha_witness, gaps->alpha_witness->closure_top);
    }
    return result;
  }
  if (!p->is_oracle()) {
    throw UnsupportedBackend("alpha-safety check of derived property '" +
                             p->name + "'");
  }
  const OracleView v = oracle_view(*p, budget, seed);
  if (v.inf_rep) {
    result.bound = gap_value(0.0);
    if (a >= 0.0) {
      result.verdict = yes_verdict();
    } else {
      result.verdict = no_verdict();
      for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
        if (!v.phi[i]) continue;
        result.witness = lasso_witness(v.pool.lassos[i], v.phi[i], v.phi[i]);
        break;
      }
    }
    return result;
  }
  if (!v.can_eval || !v.has_sup_ext) {
    throw UnsupportedBackend("alpha-safety check of '" + p->name +
                             "' needs lasso and sup_ext hooks");
  }
  double worst = -1.0;
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
    if (!v.phi[i] || !v.star[i]) continue;
    const double gap = numeric_width(*v.star[i], *v.phi[i]);
    if (gap > worst) {
      worst = gap;
      worst_index = i;
    }
  }
  if (worst < 0.0) {
    result.verdict = nvf_verdict(budget);
    return result;
  }
  result.bound = gap_value(worst);
  if (worst > a) {
    result.verdict = no_verdict();
    result.witness = lasso_witness(v.pool.lassos[worst_index],
                                   v.phi[worst_index], v.star[worst_index]);
  } else {
    result.verdict = nvf_verdict(budget);
  }
  return result;
}

CheckResult check_beta_cosafety(const PropertyPtr& p, const Value& beta,
                                std::uint64_t budget, std::uint64_t seed) {
  if (!p) throw BadParams("null property");
  if (!is_numeric(*p->domain)) {
    throw DomainNotNumeric("beta-co-safety needs a numeric value domain");
  }
  const double b = to_real(beta);

  CheckResult result;
  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    const MachineView v = machine_view(*p);
    const auto gaps = machine_gaps(v, p->domain);
    if (!gaps) {
      result.verdict = yes_verdict();
      result.bound = gap_value(0.0);
      return result;
    }
    result.bound = gap_value(gaps->beta);
    if (gaps->beta <= b) {
      result.verdict = yes_verdict();
    } else {
      result.verdict = no_verdict();
      result.witness = profile_witness(*gaps->beta_witness,
                                       gaps->beta_witness->closure_bottom);
    }
    return result;
  }
  if (!p->is_oracle()) {
    throw UnsupportedBackend("beta-co-safety check of derived property '" +
                             p->name + "'");
  }
  const OracleView v = oracle_view(*p, budget, seed);
  if (v.sup_rep) {
    result.bound = gap_value(0.0);
    if (b >= 0.0) {
      result.verdict = yes_verdict();
    } else {
      result.verdict = no_verdict();
      for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
        if (!v.phi[i]) continue;
        result.witness = lasso_witness(v.pool.lassos[i], v.phi[i], v.phi[i]);
        break;
      }
    }
    return result;
  }
  if (!v.can_eval || !v.has_inf_ext) {
    throw UnsupportedBackend("beta-co-safety check of '" + p->name +
                             "' needs lasso and inf_ext hooks");
  }
  double worst = -1.0;
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < v.pool.lassos.size(); ++i) {
    if (!v.phi[i] || !v.costar[i]) continue;
    const double gap = numeric_width(*v.phi[i], *v.costar[i]);
    if (gap > worst) {
      worst = gap;
      worst_index = i;
    }
  }
  if (worst < 0.0) {
    result.verdict = nvf_verdict(budget);
    return result;
  }
  result.bound = gap_value(worst);
  if (worst > b) {
    result.verdict = no_verdict();
    result.witness = lasso_witness(v.pool.lassos[worst_index],
                                   v.phi[worst_index], v.costar[worst_index]);
  } else {
    result.verdict = nvf_verdict(budget);
  }
  return result;
}

CheckResult check_sup_closed(const PropertyPtr& p, std::uint64_t budget) {
  if (!p) throw BadParams("null property");
  CheckResult result;
  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    const MachineView v = machine_view(*p);
    Outcome o = machine_sup_closed(v);
    result.verdict = o.first;
    result.witness = std::move(o.second);
    return result;
  }
  if (!p->is_oracle() || !p->oracle().pred_set) {
    throw UnsupportedBackend("sup-closedness check of '" + p->name +
                             "' needs a machine or a pred_set hook");
  }
  Outcome o = oracle_sup_closed(*p, budget);
  result.verdict = o.first;
  result.witness = std::move(o.second);
  return result;
}

CheckResult check_verdict_safety(const PropertyPtr& p, std::uint64_t budget,
                                 std::uint64_t seed) {
  if (!p) throw BadParams("null property");
  CheckResult result;
  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    const MachineView v = machine_view(*p);
    // Machine prediction sets are finite, hence sup-closed, and a
    // sup-closed property is verdict-safe exactly when it is safe.
    Outcome o = machine_safe(v);
    result.verdict = o.first;
    result.witness = std::move(o.second);
    return result;
  }
  if (!p->is_oracle() || !p->oracle().pred_set || !p->oracle().lasso_eval) {
    throw UnsupportedBackend("verdict-safety check of '" + p->name +
                             "' needs a machine or pred_set and lasso hooks");
  }
  const OracleView v = oracle_view(*p, budget, seed);
  Outcome o = oracle_verdict_safe(v, budget);
  result.verdict = o.first;
  result.witness = std::move(o.second);
  return result;
}

CheckResult check_verdict_liveness(const PropertyPtr& p, std::uint64_t budget,
                                   std::uint64_t seed) {
  (void)seed;
  if (!p) throw BadParams("null property");
  CheckResult result;
  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    const MachineView v = machine_view(*p);
    Outcome o = machine_verdict_live(v);
    result.verdict = o.first;
    result.witness = std::move(o.second);
    return result;
  }
  if (!p->is_oracle() || !p->oracle().pred_set) {
    throw UnsupportedBackend("verdict-liveness check of '" + p->name +
                             "' needs a machine or a pred_set hook");
  }
  Outcome o = oracle_verdict_live(*p, budget);
  result.verdict = o.first;
  result.witness = std::move(o.second);
  return result;
}

}  // namespace qsl
