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

#include "qsl/decompose.hpp"

#include <algorithm>
#include <random>

#include "machine_analysis.hpp"
#include "qsl/closure.hpp"
#include "qsl/errors.hpp"
#include "qsl/value_domain.hpp"

namespace qsl {

namespace {

constexpr std::size_t kSimpleLassoCap = 10000;

PropertyPtr make_derived_part(const Property& base, std::string name,
                              std::string rule,
                              std::function<Value(const Lasso&)> lasso_eval) {
  auto part = std::make_shared<Property>();
  part->name = std::move(name);
  part->alphabet = base.alphabet;
  part->domain = base.domain;
  part->vf = base.vf;
  DerivedBackend backend;
  backend.rule = std::move(rule);
  backend.lasso_eval = std::move(lasso_eval);
  part->backend = std::move(backend);
  return part;
}

/// Deterministic stream of random normalized lassos over the alphabet:
/// stem length 0..3, cycle length 1..3, uniform symbols.
std::vector<Lasso> random_normalized_lassos(const AlphabetPtr& alphabet,
                                            std::size_t count,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint64_t n = alphabet->size();
  std::vector<Lasso> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::uint32_t> stem(rng() % 4);
    for (auto& s : stem) s = static_cast<std::uint32_t>(rng() % n);
    std::vector<std::uint32_t> cycle(1 + rng() % 3);
    for (auto& s : cycle) s = static_cast<std::uint32_t>(rng() % n);
    out.push_back(normalize(Lasso{FiniteTrace{alphabet, std::move(stem)},
                                  FiniteTrace{alphabet, std::move(cycle)}}));
  }
  return out;
}

/// Every simple cycle of the config graph reachable from the initial node,
/// as a lasso whose stem is the BFS-shortest path to the cycle's anchor.
/// Cycles are enumerated by anchor node ascending, then depth-first with
/// symbols ascending, restricted to nodes >= the anchor so each cycle is
/// reported exactly once; the enumeration stops at a fixed cap.
std::vector<Lasso> simple_config_lassos(const Property& p) {
  const auto graph = detail::build_config_graph(p);
  std::vector<Lasso> out;

  struct Frame {
    std::uint32_t node;
    std::uint32_t next_symbol;
  };
  const std::uint32_t nodes = graph.node_count();
  const std::size_t symbols = graph.alphabet->size();
  std::vector<char> on_path(nodes, 0);

  for (std::uint32_t anchor = 0; anchor < nodes; ++anchor) {
    const auto stem = detail::shortest_path_symbols(graph, graph.initial, anchor);
    if (!stem) continue;
    std::vector<Frame> stack{{anchor, 0}};
    std::vector<std::uint32_t> path_symbols;
    std::fill(on_path.begin(), on_path.end(), 0);
    on_path[anchor] = 1;
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next_symbol >= symbols) {
        on_path[top.node] = 0;
        stack.pop_back();
        if (!path_symbols.empty()) path_symbols.pop_back();
        continue;
      }
      const std::uint32_t sym = top.next_symbol++;
      const std::uint32_t succ = graph.next[top.node][sym];
      if (succ == anchor) {
        std::vector<std::uint32_t> cycle = path_symbols;
        cycle.push_back(sym);
        out.push_back(Lasso{FiniteTrace{graph.alphabet, *stem},
                            FiniteTrace{graph.alphabet, std::move(cycle)}});
        if (out.size() >= kSimpleLassoCap) return out;
        continue;
      }
      if (succ < anchor || on_path[succ]) continue;
      on_path[succ] = 1;
      path_symbols.push_back(sym);
      stack.push_back({succ, 0});
    }
  }
  return out;
}

const char* mode_check_name(DecomposeMode mode) {
  return mode == DecomposeMode::CosafetyColiveness ? "colive" : "live";
}

}  // namespace

bool DecompositionReport::passed() const {
  if (!identity_ok) return false;
  for (const auto& [key, verdict] : part_checks) {
    if (verdict.kind != VerdictKind::Yes &&
        verdict.kind != VerdictKind::NoViolationFoundUpTo) {
      return false;
    }
  }
  return true;
}

std::pair<PropertyPtr, PropertyPtr> safety_liveness(const PropertyPtr& p) {
  if (!p) throw BadParams("null property");
  PropertyPtr closure = safety_closure(p);
  const Value topv = top(p->domain);
  auto lasso_eval = [p, closure, topv](const Lasso& l) {
    const Value pv = eval_on_lasso(*p, l);
    const Value cv = eval_on_lasso(*closure, l);
    return equal(cv, pv) ? topv : pv;
  };
  PropertyPtr liveness =
      make_derived_part(*p, "liveness_part(" + p->name + ")", "liveness_part",
                        std::move(lasso_eval));
  return {std::move(closure), std::move(liveness)};
}

std::pair<PropertyPtr, PropertyPtr> cosafety_coliveness(const PropertyPtr& p) {
  if (!p) throw BadParams("null property");
  PropertyPtr closure = cosafety_closure(p);
  const Value botv = bottom(p->domain);
  auto lasso_eval = [p, closure, botv](const Lasso& l) {
    const Value pv = eval_on_lasso(*p, l);
    const Value cv = eval_on_lasso(*closure, l);
    return equal(cv, pv) ? botv : pv;
  };
  PropertyPtr coliveness =
      make_derived_part(*p, "coliveness_part(" + p->name + ")",
                        "coliveness_part", std::move(lasso_eval));
  return {std::move(closure), std::move(coliveness)};
}

std::pair<PropertyPtr, PropertyPtr> liveness_liveness(const PropertyPtr& p,
                                                      const std::string& a1,
                                                      const std::string& a2) {
  if (!p) throw BadParams("null property");
  if (p->alphabet->size() < 2 || a1 == a2) throw UnaryAlphabet();
  const auto i1 = p->alphabet->find(a1);
  if (!i1) throw UnknownSymbol(a1);
  const auto i2 = p->alphabet->find(a2);
  if (!i2) throw UnknownSymbol(a2);

  const Value topv = top(p->domain);
  auto tail_part = [&](std::uint32_t sym, const std::string& label) {
    auto lasso_eval = [p, topv, sym](const Lasso& l) {
      const Lasso n = normalize(l);
      if (n.cycle.symbols.size() == 1 && n.cycle.symbols[0] == sym) {
        return topv;
      }
      return eval_on_lasso(*p, l);
    };
    return make_derived_part(*p,
                             "tail_liveness(" + label + ", " + p->name + ")",
                             "tail_liveness", std::move(lasso_eval));
  };
  return {tail_part(*i1, a1), tail_part(*i2, a2)};
}

DecompositionReport verify_decomposition(
    const PropertyPtr& p, const std::pair<PropertyPtr, PropertyPtr>& parts,
    DecomposeMode mode, std::size_t samples, std::uint64_t seed) {
  if (!p || !parts.first || !parts.second) throw BadParams("null property");
  DecompositionReport report;
  report.identity_ok = true;

  std::vector<Lasso> lassos =
      random_normalized_lassos(p->alphabet, samples, seed);
  if (p->is_machine()) {
    auto structural = simple_config_lassos(*p);
    lassos.insert(lassos.end(), structural.begin(), structural.end());
  }

  const bool use_max = mode == DecomposeMode::CosafetyColiveness;
  for (const Lasso& l : lassos) {
    const Value expected = eval_on_lasso(*p, l);
    const Value v1 = eval_on_lasso(*parts.first, l);
    const Value v2 = eval_on_lasso(*parts.second, l);
    const Value combined = use_max ? join(v1, v2) : meet(v1, v2);
    ++report.lassos_checked;
    if (!equal(combined, expected)) {
      report.identity_ok = false;
      report.counterexample = l;
      break;
    }
  }

  const char* check = mode_check_name(mode);
  auto record = [&](const PropertyPtr& part) {
    const ClassificationReport cr = classify(part, 6, seed);
    const Verdict* v = cr.find(check);
    report.part_checks.emplace_back(part->name + " " + check,
                                    v ? *v : Verdict{});
  };
  if (mode == DecomposeMode::LivenessLiveness) {
    record(parts.first);
    record(parts.second);
  } else {
    record(parts.second);
  }
  return report;
}

}  // namespace qsl
