/*
 * Copyright 2026 The qsl project contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef QSL_MACHINE_ANALYSIS_HPP
#define QSL_MACHINE_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsl/property.hpp"
#include "qsl/trace.hpp"
#include "qsl/value_domain.hpp"

// Internal analysis layer shared by the closure, classification,
// decomposition, and monitoring modules. Not installed.
//
// The central object is the configuration graph of a machine-backed
// property: the deterministic, finite graph of (state, running aggregate)
// pairs for the inf and sup value functions, or of bare states for liminf
// and limsup (their limit values do not depend on finite prefixes). Every
// infinite run eventually stays inside one cyclic strongly connected
// component of this graph, and the value of the run, the least upper bound
// over continuations, and the greatest lower bound over continuations can
// all be read off the components:
//
//   - For inf (sup), the running aggregate is constant inside a cyclic
//     component and equals the value of every run whose tail lies there.
//   - For liminf, a cyclic component S admits the limit value v exactly
//     when the subgraph of S induced by outputs >= v has a cyclic
//     sub-component whose least output is v (the run can then cycle there
//     while touching v forever; conversely the tail of any run with value
//     v must stay inside such a sub-component). Limsup is the order dual.
//   - The set of values attainable from a node is the union of the limit
//     values of all cyclic components reachable from it; its extrema are
//     the ghost bounds, and they are antitone (the upper) and monotone
//     (the lower) along edges.
//
// All of this assumes a totally ordered domain; product domains are
// rejected up front.

namespace qsl::detail {

/// Whether every pair of domain values is comparable (no product layers).
bool is_linear_domain(const ValueDomain& d);

/// Throws UnsupportedBackend unless p is machine-backed over a totally
/// ordered domain.
void require_linear_machine(const Property& p);

/// Whether configurations of this value function carry a running aggregate
/// (inf: running meet; sup: running join).
bool keeps_aggregate(ValueFunction vf);

/// An extra starting point for configuration-graph construction, used to
/// analyze caller-supplied configurations that may be unreachable from the
/// initial one.
struct ConfigRoot {
  std::uint32_t state = 0;
  std::optional<Value> aggregate;
};

/// The finite graph of machine configurations, closed under transitions.
/// Node 0 is always the configuration of the empty trace.
struct ConfigGraph {
  ValueFunction vf = ValueFunction::Inf;
  bool with_aggregate = false;
  AlphabetPtr alphabet;
  DomainPtr domain;

  // Per node.
  std::vector<std::uint32_t> state;  // underlying machine state
  std::vector<Value> output;         // that state's output
  std::vector<Value> value;          // running aggregate, or output again
  std::vector<std::string> name;     // "state|aggregate" or the state name
  std::vector<std::vector<std::uint32_t>> next;  // per node, per symbol

  std::uint32_t initial = 0;

  std::size_t node_count() const { return state.size(); }
};

/// Builds the configuration graph of a machine-backed property, rooted at
/// the initial configuration plus any extra roots. Throws
/// UnsupportedBackend for other backends or non-total domains, BadParams
/// for roots whose aggregate presence does not match the value function.
ConfigGraph build_config_graph(const Property& p,
                               const std::vector<ConfigRoot>& extra_roots = {});

/// Locates a configuration node by state and aggregate.
std::optional<std::uint32_t> find_config(const ConfigGraph& g,
                                         std::uint32_t state,
                                         const std::optional<Value>& aggregate);

/// Follows the given symbols from a node.
std::uint32_t run_config(const ConfigGraph& g, std::uint32_t from,
                         const std::vector<std::uint32_t>& symbols);

/// Strongly connected components plus the limit-value analysis described in
/// the file comment. Component ids are in reverse topological order: every
/// edge leaving a component leads to a smaller id.
struct GraphAnalysis {
  std::vector<std::uint32_t> comp;  // node -> component id
  std::size_t comp_count = 0;

  // Per component.
  std::vector<bool> cyclic;  // holds a cycle (size > 1 or a self-loop)
  std::vector<std::vector<std::uint32_t>> members;     // ascending node ids
  std::vector<std::vector<Value>> limit_values;        // empty unless cyclic
  std::vector<std::vector<Value>> attainable;          // ascending, nonempty

  /// Least upper bound of the property over continuations from a node.
  const Value& top(std::uint32_t node) const {
    return attainable[comp[node]].back();
  }
  /// Greatest lower bound over continuations from a node.
  const Value& bottom(std::uint32_t node) const {
    return attainable[comp[node]].front();
  }
  /// All values attainable by continuations from a node, ascending.
  const std::vector<Value>& attainable_from(std::uint32_t node) const {
    return attainable[comp[node]];
  }
};

GraphAnalysis analyze_graph(const ConfigGraph& g);

/// Shortest, then lexicographically least (by symbol label), symbol
/// sequence leading from one node to another. nullopt when unreachable;
/// the empty sequence when from == to.
std::optional<std::vector<std::uint32_t>> shortest_path_symbols(
    const ConfigGraph& g, std::uint32_t from, std::uint32_t to);

/// One representative run per achievable (tail component, limit value)
/// pair, with the closure bounds shared by every run into that component
/// and a lasso witnessing the value. Deterministic: components are visited
/// by their least node id, values in ascending order, and witnesses prefer
/// short, label-lexicographically least stems and cycles.
struct RunProfile {
  std::uint32_t component = 0;
  Value value;           // the property's value on the witness run
  Value closure_top;     // limit of the upper ghost bound along the run
  Value closure_bottom;  // limit of the lower ghost bound along the run
  Lasso witness;
};

std::vector<RunProfile> achievable_profiles(const ConfigGraph& g,
                                            const GraphAnalysis& a);

/// A lasso from the given node whose run realizes limit value v, built the
/// same way as profile witnesses (the stem part starts at `from`, so
/// callers prepend their own path from the initial node). nullopt when v is
/// not attainable from the node.
std::optional<Lasso> realize_value(const ConfigGraph& g,
                                   const GraphAnalysis& a, std::uint32_t from,
                                   const Value& v);

/// All symbol sequences with lengths in [min_len, max_len] in label
/// shortlex order: by length first, then lexicographically by labels.
std::vector<std::vector<std::uint32_t>> shortlex_sequences(
    const AlphabetPtr& alphabet, std::size_t min_len, std::size_t max_len);

/// A deterministic pool of lassos for bounded (sampling) checks: exhaustive
/// over all stems of length <= budget and cycles of length in [1, budget]
/// in label-lexicographic shortlex order when that is at most
/// `exhaustive_cap` lassos; otherwise a small exhaustive core (lengths
/// <= 2) followed by `random_count` seeded random lassos with lengths up to
/// the budget.
struct LassoPool {
  std::vector<Lasso> lassos;
  bool exhaustive = false;
};

LassoPool sample_lassos(const AlphabetPtr& alphabet, std::uint64_t budget,
                        std::size_t exhaustive_cap, std::size_t random_count,
                        std::uint64_t seed);

/// The limit of the running meet (for the safety closure) or running join
/// (co-safety) of an extension-bound hook along the lasso's prefixes,
/// detected by three equal consecutive values at cycle-pass boundaries.
/// nullopt when the sequence does not stabilize within the pass budget.
/// Throws UnsupportedBackend when the property is not oracle-backed or
/// lacks the needed hook.
std::optional<Value> stabilized_closure_value(const Property& p,
                                              const Lasso& l, bool safety);

/// Per machine state, the join and meet of the outputs of all states
/// reachable from it, including the state itself. These bound the finitary
/// property over all finite continuations.
void reachable_output_bounds(const FinitaryMachine& m,
                             std::vector<Value>& out_join,
                             std::vector<Value>& out_meet);

}  // namespace qsl::detail

#endif  // QSL_MACHINE_ANALYSIS_HPP
