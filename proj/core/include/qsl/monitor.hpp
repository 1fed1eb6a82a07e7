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

#ifndef QSL_MONITOR_HPP
#define QSL_MONITOR_HPP

/// Streaming ghost monitor and finite-state abstract monitor synthesis.
///
/// The ghost monitor consumes one observation at a time and maintains the
/// finitary value of the consumed prefix together with the lower and upper
/// bounds on the values the property can still take; registered hypotheses
/// of the form "value >= v" (GE) or "value <= v" (LE) flip from Open to
/// Rejected as soon as the bounds exclude them, and never flip back.
///
/// The abstract monitor is a finite-state machine over prefix classes: a
/// class is either an explored trace whose prediction width is still at
/// least delta, or a frozen (absorbing) class whose output approximates
/// every extension within delta.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsl/property.hpp"
#include "qsl/trace.hpp"
#include "qsl/value_domain.hpp"

namespace qsl {

/// Direction of a registered hypothesis about the property's final value.
enum class HypothesisKind { GE, LE };

/// A lower-bound (GE) or upper-bound (LE) hypothesis tracked by the ghost
/// monitor. rejected_at_step is the 1-based step index at which the
/// hypothesis was rejected (0 when rejected before any observation), and
/// stays empty while the hypothesis is open.
struct Hypothesis {
  HypothesisKind kind = HypothesisKind::GE;
  Value value;
  std::optional<std::uint64_t> rejected_at_step;

  bool open() const { return !rejected_at_step.has_value(); }
};

/// Snapshot of the ghost monitor after an observation (or at step 0,
/// before any observation).
struct StepReport {
  /// 1-based index of the observation that produced this report; 0 for
  /// the initial snapshot.
  std::uint64_t step = 0;
  /// Finitary value of the consumed prefix.
  Value pi;
  /// Greatest lower bound on the values still achievable.
  Value lower;
  /// Least upper bound on the values still achievable.
  Value upper;
  /// Whether the upper bound is itself an achievable value; only machine
  /// backends can decide this, so it is empty for oracle backends.
  std::optional<bool> sup_realizable;
  /// Indices into the hypothesis list that were rejected by this step.
  std::vector<std::size_t> newly_rejected;
};

struct GhostImpl;

/// Streaming monitor state: the property, the observation count, the
/// hypothesis list, and the backend cursor (a config-graph node for
/// machines, the consumed prefix for oracles). Single-owner mutable.
struct GhostState {
  PropertyPtr property;
  std::uint64_t steps = 0;
  std::vector<Hypothesis> hypotheses;
  std::shared_ptr<GhostImpl> impl;
};

/// Creates a ghost monitor for p with the given hypotheses. Hypotheses
/// already excluded by the initial bounds are rejected at step 0.
///
/// Machine backends must have a totally ordered value domain; oracle
/// backends need the eval, sup_ext, and inf_ext hooks. Derived backends
/// and hook-less oracles throw UnsupportedBackend. Hypothesis values must
/// live in p's domain (DomainMismatch otherwise).
GhostState make_ghost(const PropertyPtr& p,
                      std::vector<Hypothesis> hypotheses = {});

/// Current bounds and hypothesis statuses without consuming an
/// observation; the step-0 snapshot when nothing has been consumed.
StepReport ghost_report(const GhostState& g);

/// Consumes one observation (a symbol index into p's alphabet), advances
/// the state, and reports the new bounds along with any hypotheses the
/// step rejected. Throws BadParams on an out-of-range symbol.
StepReport ghost_step(GhostState& g, std::uint32_t symbol);

/// One equivalence class of an abstract monitor.
struct MonitorClass {
  std::uint32_t id = 0;
  /// Shortest trace in the class (the class's name in exports).
  FiniteTrace representative;
  /// Frozen classes absorb every extension.
  bool frozen = false;
  /// Output reported for every trace in the class.
  Value gamma;
};

/// Finite-state approximate monitor: a right-monotonic equivalence on
/// finite traces with a per-class output. Transitions are total and
/// frozen classes are absorbing. Immutable after construction.
struct AbstractMonitor {
  double delta = 0.0;
  AlphabetPtr alphabet;
  std::uint32_t initial = 0;
  std::vector<MonitorClass> classes;
  /// next[class][symbol] -> class.
  std::vector<std::vector<std::uint32_t>> next;

  std::uint32_t class_count() const {
    return static_cast<std::uint32_t>(classes.size());
  }
  /// Checks shape: sizes, id order, total transitions, frozen absorption.
  void validate() const;
};

/// Unfolds p breadth-first from the empty trace into an abstract monitor
/// whose outputs track the finitary value within delta: a trace is
/// expanded while the width between its extension bounds is at least
/// delta, and each child below that width becomes a frozen class. When
/// the empty trace is already below delta the monitor is a single frozen
/// class outputting the empty trace's value.
///
/// Requires delta > 0 (BadParams), a numeric value domain
/// (DomainNotNumeric), and extension bounds: a machine backend or an
/// oracle with sup_ext and inf_ext (UnsupportedBackend otherwise). Throws
/// DepthExceeded(max_depth) when the frontier still has width >= delta at
/// max_depth, which signals that p may not be approximately safe and
/// co-safe at this delta.
AbstractMonitor synthesize(const PropertyPtr& p, double delta,
                           std::size_t max_depth = 32);

/// Outputs of the monitor on every prefix of w, from the empty trace to w
/// itself (|w| + 1 values). Throws AlphabetMismatch when w's alphabet
/// differs from the monitor's.
std::vector<Value> monitor_run(const AbstractMonitor& m, const FiniteTrace& w);

/// Limit output of the monitor on the lasso: the eventually constant
/// output of the class sequence. Synthesized monitors always reach a
/// frozen class; for imported monitors whose run cycles through classes
/// with differing outputs the limit does not exist and Error is thrown.
Value monitor_run(const AbstractMonitor& m, const Lasso& w);

/// Export format for abstract monitors.
enum class MonitorFormat { Json, Dot };

/// Serializes the monitor: Json is the documented schema with stable key
/// order; Dot renders one node per class (frozen classes double-circled,
/// labeled with gamma) and one edge per (class, symbol).
std::string export_monitor(const AbstractMonitor& m, MonitorFormat format);

/// Parses a monitor from the JSON export format. Gamma values are parsed
/// in the given domain. Unknown fields and malformed shapes throw
/// ParseError naming the offending path.
AbstractMonitor import_monitor_json(const std::string& text,
                                    const DomainPtr& domain);

/// Structural equality: same delta, alphabet labels, initial class,
/// classes (id, representative, frozen flag, gamma), and transitions.
bool monitors_equal(const AbstractMonitor& a, const AbstractMonitor& b);

}  // namespace qsl

#endif  // QSL_MONITOR_HPP
