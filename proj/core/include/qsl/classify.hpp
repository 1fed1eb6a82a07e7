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

#ifndef QSL_CLASSIFY_HPP
#define QSL_CLASSIFY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsl/property.hpp"
#include "qsl/trace.hpp"
#include "qsl/value_domain.hpp"

namespace qsl {

/// Outcome of a single classification check. Machine-backed properties
/// get exact Yes/No answers; oracle-backed ones get No (with witness)
/// when a bounded search finds a violation and NoViolationFoundUpTo
/// otherwise. NotComputable marks a check whose required hooks the
/// backend does not provide; the standalone check operations throw
/// UnsupportedBackend in that situation instead.
enum class VerdictKind {
  Yes,
  No,
  NoViolationFoundUpTo,
  NotComputable,
};

struct Verdict {
  VerdictKind kind = VerdictKind::NotComputable;
  /// The search bound, set when kind is NoViolationFoundUpTo.
  std::uint64_t budget = 0;
};

/// "Yes", "No", "NoViolationFoundUpTo(budget)", or "NotComputable".
std::string to_string(const Verdict& v);

/// Replayable counterexample attached to a No verdict. Which fields are
/// set depends on the check: gap and liveness witnesses carry a lasso
/// and the property's value on it, sup-closedness carries the violating
/// finite prefix, verdict checks carry both the prefix and the lasso.
struct Witness {
  std::optional<Lasso> lasso;
  std::optional<FiniteTrace> prefix;
  /// The property's value on the witness lasso.
  std::optional<Value> value;
  /// The contrasting side of the violation: the closure value for
  /// safety/co-safety gaps, the non-member supremum for sup-closedness,
  /// the unattainable verdict for the verdict checks.
  std::optional<Value> bound;
};

/// Full classification of one property. Verdicts appear in a stable
/// order: safe, cosafe, live, colive, multilive, sup_closed,
/// verdict_safe, verdict_live. Every No verdict has an entry in
/// `witnesses` under the same key.
struct ClassificationReport {
  std::vector<std::pair<std::string, Verdict>> verdicts;
  std::map<std::string, Witness> witnesses;
  /// Least alpha such that the safety closure exceeds the property by at
  /// most alpha everywhere, as a value in the [0, inf] real domain.
  /// Absent when the value domain has no numeric embedding or the
  /// backend cannot bound the gap.
  std::optional<Value> alpha_min;
  /// Dual bound: least beta with the property at most beta above its
  /// co-safety closure everywhere.
  std::optional<Value> beta_min;

  /// The verdict stored under `key`, or null when absent.
  const Verdict* find(const std::string& key) const;
};

/// Classifies a property. Machine-backed properties are decided exactly
/// over the config graph; oracle-backed ones are checked on a
/// deterministic lasso pool with stem and cycle lengths up to `budget`
/// (seeded random sampling beyond the exhaustive cost cap). Checks whose
/// hooks are missing come back NotComputable rather than failing the
/// whole report. Throws UnsupportedBackend only when the backend has no
/// machine and no usable hook at all.
ClassificationReport classify(const PropertyPtr& p, std::uint64_t budget = 6,
                              std::uint64_t seed = 0);

/// Result of one standalone check.
struct CheckResult {
  Verdict verdict;
  std::optional<Witness> witness;
  /// The computed least bound for the alpha/beta checks: exact for
  /// machines, the largest observed gap for bounded oracle runs.
  std::optional<Value> bound;
};

/// Decides whether the safety closure exceeds the property by at most
/// `alpha` on every trace. Exact for machines (also returns the least
/// such alpha); bounded sampling for hooked oracles. Throws
/// DomainNotNumeric when the property domain or alpha has no numeric
/// embedding, UnsupportedBackend when the backend lacks the hooks.
CheckResult check_alpha_safety(const PropertyPtr& p, const Value& alpha,
                               std::uint64_t budget = 6,
                               std::uint64_t seed = 0);

/// Dual check: the property exceeds its co-safety closure by at most
/// `beta` everywhere.
CheckResult check_beta_cosafety(const PropertyPtr& p, const Value& beta,
                                std::uint64_t budget = 6,
                                std::uint64_t seed = 0);

/// Decides whether every reachable prediction set contains its own
/// supremum. Exact for machines; for oracles with a pred_set hook the
/// check scans all finite traces of length 1..budget and then the empty
/// trace. Throws UnsupportedBackend without machine or pred_set.
CheckResult check_sup_closed(const PropertyPtr& p, std::uint64_t budget = 6);

/// Decides whether the property's value on a trace always equals the
/// supremum of the limit of its prediction sets. Exact for machines;
/// bounded over the lasso pool for oracles with a pred_set hook.
CheckResult check_verdict_safety(const PropertyPtr& p,
                                 std::uint64_t budget = 6,
                                 std::uint64_t seed = 0);

/// Decides verdict-liveness: no prefix may make a predicted value
/// unattainable while a strictly smaller value stays attainable. Exact
/// for machines; bounded over shortlex prefixes for oracles with a
/// pred_set hook.
CheckResult check_verdict_liveness(const PropertyPtr& p,
                                   std::uint64_t budget = 6,
                                   std::uint64_t seed = 0);

}  // namespace qsl

#endif  // QSL_CLASSIFY_HPP
