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

#ifndef QSL_DECOMPOSE_HPP
#define QSL_DECOMPOSE_HPP

/// Decompositions of a quantitative property into extremal parts:
/// the pointwise minimum of its safety closure and a liveness property,
/// the pointwise maximum of its co-safety closure and a co-liveness
/// property, and a pointwise minimum of two liveness properties. A
/// verification operation replays the defining identities on sampled and
/// structurally enumerated lassos and classifies the non-closure parts.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsl/classify.hpp"
#include "qsl/property.hpp"
#include "qsl/trace.hpp"

namespace qsl {

/// Which decomposition a pair of parts came from, and therefore which
/// pointwise identity (minimum or maximum) they must satisfy.
enum class DecomposeMode { SafetyLiveness, CosafetyColiveness, LivenessLiveness };

/// Result of replaying a decomposition's defining identity.
struct DecompositionReport {
  /// True when the pointwise identity held on every checked lasso.
  bool identity_ok = false;
  /// Number of lassos the identity was evaluated on.
  std::size_t lassos_checked = 0;
  /// First lasso where the identity failed, when identity_ok is false.
  std::optional<Lasso> counterexample;
  /// Classification verdicts for the non-closure parts, keyed by
  /// "<part name> <check>"; acceptable kinds are Yes and
  /// NoViolationFoundUpTo.
  std::vector<std::pair<std::string, Verdict>> part_checks;

  /// True when the identity held and every part check is Yes or bounded.
  bool passed() const;
};

/// Splits p into (safety part, liveness part) with
/// p = min(safety part, liveness part) pointwise. The safety part is the
/// safety closure of p; the liveness part evaluates a lasso to p's value
/// where the closure disagrees with p and to top elsewhere.
///
/// Throws UnsupportedBackend when the safety closure of p is not
/// computable (derived backends, oracles without extension hooks).
std::pair<PropertyPtr, PropertyPtr> safety_liveness(const PropertyPtr& p);

/// Splits p into (co-safety part, co-liveness part) with
/// p = max(co-safety part, co-liveness part) pointwise; the order-dual of
/// safety_liveness with the co-safety closure and bottom.
std::pair<PropertyPtr, PropertyPtr> cosafety_coliveness(const PropertyPtr& p);

/// Splits p into two liveness properties with p = min(part1, part2)
/// pointwise. Part i maps a lasso to top when its normalized cycle is
/// exactly the single symbol a_i and to p's value otherwise; normalization
/// makes the "tail equals a_i repeated forever" test syntactic.
///
/// Throws UnaryAlphabet when a1 equals a2 or the alphabet has fewer than
/// two symbols, and UnknownSymbol when a label is not in p's alphabet.
std::pair<PropertyPtr, PropertyPtr> liveness_liveness(const PropertyPtr& p,
                                                      const std::string& a1,
                                                      const std::string& a2);

/// Replays the decomposition identity for parts produced by one of the
/// operations above: evaluates the pointwise minimum (or maximum, for
/// CosafetyColiveness) of the parts against p on `samples` random
/// normalized lassos plus, for machine-backed p, every simple lasso of its
/// config graph (deterministic enumeration, capped); classifies the
/// liveness (resp. co-liveness) verdict of each non-closure part.
DecompositionReport verify_decomposition(
    const PropertyPtr& p, const std::pair<PropertyPtr, PropertyPtr>& parts,
    DecomposeMode mode, std::size_t samples = 100, std::uint64_t seed = 0);

}  // namespace qsl

#endif  // QSL_DECOMPOSE_HPP
