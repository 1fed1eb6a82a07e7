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

#ifndef QSL_CLOSURE_HPP
#define QSL_CLOSURE_HPP

#include <cstdint>
#include <optional>

#include "qsl/property.hpp"
#include "qsl/trace.hpp"
#include "qsl/value_domain.hpp"

namespace qsl {

/// Sufficient statistic for a finite prefix of a machine-backed property:
/// the machine state reached, plus the running aggregate of the outputs
/// seen so far. The aggregate is the running meet when the value function
/// is Inf and the running join when it is Sup; for LimInf and LimSup the
/// value of a run does not depend on any finite prefix of outputs, so the
/// aggregate is absent. When present, the aggregate always lies in the
/// meet/join closure of the machine's finite output set.
struct Config {
  std::uint32_t state = 0;
  std::optional<Value> aggregate;
};

/// The config reached on the empty prefix. Machine-backed properties with
/// a totally ordered value domain only; throws UnsupportedBackend
/// otherwise.
Config initial_config(const Property& p);

/// The config reached after reading a finite prefix from the initial
/// config. Throws AlphabetMismatch when the trace alphabet differs from
/// the property's alphabet.
Config config_after(const Property& p, const FiniteTrace& prefix);

/// Advances a config by one symbol index. Throws BadParams when the
/// config's state or aggregate shape does not fit the property, or when
/// the symbol index is out of range.
Config config_step(const Property& p, const Config& c, std::uint32_t symbol);

/// Exact least upper bound of the property over all infinite
/// continuations from config c. Machine-backed properties only; throws
/// UnsupportedBackend otherwise.
Value top_value(const Property& p, const Config& c);

/// Exact greatest lower bound of the property over all infinite
/// continuations from config c. Machine-backed properties only.
Value bottom_value(const Property& p, const Config& c);

/// The exact, finite set of values the property can still assume on
/// continuations from config c. Machine-backed properties only.
PredictionSet prediction_set(const Property& p, const Config& c);

/// The least safe property bounding p from above. For a machine-backed p
/// the result is a machine over p's config graph whose state outputs are
/// the per-config top values, read under value function Inf. An
/// oracle-backed p must either carry an Inf representation already (its
/// own value function or an alt hook), in which case the property is its
/// own safety closure and is returned under the new name, or provide a
/// sup_ext hook, which the closure evaluates directly. Throws
/// UnsupportedBackend for derived backends and for oracles with neither.
PropertyPtr safety_closure(const PropertyPtr& p);

/// Order dual of safety_closure: the greatest co-safe property below p,
/// built from per-config bottom values (machine) or the inf_ext hook
/// (oracle) under value function Sup. An oracle already carrying a Sup
/// representation is its own co-safety closure and is returned renamed.
PropertyPtr cosafety_closure(const PropertyPtr& p);

}  // namespace qsl

#endif  // QSL_CLOSURE_HPP
