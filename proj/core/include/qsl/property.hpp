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
#ifndef QSL_PROPERTY_HPP
#define QSL_PROPERTY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qsl/trace.hpp"
#include "qsl/value_domain.hpp"

namespace qsl {

/// The limit operator that turns a finitary property into a property of
/// infinite traces: the value of a trace is inf, sup, liminf, or limsup of
/// the sequence of finitary values over its prefixes.
enum class ValueFunction { Inf, Sup, LimInf, LimSup };

/// inf <-> sup, liminf <-> limsup.
ValueFunction dual_value_function(ValueFunction vf);

std::string to_string(ValueFunction vf);

/// Parses "inf", "sup", "liminf", or "limsup". Throws ParseError.
ValueFunction parse_value_function(const std::string& text);

/// A deterministic, complete Moore machine computing a finitary property:
/// the value of a finite trace is the output of the state reached on it.
struct FinitaryMachine {
  AlphabetPtr alphabet;
  DomainPtr domain;
  std::vector<std::string> state_names;
  std::vector<Value> outputs;               // one per state
  std::uint32_t initial = 0;
  std::vector<std::vector<std::uint32_t>> next;  // next[state][symbol]

  std::size_t state_count() const { return outputs.size(); }

  /// Throws BadParams unless the machine is deterministic and complete,
  /// the initial state exists, and every output lies in the domain.
  void validate() const;
};

/// Runs the machine on a symbol sequence and returns the reached state.
std::uint32_t machine_run(const FinitaryMachine& m, std::uint32_t from,
                          const std::vector<std::uint32_t>& symbols);

/// The set of values a property can still assume after a finite prefix.
/// Represented as a sorted list of atoms plus at most one structured
/// infinite tail, which keeps the set exact for the oracle-backed
/// properties whose prediction sets are infinite.
struct PredictionSet {
  DomainPtr domain;
  std::vector<Value> atoms;  // ascending, no duplicates

  /// All naturals n >= nat_tail_from (the top "inf" is not a member; it is
  /// the supremum of the tail). Only for ExtendedNat domains.
  std::optional<std::uint64_t> nat_tail_from;

  /// All reciprocal powers 2^-m for m >= dyadic_tail_from (0 is not a
  /// member; it is the infimum of the tail). Only for real domains.
  std::optional<std::uint64_t> dyadic_tail_from;

  bool empty() const;
  bool contains(const Value& v) const;

  /// Least upper bound of the set. Throws EmptySet on an empty set.
  Value sup() const;
  /// Greatest lower bound. Throws EmptySet on an empty set.
  Value inf() const;
  /// Whether sup() is itself a member of the set.
  bool sup_is_member() const;

  /// Atoms plus the first tail_elements values of each infinite tail,
  /// sorted ascending. Intended for reports and tests.
  std::vector<Value> enumerate(std::size_t tail_elements) const;
};

/// Builds a prediction set from unsorted atoms (sorts and deduplicates).
PredictionSet make_prediction_set(DomainPtr domain, std::vector<Value> atoms);

/// Analytic hooks for properties that have no finite-state representation.
/// eval is mandatory; the rest are optional and unlock exact algorithms
/// where a closed form is known.
struct OracleHooks {
  /// The finitary property itself.
  std::function<Value(const FiniteTrace&)> eval;

  /// Least upper bound of the property values over all finite or infinite
  /// continuations of the argument.
  std::function<Value(const FiniteTrace&)> sup_ext;

  /// Greatest lower bound over all continuations.
  std::function<Value(const FiniteTrace&)> inf_ext;

  /// The exact prediction set after a finite prefix.
  std::function<PredictionSet(const FiniteTrace&)> pred_set;

  /// Exact value on an ultimately periodic trace.
  std::function<Value(const Lasso&)> lasso_eval;

  /// An alternative exact representation of the same property under a
  /// different value function, when one exists. Used as a certificate by
  /// the classifier (a property with a sup-representation is co-safe the
  /// same way an inf-representation makes it safe).
  struct Alt {
    ValueFunction vf;
    std::function<Value(const FiniteTrace&)> eval;
  };
  std::optional<Alt> alt;
};

/// Backend for properties defined by transformation of other properties,
/// such as decomposition parts. Evaluated pointwise on lassos.
struct DerivedBackend {
  std::string rule;  // short human-readable description
  std::function<Value(const Lasso&)> lasso_eval;
  std::function<Value(const FiniteTrace&)> finitary_eval;  // may be empty
};

/// A quantitative property of infinite traces, given as a finitary
/// property (machine, oracle, or derived) together with a value function.
struct Property {
  std::string name;
  AlphabetPtr alphabet;
  DomainPtr domain;
  ValueFunction vf = ValueFunction::Inf;
  std::variant<FinitaryMachine, OracleHooks, DerivedBackend> backend;

  bool is_machine() const {
    return std::holds_alternative<FinitaryMachine>(backend);
  }
  bool is_oracle() const { return std::holds_alternative<OracleHooks>(backend); }
  bool is_derived() const {
    return std::holds_alternative<DerivedBackend>(backend);
  }
  const FinitaryMachine& machine() const {
    return std::get<FinitaryMachine>(backend);
  }
  const OracleHooks& oracle() const { return std::get<OracleHooks>(backend); }
  const DerivedBackend& derived() const {
    return std::get<DerivedBackend>(backend);
  }
};

using PropertyPtr = std::shared_ptr<const Property>;

/// Value of the finitary property on a finite trace. Throws
/// AlphabetMismatch if the trace is over a different alphabet and
/// UnsupportedBackend for derived properties without a finitary evaluator.
Value eval_finitary(const Property& p, const FiniteTrace& s);

/// Exact property value on an ultimately periodic trace.
///
/// Machine backends use the orbit method: run the stem, then iterate the
/// cycle until the state recurs at a cycle boundary. inf and sup fold every
/// output seen from the empty prefix on; liminf and limsup fold only the
/// outputs on the recurring part of the orbit. Oracle backends require an
/// analytic lasso rule and derived backends bring their own evaluator;
/// otherwise UnsupportedBackend.
Value eval_on_lasso(const Property& p, const Lasso& l);

/// True when the property is presented under the given value function,
/// either directly or through an oracle's alternative representation.
/// Serves as a structural certificate: an Inf representation makes a
/// property safe, a Sup representation makes it co-safe.
bool has_representation(const Property& p, ValueFunction vf);

/// A deterministic, complete automaton for a boolean safety property.
/// Rejecting states must be traps: once a prefix is rejected, every
/// extension stays rejected.
struct BooleanDfa {
  AlphabetPtr alphabet;
  std::vector<std::string> state_names;
  std::vector<bool> rejecting;
  std::uint32_t initial = 0;
  std::vector<std::vector<std::uint32_t>> next;

  std::size_t state_count() const { return rejecting.size(); }

  /// Throws BadParams on malformed automata or non-trap rejecting states.
  void validate() const;
};

/// The safety automaton of "label never occurs".
BooleanDfa never_symbol_dfa(const AlphabetPtr& alphabet,
                            const std::string& label);

/// The alphabet {rq, gr, tk, oo} of the response-time properties: request,
/// grant, clock tick, other.
AlphabetPtr response_alphabet();

/// The two-letter alphabet {a, b}.
AlphabetPtr ab_alphabet();

// Built-in properties. Response-time counters saturate at the given cap;
// the saturated band prints as ">=cap".

/// Least response time over the completed request windows so far (the
/// running minimum; infinity while no window has completed), with value
/// function inf. Safe and co-live. Domain: naturals capped at cap, with
/// infinity.
PropertyPtr make_min_response(std::uint64_t cap);

/// Current response time (ticks since the pending request, zero when no
/// request is pending), with value function sup. Co-safe and live.
/// Domain: naturals capped at cap, without infinity, so the saturated band
/// is the top value.
PropertyPtr make_max_response(std::uint64_t cap);

/// Response time of the last completed request window (infinity while a
/// request is pending or none was seen), with value function liminf: the
/// least response time over all but finitely many requests.
PropertyPtr make_tail_min_response(std::uint64_t cap);

/// Like tail_min_response's finitary property but ignoring the first
/// `skip` observations, with value function inf.
PropertyPtr make_skip_min_response(std::uint64_t skip, std::uint64_t cap);

/// Average response time: ticks spent waiting divided by the number of
/// valid requests (requests issued while none was pending), with value
/// function liminf; infinity while no valid request was seen.
/// Oracle-backed on the domain [0, inf] with analytic extension bounds
/// (any prefix extends to an unserved request, giving infinity, and to a
/// suffix of instant grants, giving zero) and an exact lasso rule.
PropertyPtr make_avg_response();

/// Boolean "infinitely many a": 1 on traces with infinitely many a, else 0.
/// Finitary property is "ends with a", value function limsup.
PropertyPtr make_gf_a();

/// Boolean "eventually always b". Finitary property is "ends with b",
/// value function liminf.
PropertyPtr make_fg_b();

/// Discounted safety of the given boolean safety automaton on [0, 1]:
/// value 1 while the prefix can still satisfy the automaton, frozen at
/// 1 - 2^-r once rejected, where r is the length of the shortest rejected
/// prefix. Value function inf; carries an equivalent sup-representation
/// (1 - 2^-|s| while satisfiable) as a co-safety certificate, plus exact
/// extension bounds and lasso rule.
PropertyPtr make_discounted_safety(BooleanDfa dfa);

/// Single-state machine mapping every trace to the given value.
PropertyPtr make_constant(AlphabetPtr alphabet, Value v);

/// Parameters for builtin(). cap defaults to 8 where applicable.
struct BuiltinParams {
  std::optional<std::uint64_t> cap;
  std::optional<std::uint64_t> skip;
  std::optional<BooleanDfa> dfa;
};

/// Builds a built-in property by name: min_response, max_response,
/// tail_min_response, skip_min_response, avg_response, gf_a, fg_b, or
/// discounted_safety. Throws BadParams for unknown names or missing
/// parameters.
PropertyPtr builtin(const std::string& name, const BuiltinParams& params = {});

/// Separating examples used by the classifier tests:
///   - vsafe_not_safe: verdict-safe but not safe; the position of the
///     first b, or 0 on traces without b, over {a, b} with domain
///     naturals plus infinity.
///   - multilive_not_live: multi-live but not live; a three-state machine
///     over {a, b, c} with outputs 0 < 1 < 2.
///   - live_not_verdictlive: live but not verdict-live; 0 without b,
///     2^-p with exactly one b at position p, 1 with two or more b,
///     over {a, b} on [0, 1].
/// Throws UnknownFixture.
PropertyPtr fixture(const std::string& name);

enum class CombineMode { Min, Max };

/// Pointwise minimum or maximum of two properties over the same alphabet
/// and domain. When both are machine-backed with the same value function
/// and the fold is order-compatible (min with inf or liminf, max with sup
/// or limsup), the result is the product machine with pointwise outputs;
/// otherwise the result is derived and evaluated pointwise on lassos.
/// Throws DomainMismatch or AlphabetMismatch.
PropertyPtr combine(const PropertyPtr& p1, const PropertyPtr& p2,
                    CombineMode mode);

/// The same property viewed in the dual order: values are unchanged, the
/// domain is reversed, and the value function is swapped so machine
/// evaluation stays exact. Extension bound hooks swap roles. Prediction
/// set hooks are not propagated.
PropertyPtr complement(const PropertyPtr& p);

/// Rewrites a machine-backed inf- or sup-property into an equivalent
/// machine whose outputs are the running meet (respectively join) of the
/// original outputs. The rewritten finitary property is monotone, so the
/// result is returned as a liminf-property (equally valid as limsup) and
/// evaluates equal to the input on every lasso. Throws UnsupportedBackend
/// for other backends or value functions.
PropertyPtr monotone_rewrite(const PropertyPtr& p);

/// The i-th member of the countable family of inf-properties whose
/// supremum is the given machine-backed liminf-property: the finitary
/// value is top on prefixes shorter than i and the original finitary
/// value afterwards. Throws UnsupportedBackend.
PropertyPtr liminf_as_sup_family(const PropertyPtr& p, std::uint64_t i);

/// Combines a finite family of machine-backed inf-properties into the
/// liminf-property whose finitary value on s is the join over i <= |s| of
/// the i-th member's value, realized as a product machine with a
/// saturating stage counter. Members whose outputs are not already
/// monotonically decreasing are first rewritten to their running meets,
/// which leaves their property values unchanged. The result dominates
/// every member. Throws EmptyFamily, UnsupportedBackend, DomainMismatch,
/// or AlphabetMismatch.
PropertyPtr liminf_upper_bound_combine(const std::vector<PropertyPtr>& family);

}  // namespace qsl

#endif  // QSL_PROPERTY_HPP
