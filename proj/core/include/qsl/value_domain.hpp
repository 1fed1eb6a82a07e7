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
#ifndef QSL_VALUE_DOMAIN_HPP
#define QSL_VALUE_DOMAIN_HPP

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qsl/errors.hpp"

namespace qsl {

/// Result of comparing two lattice values.
enum class Cmp { Less, Equal, Greater, Incomparable };

enum class DomainKind {
  Boolean,       // {0, 1} with 0 < 1
  ExtendedNat,   // naturals, optionally saturated at a cap, with optional top "inf"
  ExtendedReal,  // closed real interval, default [-inf, +inf]
  UnitInterval,  // [0, 1]
  FiniteOrder,   // explicit ascending chain of named levels
  Product,       // componentwise order (a partial order)
  Dual,          // the opposite order of the inner domain
};

class ValueDomain;
using DomainPtr = std::shared_ptr<const ValueDomain>;

/// A complete lattice of verdict values. Immutable after construction;
/// shared by the values that live in it.
///
/// ExtendedNat models three shapes with one kind:
///   - cap absent:  0 < 1 < 2 < ... < inf          (with_infinity must be true)
///   - cap = c, with_infinity: 0 < ... < c-1 < ">=c" < inf
///   - cap = c, no infinity:   0 < ... < c-1 < ">=c"
/// The saturated band ">=c" is the domain's surrogate for every count >= c and
/// embeds numerically as +infinity.
class ValueDomain {
 public:
  DomainKind kind = DomainKind::Boolean;

  // ExtendedNat parameters.
  std::optional<std::uint64_t> cap;
  bool with_infinity = true;

  // ExtendedReal bounds (UnitInterval is the fixed special case [0, 1]).
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  // FiniteOrder levels, ascending.
  std::vector<std::string> levels;

  // Product components.
  DomainPtr first;
  DomainPtr second;

  // Dual inner domain.
  DomainPtr inner;

  static DomainPtr boolean();
  static DomainPtr extended_nat();  // uncapped, top = inf
  static DomainPtr extended_nat(std::uint64_t cap, bool with_infinity = true);
  static DomainPtr extended_real(
      double lo = -std::numeric_limits<double>::infinity(),
      double hi = std::numeric_limits<double>::infinity());
  static DomainPtr unit_interval();
  static DomainPtr finite_order(std::vector<std::string> levels);
  static DomainPtr product(DomainPtr first, DomainPtr second);
  /// Opposite order. dual(dual(d)) == d structurally (the factory unwraps).
  static DomainPtr dual(DomainPtr inner);
};

/// Structural equality of domains (compares parameters, not pointers).
bool same_domain(const ValueDomain& a, const ValueDomain& b);
bool same_domain(const DomainPtr& a, const DomainPtr& b);

/// ExtendedNat payload.
struct NatValue {
  enum class Band { Finite, Saturated, Infinite };
  Band band = Band::Finite;
  std::uint64_t n = 0;
};

/// A value tagged with its domain. For Dual domains the payload is shaped
/// like the inner domain's payload; only the ordering is flipped.
class Value {
 public:
  Value() = default;
  Value(DomainPtr domain, std::variant<bool, NatValue, double, std::size_t,
                                       std::vector<Value>>
                              payload)
      : domain_(std::move(domain)), payload_(std::move(payload)) {}

  const DomainPtr& domain() const { return domain_; }

  bool as_bool() const { return std::get<bool>(payload_); }
  const NatValue& as_nat() const { return std::get<NatValue>(payload_); }
  double as_real() const { return std::get<double>(payload_); }
  std::size_t as_level() const { return std::get<std::size_t>(payload_); }
  const std::vector<Value>& as_pair() const {
    return std::get<std::vector<Value>>(payload_);
  }

  const std::variant<bool, NatValue, double, std::size_t, std::vector<Value>>&
  payload() const {
    return payload_;
  }

 private:
  DomainPtr domain_;
  std::variant<bool, NatValue, double, std::size_t, std::vector<Value>>
      payload_;
};

// Constructors. Each validates against the domain and throws BadParams or
// DomainMismatch on misuse.
Value make_bool(const DomainPtr& d, bool b);
Value make_nat(const DomainPtr& d, std::uint64_t n);  // saturates at the cap
Value nat_saturated(const DomainPtr& d);
Value nat_infinity(const DomainPtr& d);
Value make_real(const DomainPtr& d, double x);
Value make_level(const DomainPtr& d, const std::string& label);
Value make_level(const DomainPtr& d, std::size_t index);
Value make_pair(const DomainPtr& d, Value first, Value second);

/// Re-tag a value into the dual of its current domain (or back). Payload is
/// unchanged; only the order flips.
Value dualize(const Value& v);

Value top(const DomainPtr& d);
Value bottom(const DomainPtr& d);

/// Compare within one domain. Throws DomainMismatch if the operands disagree
/// structurally. Real-valued kinds compare with absolute tolerance 1e-9.
Cmp compare(const Value& a, const Value& b);
bool leq(const Value& a, const Value& b);
bool geq(const Value& a, const Value& b);
bool equal(const Value& a, const Value& b);

Value join(const Value& a, const Value& b);
Value meet(const Value& a, const Value& b);

/// Fold join/meet over a nonempty set. Throws EmptySet when empty.
Value join_all(const std::vector<Value>& vs);
Value meet_all(const std::vector<Value>& vs);

/// True for domains whose values embed into the extended reals.
bool is_numeric(const ValueDomain& d);

/// Numeric embedding. Finite naturals map to themselves, the saturated band
/// and "inf" map to +infinity, Boolean to {0, 1}, Dual to the negated inner
/// embedding (so dual-order differences stay positive). Throws
/// DomainNotNumeric for FiniteOrder and Product.
double to_real(const Value& v);

/// to_real(upper) - to_real(lower), with 0 whenever the two compare Equal
/// (avoids inf - inf at saturated tops).
double numeric_width(const Value& upper, const Value& lower);

/// Canonical text form: "3", ">=8", "inf", "0.875", "1", level labels,
/// "(x, y)" for products. Stable across runs; used as a map key internally.
std::string format_value(const Value& v);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Parse the canonical text form back into a value of domain `d`.
/// Throws ParseError on malformed text, UnknownSymbol-free by design.
Value parse_value(const DomainPtr& d, const std::string& text);

/// Sort ascending under `compare` (requires a total order among the inputs).
std::vector<Value> sort_values(std::vector<Value> vs);

/// Deduplicate (by Equal) and sort ascending.
std::vector<Value> sort_unique_values(std::vector<Value> vs);

/// Representatives of the domain regions *not* covered by the sorted universe
/// `ascending`: one element strictly between each consecutive pair where the
/// domain has one, and one strictly above the maximum where the domain has
/// one. Total-order domains only.
std::vector<Value> gap_representatives(const DomainPtr& d,
                                       const std::vector<Value>& ascending);

}  // namespace qsl

#endif  // QSL_VALUE_DOMAIN_HPP
