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
#include "qsl/value_domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qsl {

namespace {

constexpr double kEps = 1e-9;

Cmp flip(Cmp c) {
  switch (c) {
    case Cmp::Less:
      return Cmp::Greater;
    case Cmp::Greater:
      return Cmp::Less;
    default:
      return c;
  }
}

Cmp cmp_real(double a, double b) {
  if (a == b) return Cmp::Equal;
  if (std::isfinite(a) && std::isfinite(b) && std::fabs(a - b) <= kEps)
    return Cmp::Equal;
  return a < b ? Cmp::Less : Cmp::Greater;
}

const ValueDomain& deref(const DomainPtr& d) {
  if (!d) throw BadParams("value has no domain");
  return *d;
}

Value retag(const DomainPtr& d, const Value& v) { return Value(d, v.payload()); }

/// View a Dual-domain value through its inner domain.
Value inner_view(const Value& v) {
  return Value(deref(v.domain()).inner, v.payload());
}

}  // namespace

DomainPtr ValueDomain::boolean() {
  auto d = std::make_shared<ValueDomain>();
  d->kind = DomainKind::Boolean;
  return d;
}

DomainPtr ValueDomain::extended_nat() {
  auto d = std::make_shared<ValueDomain>();
  d->kind = DomainKind::ExtendedNat;
  d->with_infinity = true;
  return d;
}

DomainPtr ValueDomain::extended_nat(std::uint64_t cap, bool with_infinity) {
  if (cap == 0) throw BadParams("extended_nat cap must be positive");
  auto d = std::make_shared<ValueDomain>();
  d->kind = DomainKind::ExtendedNat;
  d->cap = cap;
  d->with_infinity = with_infinity;
  return d;
}

DomainPtr ValueDomain::extended_real(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo >= hi)
    throw BadParams("extended_real bounds must satisfy lo < hi");
  auto d = std::make_shared<ValueDomain>();
  d->kind = DomainKind::ExtendedReal;
  d->lo = lo;
  d->hi = hi;
  return d;
}

DomainPtr ValueDomain::unit_interval() {
  auto d = std::make_shared<ValueDomain>();
  d->kind = DomainKind::UnitInterval;
  d->lo = 0.0;
  d->hi = 1.0;
  return d;
}

DomainPtr ValueDomain::finite_order(std::vector<std::string> levels) {
  if (levels.empty()) throw BadParams("finite_order needs at least one level");
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = i + 1; j < levels.size(); ++j)
      if (levels[i] == levels[j])
        throw BadParams("finite_order levels must be distinct");
  auto d = std::make_shared<ValueDomain>();
  d->kind = DomainKind::FiniteOrder;
  d->levels = std::move(levels);
  return d;
}

DomainPtr ValueDomain::product(DomainPtr first, DomainPtr second) {
  if (!first || !second) throw BadParams("product components must be set");
  auto d = std::make_shared<ValueDomain>();
  d->kind = DomainKind::Product;
  d->first = std::move(first);
  d->second = std::move(second);
  return d;
}

DomainPtr ValueDomain::dual(DomainPtr inner) {
  if (!inner) throw BadParams("dual inner domain must be set");
  if (inner->kind == DomainKind::Dual) return inner->inner;
  auto d = std::make_shared<ValueDomain>();
  d->kind = DomainKind::Dual;
  d->inner = std::move(inner);
  return d;
}

bool same_domain(const ValueDomain& a, const ValueDomain& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case DomainKind::Boolean:
      return true;
    case DomainKind::ExtendedNat:
      return a.cap == b.cap && a.with_infinity == b.with_infinity;
    case DomainKind::ExtendedReal:
      return cmp_real(a.lo, b.lo) == Cmp::Equal &&
             cmp_real(a.hi, b.hi) == Cmp::Equal;
    case DomainKind::UnitInterval:
      return true;
    case DomainKind::FiniteOrder:
      return a.levels == b.levels;
    case DomainKind::Product:
      return same_domain(*a.first, *b.first) && same_domain(*a.second, *b.second);
    case DomainKind::Dual:
      return same_domain(*a.inner, *b.inner);
  }
  return false;
}

bool same_domain(const DomainPtr& a, const DomainPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return same_domain(*a, *b);
}

Value make_bool(const DomainPtr& d, bool b) {
  if (deref(d).kind != DomainKind::Boolean)
    throw DomainMismatch("make_bool on non-boolean domain");
  return Value(d, b);
}

Value make_nat(const DomainPtr& d, std::uint64_t n) {
  const auto& dom = deref(d);
  if (dom.kind != DomainKind::ExtendedNat)
    throw DomainMismatch("make_nat on non-nat domain");
  NatValue v;
  if (dom.cap && n >= *dom.cap) {
    v.band = NatValue::Band::Saturated;
    v.n = *dom.cap;
  } else {
    v.band = NatValue::Band::Finite;
    v.n = n;
  }
  return Value(d, v);
}

Value nat_saturated(const DomainPtr& d) {
  const auto& dom = deref(d);
  if (dom.kind != DomainKind::ExtendedNat || !dom.cap)
    throw BadParams("saturated value needs a capped nat domain");
  NatValue v;
  v.band = NatValue::Band::Saturated;
  v.n = *dom.cap;
  return Value(d, v);
}

Value nat_infinity(const DomainPtr& d) {
  const auto& dom = deref(d);
  if (dom.kind != DomainKind::ExtendedNat || !dom.with_infinity)
    throw BadParams("domain has no infinity element");
  NatValue v;
  v.band = NatValue::Band::Infinite;
  v.n = 0;
  return Value(d, v);
}

Value make_real(const DomainPtr& d, double x) {
  const auto& dom = deref(d);
  if (dom.kind != DomainKind::ExtendedReal &&
      dom.kind != DomainKind::UnitInterval)
    throw DomainMismatch("make_real on non-real domain");
  if (std::isnan(x)) throw BadParams("value is NaN");
  if (x < dom.lo - kEps || x > dom.hi + kEps)
    throw BadParams("value " + format_double(x) + " outside domain bounds");
  x = std::min(std::max(x, dom.lo), dom.hi);
  return Value(d, x);
}

Value make_level(const DomainPtr& d, const std::string& label) {
  const auto& dom = deref(d);
  if (dom.kind != DomainKind::FiniteOrder)
    throw DomainMismatch("make_level on non-finite-order domain");
  for (std::size_t i = 0; i < dom.levels.size(); ++i)
    if (dom.levels[i] == label) return Value(d, i);
  throw BadParams("unknown level '" + label + "'");
}

Value make_level(const DomainPtr& d, std::size_t index) {
  const auto& dom = deref(d);
  if (dom.kind != DomainKind::FiniteOrder)
    throw DomainMismatch("make_level on non-finite-order domain");
  if (index >= dom.levels.size()) throw BadParams("level index out of range");
  return Value(d, index);
}

Value make_pair(const DomainPtr& d, Value first, Value second) {
  const auto& dom = deref(d);
  if (dom.kind != DomainKind::Product)
    throw DomainMismatch("make_pair on non-product domain");
  if (!same_domain(first.domain(), dom.first) ||
      !same_domain(second.domain(), dom.second))
    throw DomainMismatch("pair components do not match product domain");
  std::vector<Value> pair;
  pair.push_back(std::move(first));
  pair.push_back(std::move(second));
  return Value(d, std::move(pair));
}

Value dualize(const Value& v) {
  return Value(ValueDomain::dual(v.domain()), v.payload());
}

Value top(const DomainPtr& d) {
  const auto& dom = deref(d);
  switch (dom.kind) {
    case DomainKind::Boolean:
      return Value(d, true);
    case DomainKind::ExtendedNat:
      if (dom.with_infinity) return nat_infinity(d);
      return nat_saturated(d);
    case DomainKind::ExtendedReal:
      return Value(d, dom.hi);
    case DomainKind::UnitInterval:
      return Value(d, 1.0);
    case DomainKind::FiniteOrder:
      return Value(d, dom.levels.size() - 1);
    case DomainKind::Product:
      return make_pair(d, top(dom.first), top(dom.second));
    case DomainKind::Dual:
      return Value(d, bottom(dom.inner).payload());
  }
  throw BadParams("bad domain kind");
}

Value bottom(const DomainPtr& d) {
  const auto& dom = deref(d);
  switch (dom.kind) {
    case DomainKind::Boolean:
      return Value(d, false);
    case DomainKind::ExtendedNat:
      return make_nat(d, 0);
    case DomainKind::ExtendedReal:
      return Value(d, dom.lo);
    case DomainKind::UnitInterval:
      return Value(d, 0.0);
    case DomainKind::FiniteOrder:
      return Value(d, std::size_t{0});
    case DomainKind::Product:
      return make_pair(d, bottom(dom.first), bottom(dom.second));
    case DomainKind::Dual:
      return Value(d, top(dom.inner).payload());
  }
  throw BadParams("bad domain kind");
}

Cmp compare(const Value& a, const Value& b) {
  if (!same_domain(a.domain(), b.domain()))
    throw DomainMismatch("compared values live in different domains");
  const auto& dom = deref(a.domain());
  switch (dom.kind) {
    case DomainKind::Boolean: {
      bool x = a.as_bool(), y = b.as_bool();
      if (x == y) return Cmp::Equal;
      return x < y ? Cmp::Less : Cmp::Greater;
    }
    case DomainKind::ExtendedNat: {
      const auto &x = a.as_nat(), &y = b.as_nat();
      auto rank = [](const NatValue& v) {
        switch (v.band) {
          case NatValue::Band::Finite:
            return 0;
          case NatValue::Band::Saturated:
            return 1;
          default:
            return 2;
        }
      };
      if (rank(x) != rank(y)) return rank(x) < rank(y) ? Cmp::Less : Cmp::Greater;
      if (x.band != NatValue::Band::Finite) return Cmp::Equal;
      if (x.n == y.n) return Cmp::Equal;
      return x.n < y.n ? Cmp::Less : Cmp::Greater;
    }
    case DomainKind::ExtendedReal:
    case DomainKind::UnitInterval:
      return cmp_real(a.as_real(), b.as_real());
    case DomainKind::FiniteOrder: {
      std::size_t x = a.as_level(), y = b.as_level();
      if (x == y) return Cmp::Equal;
      return x < y ? Cmp::Less : Cmp::Greater;
    }
    case DomainKind::Product: {
      Cmp cf = compare(a.as_pair()[0], b.as_pair()[0]);
      Cmp cs = compare(a.as_pair()[1], b.as_pair()[1]);
      if (cf == Cmp::Equal && cs == Cmp::Equal) return Cmp::Equal;
      bool le = (cf == Cmp::Less || cf == Cmp::Equal) &&
                (cs == Cmp::Less || cs == Cmp::Equal);
      bool ge = (cf == Cmp::Greater || cf == Cmp::Equal) &&
                (cs == Cmp::Greater || cs == Cmp::Equal);
      if (le) return Cmp::Less;
      if (ge) return Cmp::Greater;
      return Cmp::Incomparable;
    }
    case DomainKind::Dual:
      return flip(compare(inner_view(a), inner_view(b)));
  }
  throw BadParams("bad domain kind");
}

bool leq(const Value& a, const Value& b) {
  Cmp c = compare(a, b);
  return c == Cmp::Less || c == Cmp::Equal;
}

bool geq(const Value& a, const Value& b) {
  Cmp c = compare(a, b);
  return c == Cmp::Greater || c == Cmp::Equal;
}

bool equal(const Value& a, const Value& b) { return compare(a, b) == Cmp::Equal; }

Value join(const Value& a, const Value& b) {
  const auto& dom = deref(a.domain());
  if (dom.kind == DomainKind::Product) {
    if (!same_domain(a.domain(), b.domain()))
      throw DomainMismatch("joined values live in different domains");
    return make_pair(a.domain(), join(a.as_pair()[0], b.as_pair()[0]),
                     join(a.as_pair()[1], b.as_pair()[1]));
  }
  if (dom.kind == DomainKind::Dual) {
    if (!same_domain(a.domain(), b.domain()))
      throw DomainMismatch("joined values live in different domains");
    return Value(a.domain(), meet(inner_view(a), inner_view(b)).payload());
  }
  Cmp c = compare(a, b);
  if (c == Cmp::Incomparable)
    throw BadParams("incomparable values in a non-lattice position");
  return c == Cmp::Less ? b : a;
}

Value meet(const Value& a, const Value& b) {
  const auto& dom = deref(a.domain());
  if (dom.kind == DomainKind::Product) {
    if (!same_domain(a.domain(), b.domain()))
      throw DomainMismatch("met values live in different domains");
    return make_pair(a.domain(), meet(a.as_pair()[0], b.as_pair()[0]),
                     meet(a.as_pair()[1], b.as_pair()[1]));
  }
  if (dom.kind == DomainKind::Dual) {
    if (!same_domain(a.domain(), b.domain()))
      throw DomainMismatch("met values live in different domains");
    return Value(a.domain(), join(inner_view(a), inner_view(b)).payload());
  }
  Cmp c = compare(a, b);
  if (c == Cmp::Incomparable)
    throw BadParams("incomparable values in a non-lattice position");
  return c == Cmp::Greater ? b : a;
}

Value join_all(const std::vector<Value>& vs) {
  if (vs.empty()) throw EmptySet();
  Value acc = vs.front();
  for (std::size_t i = 1; i < vs.size(); ++i) acc = join(acc, vs[i]);
  return acc;
}

Value meet_all(const std::vector<Value>& vs) {
  if (vs.empty()) throw EmptySet();
  Value acc = vs.front();
  for (std::size_t i = 1; i < vs.size(); ++i) acc = meet(acc, vs[i]);
  return acc;
}

bool is_numeric(const ValueDomain& d) {
  switch (d.kind) {
    case DomainKind::Boolean:
    case DomainKind::ExtendedNat:
    case DomainKind::ExtendedReal:
    case DomainKind::UnitInterval:
      return true;
    case DomainKind::Dual:
      return is_numeric(*d.inner);
    default:
      return false;
  }
}

double to_real(const Value& v) {
  const auto& dom = deref(v.domain());
  switch (dom.kind) {
    case DomainKind::Boolean:
      return v.as_bool() ? 1.0 : 0.0;
    case DomainKind::ExtendedNat: {
      const auto& n = v.as_nat();
      if (n.band == NatValue::Band::Finite) return static_cast<double>(n.n);
      return std::numeric_limits<double>::infinity();
    }
    case DomainKind::ExtendedReal:
    case DomainKind::UnitInterval:
      return v.as_real();
    case DomainKind::Dual:
      return -to_real(inner_view(v));
    default:
      throw DomainNotNumeric("domain has no numeric embedding");
  }
}

double numeric_width(const Value& upper, const Value& lower) {
  if (compare(upper, lower) == Cmp::Equal) return 0.0;
  return to_real(upper) - to_real(lower);
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string format_value(const Value& v) {
  const auto& dom = deref(v.domain());
  switch (dom.kind) {
    case DomainKind::Boolean:
      return v.as_bool() ? "1" : "0";
    case DomainKind::ExtendedNat: {
      const auto& n = v.as_nat();
      switch (n.band) {
        case NatValue::Band::Finite:
          return std::to_string(n.n);
        case NatValue::Band::Saturated:
          return ">=" + std::to_string(*dom.cap);
        default:
          return "inf";
      }
    }
    case DomainKind::ExtendedReal:
    case DomainKind::UnitInterval:
      return format_double(v.as_real());
    case DomainKind::FiniteOrder:
      return dom.levels[v.as_level()];
    case DomainKind::Product:
      return "(" + format_value(v.as_pair()[0]) + ", " +
             format_value(v.as_pair()[1]) + ")";
    case DomainKind::Dual:
      return format_value(inner_view(v));
  }
  throw BadParams("bad domain kind");
}

Value parse_value(const DomainPtr& d, const std::string& text) {
  const auto& dom = deref(d);
  switch (dom.kind) {
    case DomainKind::Boolean:
      if (text == "0" || text == "false") return make_bool(d, false);
      if (text == "1" || text == "true") return make_bool(d, true);
      throw ParseError("bad boolean value '" + text + "'");
    case DomainKind::ExtendedNat: {
      if (text == "inf") {
        if (!dom.with_infinity)
          throw ParseError("domain has no infinity element");
        return nat_infinity(d);
      }
      std::string digits = text;
      bool saturated = false;
      if (text.rfind(">=", 0) == 0) {
        digits = text.substr(2);
        saturated = true;
      }
      if (digits.empty() ||
          digits.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad natural value '" + text + "'");
      std::uint64_t n = std::strtoull(digits.c_str(), nullptr, 10);
      if (saturated) {
        if (!dom.cap || n < *dom.cap)
          throw ParseError("bad saturated value '" + text + "'");
        return nat_saturated(d);
      }
      return make_nat(d, n);
    }
    case DomainKind::ExtendedReal:
    case DomainKind::UnitInterval: {
      if (text == "inf" || text == "+inf")
        return make_real(d, std::numeric_limits<double>::infinity());
      if (text == "-inf")
        return make_real(d, -std::numeric_limits<double>::infinity());
      char* end = nullptr;
      double x = std::strtod(text.c_str(), &end);
      if (end == text.c_str() || *end != '\0')
        throw ParseError("bad real value '" + text + "'");
      try {
        return make_real(d, x);
      } catch (const BadParams& e) {
        throw ParseError(e.what());
      }
    }
    case DomainKind::FiniteOrder:
      for (std::size_t i = 0; i < dom.levels.size(); ++i)
        if (dom.levels[i] == text) return Value(d, i);
      throw ParseError("bad level '" + text + "'");
    case DomainKind::Product: {
      if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw ParseError("bad pair value '" + text + "'");
      int depth = 0;
      std::size_t split = std::string::npos;
      for (std::size_t i = 1; i + 1 < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')') --depth;
        if (depth == 0 && text[i] == ',' && split == std::string::npos)
          split = i;
      }
      if (split == std::string::npos)
        throw ParseError("bad pair value '" + text + "'");
      auto trim = [](std::string s) {
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s;
      };
      Value first = parse_value(dom.first, trim(text.substr(1, split - 1)));
      Value second =
          parse_value(dom.second, trim(text.substr(split + 1, text.size() - split - 2)));
      return make_pair(d, std::move(first), std::move(second));
    }
    case DomainKind::Dual:
      return Value(d, parse_value(dom.inner, text).payload());
  }
  throw BadParams("bad domain kind");
}

std::vector<Value> sort_values(std::vector<Value> vs) {
  std::sort(vs.begin(), vs.end(), [](const Value& a, const Value& b) {
    Cmp c = compare(a, b);
    if (c == Cmp::Incomparable)
      throw BadParams("values are not totally ordered");
    return c == Cmp::Less;
  });
  return vs;
}

std::vector<Value> sort_unique_values(std::vector<Value> vs) {
  vs = sort_values(std::move(vs));
  std::vector<Value> out;
  for (auto& v : vs)
    if (out.empty() || !equal(out.back(), v)) out.push_back(std::move(v));
  return out;
}

std::vector<Value> gap_representatives(const DomainPtr& d,
                                       const std::vector<Value>& ascending) {
  const auto& dom = deref(d);
  std::vector<Value> out;
  auto between = [&](const Value& a, const Value& b) -> std::optional<Value> {
    switch (dom.kind) {
      case DomainKind::Boolean:
        return std::nullopt;
      case DomainKind::ExtendedNat: {
        const auto &x = a.as_nat(), &y = b.as_nat();
        if (x.band != NatValue::Band::Finite) return std::nullopt;
        std::uint64_t next = x.n + 1;
        if (dom.cap && next >= *dom.cap) {
          if (y.band == NatValue::Band::Infinite)
            return nat_saturated(d);  // ">=cap" sits between n and inf
          return std::nullopt;
        }
        if (y.band == NatValue::Band::Finite && next >= y.n) return std::nullopt;
        return make_nat(d, next);
      }
      case DomainKind::ExtendedReal:
      case DomainKind::UnitInterval: {
        double lo = a.as_real(), hi = b.as_real();
        if (!std::isfinite(lo) && !std::isfinite(hi)) return make_real(d, 0.0);
        if (!std::isfinite(hi)) return make_real(d, lo + 1.0);
        if (!std::isfinite(lo)) return make_real(d, hi - 1.0);
        if (hi - lo <= 2 * kEps) return std::nullopt;
        return make_real(d, (lo + hi) / 2.0);
      }
      case DomainKind::FiniteOrder: {
        std::size_t x = a.as_level(), y = b.as_level();
        if (x + 1 >= y) return std::nullopt;
        return make_level(d, x + 1);
      }
      default:
        throw BadParams("gap representatives need a totally ordered domain");
    }
  };
  for (std::size_t i = 0; i + 1 < ascending.size(); ++i)
    if (auto v = between(ascending[i], ascending[i + 1])) out.push_back(*v);
  if (!ascending.empty()) {
    const Value hi = top(d);
    if (compare(ascending.back(), hi) == Cmp::Less) {
      // One element strictly above the universe maximum; the domain top
      // always qualifies, a nearer one is picked when it exists.
      if (auto v = between(ascending.back(), hi))
        out.push_back(*v);
      out.push_back(hi);
    }
  }
  return out;
}

}  // namespace qsl
