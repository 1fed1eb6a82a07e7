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
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "qsl/errors.hpp"
#include "qsl/value_domain.hpp"

using namespace qsl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NamedPool {
  std::string name;
  DomainPtr domain;
  std::vector<Value> values;
  bool total_order = true;
};

std::vector<NamedPool> sample_pools() {
  std::vector<NamedPool> pools;

  const DomainPtr b = ValueDomain::boolean();
  pools.push_back({"boolean", b, {make_bool(b, false), make_bool(b, true)}});

  const DomainPtr nat3 = ValueDomain::extended_nat(3, true);
  pools.push_back({"extended_nat_cap3",
                   nat3,
                   {make_nat(nat3, 0), make_nat(nat3, 1), make_nat(nat3, 2),
                    nat_saturated(nat3), nat_infinity(nat3)}});

  const DomainPtr nat = ValueDomain::extended_nat();
  {
    std::vector<Value> vs;
    for (std::uint64_t n = 0; n <= 10; ++n) vs.push_back(make_nat(nat, n));
    vs.push_back(nat_infinity(nat));
    pools.push_back({"extended_nat", nat, std::move(vs)});
  }

  const DomainPtr real = ValueDomain::extended_real();
  pools.push_back({"extended_real",
                   real,
                   {make_real(real, -kInf), make_real(real, -2.5),
                    make_real(real, -1.0), make_real(real, 0.0),
                    make_real(real, 0.5), make_real(real, 3.25),
                    make_real(real, kInf)}});

  const DomainPtr unit = ValueDomain::unit_interval();
  pools.push_back({"unit_interval",
                   unit,
                   {make_real(unit, 0.0), make_real(unit, 0.125),
                    make_real(unit, 0.25), make_real(unit, 0.5),
                    make_real(unit, 0.875), make_real(unit, 1.0)}});

  const DomainPtr ord = ValueDomain::finite_order({"low", "mid", "high"});
  pools.push_back({"finite_order",
                   ord,
                   {make_level(ord, "low"), make_level(ord, "mid"),
                    make_level(ord, "high")}});

  const DomainPtr prod = ValueDomain::product(b, nat3);
  {
    std::vector<Value> vs;
    for (bool flag : {false, true}) {
      for (std::uint64_t n : {std::uint64_t{0}, std::uint64_t{2}}) {
        vs.push_back(
            make_pair(prod, make_bool(b, flag), make_nat(nat3, n)));
      }
      vs.push_back(make_pair(prod, make_bool(b, flag), nat_infinity(nat3)));
    }
    pools.push_back({"product", prod, std::move(vs), false});
  }

  const DomainPtr dual_nat = ValueDomain::dual(nat3);
  {
    std::vector<Value> vs;
    for (std::uint64_t n = 0; n <= 2; ++n)
      vs.push_back(dualize(make_nat(nat3, n)));
    vs.push_back(dualize(nat_infinity(nat3)));
    pools.push_back({"dual_extended_nat", dual_nat, std::move(vs)});
  }

  return pools;
}

}  // namespace

TEST_CASE("comparison basics per domain") {
  const DomainPtr b = ValueDomain::boolean();
  CHECK(compare(make_bool(b, false), make_bool(b, true)) == Cmp::Less);
  CHECK(compare(make_bool(b, true), make_bool(b, false)) == Cmp::Greater);
  CHECK(compare(make_bool(b, true), make_bool(b, true)) == Cmp::Equal);

  const DomainPtr prod = ValueDomain::product(b, b);
  const Value zero_one =
      make_pair(prod, make_bool(b, false), make_bool(b, true));
  const Value one_zero =
      make_pair(prod, make_bool(b, true), make_bool(b, false));
  CHECK(compare(zero_one, one_zero) == Cmp::Incomparable);
  CHECK(compare(one_zero, zero_one) == Cmp::Incomparable);

  const DomainPtr nat = ValueDomain::extended_nat();
  CHECK(compare(nat_infinity(nat), make_nat(nat, 5)) == Cmp::Greater);
  CHECK(compare(make_nat(nat, 5), nat_infinity(nat)) == Cmp::Less);
}

TEST_CASE("aggregate basics") {
  const DomainPtr nat = ValueDomain::extended_nat();
  const Value two = meet_all(
      {make_nat(nat, 3), make_nat(nat, 7), make_nat(nat, 2)});
  CHECK(equal(two, make_nat(nat, 2)));
  const Value seven = join_all(
      {make_nat(nat, 3), make_nat(nat, 7), make_nat(nat, 2)});
  CHECK(equal(seven, make_nat(nat, 7)));

  const DomainPtr b = ValueDomain::boolean();
  const DomainPtr prod = ValueDomain::product(b, b);
  const Value joined =
      join(make_pair(prod, make_bool(b, false), make_bool(b, true)),
           make_pair(prod, make_bool(b, true), make_bool(b, false)));
  CHECK(equal(joined, make_pair(prod, make_bool(b, true), make_bool(b, true))));

  const Value v = make_nat(nat, 4);
  CHECK(equal(join_all({v}), v));
  CHECK(equal(meet_all({v}), v));

  CHECK_THROWS_AS(join_all({}), EmptySet);
  CHECK_THROWS_AS(meet_all({}), EmptySet);
}

TEST_CASE("dual order basics") {
  const DomainPtr b = ValueDomain::boolean();
  const Value d0 = dualize(make_bool(b, false));
  const Value d1 = dualize(make_bool(b, true));
  CHECK(compare(d0, d1) == Cmp::Greater);

  const DomainPtr nat = ValueDomain::extended_nat();
  const DomainPtr dual_nat = ValueDomain::dual(nat);
  CHECK(format_value(top(dual_nat)) == "0");
  CHECK(equal(top(dual_nat), dualize(bottom(nat))));
  CHECK(equal(bottom(dual_nat), dualize(top(nat))));

  // The factory unwraps double duals, so values and comparisons coincide.
  const DomainPtr real = ValueDomain::extended_real();
  CHECK(same_domain(ValueDomain::dual(ValueDomain::dual(real)), real));
  const Value a = make_real(real, 1.5);
  const Value c = make_real(real, -0.5);
  CHECK(compare(dualize(dualize(a)), dualize(dualize(c))) == compare(a, c));
  CHECK(compare(dualize(a), dualize(c)) == Cmp::Less);
}

TEST_CASE("lattice laws on sampled triples per domain") {
  std::mt19937_64 rng(20260818);
  for (const NamedPool& pool : sample_pools()) {
    CAPTURE(pool.name);
    const Value t = top(pool.domain);
    const Value bot = bottom(pool.domain);
    std::uniform_int_distribution<std::size_t> pick(0, pool.values.size() - 1);
    for (int i = 0; i < 1000; ++i) {
      const Value& a = pool.values[pick(rng)];
      const Value& b = pool.values[pick(rng)];
      const Value& c = pool.values[pick(rng)];

      CHECK(equal(join(a, a), a));
      CHECK(equal(meet(a, a), a));
      CHECK(equal(join(a, b), join(b, a)));
      CHECK(equal(meet(a, b), meet(b, a)));
      CHECK(equal(join(a, join(b, c)), join(join(a, b), c)));
      CHECK(equal(meet(a, meet(b, c)), meet(meet(a, b), c)));
      CHECK(equal(join(a, meet(a, b)), a));
      CHECK(equal(meet(a, join(a, b)), a));
      CHECK(equal(meet(a, t), a));
      CHECK(equal(join(a, bot), a));

      // Order consistency: a <= b exactly when join(a, b) = b and
      // meet(a, b) = a.
      const bool le = leq(a, b);
      CHECK(le == equal(join(a, b), b));
      CHECK(le == equal(meet(a, b), a));

      // compare is antisymmetric under argument swap.
      const Cmp ab = compare(a, b);
      const Cmp ba = compare(b, a);
      if (ab == Cmp::Less) CHECK(ba == Cmp::Greater);
      if (ab == Cmp::Greater) CHECK(ba == Cmp::Less);
      if (ab == Cmp::Equal) CHECK(ba == Cmp::Equal);
      if (ab == Cmp::Incomparable) CHECK(ba == Cmp::Incomparable);
      if (pool.total_order) CHECK(ab != Cmp::Incomparable);
    }
  }
}

TEST_CASE("dualize swaps comparisons and preserves payloads") {
  std::mt19937_64 rng(7);
  for (const NamedPool& pool : sample_pools()) {
    if (pool.domain->kind == DomainKind::Dual) continue;
    CAPTURE(pool.name);
    std::uniform_int_distribution<std::size_t> pick(0, pool.values.size() - 1);
    for (int i = 0; i < 200; ++i) {
      const Value& a = pool.values[pick(rng)];
      const Value& b = pool.values[pick(rng)];
      const Cmp direct = compare(a, b);
      const Cmp dual = compare(dualize(a), dualize(b));
      if (direct == Cmp::Less) CHECK(dual == Cmp::Greater);
      if (direct == Cmp::Greater) CHECK(dual == Cmp::Less);
      if (direct == Cmp::Equal) CHECK(dual == Cmp::Equal);
      if (direct == Cmp::Incomparable) CHECK(dual == Cmp::Incomparable);
      CHECK(format_value(dualize(a)) == format_value(a));
      CHECK(equal(dualize(dualize(a)), a));
    }
  }
}

TEST_CASE("cross-domain comparison is an error") {
  const DomainPtr b = ValueDomain::boolean();
  const DomainPtr nat = ValueDomain::extended_nat();
  CHECK_THROWS_AS(compare(make_bool(b, true), make_nat(nat, 1)),
                  DomainMismatch);
  CHECK_THROWS_AS(join(make_bool(b, true), make_nat(nat, 1)), DomainMismatch);
  const DomainPtr nat3 = ValueDomain::extended_nat(3, true);
  const DomainPtr nat4 = ValueDomain::extended_nat(4, true);
  CHECK_THROWS_AS(compare(make_nat(nat3, 1), make_nat(nat4, 1)),
                  DomainMismatch);
}

TEST_CASE("saturation cap semantics") {
  const DomainPtr nat3 = ValueDomain::extended_nat(3, true);
  CHECK(format_value(make_nat(nat3, 3)) == ">=3");
  CHECK(format_value(make_nat(nat3, 100)) == ">=3");
  CHECK(equal(make_nat(nat3, 3), nat_saturated(nat3)));
  CHECK(equal(make_nat(nat3, 100), make_nat(nat3, 3)));
  CHECK(compare(make_nat(nat3, 2), nat_saturated(nat3)) == Cmp::Less);
  CHECK(compare(nat_saturated(nat3), nat_infinity(nat3)) == Cmp::Less);
  CHECK(equal(top(nat3), nat_infinity(nat3)));
  CHECK(equal(bottom(nat3), make_nat(nat3, 0)));

  // Without infinity the saturated band is the top value.
  const DomainPtr nat8 = ValueDomain::extended_nat(8, false);
  CHECK(equal(top(nat8), nat_saturated(nat8)));
  CHECK(format_value(top(nat8)) == ">=8");
  CHECK_THROWS_AS(nat_infinity(nat8), Error);

  // An uncapped domain must keep its top.
  CHECK_THROWS_AS(ValueDomain::extended_nat(0, false), Error);
}

TEST_CASE("real comparison tolerance") {
  const DomainPtr unit = ValueDomain::unit_interval();
  CHECK(compare(make_real(unit, 0.5), make_real(unit, 0.5 + 1e-12)) ==
        Cmp::Equal);
  CHECK(compare(make_real(unit, 0.5), make_real(unit, 0.5 + 1e-6)) ==
        Cmp::Less);
  CHECK_THROWS_AS(make_real(unit, 2.0), Error);
  CHECK_THROWS_AS(make_real(unit, std::nan("")), Error);
}

TEST_CASE("numeric embedding") {
  const DomainPtr nat3 = ValueDomain::extended_nat(3, true);
  CHECK(is_numeric(*nat3));
  CHECK(to_real(make_nat(nat3, 2)) == 2.0);
  CHECK(to_real(nat_saturated(nat3)) == kInf);
  CHECK(to_real(nat_infinity(nat3)) == kInf);
  CHECK(numeric_width(nat_infinity(nat3), nat_infinity(nat3)) == 0.0);
  CHECK(numeric_width(nat_infinity(nat3), make_nat(nat3, 1)) == kInf);
  CHECK(numeric_width(make_nat(nat3, 3), make_nat(nat3, 1)) == kInf);

  const DomainPtr b = ValueDomain::boolean();
  CHECK(to_real(make_bool(b, true)) == 1.0);
  CHECK(to_real(make_bool(b, false)) == 0.0);

  // Dual embeddings are negated so widths in the dual order stay positive.
  const Value d2 = dualize(make_nat(nat3, 2));
  const Value d0 = dualize(make_nat(nat3, 0));
  CHECK(to_real(d2) == -2.0);
  CHECK(leq(d2, d0));
  CHECK(numeric_width(d0, d2) == 2.0);

  const DomainPtr ord = ValueDomain::finite_order({"x", "y"});
  CHECK(!is_numeric(*ord));
  CHECK_THROWS_AS(to_real(make_level(ord, "x")), DomainNotNumeric);
  const DomainPtr prod = ValueDomain::product(b, b);
  CHECK(!is_numeric(*prod));
}

TEST_CASE("format and parse round-trip") {
  for (const NamedPool& pool : sample_pools()) {
    CAPTURE(pool.name);
    for (const Value& v : pool.values) {
      const std::string text = format_value(v);
      const Value back = parse_value(pool.domain, text);
      CHECK(equal(back, v));
      CHECK(format_value(back) == text);
    }
  }
  const DomainPtr unit = ValueDomain::unit_interval();
  CHECK(format_value(make_real(unit, 0.875)) == "0.875");
  CHECK(format_value(make_real(unit, 1.0)) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK_THROWS_AS(parse_value(unit, "zebra"), ParseError);
  CHECK_THROWS_AS(parse_value(ValueDomain::extended_nat(), "-4"), ParseError);
}

TEST_CASE("sorting and gap representatives") {
  const DomainPtr nat3 = ValueDomain::extended_nat(3, true);
  std::vector<Value> vs = {nat_infinity(nat3), make_nat(nat3, 0),
                           make_nat(nat3, 2), make_nat(nat3, 0)};
  const std::vector<Value> sorted = sort_values(vs);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    CHECK(leq(sorted[i - 1], sorted[i]));
  }
  const std::vector<Value> uniq = sort_unique_values(vs);
  CHECK(uniq.size() == 3);
  for (std::size_t i = 1; i < uniq.size(); ++i) {
    CHECK(compare(uniq[i - 1], uniq[i]) == Cmp::Less);
  }

  const std::vector<Value> universe = {make_nat(nat3, 0), make_nat(nat3, 2)};
  const std::vector<Value> gaps = gap_representatives(nat3, universe);
  CHECK(!gaps.empty());
  bool found_between = false;
  bool found_above = false;
  for (const Value& g : gaps) {
    const bool between = compare(universe[0], g) == Cmp::Less &&
                         compare(g, universe[1]) == Cmp::Less;
    const bool above = compare(universe[1], g) == Cmp::Less;
    CHECK((between || above));
    found_between = found_between || between;
    found_above = found_above || above;
  }
  CHECK(found_between);
  CHECK(found_above);

  // Nothing exists above the top value, so no above-representative appears.
  const std::vector<Value> with_top = {make_nat(nat3, 0), nat_infinity(nat3)};
  for (const Value& g : gap_representatives(nat3, with_top)) {
    CHECK(compare(g, nat_infinity(nat3)) == Cmp::Less);
  }
}

TEST_CASE("domain construction errors") {
  CHECK_THROWS_AS(ValueDomain::finite_order({}), Error);
  CHECK_THROWS_AS(ValueDomain::finite_order({"a", "a"}), Error);
  CHECK_THROWS_AS(ValueDomain::extended_real(2.0, 1.0), Error);
  const DomainPtr b = ValueDomain::boolean();
  CHECK_THROWS_AS(make_nat(b, 1), Error);
  CHECK_THROWS_AS(make_level(ValueDomain::finite_order({"x"}), "y"), Error);
}
