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

#include <random>
#include <string>
#include <variant>
#include <vector>

#include "oracle.hpp"
#include "qsl/errors.hpp"
#include "qsl/trace.hpp"

using namespace qsl;

namespace {

const AlphabetPtr kResp = Alphabet::make({"rq", "gr", "tk", "oo"});
const AlphabetPtr kAb = Alphabet::make({"a", "b"});

}  // namespace

TEST_CASE("alphabet construction and lookup") {
  CHECK(kResp->size() == 4);
  CHECK(kResp->label(0) == "rq");
  CHECK(kResp->find("tk") == std::uint32_t{2});
  CHECK(!kResp->find("zz").has_value());

  // Lexicographic enumeration order is independent of declaration order.
  const std::vector<std::uint32_t>& lex = kResp->lex_order();
  REQUIRE(lex.size() == 4);
  for (std::size_t i = 1; i < lex.size(); ++i) {
    CHECK(kResp->label(lex[i - 1]) < kResp->label(lex[i]));
  }

  CHECK_THROWS_AS(Alphabet::make({}), BadParams);
  CHECK_THROWS_AS(Alphabet::make({"a", "a"}), BadParams);
  CHECK_THROWS_AS(Alphabet::make({""}), BadParams);
  CHECK_THROWS_AS(Alphabet::make({"a b"}), BadParams);
  CHECK_THROWS_AS(Alphabet::make({"a;b"}), BadParams);
  CHECK_THROWS_AS(Alphabet::make({"a#b"}), BadParams);

  CHECK(same_alphabet(kResp, kResp));
  CHECK(same_alphabet(kAb, Alphabet::make({"a", "b"})));
  CHECK(!same_alphabet(kAb, Alphabet::make({"b", "a"})));
}

TEST_CASE("parse_trace splits stem and cycle") {
  const ParsedTrace lasso = parse_trace("rq tk gr ; rq gr", kResp);
  REQUIRE(std::holds_alternative<Lasso>(lasso));
  const Lasso& l = std::get<Lasso>(lasso);
  CHECK(format_trace(l.stem) == "rq tk gr");
  CHECK(format_trace(l.cycle) == "rq gr");

  const ParsedTrace finite = parse_trace("a a b", kAb);
  REQUIRE(std::holds_alternative<FiniteTrace>(finite));
  CHECK(format_trace(std::get<FiniteTrace>(finite)) == "a a b");

  // Empty stems, comments, and newlines.
  const ParsedTrace empty_stem = parse_trace("; rq tk gr", kResp);
  REQUIRE(std::holds_alternative<Lasso>(empty_stem));
  CHECK(std::get<Lasso>(empty_stem).stem.empty());
  const ParsedTrace commented =
      parse_trace("a a # trailing words ; b\nb", kAb);
  REQUIRE(std::holds_alternative<FiniteTrace>(commented));
  CHECK(format_trace(std::get<FiniteTrace>(commented)) == "a a b");
  const ParsedTrace nothing = parse_trace("", kAb);
  REQUIRE(std::holds_alternative<FiniteTrace>(nothing));
  CHECK(std::get<FiniteTrace>(nothing).empty());
}

TEST_CASE("parse_trace errors") {
  try {
    parse_trace("a c", kAb);
    FAIL("expected UnknownSymbol");
  } catch (const UnknownSymbol& e) {
    CHECK(std::string(e.what()) == "unknown symbol 'c' at position 2");
  }
  CHECK_THROWS_AS(parse_trace("a ;", kAb), EmptyCycle);
  CHECK_THROWS_AS(parse_trace("a ; b ; a", kAb), ParseError);
  CHECK_THROWS_AS(parse_lasso("a b", kAb), Error);
  CHECK_THROWS_AS(make_trace(kAb, {"a", "zz"}), UnknownSymbol);
}

TEST_CASE("normalize reduces cycles and absorbs stem tails") {
  const Lasso abab = make_lasso(kAb, {}, {"a", "b", "a", "b"});
  CHECK(format_lasso(normalize(abab)) == "; a b");

  const Lasso a_a = make_lasso(kAb, {"a"}, {"a"});
  const Lasso na = normalize(a_a);
  CHECK(na.stem.empty());
  CHECK(format_lasso(na) == "; a");

  const Lasso b_a = make_lasso(kAb, {"b"}, {"a"});
  CHECK(format_lasso(normalize(b_a)) == "b ; a");

  // Stem absorption rotates the cycle.
  const Lasso rot = make_lasso(kAb, {"b", "a"}, {"b", "a"});
  const Lasso nrot = normalize(rot);
  CHECK(nrot.stem.empty());
  CHECK(format_lasso(nrot) == "; a b");
}

TEST_CASE("normalize invariants on random lassos") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    const AlphabetPtr& a = (i % 2 == 0) ? kAb : kResp;
    const Lasso l = testing::random_lasso(a, rng, 6, 6);
    const Lasso n = normalize(l);

    // Idempotence.
    const Lasso nn = normalize(n);
    CHECK(format_lasso(nn) == format_lasso(n));

    // The represented infinite trace is unchanged.
    const std::size_t len = 3 * (l.stem.size() + l.cycle.size());
    CHECK(format_trace(unroll(l, len)) == format_trace(unroll(n, len)));
    CHECK(same_infinite_trace(l, n));
  }
}

TEST_CASE("same_infinite_trace compares normal forms") {
  const Lasso x = make_lasso(kAb, {"a"}, {"b", "a"});
  const Lasso y = make_lasso(kAb, {}, {"a", "b"});
  CHECK(same_infinite_trace(x, y));
  const Lasso z = make_lasso(kAb, {"b"}, {"a", "b"});
  CHECK(!same_infinite_trace(x, z));
}

TEST_CASE("count_symbol") {
  const FiniteTrace w = make_trace(kResp, {"rq", "tk", "gr", "tk"});
  CHECK(count_symbol(w, "tk") == 2);
  CHECK(count_symbol(FiniteTrace{kAb, {}}, "a") == 0);
  const FiniteTrace aaa = make_trace(kAb, {"a", "a", "a"});
  CHECK(count_symbol(aaa, "b") == 0);
  CHECK_THROWS_AS(count_symbol(aaa, "zz"), UnknownSymbol);
}

TEST_CASE("unroll, prefix, concat") {
  const Lasso l = make_lasso(kAb, {"b"}, {"a", "b"});
  CHECK(format_trace(unroll(l, 0)) == "");
  CHECK(format_trace(unroll(l, 1)) == "b");
  CHECK(format_trace(unroll(l, 6)) == "b a b a b a");

  const FiniteTrace w = make_trace(kAb, {"a", "b", "a"});
  CHECK(format_trace(prefix(w, 2)) == "a b");
  CHECK(format_trace(prefix(w, 99)) == "a b a");
  CHECK(format_trace(concat(prefix(w, 1), w)) == "a a b a");
}

TEST_CASE("lasso cycle must be nonempty") {
  CHECK_THROWS_AS(make_lasso(kAb, {"a"}, {}), EmptyCycle);
}

TEST_CASE("format round-trips through parse") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Lasso l = testing::random_lasso(kResp, rng, 5, 5);
    const Lasso back = parse_lasso(format_lasso(l), kResp);
    CHECK(format_lasso(back) == format_lasso(l));
    const FiniteTrace t = testing::random_trace(kResp, rng, 8);
    if (t.empty()) continue;
    const ParsedTrace p = parse_trace(format_trace(t), kResp);
    CHECK(format_trace(std::get<FiniteTrace>(p)) == format_trace(t));
  }
}
