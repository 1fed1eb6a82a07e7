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
#ifndef QSL_TESTS_ORACLE_HPP
#define QSL_TESTS_ORACLE_HPP

/// Reference implementations for the test suites: brute-force lasso
/// evaluation by unrolling (independent of the orbit method under test),
/// exhaustive trace and lasso enumeration, and seeded random generators
/// for machines, traces, and lassos.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qsl/property.hpp"
#include "qsl/trace.hpp"
#include "qsl/value_domain.hpp"

namespace qsl::testing {

/// Folds the value function over an explicit list of prefix values whose
/// tail window is known to cover at least one full period of the
/// eventually periodic value sequence.
inline Value fold_prefix_values(ValueFunction vf, const std::vector<Value>& vs,
                                std::size_t window) {
  switch (vf) {
    case ValueFunction::Inf:
      return meet_all(vs);
    case ValueFunction::Sup:
      return join_all(vs);
    case ValueFunction::LimInf: {
      std::vector<Value> tail(vs.end() - static_cast<std::ptrdiff_t>(window),
                              vs.end());
      return meet_all(tail);
    }
    case ValueFunction::LimSup: {
      std::vector<Value> tail(vs.end() - static_cast<std::ptrdiff_t>(window),
                              vs.end());
      return join_all(tail);
    }
  }
  return vs.back();
}

/// Brute-force value of a machine-backed property on a lasso, by explicit
/// unrolling. The prefix-value sequence of a deterministic machine on
/// stem.cycle^omega is eventually periodic: the per-cycle-boundary state
/// sequence enters a cycle within |states| passes, so values are periodic
/// from index |stem| + |states|*|cycle| with period at most
/// |states|*|cycle|. The tail window of |states|*|cycle| + 1 values
/// therefore contains a full period, and the extra 3*|cycle| margin keeps
/// the window strictly inside the periodic regime.
inline Value unrolled_value(const Property& p, const Lasso& l) {
  const std::size_t states = p.machine().state_count();
  const std::size_t cycle = l.cycle.size();
  const std::size_t transient = l.stem.size() + states * cycle;
  const std::size_t window = states * cycle + 1;
  const std::size_t total = transient + 3 * cycle + window;
  std::vector<Value> values;
  values.reserve(total + 1);
  for (std::size_t i = 0; i <= total; ++i) {
    values.push_back(eval_finitary(p, unroll(l, i)));
  }
  return fold_prefix_values(p.vf, values, window);
}

/// All traces of exactly `len` symbols over the alphabet, in base-|a|
/// counting order on symbol indices.
inline std::vector<FiniteTrace> all_traces(const AlphabetPtr& a,
                                           std::size_t len) {
  const std::uint32_t n = static_cast<std::uint32_t>(a->size());
  std::vector<FiniteTrace> out;
  std::vector<std::uint32_t> digits(len, 0);
  while (true) {
    out.push_back(FiniteTrace{a, digits});
    std::size_t i = len;
    while (i > 0 && ++digits[i - 1] == n) digits[--i] = 0;
    if (i == 0) break;
    digits[i - 1] %= n;
  }
  return out;
}

/// All traces of length 0..max_len, shortest first.
inline std::vector<FiniteTrace> all_traces_up_to(const AlphabetPtr& a,
                                                 std::size_t max_len) {
  std::vector<FiniteTrace> out;
  for (std::size_t len = 0; len <= max_len; ++len) {
    for (auto& t : all_traces(a, len)) out.push_back(std::move(t));
  }
  return out;
}

/// Calls f on every lasso with |stem| <= max_stem and 1 <= |cycle| <=
/// max_cycle over the alphabet.
template <typename F>
inline void for_each_lasso(const AlphabetPtr& a, std::size_t max_stem,
                           std::size_t max_cycle, F&& f) {
  const auto stems = all_traces_up_to(a, max_stem);
  std::vector<FiniteTrace> cycles;
  for (std::size_t len = 1; len <= max_cycle; ++len) {
    for (auto& t : all_traces(a, len)) cycles.push_back(std::move(t));
  }
  for (const FiniteTrace& stem : stems) {
    for (const FiniteTrace& cycle : cycles) {
      f(Lasso{stem, cycle});
    }
  }
}

inline FiniteTrace random_trace(const AlphabetPtr& a, std::mt19937_64& rng,
                                std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<std::uint32_t> sym_dist(
      0, static_cast<std::uint32_t>(a->size()) - 1);
  std::vector<std::uint32_t> symbols(len_dist(rng));
  for (auto& s : symbols) s = sym_dist(rng);
  return FiniteTrace{a, std::move(symbols)};
}

inline Lasso random_lasso(const AlphabetPtr& a, std::mt19937_64& rng,
                          std::size_t max_stem, std::size_t max_cycle) {
  std::uniform_int_distribution<std::size_t> cycle_dist(1, max_cycle);
  std::uniform_int_distribution<std::uint32_t> sym_dist(
      0, static_cast<std::uint32_t>(a->size()) - 1);
  FiniteTrace stem = random_trace(a, rng, max_stem);
  std::vector<std::uint32_t> cycle(cycle_dist(rng));
  for (auto& s : cycle) s = sym_dist(rng);
  return Lasso{std::move(stem), FiniteTrace{a, std::move(cycle)}};
}

/// Deterministic random machine property: 1..3 symbols, 1..max_states
/// states, outputs over the naturals capped at 3 with infinity, uniform
/// transitions, and a random (or forced) value function.
inline PropertyPtr random_machine_property(
    std::uint64_t seed, std::size_t max_states = 5,
    std::optional<ValueFunction> force_vf = std::nullopt) {
  std::mt19937_64 rng(seed);
  static const std::vector<std::string> kLetters = {"a", "b", "c"};
  std::uniform_int_distribution<std::size_t> letters_dist(1, kLetters.size());
  const std::size_t letters = letters_dist(rng);
  AlphabetPtr alphabet = Alphabet::make(std::vector<std::string>(
      kLetters.begin(), kLetters.begin() + static_cast<std::ptrdiff_t>(letters)));
  DomainPtr domain = ValueDomain::extended_nat(3, true);

  std::uniform_int_distribution<std::size_t> state_dist(1, max_states);
  const std::size_t states = state_dist(rng);

  FinitaryMachine m;
  m.alphabet = alphabet;
  m.domain = domain;
  std::uniform_int_distribution<int> out_dist(0, 4);
  std::uniform_int_distribution<std::uint32_t> next_dist(
      0, static_cast<std::uint32_t>(states) - 1);
  for (std::size_t s = 0; s < states; ++s) {
    m.state_names.push_back("q" + std::to_string(s));
    const int pick = out_dist(rng);
    if (pick <= 2) {
      m.outputs.push_back(make_nat(domain, static_cast<std::uint64_t>(pick)));
    } else if (pick == 3) {
      m.outputs.push_back(nat_saturated(domain));
    } else {
      m.outputs.push_back(nat_infinity(domain));
    }
    std::vector<std::uint32_t> row(alphabet->size());
    for (auto& t : row) t = next_dist(rng);
    m.next.push_back(std::move(row));
  }
  m.initial = 0;
  m.validate();

  std::uniform_int_distribution<int> vf_dist(0, 3);
  const ValueFunction vf =
      force_vf ? *force_vf : static_cast<ValueFunction>(vf_dist(rng));

  Property prop;
  prop.name = "random_machine_" + std::to_string(seed);
  prop.alphabet = alphabet;
  prop.domain = domain;
  prop.vf = vf;
  prop.backend = std::move(m);
  return std::make_shared<const Property>(std::move(prop));
}

}  // namespace qsl::testing

#endif  // QSL_TESTS_ORACLE_HPP
