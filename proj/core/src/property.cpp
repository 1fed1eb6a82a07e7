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
#include "qsl/property.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "qsl/errors.hpp"

namespace qsl {

namespace {

void require_trace_alphabet(const Property& p, const FiniteTrace& s) {
  if (!same_alphabet(p.alphabet, s.alphabet)) {
    throw AlphabetMismatch("trace alphabet differs from property alphabet");
  }
}

void require_lasso_alphabet(const Property& p, const Lasso& l) {
  if (!same_alphabet(p.alphabet, l.stem.alphabet)) {
    throw AlphabetMismatch("lasso alphabet differs from property alphabet");
  }
}

Value fold2(const Value& a, const Value& b, bool take_meet) {
  return take_meet ? meet(a, b) : join(a, b);
}

/// 2^-m as a double, clamped so huge exponents degrade to 0 instead of
/// overflowing the int conversion.
double dyadic(std::uint64_t m) {
  if (m > 1074) return 0.0;
  return std::ldexp(1.0, -static_cast<int>(m));
}

Value eval_machine_on_lasso(const FinitaryMachine& m, ValueFunction vf,
                            const Lasso& l) {
  std::vector<Value> prefix_values;
  std::uint32_t q = m.initial;
  prefix_values.push_back(m.outputs[q]);
  for (std::uint32_t sym : l.stem.symbols) {
    q = m.next[q][sym];
    prefix_values.push_back(m.outputs[q]);
  }

  // Iterate the cycle until the state recurs at a cycle boundary. The
  // passes from the first occurrence of the recurring state onward are the
  // orbit visited infinitely often.
  std::map<std::uint32_t, std::size_t> boundary_pass;
  std::vector<std::vector<Value>> passes;
  while (boundary_pass.find(q) == boundary_pass.end()) {
    boundary_pass.emplace(q, passes.size());
    std::vector<Value> outs;
    outs.reserve(l.cycle.symbols.size());
    for (std::uint32_t sym : l.cycle.symbols) {
      q = m.next[q][sym];
      outs.push_back(m.outputs[q]);
    }
    passes.push_back(std::move(outs));
  }
  const std::size_t first_recurring = boundary_pass.at(q);

  const bool take_meet =
      vf == ValueFunction::Inf || vf == ValueFunction::LimInf;
  if (vf == ValueFunction::Inf || vf == ValueFunction::Sup) {
    std::vector<Value> all = prefix_values;
    for (const auto& pass : passes) {
      all.insert(all.end(), pass.begin(), pass.end());
    }
    return take_meet ? meet_all(all) : join_all(all);
  }
  std::vector<Value> recurring;
  for (std::size_t i = first_recurring; i < passes.size(); ++i) {
    recurring.insert(recurring.end(), passes[i].begin(), passes[i].end());
  }
  return take_meet ? meet_all(recurring) : join_all(recurring);
}

}  // namespace

ValueFunction dual_value_function(ValueFunction vf) {
  switch (vf) {
    case ValueFunction::Inf:
      return ValueFunction::Sup;
    case ValueFunction::Sup:
      return ValueFunction::Inf;
    case ValueFunction::LimInf:
      return ValueFunction::LimSup;
    case ValueFunction::LimSup:
      return ValueFunction::LimInf;
  }
  throw BadParams("invalid value function");
}

std::string to_string(ValueFunction vf) {
  switch (vf) {
    case ValueFunction::Inf:
      return "inf";
    case ValueFunction::Sup:
      return "sup";
    case ValueFunction::LimInf:
      return "liminf";
    case ValueFunction::LimSup:
      return "limsup";
  }
  throw BadParams("invalid value function");
}

ValueFunction parse_value_function(const std::string& text) {
  if (text == "inf") return ValueFunction::Inf;
  if (text == "sup") return ValueFunction::Sup;
  if (text == "liminf") return ValueFunction::LimInf;
  if (text == "limsup") return ValueFunction::LimSup;
  throw ParseError("unknown value function '" + text +
                   "' (expected inf, sup, liminf, or limsup)");
}

void FinitaryMachine::validate() const {
  if (!alphabet) throw BadParams("machine has no alphabet");
  if (!domain) throw BadParams("machine has no domain");
  const std::size_t n = outputs.size();
  if (n == 0) throw BadParams("machine needs at least one state");
  if (state_names.size() != n) {
    throw BadParams("machine state name count differs from state count");
  }
  if (initial >= n) throw BadParams("machine initial state does not exist");
  if (next.size() != n) {
    throw BadParams("machine transition table must cover every state");
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (next[q].size() != alphabet->size()) {
      throw BadParams("machine state '" + state_names[q] +
                      "' must have one successor per symbol");
    }
    for (std::uint32_t t : next[q]) {
      if (t >= n) {
        throw BadParams("machine state '" + state_names[q] +
                        "' has a successor outside the state set");
      }
    }
    if (!outputs[q].domain() || !same_domain(outputs[q].domain(), domain)) {
      throw DomainMismatch("machine state '" + state_names[q] +
                           "' has an output outside the machine domain");
    }
  }
}

std::uint32_t machine_run(const FinitaryMachine& m, std::uint32_t from,
                          const std::vector<std::uint32_t>& symbols) {
  std::uint32_t q = from;
  for (std::uint32_t sym : symbols) q = m.next[q][sym];
  return q;
}

bool PredictionSet::empty() const {
  return atoms.empty() && !nat_tail_from && !dyadic_tail_from;
}

bool PredictionSet::contains(const Value& v) const {
  for (const Value& a : atoms) {
    if (equal(a, v)) return true;
  }
  if (nat_tail_from) {
    const NatValue& nv = v.as_nat();
    if (nv.band == NatValue::Band::Finite && nv.n >= *nat_tail_from) {
      return true;
    }
  }
  if (dyadic_tail_from) {
    const double x = v.as_real();
    if (x > 0.0 && x < 1.0) {
      const auto m = static_cast<std::uint64_t>(std::llround(-std::log2(x)));
      if (m >= 1 && m >= *dyadic_tail_from &&
          std::abs(x - dyadic(m)) <= 1e-12) {
        return true;
      }
    }
  }
  return false;
}

Value PredictionSet::sup() const {
  if (empty()) throw EmptySet();
  std::optional<Value> best;
  if (!atoms.empty()) best = atoms.back();
  if (nat_tail_from) {
    // The tail is unbounded, so its least upper bound is the top "inf".
    Value t = nat_infinity(domain);
    best = best ? join(*best, t) : t;
  }
  if (dyadic_tail_from) {
    Value t = make_real(domain, dyadic(*dyadic_tail_from));
    best = best ? join(*best, t) : t;
  }
  return *best;
}

Value PredictionSet::inf() const {
  if (empty()) throw EmptySet();
  std::optional<Value> best;
  if (!atoms.empty()) best = atoms.front();
  if (nat_tail_from) {
    Value t = make_nat(domain, *nat_tail_from);
    best = best ? meet(*best, t) : t;
  }
  if (dyadic_tail_from) {
    // Greatest lower bound of the tail; not a member of the tail itself.
    Value t = make_real(domain, 0.0);
    best = best ? meet(*best, t) : t;
  }
  return *best;
}

bool PredictionSet::sup_is_member() const { return contains(sup()); }

std::vector<Value> PredictionSet::enumerate(std::size_t tail_elements) const {
  std::vector<Value> out = atoms;
  if (nat_tail_from) {
    for (std::size_t j = 0; j < tail_elements; ++j) {
      out.push_back(make_nat(domain, *nat_tail_from + j));
    }
  }
  if (dyadic_tail_from) {
    for (std::size_t j = 0; j < tail_elements; ++j) {
      out.push_back(make_real(domain, dyadic(*dyadic_tail_from + j)));
    }
  }
  return sort_unique_values(std::move(out));
}

PredictionSet make_prediction_set(DomainPtr domain, std::vector<Value> atoms) {
  PredictionSet ps;
  ps.domain = std::move(domain);
  ps.atoms = sort_unique_values(std::move(atoms));
  return ps;
}

Value eval_finitary(const Property& p, const FiniteTrace& s) {
  require_trace_alphabet(p, s);
  if (p.is_machine()) {
    const FinitaryMachine& m = p.machine();
    return m.outputs[machine_run(m, m.initial, s.symbols)];
  }
  if (p.is_oracle()) return p.oracle().eval(s);
  const DerivedBackend& d = p.derived();
  if (!d.finitary_eval) {
    throw UnsupportedBackend("derived property '" + p.name +
                             "' has no finitary evaluator");
  }
  return d.finitary_eval(s);
}

Value eval_on_lasso(const Property& p, const Lasso& l) {
  require_lasso_alphabet(p, l);
  if (p.is_machine()) return eval_machine_on_lasso(p.machine(), p.vf, l);
  if (p.is_derived()) return p.derived().lasso_eval(l);
  const OracleHooks& o = p.oracle();
  if (!o.lasso_eval) {
    throw UnsupportedBackend("oracle property '" + p.name +
                             "' has no lasso rule");
  }
  return o.lasso_eval(l);
}

bool has_representation(const Property& p, ValueFunction vf) {
  if (p.vf == vf) return true;
  return p.is_oracle() && p.oracle().alt && p.oracle().alt->vf == vf;
}

void BooleanDfa::validate() const {
  if (!alphabet) throw BadParams("automaton has no alphabet");
  const std::size_t n = rejecting.size();
  if (n == 0) throw BadParams("automaton needs at least one state");
  if (state_names.size() != n) {
    throw BadParams("automaton state name count differs from state count");
  }
  if (initial >= n) throw BadParams("automaton initial state does not exist");
  if (next.size() != n) {
    throw BadParams("automaton transition table must cover every state");
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (next[q].size() != alphabet->size()) {
      throw BadParams("automaton state '" + state_names[q] +
                      "' must have one successor per symbol");
    }
    for (std::size_t a = 0; a < next[q].size(); ++a) {
      if (next[q][a] >= n) {
        throw BadParams("automaton state '" + state_names[q] +
                        "' has a successor outside the state set");
      }
      if (rejecting[q] && !rejecting[next[q][a]]) {
        throw BadParams("rejecting state '" + state_names[q] +
                        "' must be a trap");
      }
    }
  }
}

BooleanDfa never_symbol_dfa(const AlphabetPtr& alphabet,
                            const std::string& label) {
  if (!alphabet) throw BadParams("automaton needs an alphabet");
  const auto bad = alphabet->find(label);
  if (!bad) throw UnknownSymbol(label);
  BooleanDfa dfa;
  dfa.alphabet = alphabet;
  dfa.state_names = {"ok", "rejected"};
  dfa.rejecting = {false, true};
  dfa.initial = 0;
  dfa.next.assign(2, std::vector<std::uint32_t>(alphabet->size(), 0));
  dfa.next[0][*bad] = 1;
  for (std::size_t a = 0; a < alphabet->size(); ++a) dfa.next[1][a] = 1;
  dfa.validate();
  return dfa;
}

AlphabetPtr response_alphabet() {
  static const AlphabetPtr alpha = Alphabet::make({"rq", "gr", "tk", "oo"});
  return alpha;
}

AlphabetPtr ab_alphabet() {
  static const AlphabetPtr alpha = Alphabet::make({"a", "b"});
  return alpha;
}

namespace {

// Symbol indices in response_alphabet().
constexpr std::uint32_t kRq = 0;
constexpr std::uint32_t kGr = 1;
constexpr std::uint32_t kTk = 2;

std::string nat_name(const char* stem, std::uint64_t n) {
  return std::string(stem) + "_" + std::to_string(n);
}

/// The finitary property "response time of the last completed request
/// window": infinity while a request is pending or none was seen, the
/// tick count of the last completed window otherwise. Counter saturates
/// at cap.
FinitaryMachine last_response_machine(std::uint64_t cap,
                                      const DomainPtr& domain) {
  const AlphabetPtr alpha = response_alphabet();
  FinitaryMachine m;
  m.alphabet = alpha;
  m.domain = domain;

  // Layout: never, pending_0..pending_{cap-1}, pending_sat,
  // granted_0..granted_{cap-1}, granted_sat.
  const std::uint32_t never = 0;
  const auto pending = [&](std::uint64_t c) {
    return static_cast<std::uint32_t>(1 + c);
  };
  const std::uint32_t pending_sat = static_cast<std::uint32_t>(1 + cap);
  const auto granted = [&](std::uint64_t r) {
    return static_cast<std::uint32_t>(2 + cap + r);
  };
  const std::uint32_t granted_sat = static_cast<std::uint32_t>(2 + 2 * cap);
  const std::size_t n = 3 + 2 * cap;

  m.state_names.resize(n);
  m.outputs.assign(n, nat_infinity(domain));
  m.next.assign(n, std::vector<std::uint32_t>(alpha->size(), 0));

  m.state_names[never] = "never";
  for (std::size_t a = 0; a < alpha->size(); ++a) m.next[never][a] = never;
  m.next[never][kRq] = pending(0);

  for (std::uint64_t c = 0; c < cap; ++c) {
    const std::uint32_t q = pending(c);
    m.state_names[q] = nat_name("pending", c);
    m.next[q].assign(alpha->size(), q);
    m.next[q][kGr] = granted(c);
    m.next[q][kTk] = (c + 1 < cap) ? pending(c + 1) : pending_sat;
  }
  m.state_names[pending_sat] = "pending_sat";
  m.next[pending_sat].assign(alpha->size(), pending_sat);
  m.next[pending_sat][kGr] = granted_sat;

  for (std::uint64_t r = 0; r < cap; ++r) {
    const std::uint32_t q = granted(r);
    m.state_names[q] = nat_name("granted", r);
    m.outputs[q] = make_nat(domain, r);
    m.next[q].assign(alpha->size(), q);
    m.next[q][kRq] = pending(0);
  }
  m.state_names[granted_sat] = "granted_sat";
  m.outputs[granted_sat] = nat_saturated(domain);
  m.next[granted_sat].assign(alpha->size(), granted_sat);
  m.next[granted_sat][kRq] = pending(0);

  m.initial = never;
  m.validate();
  return m;
}

PropertyPtr finish(Property p) {
  if (p.is_machine()) p.machine().validate();
  return std::make_shared<const Property>(std::move(p));
}

/// Machine whose state tracks the running meet (or join) of the outputs
/// seen so far; its own output is that running aggregate.
FinitaryMachine running_fold_machine(const FinitaryMachine& m,
                                     bool take_meet) {
  FinitaryMachine out;
  out.alphabet = m.alphabet;
  out.domain = m.domain;
  const std::size_t symbols = m.alphabet->size();

  std::map<std::pair<std::uint32_t, std::string>, std::uint32_t> ids;
  std::vector<std::pair<std::uint32_t, Value>> order;

  auto intern = [&](std::uint32_t q, const Value& agg) {
    const auto key = std::make_pair(q, format_value(agg));
    auto [it, inserted] =
        ids.emplace(key, static_cast<std::uint32_t>(order.size()));
    if (inserted) {
      order.emplace_back(q, agg);
      out.state_names.push_back(m.state_names[q] + "|" + format_value(agg));
      out.outputs.push_back(agg);
      out.next.emplace_back(symbols, 0);
    }
    return it->second;
  };

  out.initial = intern(m.initial, m.outputs[m.initial]);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [q, agg] = order[i];
    for (std::size_t sym = 0; sym < symbols; ++sym) {
      const std::uint32_t t = m.next[q][sym];
      out.next[i][sym] = intern(t, fold2(agg, m.outputs[t], take_meet));
    }
  }
  return out;
}

std::uint64_t require_cap(std::uint64_t cap) {
  if (cap == 0) throw BadParams("cap must be positive");
  return cap;
}

}  // namespace

PropertyPtr make_min_response(std::uint64_t cap) {
  require_cap(cap);
  const DomainPtr domain = ValueDomain::extended_nat(cap, true);

  // Running minimum over the completed request windows so far: the
  // running meet of the last-window response times. Its outputs are
  // monotone, so the inf over prefixes is the stabilized running minimum.
  Property p;
  p.name = "min_response(" + std::to_string(cap) + ")";
  p.alphabet = response_alphabet();
  p.domain = domain;
  p.vf = ValueFunction::Inf;
  p.backend = running_fold_machine(last_response_machine(cap, domain), true);
  return finish(std::move(p));
}

PropertyPtr make_max_response(std::uint64_t cap) {
  require_cap(cap);
  // No top "inf": the saturated band is the greatest value, and it is
  // reachable, which is what makes this property live.
  const DomainPtr domain = ValueDomain::extended_nat(cap, false);
  const AlphabetPtr alpha = response_alphabet();
  FinitaryMachine m;
  m.alphabet = alpha;
  m.domain = domain;

  // Layout: idle, pending_0..pending_{cap-1}, pending_sat. The output is
  // the current response time: ticks since the pending request, zero when
  // no request is pending.
  const std::uint32_t idle = 0;
  const auto pending = [&](std::uint64_t c) {
    return static_cast<std::uint32_t>(1 + c);
  };
  const std::uint32_t pending_sat = static_cast<std::uint32_t>(1 + cap);
  const std::size_t n = 2 + cap;

  m.state_names.resize(n);
  m.outputs.assign(n, make_nat(domain, 0));
  m.next.assign(n, std::vector<std::uint32_t>(alpha->size(), 0));

  m.state_names[idle] = "idle";
  m.next[idle].assign(alpha->size(), idle);
  m.next[idle][kRq] = pending(0);

  for (std::uint64_t c = 0; c < cap; ++c) {
    const std::uint32_t q = pending(c);
    m.state_names[q] = nat_name("pending", c);
    m.outputs[q] = make_nat(domain, c);
    m.next[q].assign(alpha->size(), q);
    m.next[q][kGr] = idle;
    m.next[q][kTk] = (c + 1 < cap) ? pending(c + 1) : pending_sat;
  }
  m.state_names[pending_sat] = "pending_sat";
  m.outputs[pending_sat] = nat_saturated(domain);
  m.next[pending_sat].assign(alpha->size(), pending_sat);
  m.next[pending_sat][kGr] = idle;

  m.initial = idle;

  Property p;
  p.name = "max_response(" + std::to_string(cap) + ")";
  p.alphabet = alpha;
  p.domain = domain;
  p.vf = ValueFunction::Sup;
  p.backend = std::move(m);
  return finish(std::move(p));
}

PropertyPtr make_tail_min_response(std::uint64_t cap) {
  require_cap(cap);
  const DomainPtr domain = ValueDomain::extended_nat(cap, true);
  Property p;
  p.name = "tail_min_response(" + std::to_string(cap) + ")";
  p.alphabet = response_alphabet();
  p.domain = domain;
  p.vf = ValueFunction::LimInf;
  p.backend = last_response_machine(cap, domain);
  return finish(std::move(p));
}

PropertyPtr make_skip_min_response(std::uint64_t skip, std::uint64_t cap) {
  require_cap(cap);
  const DomainPtr domain = ValueDomain::extended_nat(cap, true);
  FinitaryMachine inner = last_response_machine(cap, domain);
  const AlphabetPtr alpha = inner.alphabet;

  FinitaryMachine m;
  m.alphabet = alpha;
  m.domain = domain;
  const auto shift = static_cast<std::uint32_t>(skip);
  const std::size_t n = skip + inner.state_count();
  m.state_names.resize(n);
  m.outputs.assign(n, nat_infinity(domain));
  m.next.assign(n, std::vector<std::uint32_t>(alpha->size(), 0));

  // The first `skip` observations are ignored: a chain of top-valued
  // states that advances on every symbol, then the last-window machine.
  for (std::uint64_t j = 0; j < skip; ++j) {
    m.state_names[j] = nat_name("skip", j);
    const std::uint32_t target = (j + 1 < skip)
                                     ? static_cast<std::uint32_t>(j + 1)
                                     : shift + inner.initial;
    m.next[j].assign(alpha->size(), target);
  }
  for (std::size_t q = 0; q < inner.state_count(); ++q) {
    m.state_names[shift + q] = inner.state_names[q];
    m.outputs[shift + q] = inner.outputs[q];
    for (std::size_t a = 0; a < alpha->size(); ++a) {
      m.next[shift + q][a] = shift + inner.next[q][a];
    }
  }
  m.initial = skip > 0 ? 0 : inner.initial;

  Property p;
  p.name = "skip_min_response(" + std::to_string(skip) + "," +
           std::to_string(cap) + ")";
  p.alphabet = alpha;
  p.domain = domain;
  p.vf = ValueFunction::Inf;
  p.backend = std::move(m);
  return finish(std::move(p));
}

PropertyPtr make_avg_response() {
  const DomainPtr domain = ValueDomain::extended_real(0.0, HUGE_VAL);
  const AlphabetPtr alpha = response_alphabet();

  struct Counters {
    bool pending = false;
    std::uint64_t valid = 0;
    std::uint64_t ticks = 0;

    void feed(std::uint32_t sym) {
      if (sym == kRq) {
        if (!pending) {
          pending = true;
          ++valid;
        }
      } else if (sym == kGr) {
        pending = false;
      } else if (sym == kTk) {
        if (pending) ++ticks;
      }
    }

    Value ratio(const DomainPtr& d) const {
      if (valid == 0) return make_real(d, HUGE_VAL);
      return make_real(d, static_cast<double>(ticks) /
                              static_cast<double>(valid));
    }
  };

  OracleHooks o;
  o.eval = [domain](const FiniteTrace& s) {
    Counters c;
    for (std::uint32_t sym : s.symbols) c.feed(sym);
    return c.ratio(domain);
  };
  // Any prefix extends with an unserved request and endless ticks to reach
  // infinity, and with a suffix of instantly granted requests to reach 0.
  o.sup_ext = [domain](const FiniteTrace&) { return make_real(domain, HUGE_VAL); };
  o.inf_ext = [domain](const FiniteTrace&) { return make_real(domain, 0.0); };
  o.lasso_eval = [domain](const Lasso& l) {
    Counters c;
    for (std::uint32_t sym : l.stem.symbols) c.feed(sym);
    // Two passes let the pending flag at the cycle boundary stabilize;
    // the third pass then measures the per-pass increments exactly.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::uint32_t sym : l.cycle.symbols) c.feed(sym);
    }
    const Counters before = c;
    for (std::uint32_t sym : l.cycle.symbols) c.feed(sym);
    const std::uint64_t dv = c.valid - before.valid;
    const std::uint64_t dt = c.ticks - before.ticks;
    if (dv > 0) {
      return make_real(domain,
                       static_cast<double>(dt) / static_cast<double>(dv));
    }
    if (dt > 0) return make_real(domain, HUGE_VAL);
    return c.ratio(domain);
  };

  Property p;
  p.name = "avg_response";
  p.alphabet = alpha;
  p.domain = domain;
  p.vf = ValueFunction::LimInf;
  p.backend = std::move(o);
  return finish(std::move(p));
}

namespace {

PropertyPtr make_ends_with(const std::string& name, std::uint32_t target,
                           ValueFunction vf) {
  const DomainPtr domain = ValueDomain::boolean();
  const AlphabetPtr alpha = ab_alphabet();
  FinitaryMachine m;
  m.alphabet = alpha;
  m.domain = domain;
  m.state_names = {"other", "match"};
  m.outputs = {make_bool(domain, false), make_bool(domain, true)};
  m.next.assign(2, std::vector<std::uint32_t>(alpha->size(), 0));
  for (std::uint32_t q = 0; q < 2; ++q) {
    for (std::uint32_t a = 0; a < alpha->size(); ++a) {
      m.next[q][a] = (a == target) ? 1 : 0;
    }
  }
  m.initial = 0;

  Property p;
  p.name = name;
  p.alphabet = alpha;
  p.domain = domain;
  p.vf = vf;
  p.backend = std::move(m);
  return finish(std::move(p));
}

}  // namespace

PropertyPtr make_gf_a() {
  return make_ends_with("gf_a", *ab_alphabet()->find("a"),
                        ValueFunction::LimSup);
}

PropertyPtr make_fg_b() {
  return make_ends_with("fg_b", *ab_alphabet()->find("b"),
                        ValueFunction::LimInf);
}

PropertyPtr make_discounted_safety(BooleanDfa dfa) {
  dfa.validate();
  const DomainPtr domain = ValueDomain::unit_interval();
  const AlphabetPtr alpha = dfa.alphabet;
  const std::size_t n = dfa.state_count();

  // A state is live while some infinite run from it avoids rejection.
  // Greatest fixpoint: drop states whose successors are all non-live.
  auto live = std::make_shared<std::vector<bool>>(n);
  for (std::size_t q = 0; q < n; ++q) (*live)[q] = !dfa.rejecting[q];
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t q = 0; q < n; ++q) {
      if (!(*live)[q]) continue;
      bool any = false;
      for (std::uint32_t t : dfa.next[q]) any = any || (*live)[t];
      if (!any) {
        (*live)[q] = false;
        changed = true;
      }
    }
  }

  // Shortest distance from each live state to a non-live state, for the
  // greatest lower bound of the values reachable from a prefix.
  constexpr std::size_t kUnreachable = static_cast<std::size_t>(-1);
  auto dist = std::make_shared<std::vector<std::size_t>>(n, kUnreachable);
  {
    std::vector<std::size_t> frontier;
    for (std::size_t q = 0; q < n; ++q) {
      if (!(*live)[q]) {
        (*dist)[q] = 0;
        frontier.push_back(q);
      }
    }
    while (!frontier.empty()) {
      std::vector<std::size_t> nextf;
      for (std::size_t t : frontier) {
        for (std::size_t q = 0; q < n; ++q) {
          if ((*dist)[q] != kUnreachable) continue;
          for (std::uint32_t s : dfa.next[q]) {
            if (s == t) {
              (*dist)[q] = (*dist)[t] + 1;
              nextf.push_back(q);
              break;
            }
          }
        }
      }
      frontier = std::move(nextf);
    }
  }

  auto aut = std::make_shared<const BooleanDfa>(std::move(dfa));

  // Length of the shortest rejected prefix of s, if any.
  auto death = [aut, live](const FiniteTrace& s) -> std::optional<std::size_t> {
    std::uint32_t q = aut->initial;
    if (!(*live)[q]) return 0;
    for (std::size_t i = 0; i < s.symbols.size(); ++i) {
      q = aut->next[q][s.symbols[i]];
      if (!(*live)[q]) return i + 1;
    }
    return std::nullopt;
  };
  auto frozen = [domain](std::size_t r) {
    return make_real(domain, 1.0 - dyadic(r));
  };

  OracleHooks o;
  o.eval = [domain, death, frozen](const FiniteTrace& s) {
    auto r = death(s);
    return r ? frozen(*r) : make_real(domain, 1.0);
  };
  o.sup_ext = o.eval;
  // Greatest lower bound over extensions: 1 - 2^-(|s| + k) where k is the
  // shortest distance from the current state to a rejected one, and 1 when
  // rejection is unreachable.
  o.inf_ext = [aut, dist, domain, death, frozen](const FiniteTrace& s) {
    auto r = death(s);
    if (r) return frozen(*r);
    std::uint32_t q = aut->initial;
    for (std::uint32_t sym : s.symbols) q = aut->next[q][sym];
    const std::size_t k = (*dist)[q];
    if (k == static_cast<std::size_t>(-1)) return make_real(domain, 1.0);
    return frozen(s.symbols.size() + k);
  };
  o.lasso_eval = [aut, live, domain, frozen](const Lasso& l) {
    std::uint32_t q = aut->initial;
    if (!(*live)[q]) return frozen(0);
    std::size_t pos = 0;
    for (std::uint32_t sym : l.stem.symbols) {
      q = aut->next[q][sym];
      ++pos;
      if (!(*live)[q]) return frozen(pos);
    }
    std::vector<bool> seen(aut->state_count(), false);
    while (!seen[q]) {
      seen[q] = true;
      for (std::uint32_t sym : l.cycle.symbols) {
        q = aut->next[q][sym];
        ++pos;
        if (!(*live)[q]) return frozen(pos);
      }
    }
    return make_real(domain, 1.0);
  };
  o.alt = OracleHooks::Alt{
      ValueFunction::Sup, [death, frozen](const FiniteTrace& s) {
        auto r = death(s);
        return r ? frozen(*r) : frozen(s.symbols.size());
      }};

  Property p;
  p.name = "discounted_safety";
  p.alphabet = alpha;
  p.domain = domain;
  p.vf = ValueFunction::Inf;
  p.backend = std::move(o);
  return finish(std::move(p));
}

PropertyPtr make_constant(AlphabetPtr alphabet, Value v) {
  if (!alphabet) throw BadParams("constant property needs an alphabet");
  if (!v.domain()) throw BadParams("constant property needs a valued domain");
  FinitaryMachine m;
  m.alphabet = alphabet;
  m.domain = v.domain();
  m.state_names = {"const"};
  m.outputs = {v};
  m.next.assign(1, std::vector<std::uint32_t>(alphabet->size(), 0));
  m.initial = 0;

  Property p;
  p.name = "constant(" + format_value(v) + ")";
  p.alphabet = std::move(alphabet);
  p.domain = v.domain();
  p.vf = ValueFunction::Inf;
  p.backend = std::move(m);
  return finish(std::move(p));
}

PropertyPtr builtin(const std::string& name, const BuiltinParams& params) {
  const std::uint64_t cap = params.cap.value_or(8);
  if (name == "min_response") return make_min_response(cap);
  if (name == "max_response") return make_max_response(cap);
  if (name == "tail_min_response") return make_tail_min_response(cap);
  if (name == "skip_min_response") {
    return make_skip_min_response(params.skip.value_or(0), cap);
  }
  if (name == "avg_response") return make_avg_response();
  if (name == "gf_a") return make_gf_a();
  if (name == "fg_b") return make_fg_b();
  if (name == "discounted_safety") {
    if (!params.dfa) {
      throw BadParams("discounted_safety requires a safety automaton");
    }
    return make_discounted_safety(*params.dfa);
  }
  throw BadParams("unknown builtin '" + name + "'");
}

namespace {

PropertyPtr make_vsafe_not_safe() {
  const DomainPtr domain = ValueDomain::extended_nat();
  const AlphabetPtr alpha = ab_alphabet();
  const std::uint32_t b = *alpha->find("b");

  // 1-based position of the first b, or 0 when there is none.
  auto first_b = [b](const std::vector<std::uint32_t>& syms) -> std::uint64_t {
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (syms[i] == b) return i + 1;
    }
    return 0;
  };

  OracleHooks o;
  o.eval = [domain, first_b](const FiniteTrace& s) {
    return make_nat(domain, first_b(s.symbols));
  };
  o.sup_ext = [domain, first_b](const FiniteTrace& s) {
    const std::uint64_t p = first_b(s.symbols);
    return p ? make_nat(domain, p) : nat_infinity(domain);
  };
  o.inf_ext = [domain, first_b](const FiniteTrace& s) {
    return make_nat(domain, first_b(s.symbols));
  };
  o.pred_set = [domain, first_b](const FiniteTrace& s) {
    const std::uint64_t p = first_b(s.symbols);
    if (p) {
      return make_prediction_set(domain, {make_nat(domain, p)});
    }
    PredictionSet ps = make_prediction_set(domain, {make_nat(domain, 0)});
    ps.nat_tail_from = s.symbols.size() + 1;
    return ps;
  };
  o.lasso_eval = [domain, first_b](const Lasso& l) {
    std::uint64_t p = first_b(l.stem.symbols);
    if (!p) {
      const std::uint64_t q = first_b(l.cycle.symbols);
      if (q) p = l.stem.symbols.size() + q;
    }
    return make_nat(domain, p);
  };

  Property p;
  p.name = "vsafe_not_safe";
  p.alphabet = alpha;
  p.domain = domain;
  p.vf = ValueFunction::LimInf;
  p.backend = std::move(o);
  return finish(std::move(p));
}

PropertyPtr make_multilive_not_live() {
  const DomainPtr domain = ValueDomain::finite_order({"0", "1", "2"});
  const AlphabetPtr alpha = Alphabet::make({"a", "b", "c"});
  FinitaryMachine m;
  m.alphabet = alpha;
  m.domain = domain;
  m.state_names = {"only_a", "b_seen", "c_seen"};
  m.outputs = {make_level(domain, std::size_t{0}),
               make_level(domain, std::size_t{2}),
               make_level(domain, std::size_t{1})};
  const std::uint32_t ai = *alpha->find("a");
  const std::uint32_t bi = *alpha->find("b");
  const std::uint32_t ci = *alpha->find("c");
  m.next.assign(3, std::vector<std::uint32_t>(alpha->size(), 0));
  m.next[0][ai] = 0;
  m.next[0][bi] = 1;
  m.next[0][ci] = 2;
  m.next[1][ai] = 1;
  m.next[1][bi] = 1;
  m.next[1][ci] = 2;
  m.next[2][ai] = 2;
  m.next[2][bi] = 2;
  m.next[2][ci] = 2;
  m.initial = 0;

  Property p;
  p.name = "multilive_not_live";
  p.alphabet = alpha;
  p.domain = domain;
  p.vf = ValueFunction::LimInf;
  p.backend = std::move(m);
  return finish(std::move(p));
}

PropertyPtr make_live_not_verdictlive() {
  const DomainPtr domain = ValueDomain::unit_interval();
  const AlphabetPtr alpha = ab_alphabet();
  const std::uint32_t b = *alpha->find("b");

  struct Scan {
    std::uint64_t count = 0;
    std::uint64_t first = 0;  // 1-based position of the first b
  };
  auto scan = [b](const std::vector<std::uint32_t>& syms) {
    Scan r;
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (syms[i] == b) {
        ++r.count;
        if (r.first == 0) r.first = i + 1;
      }
    }
    return r;
  };
  auto value_of = [domain](const Scan& r) {
    if (r.count == 0) return make_real(domain, 0.0);
    if (r.count == 1) return make_real(domain, dyadic(r.first));
    return make_real(domain, 1.0);
  };

  OracleHooks o;
  o.eval = [scan, value_of](const FiniteTrace& s) {
    return value_of(scan(s.symbols));
  };
  // A second b can always still arrive, so 1 stays reachable forever.
  o.sup_ext = [domain](const FiniteTrace&) { return make_real(domain, 1.0); };
  o.inf_ext = o.eval;
  o.pred_set = [domain, scan](const FiniteTrace& s) {
    const Scan r = scan(s.symbols);
    if (r.count >= 2) {
      return make_prediction_set(domain, {make_real(domain, 1.0)});
    }
    if (r.count == 1) {
      return make_prediction_set(
          domain, {make_real(domain, dyadic(r.first)), make_real(domain, 1.0)});
    }
    PredictionSet ps = make_prediction_set(
        domain, {make_real(domain, 0.0), make_real(domain, 1.0)});
    ps.dyadic_tail_from = s.symbols.size() + 1;
    return ps;
  };
  o.lasso_eval = [scan, value_of](const Lasso& l) {
    Scan r = scan(l.stem.symbols);
    const Scan in_cycle = scan(l.cycle.symbols);
    if (in_cycle.count > 0) {
      // Infinitely many b overall.
      r.count += 2;
      if (r.first == 0) r.first = l.stem.symbols.size() + in_cycle.first;
    }
    return value_of(r);
  };

  Property p;
  p.name = "live_not_verdictlive";
  p.alphabet = alpha;
  p.domain = domain;
  p.vf = ValueFunction::LimInf;
  p.backend = std::move(o);
  return finish(std::move(p));
}

}  // namespace

PropertyPtr fixture(const std::string& name) {
  if (name == "vsafe_not_safe") return make_vsafe_not_safe();
  if (name == "multilive_not_live") return make_multilive_not_live();
  if (name == "live_not_verdictlive") return make_live_not_verdictlive();
  throw UnknownFixture(name);
}

namespace {

bool fold_matches_vf(ValueFunction vf, CombineMode mode) {
  const bool meets = vf == ValueFunction::Inf || vf == ValueFunction::LimInf;
  return meets == (mode == CombineMode::Min);
}

FinitaryMachine product_machine(const FinitaryMachine& m1,
                                const FinitaryMachine& m2, bool take_meet) {
  FinitaryMachine m;
  m.alphabet = m1.alphabet;
  m.domain = m1.domain;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> order;
  const std::size_t symbols = m1.alphabet->size();

  auto intern = [&](std::uint32_t a, std::uint32_t b) {
    auto [it, inserted] = ids.emplace(std::make_pair(a, b),
                                      static_cast<std::uint32_t>(order.size()));
    if (inserted) {
      order.emplace_back(a, b);
      m.state_names.push_back(m1.state_names[a] + "&" + m2.state_names[b]);
      m.outputs.push_back(fold2(m1.outputs[a], m2.outputs[b], take_meet));
      m.next.emplace_back(symbols, 0);
    }
    return it->second;
  };

  m.initial = intern(m1.initial, m2.initial);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [a, b] = order[i];
    for (std::size_t sym = 0; sym < symbols; ++sym) {
      m.next[i][sym] = intern(m1.next[a][sym], m2.next[b][sym]);
    }
  }
  return m;
}

}  // namespace

PropertyPtr combine(const PropertyPtr& p1, const PropertyPtr& p2,
                    CombineMode mode) {
  if (!p1 || !p2) throw BadParams("combine needs two properties");
  if (!same_alphabet(p1->alphabet, p2->alphabet)) {
    throw AlphabetMismatch("combined properties must share an alphabet");
  }
  if (!same_domain(p1->domain, p2->domain)) {
    throw DomainMismatch("combined properties must share a value domain");
  }
  const bool take_meet = mode == CombineMode::Min;
  const std::string name = std::string(take_meet ? "min(" : "max(") +
                           p1->name + ", " + p2->name + ")";

  if (p1->is_machine() && p2->is_machine() && p1->vf == p2->vf &&
      fold_matches_vf(p1->vf, mode)) {
    Property p;
    p.name = name;
    p.alphabet = p1->alphabet;
    p.domain = p1->domain;
    p.vf = p1->vf;
    p.backend = product_machine(p1->machine(), p2->machine(), take_meet);
    return finish(std::move(p));
  }

  DerivedBackend d;
  d.rule = take_meet ? "pointwise min" : "pointwise max";
  d.lasso_eval = [p1, p2, take_meet](const Lasso& l) {
    return fold2(eval_on_lasso(*p1, l), eval_on_lasso(*p2, l), take_meet);
  };
  d.finitary_eval = [p1, p2, take_meet](const FiniteTrace& s) {
    return fold2(eval_finitary(*p1, s), eval_finitary(*p2, s), take_meet);
  };

  Property p;
  p.name = name;
  p.alphabet = p1->alphabet;
  p.domain = p1->domain;
  p.vf = p1->vf;
  p.backend = std::move(d);
  return finish(std::move(p));
}

PropertyPtr complement(const PropertyPtr& p) {
  if (!p) throw BadParams("complement needs a property");
  const DomainPtr dd = ValueDomain::dual(p->domain);

  Property out;
  out.name = "complement(" + p->name + ")";
  out.alphabet = p->alphabet;
  out.domain = dd;
  out.vf = dual_value_function(p->vf);

  if (p->is_machine()) {
    FinitaryMachine m = p->machine();
    m.domain = dd;
    for (Value& v : m.outputs) v = dualize(v);
    out.backend = std::move(m);
    return finish(std::move(out));
  }
  if (p->is_oracle()) {
    const OracleHooks& src = p->oracle();
    OracleHooks o;
    PropertyPtr keep = p;  // owns the source hooks
    o.eval = [keep](const FiniteTrace& s) {
      return dualize(keep->oracle().eval(s));
    };
    if (src.inf_ext) {
      o.sup_ext = [keep](const FiniteTrace& s) {
        return dualize(keep->oracle().inf_ext(s));
      };
    }
    if (src.sup_ext) {
      o.inf_ext = [keep](const FiniteTrace& s) {
        return dualize(keep->oracle().sup_ext(s));
      };
    }
    if (src.lasso_eval) {
      o.lasso_eval = [keep](const Lasso& l) {
        return dualize(keep->oracle().lasso_eval(l));
      };
    }
    if (src.alt) {
      o.alt = OracleHooks::Alt{
          dual_value_function(src.alt->vf), [keep](const FiniteTrace& s) {
            return dualize(keep->oracle().alt->eval(s));
          }};
    }
    out.backend = std::move(o);
    return finish(std::move(out));
  }
  const DerivedBackend& src = p->derived();
  DerivedBackend d;
  d.rule = "complement of: " + src.rule;
  PropertyPtr keep = p;
  d.lasso_eval = [keep](const Lasso& l) {
    return dualize(keep->derived().lasso_eval(l));
  };
  if (src.finitary_eval) {
    d.finitary_eval = [keep](const FiniteTrace& s) {
      return dualize(keep->derived().finitary_eval(s));
    };
  }
  out.backend = std::move(d);
  return finish(std::move(out));
}

namespace {

bool outputs_decreasing(const FinitaryMachine& m) {
  for (std::size_t q = 0; q < m.state_count(); ++q) {
    for (std::uint32_t t : m.next[q]) {
      if (!leq(m.outputs[t], m.outputs[q])) return false;
    }
  }
  return true;
}

}  // namespace

PropertyPtr monotone_rewrite(const PropertyPtr& p) {
  if (!p) throw BadParams("monotone_rewrite needs a property");
  if (!p->is_machine()) {
    throw UnsupportedBackend("monotone_rewrite needs a machine backend");
  }
  if (p->vf != ValueFunction::Inf && p->vf != ValueFunction::Sup) {
    throw UnsupportedBackend(
        "monotone_rewrite applies to inf and sup properties");
  }
  const bool take_meet = p->vf == ValueFunction::Inf;

  Property out;
  out.name = "monotone_rewrite(" + p->name + ")";
  out.alphabet = p->alphabet;
  out.domain = p->domain;
  // The running aggregate is monotone, so its liminf and limsup agree with
  // the original inf (or sup).
  out.vf = ValueFunction::LimInf;
  out.backend = running_fold_machine(p->machine(), take_meet);
  return finish(std::move(out));
}

PropertyPtr liminf_as_sup_family(const PropertyPtr& p, std::uint64_t i) {
  if (!p) throw BadParams("liminf_as_sup_family needs a property");
  if (!p->is_machine() || p->vf != ValueFunction::LimInf) {
    throw UnsupportedBackend(
        "liminf_as_sup_family needs a machine-backed liminf property");
  }
  const FinitaryMachine& m = p->machine();
  const Value top_value = top(p->domain);
  const std::size_t symbols = m.alphabet->size();

  FinitaryMachine out;
  out.alphabet = m.alphabet;
  out.domain = m.domain;

  // Product with a step counter that saturates at i: the output is top
  // until i observations have passed, then the original output.
  std::map<std::pair<std::uint32_t, std::uint64_t>, std::uint32_t> ids;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> order;
  auto intern = [&](std::uint32_t q, std::uint64_t c) {
    auto [it, inserted] = ids.emplace(std::make_pair(q, c),
                                      static_cast<std::uint32_t>(order.size()));
    if (inserted) {
      order.emplace_back(q, c);
      out.state_names.push_back(m.state_names[q] + "@" + std::to_string(c));
      out.outputs.push_back(c < i ? top_value : m.outputs[q]);
      out.next.emplace_back(symbols, 0);
    }
    return it->second;
  };

  out.initial = intern(m.initial, 0);
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const auto [q, c] = order[idx];
    const std::uint64_t c2 = c < i ? c + 1 : c;
    for (std::size_t sym = 0; sym < symbols; ++sym) {
      out.next[idx][sym] = intern(m.next[q][sym], c2);
    }
  }

  Property res;
  res.name = "liminf_stage(" + p->name + ", " + std::to_string(i) + ")";
  res.alphabet = p->alphabet;
  res.domain = p->domain;
  res.vf = ValueFunction::Inf;
  res.backend = std::move(out);
  return finish(std::move(res));
}

PropertyPtr liminf_upper_bound_combine(
    const std::vector<PropertyPtr>& family) {
  if (family.empty()) throw EmptyFamily();
  for (const PropertyPtr& p : family) {
    if (!p) throw BadParams("family contains a null property");
    if (!p->is_machine() || p->vf != ValueFunction::Inf) {
      throw UnsupportedBackend(
          "liminf_upper_bound_combine needs machine-backed inf properties");
    }
    if (!same_alphabet(p->alphabet, family.front()->alphabet)) {
      throw AlphabetMismatch("family members must share an alphabet");
    }
    if (!same_domain(p->domain, family.front()->domain)) {
      throw DomainMismatch("family members must share a value domain");
    }
  }

  // Members must have monotonically decreasing finitary values for the
  // staged join to be exact; replace any other member by its running meet,
  // which computes the same inf property.
  std::vector<FinitaryMachine> members;
  members.reserve(family.size());
  for (const PropertyPtr& p : family) {
    const FinitaryMachine& m = p->machine();
    members.push_back(outputs_decreasing(m) ? m
                                            : running_fold_machine(m, true));
  }

  const std::size_t k = members.size();
  const std::size_t symbols = members.front().alphabet->size();
  FinitaryMachine out;
  out.alphabet = members.front().alphabet;
  out.domain = members.front().domain;

  // State: one component per member plus a stage counter saturating at
  // k - 1. The output joins the members enabled so far.
  std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
  std::vector<std::vector<std::uint32_t>> order;
  auto intern = [&](std::vector<std::uint32_t> key) {
    auto [it, inserted] =
        ids.emplace(key, static_cast<std::uint32_t>(order.size()));
    if (inserted) {
      order.push_back(key);
      const std::uint32_t stage = key.back();
      std::vector<Value> enabled;
      for (std::uint32_t i = 0; i <= stage; ++i) {
        enabled.push_back(members[i].outputs[key[i]]);
      }
      out.state_names.push_back("p" + std::to_string(it->second) + "_stage" +
                                std::to_string(stage));
      out.outputs.push_back(join_all(enabled));
      out.next.emplace_back(symbols, 0);
    }
    return it->second;
  };

  std::vector<std::uint32_t> start;
  for (const FinitaryMachine& m : members) start.push_back(m.initial);
  start.push_back(0);  // stage
  out.initial = intern(std::move(start));

  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const std::vector<std::uint32_t> key = order[idx];
    const std::uint32_t stage = key.back();
    const std::uint32_t stage2 =
        stage + 1 < k ? stage + 1 : static_cast<std::uint32_t>(k - 1);
    for (std::size_t sym = 0; sym < symbols; ++sym) {
      std::vector<std::uint32_t> key2(k + 1);
      for (std::size_t i = 0; i < k; ++i) {
        key2[i] = members[i].next[key[i]][sym];
      }
      key2[k] = stage2;
      out.next[idx][sym] = intern(std::move(key2));
    }
  }

  Property res;
  res.name = "liminf_upper_bound(" + std::to_string(k) + " members)";
  res.alphabet = out.alphabet;
  res.domain = out.domain;
  res.vf = ValueFunction::LimInf;
  res.backend = std::move(out);
  return finish(std::move(res));
}

}  // namespace qsl
