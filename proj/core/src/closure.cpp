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

#include "qsl/closure.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "machine_analysis.hpp"
#include "qsl/errors.hpp"

namespace qsl {
namespace {

detail::ConfigRoot as_root(const Config& c) {
  detail::ConfigRoot r;
  r.state = c.state;
  r.aggregate = c.aggregate;
  return r;
}

/// Config graph of p extended with c as an extra root, its SCC analysis,
/// and the node id of c inside the graph.
struct ConfigQuery {
  detail::ConfigGraph graph;
  detail::GraphAnalysis analysis;
  std::uint32_t node = 0;
};

ConfigQuery analyze_at(const Property& p, const Config& c) {
  ConfigQuery q;
  q.graph = detail::build_config_graph(p, {as_root(c)});
  q.analysis = detail::analyze_graph(q.graph);
  auto node = detail::find_config(q.graph, c.state, c.aggregate);
  if (!node) throw BadParams("config does not occur in the config graph");
  q.node = *node;
  return q;
}

/// Machine over p's config graph whose outputs are the per-node closure
/// bounds: top values under Inf for the safety closure, bottom values
/// under Sup for the co-safety closure. The bounds are antitone
/// (respectively monotone) along edges, so the Inf (Sup) reading of a run
/// is the bound of the run's tail component, which is exactly the closure
/// value of the run.
PropertyPtr machine_closure(const Property& p, bool safety) {
  auto g = detail::build_config_graph(p);
  auto a = detail::analyze_graph(g);
  FinitaryMachine m;
  m.alphabet = p.alphabet;
  m.domain = p.domain;
  m.initial = g.initial;
  m.state_names = g.name;
  m.next = g.next;
  m.outputs.reserve(g.node_count());
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    m.outputs.push_back(safety ? a.top(i) : a.bottom(i));
  }
  auto out = std::make_shared<Property>();
  out->name = (safety ? std::string("safety_closure(")
                      : std::string("cosafety_closure(")) +
              p.name + ")";
  out->alphabet = p.alphabet;
  out->domain = p.domain;
  out->vf = safety ? ValueFunction::Inf : ValueFunction::Sup;
  out->backend = std::move(m);
  return out;
}

/// Closure of a hooked oracle: the continuation-bound hook becomes the
/// finitary function of the closure property. The hook is exact for the
/// closure as well: the closure never drops below the original property,
/// and never exceeds the bound the hook reports.
PropertyPtr oracle_closure(const PropertyPtr& p, bool safety) {
  const OracleHooks& h = p->oracle();
  const auto& hook = safety ? h.sup_ext : h.inf_ext;
  if (!hook) {
    throw UnsupportedBackend(
        std::string(safety ? "safety" : "co-safety") + " closure of '" +
        p->name + "' needs the " + (safety ? "sup_ext" : "inf_ext") +
        " hook");
  }
  OracleHooks hooks;
  hooks.eval = hook;
  if (safety) {
    hooks.sup_ext = hook;
  } else {
    hooks.inf_ext = hook;
  }
  PropertyPtr base = p;
  hooks.lasso_eval = [base, safety](const Lasso& l) {
    auto v = detail::stabilized_closure_value(*base, l, safety);
    if (!v) {
      throw Error("closure value did not stabilize on the lasso for '" +
                  base->name + "'");
    }
    return *v;
  };
  auto out = std::make_shared<Property>();
  out->name = (safety ? std::string("safety_closure(")
                      : std::string("cosafety_closure(")) +
              p->name + ")";
  out->alphabet = p->alphabet;
  out->domain = p->domain;
  out->vf = safety ? ValueFunction::Inf : ValueFunction::Sup;
  out->backend = std::move(hooks);
  return out;
}

PropertyPtr closure_of(const PropertyPtr& p, bool safety) {
  if (!p) throw BadParams("null property");
  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    return machine_closure(*p, safety);
  }
  if (p->is_oracle()) {
    // A property that admits an Inf representation equals its own safety
    // closure; one with a Sup representation equals its own co-safety
    // closure. Returning the property itself (renamed) keeps every exact
    // hook available on the closure.
    const bool fixed = has_representation(
        *p, safety ? ValueFunction::Inf : ValueFunction::Sup);
    if (fixed) {
      auto out = std::make_shared<Property>(*p);
      out->name = (safety ? std::string("safety_closure(")
                          : std::string("cosafety_closure(")) +
                  p->name + ")";
      return out;
    }
    return oracle_closure(p, safety);
  }
  throw UnsupportedBackend(std::string(safety ? "safety" : "co-safety") +
                           " closure of derived property '" + p->name + "'");
}

}  // namespace

Config initial_config(const Property& p) {
  detail::require_linear_machine(p);
  const FinitaryMachine& m = p.machine();
  Config c;
  c.state = m.initial;
  if (detail::keeps_aggregate(p.vf)) c.aggregate = m.outputs[m.initial];
  return c;
}

Config config_after(const Property& p, const FiniteTrace& prefix) {
  if (!same_alphabet(p.alphabet, prefix.alphabet)) throw AlphabetMismatch();
  Config c = initial_config(p);
  for (std::uint32_t sym : prefix.symbols) c = config_step(p, c, sym);
  return c;
}

Config config_step(const Property& p, const Config& c, std::uint32_t symbol) {
  detail::require_linear_machine(p);
  const FinitaryMachine& m = p.machine();
  if (c.state >= m.state_count()) {
    throw BadParams("config state is out of range");
  }
  if (symbol >= p.alphabet->size()) {
    throw BadParams("symbol index is out of range");
  }
  const bool wants = detail::keeps_aggregate(p.vf);
  if (wants != c.aggregate.has_value()) {
    throw BadParams(wants
                        ? "config is missing its running aggregate"
                        : "config must not carry an aggregate for this "
                          "value function");
  }
  Config out;
  out.state = m.next[c.state][symbol];
  if (wants) {
    if (!same_domain(c.aggregate->domain(), m.domain)) {
      throw DomainMismatch("config aggregate is from a different domain");
    }
    out.aggregate = p.vf == ValueFunction::Inf
                        ? meet(*c.aggregate, m.outputs[out.state])
                        : join(*c.aggregate, m.outputs[out.state]);
  }
  return out;
}

Value top_value(const Property& p, const Config& c) {
  auto q = analyze_at(p, c);
  return q.analysis.top(q.node);
}

Value bottom_value(const Property& p, const Config& c) {
  auto q = analyze_at(p, c);
  return q.analysis.bottom(q.node);
}

PredictionSet prediction_set(const Property& p, const Config& c) {
  auto q = analyze_at(p, c);
  return make_prediction_set(p.domain, q.analysis.attainable_from(q.node));
}

PropertyPtr safety_closure(const PropertyPtr& p) { return closure_of(p, true); }

PropertyPtr cosafety_closure(const PropertyPtr& p) {
  return closure_of(p, false);
}

}  // namespace qsl
