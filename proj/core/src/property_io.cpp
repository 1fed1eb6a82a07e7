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
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include "qsl/property_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsl/errors.hpp"
#include "qsl/value_domain.hpp"

namespace qsl {
namespace {

using ordered_json = nlohmann::ordered_json;

void check_fields(const ordered_json& j,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional,
                  const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) throw ParseError(path + ": unknown field '" + key + "'");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) {
      throw ParseError(path + ": missing field '" + key + "'");
    }
  }
}

std::string get_string(const ordered_json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a string");
  return j.get<std::string>();
}

std::uint64_t get_unsigned(const ordered_json& j, const std::string& path) {
  if (!j.is_number_unsigned()) {
    throw ParseError(path + ": expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

double get_finite(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ParseError(path + ": expected a finite number");
  return x;
}

bool get_bool(const ordered_json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError(path + ": expected a boolean");
  return j.get<bool>();
}

AlphabetPtr parse_alphabet(const ordered_json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(path + ": expected a nonempty array of symbol labels");
  }
  std::vector<std::string> labels;
  labels.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    labels.push_back(get_string(j[i], path + "[" + std::to_string(i) + "]"));
  }
  try {
    return Alphabet::make(std::move(labels));
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

DomainPtr parse_domain(const ordered_json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  if (!j.contains("kind")) throw ParseError(path + ": missing field 'kind'");
  const std::string kind = get_string(j["kind"], path + ".kind");
  try {
    if (kind == "boolean") {
      check_fields(j, {"kind"}, {}, path);
      return ValueDomain::boolean();
    }
    if (kind == "extended_nat") {
      check_fields(j, {"kind"}, {"cap", "with_infinity"}, path);
      const bool with_infinity =
          j.contains("with_infinity")
              ? get_bool(j["with_infinity"], path + ".with_infinity")
              : true;
      if (!j.contains("cap")) {
        if (!with_infinity) {
          throw ParseError(path + ": an uncapped domain needs infinity");
        }
        return ValueDomain::extended_nat();
      }
      return ValueDomain::extended_nat(get_unsigned(j["cap"], path + ".cap"),
                                       with_infinity);
    }
    if (kind == "extended_real") {
      check_fields(j, {"kind"}, {"lo", "hi"}, path);
      const double lo = j.contains("lo")
                            ? get_finite(j["lo"], path + ".lo")
                            : -std::numeric_limits<double>::infinity();
      const double hi = j.contains("hi")
                            ? get_finite(j["hi"], path + ".hi")
                            : std::numeric_limits<double>::infinity();
      return ValueDomain::extended_real(lo, hi);
    }
    if (kind == "unit_interval") {
      check_fields(j, {"kind"}, {}, path);
      return ValueDomain::unit_interval();
    }
    if (kind == "finite_order") {
      check_fields(j, {"kind", "levels"}, {}, path);
      const auto& levels_json = j["levels"];
      if (!levels_json.is_array() || levels_json.empty()) {
        throw ParseError(path + ".levels: expected a nonempty array");
      }
      std::vector<std::string> levels;
      levels.reserve(levels_json.size());
      for (std::size_t i = 0; i < levels_json.size(); ++i) {
        levels.push_back(get_string(
            levels_json[i], path + ".levels[" + std::to_string(i) + "]"));
      }
      return ValueDomain::finite_order(std::move(levels));
    }
    if (kind == "product") {
      check_fields(j, {"kind", "first", "second"}, {}, path);
      return ValueDomain::product(parse_domain(j["first"], path + ".first"),
                                  parse_domain(j["second"], path + ".second"));
    }
    if (kind == "dual") {
      check_fields(j, {"kind", "inner"}, {}, path);
      return ValueDomain::dual(parse_domain(j["inner"], path + ".inner"));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
  throw ParseError(path + ".kind: unknown domain kind '" + kind + "'");
}

ordered_json domain_to_json(const DomainPtr& d) {
  ordered_json j;
  switch (d->kind) {
    case DomainKind::Boolean:
      j["kind"] = "boolean";
      return j;
    case DomainKind::ExtendedNat:
      j["kind"] = "extended_nat";
      if (d->cap) j["cap"] = *d->cap;
      if (!d->with_infinity) j["with_infinity"] = false;
      return j;
    case DomainKind::ExtendedReal:
      j["kind"] = "extended_real";
      if (std::isfinite(d->lo)) j["lo"] = d->lo;
      if (std::isfinite(d->hi)) j["hi"] = d->hi;
      return j;
    case DomainKind::UnitInterval:
      j["kind"] = "unit_interval";
      return j;
    case DomainKind::FiniteOrder:
      j["kind"] = "finite_order";
      j["levels"] = d->levels;
      return j;
    case DomainKind::Product:
      j["kind"] = "product";
      j["first"] = domain_to_json(d->first);
      j["second"] = domain_to_json(d->second);
      return j;
    case DomainKind::Dual:
      j["kind"] = "dual";
      j["inner"] = domain_to_json(d->inner);
      return j;
  }
  throw BadParams("bad domain kind");
}

ValueFunction parse_value_function(const ordered_json& j,
                                   const std::string& path) {
  const std::string name = get_string(j, path);
  if (name == "inf") return ValueFunction::Inf;
  if (name == "sup") return ValueFunction::Sup;
  if (name == "liminf") return ValueFunction::LimInf;
  if (name == "limsup") return ValueFunction::LimSup;
  throw ParseError(path + ": unknown value function '" + name + "'");
}

/// Shared state-table shape of the machine and dfa forms: states carry
/// string ids; transitions are (from, symbol, to) triples that must cover
/// every state-symbol pair exactly once.
struct StateTable {
  std::vector<std::string> ids;
  std::map<std::string, std::uint32_t> index;
};

StateTable parse_state_ids(const ordered_json& states,
                           const std::vector<std::string>& extra_fields,
                           const std::string& path) {
  if (!states.is_array() || states.empty()) {
    throw ParseError(path + ": expected a nonempty array");
  }
  StateTable table;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string entry = path + "[" + std::to_string(i) + "]";
    check_fields(states[i], {"id"}, extra_fields, entry);
    std::string id = get_string(states[i]["id"], entry + ".id");
    if (id.empty()) throw ParseError(entry + ".id: expected a nonempty id");
    if (!table.index.emplace(id, static_cast<std::uint32_t>(i)).second) {
      throw ParseError(entry + ".id: duplicate state id '" + id + "'");
    }
    table.ids.push_back(std::move(id));
  }
  return table;
}

std::uint32_t resolve_state(const StateTable& table, const ordered_json& j,
                            const std::string& path) {
  const std::string id = get_string(j, path);
  const auto it = table.index.find(id);
  if (it == table.index.end()) {
    throw ParseError(path + ": unknown state id '" + id + "'");
  }
  return it->second;
}

std::vector<std::vector<std::uint32_t>> parse_transitions(
    const ordered_json& transitions, const StateTable& table,
    const AlphabetPtr& alphabet, const std::string& path) {
  if (!transitions.is_array()) {
    throw ParseError(path + ": expected an array");
  }
  constexpr std::uint32_t kUnset = 0xffffffffu;
  std::vector<std::vector<std::uint32_t>> next(
      table.ids.size(),
      std::vector<std::uint32_t>(alphabet->size(), kUnset));
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string entry = path + "[" + std::to_string(i) + "]";
    check_fields(transitions[i], {"from", "symbol", "to"}, {}, entry);
    const std::uint32_t from =
        resolve_state(table, transitions[i]["from"], entry + ".from");
    const std::string label =
        get_string(transitions[i]["symbol"], entry + ".symbol");
    const auto symbol = alphabet->find(label);
    if (!symbol) {
      throw ParseError(entry + ".symbol: unknown symbol '" + label + "'");
    }
    const std::uint32_t to =
        resolve_state(table, transitions[i]["to"], entry + ".to");
    if (next[from][*symbol] != kUnset) {
      throw ParseError(entry + ": duplicate transition from '" +
                       table.ids[from] + "' on '" + label + "'");
    }
    next[from][*symbol] = to;
  }
  for (std::size_t s = 0; s < next.size(); ++s) {
    for (std::size_t a = 0; a < next[s].size(); ++a) {
      if (next[s][a] == kUnset) {
        throw ParseError(path + ": missing transition from '" + table.ids[s] +
                         "' on '" + alphabet->label(
                                        static_cast<std::uint32_t>(a)) +
                         "'");
      }
    }
  }
  return next;
}

BooleanDfa parse_dfa(const ordered_json& j, const std::string& path) {
  check_fields(j, {"alphabet", "states", "initial", "transitions"}, {}, path);
  BooleanDfa dfa;
  dfa.alphabet = parse_alphabet(j["alphabet"], path + ".alphabet");
  const StateTable table =
      parse_state_ids(j["states"], {"rejecting"}, path + ".states");
  dfa.state_names = table.ids;
  dfa.rejecting.resize(table.ids.size(), false);
  const auto& states = j["states"];
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string entry = path + ".states[" + std::to_string(i) + "]";
    if (!states[i].contains("rejecting")) {
      throw ParseError(entry + ": missing field 'rejecting'");
    }
    dfa.rejecting[i] = get_bool(states[i]["rejecting"], entry + ".rejecting");
  }
  dfa.initial = resolve_state(table, j["initial"], path + ".initial");
  dfa.next = parse_transitions(j["transitions"], table, dfa.alphabet,
                               path + ".transitions");
  try {
    dfa.validate();
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return dfa;
}

PropertyPtr parse_builtin_form(const ordered_json& j) {
  check_fields(j, {"version", "builtin"}, {"params"}, "property");
  const std::string name = get_string(j["builtin"], "property.builtin");
  BuiltinParams params;
  if (j.contains("params")) {
    const auto& pj = j["params"];
    check_fields(pj, {}, {"cap", "skip", "dfa"}, "property.params");
    if (pj.contains("cap")) {
      params.cap = get_unsigned(pj["cap"], "property.params.cap");
    }
    if (pj.contains("skip")) {
      params.skip = get_unsigned(pj["skip"], "property.params.skip");
    }
    if (pj.contains("dfa")) {
      params.dfa = parse_dfa(pj["dfa"], "property.params.dfa");
    }
  }
  try {
    return builtin(name, params);
  } catch (const Error& e) {
    throw ParseError(std::string("property.builtin: ") + e.what());
  }
}

PropertyPtr parse_fixture_form(const ordered_json& j) {
  check_fields(j, {"version", "fixture"}, {}, "property");
  const std::string name = get_string(j["fixture"], "property.fixture");
  try {
    return fixture(name);
  } catch (const Error& e) {
    throw ParseError(std::string("property.fixture: ") + e.what());
  }
}

PropertyPtr parse_machine_form(const ordered_json& j) {
  check_fields(j,
               {"version", "alphabet", "domain", "states", "initial",
                "transitions", "value_function"},
               {"name"}, "property");
  FinitaryMachine m;
  m.alphabet = parse_alphabet(j["alphabet"], "property.alphabet");
  m.domain = parse_domain(j["domain"], "property.domain");
  const StateTable table =
      parse_state_ids(j["states"], {"output"}, "property.states");
  m.state_names = table.ids;
  const auto& states = j["states"];
  m.outputs.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string entry = "property.states[" + std::to_string(i) + "]";
    if (!states[i].contains("output")) {
      throw ParseError(entry + ": missing field 'output'");
    }
    const std::string text = get_string(states[i]["output"], entry + ".output");
    try {
      m.outputs.push_back(parse_value(m.domain, text));
    } catch (const Error& e) {
      throw ParseError(entry + ".output: " + e.what());
    }
  }
  m.initial = resolve_state(table, j["initial"], "property.initial");
  m.next = parse_transitions(j["transitions"], table, m.alphabet,
                             "property.transitions");
  try {
    m.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("property: ") + e.what());
  }

  auto p = std::make_shared<Property>();
  p->name = j.contains("name") ? get_string(j["name"], "property.name")
                               : std::string("machine");
  p->alphabet = m.alphabet;
  p->domain = m.domain;
  p->vf = parse_value_function(j["value_function"], "property.value_function");
  p->backend = std::move(m);
  return p;
}

}  // namespace

PropertyPtr parse_property_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("property json: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("property: expected an object");
  if (!j.contains("version")) {
    throw ParseError("property: missing field 'version'");
  }
  if (!j["version"].is_number_unsigned() ||
      j["version"].get<std::uint64_t>() != 1) {
    throw ParseError("property.version: expected the integer 1");
  }
  if (j.contains("builtin")) return parse_builtin_form(j);
  if (j.contains("fixture")) return parse_fixture_form(j);
  return parse_machine_form(j);
}

PropertyPtr load_property(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read property file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_property_json(buffer.str());
}

std::string property_to_json(const Property& p) {
  if (!p.is_machine()) {
    throw UnsupportedBackend(
        "only machine-backed properties have a file representation");
  }
  const FinitaryMachine& m = p.machine();
  ordered_json j;
  j["version"] = 1;
  j["name"] = p.name;
  j["alphabet"] = m.alphabet->symbols();
  j["domain"] = domain_to_json(m.domain);
  j["value_function"] = to_string(p.vf);
  ordered_json states = ordered_json::array();
  for (std::size_t i = 0; i < m.state_count(); ++i) {
    ordered_json s;
    s["id"] = m.state_names[i];
    s["output"] = format_value(m.outputs[i]);
    states.push_back(std::move(s));
  }
  j["states"] = std::move(states);
  j["initial"] = m.state_names[m.initial];
  ordered_json transitions = ordered_json::array();
  for (std::size_t s = 0; s < m.state_count(); ++s) {
    for (std::uint32_t a = 0; a < m.alphabet->size(); ++a) {
      ordered_json t;
      t["from"] = m.state_names[s];
      t["symbol"] = m.alphabet->label(a);
      t["to"] = m.state_names[m.next[s][a]];
      transitions.push_back(std::move(t));
    }
  }
  j["transitions"] = std::move(transitions);
  return j.dump(2) + "\n";
}

void save_property(const Property& p, const std::string& path) {
  const std::string text = property_to_json(p);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write property file: " + path);
  out << text;
  if (!out.flush()) throw ParseError("cannot write property file: " + path);
}

}  // namespace qsl
