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

#include "qsl/monitor.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "machine_analysis.hpp"
#include "qsl/errors.hpp"

namespace qsl {

using ordered_json = nlohmann::ordered_json;

/// Backend cursor of a ghost monitor: machines walk a prebuilt config
/// graph, oracles accumulate the consumed prefix.
struct GhostImpl {
  std::optional<detail::ConfigGraph> graph;
  std::optional<detail::GraphAnalysis> analysis;
  std::uint32_t node = 0;
  FiniteTrace prefix;
};

namespace {

struct GhostBounds {
  Value pi;
  Value lower;
  Value upper;
  std::optional<bool> sup_realizable;
};

GhostBounds ghost_bounds(const GhostState& g) {
  const Property& p = *g.property;
  const GhostImpl& impl = *g.impl;
  if (p.is_machine()) {
    const auto& attain = impl.analysis->attainable_from(impl.node);
    const Value upper = attain.back();
    const bool member = std::any_of(
        attain.begin(), attain.end(),
        [&](const Value& x) { return equal(x, upper); });
    return GhostBounds{impl.graph->output[impl.node], attain.front(), upper,
                       member};
  }
  const OracleHooks& h = p.oracle();
  return GhostBounds{h.eval(impl.prefix), h.inf_ext(impl.prefix),
                     h.sup_ext(impl.prefix), std::nullopt};
}

StepReport make_report(const GhostBounds& b, std::uint64_t step) {
  StepReport r;
  r.step = step;
  r.pi = b.pi;
  r.lower = b.lower;
  r.upper = b.upper;
  r.sup_realizable = b.sup_realizable;
  return r;
}

/// Applies the rejection rule at the given step: a GE hypothesis dies when
/// the upper bound no longer dominates it, an LE hypothesis when the lower
/// bound no longer stays below it.
void apply_rejections(GhostState& g, const GhostBounds& b, StepReport& r) {
  for (std::size_t i = 0; i < g.hypotheses.size(); ++i) {
    Hypothesis& h = g.hypotheses[i];
    if (!h.open()) continue;
    const Cmp c = h.kind == HypothesisKind::GE ? compare(b.upper, h.value)
                                               : compare(b.lower, h.value);
    const bool rejected = h.kind == HypothesisKind::GE
                              ? (c == Cmp::Less || c == Cmp::Incomparable)
                              : (c == Cmp::Greater || c == Cmp::Incomparable);
    if (rejected) {
      h.rejected_at_step = r.step;
      r.newly_rejected.push_back(i);
    }
  }
}

}  // namespace

GhostState make_ghost(const PropertyPtr& p, std::vector<Hypothesis> hypotheses) {
  if (!p) throw BadParams("null property");
  GhostState g;
  g.property = p;
  g.hypotheses = std::move(hypotheses);
  g.impl = std::make_shared<GhostImpl>();
  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    g.impl->graph = detail::build_config_graph(*p);
    g.impl->analysis = detail::analyze_graph(*g.impl->graph);
    g.impl->node = g.impl->graph->initial;
  } else if (p->is_oracle()) {
    const OracleHooks& h = p->oracle();
    if (!h.eval || !h.sup_ext || !h.inf_ext) {
      throw UnsupportedBackend("ghost monitor for oracle '" + p->name +
                               "' needs the eval, sup_ext, and inf_ext hooks");
    }
    g.impl->prefix = FiniteTrace{p->alphabet, {}};
  } else {
    throw UnsupportedBackend("ghost monitor for derived property '" + p->name +
                             "'");
  }
  for (const Hypothesis& h : g.hypotheses) {
    if (!same_domain(h.value.domain(), p->domain)) {
      throw DomainMismatch("hypothesis value domain differs from the property");
    }
  }
  const GhostBounds b = ghost_bounds(g);
  StepReport r = make_report(b, 0);
  apply_rejections(g, b, r);
  return g;
}

StepReport ghost_report(const GhostState& g) {
  if (!g.property || !g.impl) throw BadParams("uninitialized ghost state");
  return make_report(ghost_bounds(g), g.steps);
}

StepReport ghost_step(GhostState& g, std::uint32_t symbol) {
  if (!g.property || !g.impl) throw BadParams("uninitialized ghost state");
  const Property& p = *g.property;
  if (symbol >= p.alphabet->size()) {
    throw BadParams("symbol index out of range for the alphabet");
  }
  if (p.is_machine()) {
    g.impl->node = g.impl->graph->next[g.impl->node][symbol];
  } else {
    g.impl->prefix.symbols.push_back(symbol);
  }
  ++g.steps;
  const GhostBounds b = ghost_bounds(g);
  StepReport r = make_report(b, g.steps);
  apply_rejections(g, b, r);
  return r;
}

// ---------------------------------------------------------------------------
// Synthesis.

namespace {

/// Width oracle for the unfolding: the numeric gap between the extension
/// bounds of a finite trace, plus the finitary value used as class output.
struct Unfolder {
  const Property* p = nullptr;
  // Machine backends: per-state bounds over all reachable outputs.
  std::vector<Value> state_join;
  std::vector<Value> state_meet;

  double width(const FiniteTrace& s, std::uint32_t mstate) const {
    if (p->is_machine()) {
      return numeric_width(state_join[mstate], state_meet[mstate]);
    }
    const OracleHooks& h = p->oracle();
    return numeric_width(h.sup_ext(s), h.inf_ext(s));
  }
};

}  // namespace

void AbstractMonitor::validate() const {
  if (!alphabet) throw BadParams("monitor has no alphabet");
  const std::size_t n = classes.size();
  if (n == 0) throw BadParams("monitor has no classes");
  if (next.size() != n) throw BadParams("monitor transition table size");
  if (initial >= n) throw BadParams("monitor initial class out of range");
  for (std::size_t i = 0; i < n; ++i) {
    if (classes[i].id != i) throw BadParams("monitor class ids not in order");
    if (!same_alphabet(classes[i].representative.alphabet, alphabet)) {
      throw BadParams("monitor class representative alphabet differs");
    }
    if (next[i].size() != alphabet->size()) {
      throw BadParams("monitor transition row size");
    }
    for (std::uint32_t t : next[i]) {
      if (t >= n) throw BadParams("monitor transition target out of range");
    }
    if (classes[i].frozen) {
      for (std::uint32_t t : next[i]) {
        if (t != i) throw BadParams("frozen monitor class is not absorbing");
      }
    }
  }
}

AbstractMonitor synthesize(const PropertyPtr& p, double delta,
                           std::size_t max_depth) {
  if (!p) throw BadParams("null property");
  if (!(delta > 0.0)) throw BadParams("delta must be positive");
  if (!is_numeric(*p->domain)) {
    throw DomainNotNumeric("monitor synthesis needs a numeric value domain");
  }
  Unfolder u;
  u.p = p.get();
  if (p->is_machine()) {
    detail::require_linear_machine(*p);
    detail::reachable_output_bounds(p->machine(), u.state_join, u.state_meet);
  } else if (p->is_oracle()) {
    const OracleHooks& h = p->oracle();
    if (!h.eval || !h.sup_ext || !h.inf_ext) {
      throw UnsupportedBackend("monitor synthesis for oracle '" + p->name +
                               "' needs the eval, sup_ext, and inf_ext hooks");
    }
  } else {
    throw UnsupportedBackend("monitor synthesis for derived property '" +
                             p->name + "'");
  }

  AbstractMonitor m;
  m.delta = delta;
  m.alphabet = p->alphabet;
  m.initial = 0;

  const FiniteTrace empty{p->alphabet, {}};
  const FinitaryMachine* machine = p->is_machine() ? &p->machine() : nullptr;
  const std::uint32_t initial_state = machine ? machine->initial : 0;
  const std::size_t symbol_count = p->alphabet->size();

  if (u.width(empty, initial_state) < delta) {
    m.classes.push_back(
        MonitorClass{0, empty, true, eval_finitary(*p, empty)});
    m.next.push_back(std::vector<std::uint32_t>(symbol_count, 0));
    return m;
  }
  if (max_depth == 0) throw DepthExceeded(max_depth);

  // A chain of max_depth extensions that all keep width >= delta makes the
  // unfolding below hit the depth bound. Detect that chain first with
  // bounded memory: the frontier of the breadth-first unfolding grows
  // exponentially precisely in the cases that are doomed to throw.
  if (machine) {
    // Machine widths depend only on the reached state, so chains of live
    // states are tracked as level sets.
    std::vector<char> level(machine->state_count(), 0);
    level[initial_state] = 1;
    for (std::size_t depth = 1; ; ++depth) {
      std::vector<char> next_level(machine->state_count(), 0);
      bool any = false;
      for (std::size_t s = 0; s < level.size(); ++s) {
        if (!level[s]) continue;
        for (std::uint32_t sym = 0; sym < symbol_count; ++sym) {
          const std::uint32_t t = machine->next[s][sym];
          if (!next_level[t] && u.width(empty, t) >= delta) {
            next_level[t] = 1;
            any = true;
          }
        }
      }
      if (!any) break;
      if (depth >= max_depth) throw DepthExceeded(max_depth);
      level.swap(next_level);
    }
  } else {
    // Depth-first probe for one all-live chain; it expands only traces the
    // unfolding would expand anyway, with a stack instead of a frontier.
    struct ProbeFrame {
      FiniteTrace trace;
      std::size_t next_symbol = 0;
    };
    const auto& probe_lex = p->alphabet->lex_order();
    std::vector<ProbeFrame> stack{{empty, 0}};
    while (!stack.empty()) {
      if (stack.size() > max_depth) throw DepthExceeded(max_depth);
      ProbeFrame& frame = stack.back();
      if (frame.next_symbol >= symbol_count) {
        stack.pop_back();
        continue;
      }
      const std::uint32_t sym = probe_lex[frame.next_symbol++];
      std::vector<std::uint32_t> symbols = frame.trace.symbols;
      symbols.push_back(sym);
      FiniteTrace child{p->alphabet, std::move(symbols)};
      if (u.width(child, 0) >= delta) {
        stack.push_back({std::move(child), 0});
      }
    }
  }

  struct Pending {
    std::uint32_t id;
    std::uint32_t mstate;
  };
  m.classes.push_back(MonitorClass{0, empty, false, eval_finitary(*p, empty)});
  m.next.emplace_back(symbol_count, 0);
  std::deque<Pending> queue{{0, initial_state}};
  const auto& lex = p->alphabet->lex_order();

  while (!queue.empty()) {
    const Pending cur = queue.front();
    queue.pop_front();
    const FiniteTrace rep = m.classes[cur.id].representative;
    for (std::uint32_t sym : lex) {
      std::vector<std::uint32_t> symbols = rep.symbols;
      symbols.push_back(sym);
      FiniteTrace child{p->alphabet, std::move(symbols)};
      const std::uint32_t child_state =
          machine ? machine->next[cur.mstate][sym] : 0;
      const std::uint32_t id = static_cast<std::uint32_t>(m.classes.size());
      const bool member = u.width(child, child_state) >= delta;
      if (member && child.symbols.size() >= max_depth) {
        throw DepthExceeded(max_depth);
      }
      const Value gamma = eval_finitary(*p, child);
      m.classes.push_back(MonitorClass{id, std::move(child), !member, gamma});
      m.next.emplace_back(symbol_count, id);
      if (member) queue.push_back({id, child_state});
      m.next[cur.id][sym] = id;
    }
  }
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Runs.

std::vector<Value> monitor_run(const AbstractMonitor& m, const FiniteTrace& w) {
  if (!same_alphabet(w.alphabet, m.alphabet)) {
    throw AlphabetMismatch("trace alphabet differs from the monitor's");
  }
  std::vector<Value> gammas;
  gammas.reserve(w.symbols.size() + 1);
  std::uint32_t cls = m.initial;
  gammas.push_back(m.classes[cls].gamma);
  for (std::uint32_t sym : w.symbols) {
    cls = m.next[cls][sym];
    gammas.push_back(m.classes[cls].gamma);
  }
  return gammas;
}

Value monitor_run(const AbstractMonitor& m, const Lasso& w) {
  if (!same_alphabet(w.stem.alphabet, m.alphabet)) {
    throw AlphabetMismatch("lasso alphabet differs from the monitor's");
  }
  if (w.cycle.symbols.empty()) throw EmptyCycle();
  std::uint32_t cls = m.initial;
  for (std::uint32_t sym : w.stem.symbols) cls = m.next[cls][sym];

  // Iterate cycle passes until the class at a pass boundary repeats, then
  // demand a single output over the whole orbit.
  std::vector<std::uint32_t> boundaries{cls};
  std::vector<std::vector<std::uint32_t>> visited;
  for (std::size_t pass = 0; pass <= m.classes.size(); ++pass) {
    std::vector<std::uint32_t> seen;
    for (std::uint32_t sym : w.cycle.symbols) {
      cls = m.next[cls][sym];
      seen.push_back(cls);
    }
    visited.push_back(std::move(seen));
    const auto it =
        std::find(boundaries.begin(), boundaries.end(), cls);
    if (it != boundaries.end()) {
      const std::size_t first = static_cast<std::size_t>(it - boundaries.begin());
      const Value& reference = m.classes[boundaries[first]].gamma;
      for (std::size_t i = first; i < visited.size(); ++i) {
        for (std::uint32_t c : visited[i]) {
          if (!equal(m.classes[c].gamma, reference)) {
            throw Error("monitor limit does not exist: the run cycles "
                        "through classes with different outputs");
          }
        }
      }
      return reference;
    }
    boundaries.push_back(cls);
  }
  throw Error("monitor limit did not close an orbit");
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string monitor_to_dot(const AbstractMonitor& m) {
  std::ostringstream os;
  os << "digraph monitor {\n";
  os << "  rankdir=LR;\n";
  for (const MonitorClass& c : m.classes) {
    const std::string rep =
        c.representative.symbols.empty() ? "(empty)"
                                         : format_trace(c.representative);
    os << "  c" << c.id << " [shape="
       << (c.frozen ? "doublecircle" : "circle") << ", label=\""
       << dot_escape(rep) << " : " << dot_escape(format_value(c.gamma))
       << "\"];\n";
  }
  for (std::size_t i = 0; i < m.next.size(); ++i) {
    for (std::size_t s = 0; s < m.next[i].size(); ++s) {
      os << "  c" << i << " -> c" << m.next[i][s] << " [label=\""
         << dot_escape(m.alphabet->label(static_cast<std::uint32_t>(s)))
         << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string monitor_to_json(const AbstractMonitor& m) {
  ordered_json j;
  j["delta"] = m.delta;
  j["alphabet"] = ordered_json::array();
  for (std::uint32_t i = 0; i < m.alphabet->size(); ++i) {
    j["alphabet"].push_back(m.alphabet->label(i));
  }
  j["initial"] = m.initial;
  j["classes"] = ordered_json::array();
  for (const MonitorClass& c : m.classes) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["representative"] = format_trace(c.representative);
    jc["frozen"] = c.frozen;
    jc["gamma"] = format_value(c.gamma);
    j["classes"].push_back(std::move(jc));
  }
  j["transitions"] = ordered_json::array();
  for (std::size_t i = 0; i < m.next.size(); ++i) {
    for (std::size_t s = 0; s < m.next[i].size(); ++s) {
      ordered_json jt;
      jt["from"] = i;
      jt["symbol"] = m.alphabet->label(static_cast<std::uint32_t>(s));
      jt["to"] = m.next[i][s];
      j["transitions"].push_back(std::move(jt));
    }
  }
  return j.dump(2) + "\n";
}

void require_keys(const ordered_json& j, const std::set<std::string>& allowed,
                  const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (allowed.find(key) == allowed.end()) {
      throw ParseError(path + ": unknown field '" + key + "'");
    }
  }
  for (const auto& key : allowed) {
    if (!j.contains(key)) {
      throw ParseError(path + ": missing field '" + key + "'");
    }
  }
}

FiniteTrace parse_representative(const std::string& text,
                                 const AlphabetPtr& alphabet,
                                 const std::string& path) {
  ParsedTrace parsed = parse_trace(text, alphabet);
  if (!std::holds_alternative<FiniteTrace>(parsed)) {
    throw ParseError(path + ": representative must be a finite trace");
  }
  return std::get<FiniteTrace>(std::move(parsed));
}

}  // namespace

std::string export_monitor(const AbstractMonitor& m, MonitorFormat format) {
  m.validate();
  return format == MonitorFormat::Json ? monitor_to_json(m)
                                       : monitor_to_dot(m);
}

AbstractMonitor import_monitor_json(const std::string& text,
                                    const DomainPtr& domain) {
  if (!domain) throw BadParams("null domain");
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("monitor json: ") + e.what());
  }
  require_keys(j, {"delta", "alphabet", "initial", "classes", "transitions"},
               "monitor");

  AbstractMonitor m;
  if (!j["delta"].is_number()) throw ParseError("monitor.delta: expected a number");
  m.delta = j["delta"].get<double>();
  if (!(m.delta > 0.0)) throw ParseError("monitor.delta: must be positive");

  if (!j["alphabet"].is_array() || j["alphabet"].empty()) {
    throw ParseError("monitor.alphabet: expected a nonempty array");
  }
  std::vector<std::string> labels;
  for (const auto& l : j["alphabet"]) {
    if (!l.is_string()) throw ParseError("monitor.alphabet: expected strings");
    labels.push_back(l.get<std::string>());
  }
  m.alphabet = Alphabet::make(labels);

  if (!j["initial"].is_number_unsigned()) {
    throw ParseError("monitor.initial: expected an unsigned integer");
  }
  m.initial = j["initial"].get<std::uint32_t>();

  if (!j["classes"].is_array() || j["classes"].empty()) {
    throw ParseError("monitor.classes: expected a nonempty array");
  }
  std::size_t index = 0;
  for (const auto& jc : j["classes"]) {
    const std::string path = "monitor.classes[" + std::to_string(index) + "]";
    require_keys(jc, {"id", "representative", "frozen", "gamma"}, path);
    if (!jc["id"].is_number_unsigned() || jc["id"].get<std::size_t>() != index) {
      throw ParseError(path + ".id: classes must be listed in id order");
    }
    if (!jc["representative"].is_string()) {
      throw ParseError(path + ".representative: expected a string");
    }
    if (!jc["frozen"].is_boolean()) {
      throw ParseError(path + ".frozen: expected a boolean");
    }
    if (!jc["gamma"].is_string()) {
      throw ParseError(path + ".gamma: expected a value string");
    }
    MonitorClass c;
    c.id = static_cast<std::uint32_t>(index);
    c.representative = parse_representative(
        jc["representative"].get<std::string>(), m.alphabet,
        path + ".representative");
    c.frozen = jc["frozen"].get<bool>();
    try {
      c.gamma = parse_value(domain, jc["gamma"].get<std::string>());
    } catch (const Error& e) {
      throw ParseError(path + ".gamma: " + e.what());
    }
    m.classes.push_back(std::move(c));
    ++index;
  }

  const std::size_t n = m.classes.size();
  const std::size_t symbol_count = m.alphabet->size();
  constexpr std::uint32_t kUnset = 0xffffffffu;
  m.next.assign(n, std::vector<std::uint32_t>(symbol_count, kUnset));
  if (!j["transitions"].is_array()) {
    throw ParseError("monitor.transitions: expected an array");
  }
  index = 0;
  for (const auto& jt : j["transitions"]) {
    const std::string path =
        "monitor.transitions[" + std::to_string(index) + "]";
    require_keys(jt, {"from", "symbol", "to"}, path);
    if (!jt["from"].is_number_unsigned() || !jt["to"].is_number_unsigned()) {
      throw ParseError(path + ": from/to must be unsigned integers");
    }
    if (!jt["symbol"].is_string()) {
      throw ParseError(path + ".symbol: expected a string");
    }
    const std::size_t from = jt["from"].get<std::size_t>();
    const std::size_t to = jt["to"].get<std::size_t>();
    if (from >= n || to >= n) {
      throw ParseError(path + ": class index out of range");
    }
    const auto sym = m.alphabet->find(jt["symbol"].get<std::string>());
    if (!sym) {
      throw ParseError(path + ".symbol: not in the alphabet");
    }
    if (m.next[from][*sym] != kUnset) {
      throw ParseError(path + ": duplicate transition");
    }
    m.next[from][*sym] = to;
    ++index;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < symbol_count; ++s) {
      if (m.next[i][s] == kUnset) {
        throw ParseError("monitor.transitions: missing transition from class " +
                         std::to_string(i) + " on '" +
                         m.alphabet->label(static_cast<std::uint32_t>(s)) + "'");
      }
    }
  }
  try {
    m.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("monitor: ") + e.what());
  }
  return m;
}

bool monitors_equal(const AbstractMonitor& a, const AbstractMonitor& b) {
  if (a.delta != b.delta || a.initial != b.initial ||
      a.classes.size() != b.classes.size() || a.next != b.next) {
    return false;
  }
  if (a.alphabet->size() != b.alphabet->size()) return false;
  for (std::uint32_t i = 0; i < a.alphabet->size(); ++i) {
    if (a.alphabet->label(i) != b.alphabet->label(i)) return false;
  }
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    const MonitorClass& ca = a.classes[i];
    const MonitorClass& cb = b.classes[i];
    if (ca.id != cb.id || ca.frozen != cb.frozen ||
        ca.representative.symbols != cb.representative.symbols ||
        !equal(ca.gamma, cb.gamma)) {
      return false;
    }
  }
  return true;
}

}  // namespace qsl
