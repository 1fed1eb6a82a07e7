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
#include "machine_analysis.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <utility>

#include "qsl/errors.hpp"

namespace qsl::detail {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

Value fold2(const Value& a, const Value& b, bool take_meet) {
  return take_meet ? meet(a, b) : join(a, b);
}

}  // namespace

bool is_linear_domain(const ValueDomain& d) {
  switch (d.kind) {
    case DomainKind::Product:
      return false;
    case DomainKind::Dual:
      return is_linear_domain(*d.inner);
    default:
      return true;
  }
}

void require_linear_machine(const Property& p) {
  if (!p.is_machine()) {
    throw UnsupportedBackend("'" + p.name + "' is not machine-backed");
  }
  if (!is_linear_domain(*p.domain)) {
    throw UnsupportedBackend("'" + p.name +
                             "' has a partially ordered value domain");
  }
}

bool keeps_aggregate(ValueFunction vf) {
  return vf == ValueFunction::Inf || vf == ValueFunction::Sup;
}

ConfigGraph build_config_graph(const Property& p,
                               const std::vector<ConfigRoot>& extra_roots) {
  require_linear_machine(p);
  const FinitaryMachine& m = p.machine();

  ConfigGraph g;
  g.vf = p.vf;
  g.with_aggregate = keeps_aggregate(p.vf);
  g.alphabet = m.alphabet;
  g.domain = m.domain;
  const std::size_t symbols = m.alphabet->size();
  const bool take_meet = p.vf == ValueFunction::Inf;

  std::map<std::pair<std::uint32_t, std::string>, std::uint32_t> ids;
  auto intern = [&](std::uint32_t q, const Value& agg) {
    const auto key =
        std::make_pair(q, g.with_aggregate ? format_value(agg) : std::string());
    auto [it, inserted] =
        ids.emplace(key, static_cast<std::uint32_t>(g.state.size()));
    if (inserted) {
      g.state.push_back(q);
      g.output.push_back(m.outputs[q]);
      g.value.push_back(agg);
      g.name.push_back(g.with_aggregate
                           ? m.state_names[q] + "|" + format_value(agg)
                           : m.state_names[q]);
      g.next.emplace_back(symbols, 0);
    }
    return it->second;
  };

  g.initial = intern(m.initial, m.outputs[m.initial]);
  for (const ConfigRoot& r : extra_roots) {
    if (r.state >= m.state_count()) {
      throw BadParams("configuration state out of range");
    }
    if (g.with_aggregate != r.aggregate.has_value()) {
      throw BadParams(g.with_aggregate
                          ? "configuration needs a running aggregate"
                          : "configuration must not carry an aggregate");
    }
    if (r.aggregate && !same_domain(r.aggregate->domain(), m.domain)) {
      throw DomainMismatch();
    }
    intern(r.state, r.aggregate ? *r.aggregate : m.outputs[r.state]);
  }

  for (std::size_t i = 0; i < g.state.size(); ++i) {
    for (std::size_t sym = 0; sym < symbols; ++sym) {
      const std::uint32_t t = m.next[g.state[i]][sym];
      const Value v = g.with_aggregate
                          ? fold2(g.value[i], m.outputs[t], take_meet)
                          : m.outputs[t];
      g.next[i][sym] = intern(t, v);
    }
  }
  return g;
}

std::optional<std::uint32_t> find_config(const ConfigGraph& g,
                                         std::uint32_t state,
                                         const std::optional<Value>& aggregate) {
  if (g.with_aggregate != aggregate.has_value()) return std::nullopt;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    if (g.state[i] != state) continue;
    if (!g.with_aggregate || equal(g.value[i], *aggregate)) return i;
  }
  return std::nullopt;
}

std::uint32_t run_config(const ConfigGraph& g, std::uint32_t from,
                         const std::vector<std::uint32_t>& symbols) {
  std::uint32_t cur = from;
  for (std::uint32_t sym : symbols) cur = g.next[cur][sym];
  return cur;
}

namespace {

/// Tarjan over the subgraph induced by `keep`. Nodes outside it get
/// component id kNone. Components are numbered in pop order, so every edge
/// that leaves its component leads to a smaller id.
struct SccResult {
  std::vector<std::uint32_t> comp;
  std::size_t count = 0;
};

SccResult scc_of_subgraph(const ConfigGraph& g, const std::vector<char>& keep) {
  const std::size_t n = g.node_count();
  SccResult r;
  r.comp.assign(n, kNone);

  std::vector<std::uint32_t> index(n, kNone);
  std::vector<std::uint32_t> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 0;

  struct Frame {
    std::uint32_t node;
    std::uint32_t edge;
  };
  std::vector<Frame> frames;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (!keep[root] || index[root] != kNone) continue;
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    frames.push_back({root, 0});

    while (!frames.empty()) {
      Frame& f = frames.back();
      const std::uint32_t v = f.node;
      if (f.edge < g.next[v].size()) {
        const std::uint32_t w = g.next[v][f.edge++];
        if (!keep[w]) continue;
        if (index[w] == kNone) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      frames.pop_back();
      if (!frames.empty()) {
        low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      }
      if (low[v] == index[v]) {
        while (true) {
          const std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          r.comp[w] = static_cast<std::uint32_t>(r.count);
          if (w == v) break;
        }
        ++r.count;
      }
    }
  }
  return r;
}

bool has_self_loop(const ConfigGraph& g, std::uint32_t node) {
  for (std::uint32_t t : g.next[node]) {
    if (t == node) return true;
  }
  return false;
}

/// Limit values of runs whose tail stays inside the cyclic component made
/// of `members`, for liminf (want_min) or limsup machines: v qualifies
/// exactly when the members on the v-side of the threshold contain a cycle
/// whose extreme output is v itself.
std::vector<Value> tail_cycle_values(const ConfigGraph& g,
                                     const std::vector<std::uint32_t>& members,
                                     bool want_min) {
  std::vector<Value> outputs;
  outputs.reserve(members.size());
  for (std::uint32_t node : members) outputs.push_back(g.output[node]);
  const std::vector<Value> candidates = sort_unique_values(std::move(outputs));

  std::vector<Value> result;
  std::vector<char> keep(g.node_count(), 0);
  for (const Value& v : candidates) {
    std::fill(keep.begin(), keep.end(), 0);
    for (std::uint32_t node : members) {
      keep[node] = (want_min ? geq(g.output[node], v) : leq(g.output[node], v))
                       ? 1
                       : 0;
    }
    const SccResult sub = scc_of_subgraph(g, keep);

    // Per sub-component: whether it holds a cycle and its extreme output.
    std::vector<char> sub_cyclic(sub.count, 0);
    std::vector<std::optional<Value>> extreme(sub.count);
    std::vector<std::uint32_t> sub_size(sub.count, 0);
    for (std::uint32_t node : members) {
      if (!keep[node]) continue;
      const std::uint32_t c = sub.comp[node];
      ++sub_size[c];
      if (sub_size[c] > 1 || has_self_loop(g, node)) sub_cyclic[c] = 1;
      if (!extreme[c]) {
        extreme[c] = g.output[node];
      } else {
        extreme[c] = fold2(*extreme[c], g.output[node], want_min);
      }
    }
    for (std::size_t c = 0; c < sub.count; ++c) {
      if (sub_cyclic[c] && extreme[c] && equal(*extreme[c], v)) {
        result.push_back(v);
        break;
      }
    }
  }
  return result;
}

}  // namespace

GraphAnalysis analyze_graph(const ConfigGraph& g) {
  const std::size_t n = g.node_count();
  GraphAnalysis a;

  const std::vector<char> all(n, 1);
  SccResult scc = scc_of_subgraph(g, all);
  a.comp = std::move(scc.comp);
  a.comp_count = scc.count;

  a.members.assign(a.comp_count, {});
  for (std::uint32_t node = 0; node < n; ++node) {
    a.members[a.comp[node]].push_back(node);
  }

  a.cyclic.assign(a.comp_count, false);
  for (std::size_t c = 0; c < a.comp_count; ++c) {
    a.cyclic[c] =
        a.members[c].size() > 1 || has_self_loop(g, a.members[c].front());
  }

  a.limit_values.assign(a.comp_count, {});
  for (std::size_t c = 0; c < a.comp_count; ++c) {
    if (!a.cyclic[c]) continue;
    if (g.with_aggregate) {
      // The running aggregate is monotone along edges, so it is constant
      // on a cycle: every run ending in this component stabilizes there.
      a.limit_values[c] = {g.value[a.members[c].front()]};
    } else {
      a.limit_values[c] = tail_cycle_values(g, a.members[c],
                                            g.vf == ValueFunction::LimInf);
    }
  }

  // Attainable values, in reverse topological order of components: the
  // union of this component's limit values with everything attainable from
  // its successors.
  a.attainable.assign(a.comp_count, {});
  for (std::size_t c = 0; c < a.comp_count; ++c) {
    std::vector<Value> vals = a.limit_values[c];
    for (std::uint32_t node : a.members[c]) {
      for (std::uint32_t t : g.next[node]) {
        const std::uint32_t tc = a.comp[t];
        if (tc == c) continue;
        vals.insert(vals.end(), a.attainable[tc].begin(),
                    a.attainable[tc].end());
      }
    }
    a.attainable[c] = sort_unique_values(std::move(vals));
  }
  return a;
}

std::optional<std::vector<std::uint32_t>> shortest_path_symbols(
    const ConfigGraph& g, std::uint32_t from, std::uint32_t to) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> prev_node(n, kNone);
  std::vector<std::uint32_t> prev_sym(n, 0);
  std::vector<char> seen(n, 0);
  const std::vector<std::uint32_t>& order = g.alphabet->lex_order();

  std::deque<std::uint32_t> queue;
  seen[from] = 1;
  queue.push_back(from);
  while (!queue.empty()) {
    const std::uint32_t u = queue.front();
    queue.pop_front();
    if (u == to) break;
    for (std::uint32_t sym : order) {
      const std::uint32_t t = g.next[u][sym];
      if (seen[t]) continue;
      seen[t] = 1;
      prev_node[t] = u;
      prev_sym[t] = sym;
      queue.push_back(t);
    }
  }
  if (!seen[to]) return std::nullopt;

  std::vector<std::uint32_t> path;
  for (std::uint32_t cur = to; cur != from; cur = prev_node[cur]) {
    path.push_back(prev_sym[cur]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

std::vector<char> reachable_from(const ConfigGraph& g, std::uint32_t from) {
  std::vector<char> reach(g.node_count(), 0);
  std::vector<std::uint32_t> queue = {from};
  reach[from] = 1;
  while (!queue.empty()) {
    const std::uint32_t u = queue.back();
    queue.pop_back();
    for (std::uint32_t t : g.next[u]) {
      if (!reach[t]) {
        reach[t] = 1;
        queue.push_back(t);
      }
    }
  }
  return reach;
}

/// A short cycle from `anchor` back to itself that stays inside `in_part`:
/// take the first step that minimizes the return distance, then follow
/// shortest paths home. Symbol ties resolve in label-lexicographic order.
std::vector<std::uint32_t> cycle_through(const ConfigGraph& g,
                                         const std::vector<char>& in_part,
                                         std::uint32_t anchor) {
  const std::size_t n = g.node_count();
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

  // dist[u]: steps from u forward to the anchor, inside the part. Computed
  // by a backward breadth-first search over predecessor lists.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> preds(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    if (!in_part[u]) continue;
    for (std::uint32_t sym = 0; sym < g.next[u].size(); ++sym) {
      const std::uint32_t t = g.next[u][sym];
      if (in_part[t]) preds[t].emplace_back(u, sym);
    }
  }
  std::vector<std::uint32_t> dist(n, kInf);
  std::deque<std::uint32_t> queue;
  dist[anchor] = 0;
  queue.push_back(anchor);
  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    for (const auto& [u, sym] : preds[v]) {
      if (dist[u] == kInf) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }

  const std::vector<std::uint32_t>& order = g.alphabet->lex_order();
  std::vector<std::uint32_t> cycle;

  // First step: leave the anchor toward the quickest way back.
  std::uint32_t best_sym = kNone;
  std::uint32_t best_dist = kInf;
  for (std::uint32_t sym : order) {
    const std::uint32_t t = g.next[anchor][sym];
    if (!in_part[t] || dist[t] == kInf) continue;
    if (dist[t] < best_dist) {
      best_dist = dist[t];
      best_sym = sym;
    }
  }
  cycle.push_back(best_sym);
  std::uint32_t cur = g.next[anchor][best_sym];
  while (cur != anchor) {
    for (std::uint32_t sym : order) {
      const std::uint32_t t = g.next[cur][sym];
      if (in_part[t] && dist[t] == dist[cur] - 1) {
        cycle.push_back(sym);
        cur = t;
        break;
      }
    }
  }
  return cycle;
}

/// Anchor node and in-part mask realizing limit value v inside cyclic
/// component c, following the same threshold construction as
/// tail_cycle_values. Assumes v is in the component's limit values.
std::pair<std::uint32_t, std::vector<char>> witness_part(
    const ConfigGraph& g, const GraphAnalysis& a, std::uint32_t c,
    const Value& v) {
  const std::vector<std::uint32_t>& members = a.members[c];
  std::vector<char> in_part(g.node_count(), 0);

  if (g.with_aggregate) {
    for (std::uint32_t node : members) in_part[node] = 1;
    return {members.front(), std::move(in_part)};
  }

  const bool want_min = g.vf == ValueFunction::LimInf;
  std::vector<char> keep(g.node_count(), 0);
  for (std::uint32_t node : members) {
    keep[node] = (want_min ? geq(g.output[node], v) : leq(g.output[node], v))
                     ? 1
                     : 0;
  }
  const SccResult sub = scc_of_subgraph(g, keep);

  std::vector<char> sub_cyclic(sub.count, 0);
  std::vector<std::optional<Value>> extreme(sub.count);
  std::vector<std::uint32_t> sub_size(sub.count, 0);
  std::vector<std::uint32_t> sub_min_node(sub.count, kNone);
  for (std::uint32_t node : members) {
    if (!keep[node]) continue;
    const std::uint32_t sc = sub.comp[node];
    ++sub_size[sc];
    if (sub_size[sc] > 1 || has_self_loop(g, node)) sub_cyclic[sc] = 1;
    extreme[sc] = extreme[sc] ? fold2(*extreme[sc], g.output[node], want_min)
                              : g.output[node];
    sub_min_node[sc] = std::min(sub_min_node[sc], node);
  }

  // The qualifying sub-component with the least member node.
  std::uint32_t chosen = kNone;
  for (std::size_t sc = 0; sc < sub.count; ++sc) {
    if (!sub_cyclic[sc] || !extreme[sc] || !equal(*extreme[sc], v)) continue;
    if (chosen == kNone || sub_min_node[sc] < sub_min_node[chosen]) {
      chosen = static_cast<std::uint32_t>(sc);
    }
  }

  std::uint32_t anchor = kNone;
  for (std::uint32_t node : members) {
    if (!keep[node] || sub.comp[node] != chosen) continue;
    in_part[node] = 1;
    if (anchor == kNone && equal(g.output[node], v)) anchor = node;
  }
  return {anchor, std::move(in_part)};
}

Lasso lasso_from_symbols(const AlphabetPtr& alphabet,
                         std::vector<std::uint32_t> stem,
                         std::vector<std::uint32_t> cycle) {
  return Lasso{FiniteTrace{alphabet, std::move(stem)},
               FiniteTrace{alphabet, std::move(cycle)}};
}

}  // namespace

std::vector<RunProfile> achievable_profiles(const ConfigGraph& g,
                                            const GraphAnalysis& a) {
  const std::vector<char> reach = reachable_from(g, g.initial);

  // Components ordered by least member node, which tracks discovery order
  // from the initial configuration.
  std::vector<std::uint32_t> order;
  for (std::uint32_t c = 0; c < a.comp_count; ++c) {
    if (a.cyclic[c] && reach[a.members[c].front()]) order.push_back(c);
  }
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t x, std::uint32_t y) {
              return a.members[x].front() < a.members[y].front();
            });

  std::vector<RunProfile> profiles;
  for (std::uint32_t c : order) {
    for (const Value& v : a.limit_values[c]) {
      auto [anchor, in_part] = witness_part(g, a, c, v);
      RunProfile prof{c, v, a.attainable[c].back(), a.attainable[c].front(),
                      lasso_from_symbols(
                          g.alphabet, *shortest_path_symbols(g, g.initial, anchor),
                          cycle_through(g, in_part, anchor))};
      profiles.push_back(std::move(prof));
    }
  }
  return profiles;
}

std::optional<Lasso> realize_value(const ConfigGraph& g,
                                   const GraphAnalysis& a, std::uint32_t from,
                                   const Value& v) {
  const std::vector<char> reach = reachable_from(g, from);

  std::vector<std::uint32_t> order;
  for (std::uint32_t c = 0; c < a.comp_count; ++c) {
    if (a.cyclic[c] && reach[a.members[c].front()]) order.push_back(c);
  }
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t x, std::uint32_t y) {
              return a.members[x].front() < a.members[y].front();
            });

  for (std::uint32_t c : order) {
    bool holds = false;
    for (const Value& lv : a.limit_values[c]) {
      if (equal(lv, v)) {
        holds = true;
        break;
      }
    }
    if (!holds) continue;
    auto [anchor, in_part] = witness_part(g, a, c, v);
    return lasso_from_symbols(g.alphabet,
                              *shortest_path_symbols(g, from, anchor),
                              cycle_through(g, in_part, anchor));
  }
  return std::nullopt;
}

namespace {

/// Appends every symbol sequence of the given length in label-lexicographic
/// order.
void append_sequences(const AlphabetPtr& alphabet, std::size_t length,
                      std::vector<std::vector<std::uint32_t>>& out) {
  const std::vector<std::uint32_t>& order = alphabet->lex_order();
  std::vector<std::size_t> digits(length, 0);
  while (true) {
    std::vector<std::uint32_t> seq(length);
    for (std::size_t i = 0; i < length; ++i) seq[i] = order[digits[i]];
    out.push_back(std::move(seq));
    std::size_t i = length;
    while (i > 0 && digits[i - 1] + 1 == order.size()) digits[--i] = 0;
    if (i == 0) break;
    ++digits[i - 1];
  }
}

/// Number of sequences with lengths in [min_len, max_len], saturating at
/// cap + 1.
std::size_t count_sequences(std::size_t symbols, std::size_t min_len,
                            std::size_t max_len, std::size_t cap) {
  std::size_t total = 0;
  std::size_t pow = 1;  // symbols^len, saturated
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) {
      if (total > cap || pow > cap - total) return cap + 1;
      total += pow;
    }
    pow = (pow > cap / symbols) ? cap + 1 : pow * symbols;
  }
  return total;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> shortlex_sequences(
    const AlphabetPtr& alphabet, std::size_t min_len, std::size_t max_len) {
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t len = min_len; len <= max_len; ++len) {
    append_sequences(alphabet, len, out);
  }
  return out;
}

LassoPool sample_lassos(const AlphabetPtr& alphabet, std::uint64_t budget,
                        std::size_t exhaustive_cap, std::size_t random_count,
                        std::uint64_t seed) {
  if (budget == 0) throw BadParams("sampling budget must be positive");
  const std::size_t b = static_cast<std::size_t>(budget);
  const std::size_t stems = count_sequences(alphabet->size(), 0, b,
                                            exhaustive_cap);
  const std::size_t cycles = count_sequences(alphabet->size(), 1, b,
                                             exhaustive_cap);

  LassoPool pool;
  const bool exhaustive =
      stems <= exhaustive_cap && cycles <= exhaustive_cap &&
      stems <= exhaustive_cap / cycles;
  const std::size_t core = exhaustive ? b : std::min<std::size_t>(2, b);

  const auto core_stems = shortlex_sequences(alphabet, 0, core);
  const auto core_cycles = shortlex_sequences(alphabet, 1, std::max<std::size_t>(
                                                            core, 1));
  for (const auto& stem : core_stems) {
    for (const auto& cycle : core_cycles) {
      pool.lassos.push_back(lasso_from_symbols(alphabet, stem, cycle));
    }
  }
  pool.exhaustive = exhaustive;
  if (exhaustive) return pool;

  std::mt19937_64 rng(seed);
  const std::size_t symbols = alphabet->size();
  for (std::size_t i = 0; i < random_count; ++i) {
    const std::size_t stem_len = static_cast<std::size_t>(rng() % (b + 1));
    const std::size_t cycle_len = 1 + static_cast<std::size_t>(rng() % b);
    std::vector<std::uint32_t> stem(stem_len);
    std::vector<std::uint32_t> cycle(cycle_len);
    for (auto& s : stem) s = static_cast<std::uint32_t>(rng() % symbols);
    for (auto& s : cycle) s = static_cast<std::uint32_t>(rng() % symbols);
    pool.lassos.push_back(
        lasso_from_symbols(alphabet, std::move(stem), std::move(cycle)));
  }
  return pool;
}

std::optional<Value> stabilized_closure_value(const Property& p, const Lasso& l,
                                              bool safety) {
  if (!p.is_oracle()) {
    throw UnsupportedBackend("closure bounds need an oracle backend");
  }
  const OracleHooks& o = p.oracle();
  const auto& hook = safety ? o.sup_ext : o.inf_ext;
  if (!hook) {
    throw UnsupportedBackend(std::string("'") + p.name + "' lacks the " +
                             (safety ? "sup_ext" : "inf_ext") + " hook");
  }
  if (!same_alphabet(p.alphabet, l.stem.alphabet)) {
    throw AlphabetMismatch("lasso alphabet differs from the property's");
  }

  constexpr std::size_t kMaxPasses = 12;
  constexpr std::size_t kMaxSymbols = 4096;

  std::vector<std::uint32_t> prefix;
  prefix.reserve(l.stem.symbols.size() + kMaxPasses * l.cycle.symbols.size());
  const bool take_meet = safety;

  Value bound = hook(FiniteTrace{p.alphabet, {}});
  for (std::uint32_t sym : l.stem.symbols) {
    prefix.push_back(sym);
    bound = fold2(bound, hook(FiniteTrace{p.alphabet, prefix}), take_meet);
  }

  std::vector<Value> boundaries = {bound};
  for (std::size_t pass = 0; pass < kMaxPasses; ++pass) {
    if (prefix.size() + l.cycle.symbols.size() > kMaxSymbols && pass >= 3) {
      break;
    }
    for (std::uint32_t sym : l.cycle.symbols) {
      prefix.push_back(sym);
      bound = fold2(bound, hook(FiniteTrace{p.alphabet, prefix}), take_meet);
    }
    boundaries.push_back(bound);
    const std::size_t k = boundaries.size();
    if (k >= 3 && equal(boundaries[k - 1], boundaries[k - 2]) &&
        equal(boundaries[k - 2], boundaries[k - 3])) {
      return bound;
    }
  }
  return std::nullopt;
}

void reachable_output_bounds(const FinitaryMachine& m,
                             std::vector<Value>& out_join,
                             std::vector<Value>& out_meet) {
  out_join = m.outputs;
  out_meet = m.outputs;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t q = 0; q < m.state_count(); ++q) {
      for (std::uint32_t t : m.next[q]) {
        const Value nj = join(out_join[q], out_join[t]);
        if (!equal(nj, out_join[q])) {
          out_join[q] = nj;
          changed = true;
        }
        const Value nm = meet(out_meet[q], out_meet[t]);
        if (!equal(nm, out_meet[q])) {
          out_meet[q] = nm;
          changed = true;
        }
      }
    }
  }
}

}  // namespace qsl::detail
