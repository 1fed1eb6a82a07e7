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
#include "qsl/trace.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace qsl {

AlphabetPtr Alphabet::make(std::vector<std::string> symbols) {
  if (symbols.empty()) throw BadParams("alphabet must be nonempty");
  auto a = std::make_shared<Alphabet>();
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const std::string& s = symbols[i];
    if (s.empty()) throw BadParams("alphabet labels must be nonempty");
    for (char c : s)
      if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == ';')
        throw BadParams("alphabet label '" + s + "' contains reserved characters");
    if (!a->index_.emplace(s, static_cast<std::uint32_t>(i)).second)
      throw BadParams("duplicate alphabet label '" + s + "'");
  }
  a->symbols_ = std::move(symbols);
  a->lex_order_.resize(a->symbols_.size());
  std::iota(a->lex_order_.begin(), a->lex_order_.end(), 0u);
  std::sort(a->lex_order_.begin(), a->lex_order_.end(),
            [&](std::uint32_t x, std::uint32_t y) {
              return a->symbols_[x] < a->symbols_[y];
            });
  return a;
}

std::optional<std::uint32_t> Alphabet::find(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->symbols() == b->symbols();
}

FiniteTrace make_trace(const AlphabetPtr& alphabet,
                       const std::vector<std::string>& labels) {
  FiniteTrace w;
  w.alphabet = alphabet;
  w.symbols.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto idx = alphabet->find(labels[i]);
    if (!idx) throw UnknownSymbol(labels[i], i + 1);
    w.symbols.push_back(*idx);
  }
  return w;
}

Lasso make_lasso(const AlphabetPtr& alphabet,
                 const std::vector<std::string>& stem,
                 const std::vector<std::string>& cycle) {
  if (cycle.empty()) throw EmptyCycle();
  Lasso l;
  l.stem = make_trace(alphabet, stem);
  l.cycle = make_trace(alphabet, cycle);
  return l;
}

ParsedTrace parse_trace(const std::string& text, const AlphabetPtr& alphabet) {
  std::vector<std::string> stem, cycle;
  std::vector<std::string>* current = &stem;
  bool saw_separator = false;
  std::string token;
  auto flush = [&]() {
    if (!token.empty()) {
      current->push_back(token);
      token.clear();
    }
  };
  for (std::size_t i = 0; i <= text.size(); ++i) {
    char c = i < text.size() ? text[i] : '\n';
    if (c == '#') {
      flush();
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == ';') {
      flush();
      if (saw_separator) throw ParseError("unexpected second ';' in trace");
      saw_separator = true;
      current = &cycle;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)))
      flush();
    else
      token.push_back(c);
  }
  if (!saw_separator) {
    return make_trace(alphabet, stem);
  }
  if (cycle.empty()) throw EmptyCycle();
  Lasso l;
  l.stem = make_trace(alphabet, stem);
  try {
    l.cycle = make_trace(alphabet, cycle);
  } catch (const UnknownSymbol& e) {
    // Re-base the 1-based position onto the whole trace.
    throw UnknownSymbol(e.label, stem.size() + e.position);
  }
  return l;
}

Lasso parse_lasso(const std::string& text, const AlphabetPtr& alphabet) {
  ParsedTrace t = parse_trace(text, alphabet);
  if (auto* l = std::get_if<Lasso>(&t)) return *l;
  throw ParseError("expected a lasso 'stem ; cycle', got a finite trace");
}

namespace {

std::vector<std::uint32_t> primitive_root(const std::vector<std::uint32_t>& v) {
  const std::size_t n = v.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i)
      periodic = v[i] == v[i - d];
    if (periodic) return std::vector<std::uint32_t>(v.begin(), v.begin() + d);
  }
  return v;
}

}  // namespace

Lasso normalize(const Lasso& l) {
  if (l.cycle.empty()) throw EmptyCycle();
  Lasso out = l;
  out.cycle.symbols = primitive_root(out.cycle.symbols);
  while (!out.stem.symbols.empty() &&
         out.stem.symbols.back() == out.cycle.symbols.back()) {
    out.stem.symbols.pop_back();
    std::rotate(out.cycle.symbols.begin(), out.cycle.symbols.end() - 1,
                out.cycle.symbols.end());
  }
  return out;
}

std::size_t count_symbol(const FiniteTrace& w, std::string_view label) {
  auto idx = w.alphabet->find(label);
  if (!idx) throw UnknownSymbol(std::string(label));
  return static_cast<std::size_t>(
      std::count(w.symbols.begin(), w.symbols.end(), *idx));
}

FiniteTrace unroll(const Lasso& l, std::size_t n) {
  if (l.cycle.empty()) throw EmptyCycle();
  FiniteTrace w;
  w.alphabet = l.stem.alphabet ? l.stem.alphabet : l.cycle.alphabet;
  w.symbols.reserve(n);
  for (std::size_t i = 0; i < n && i < l.stem.size(); ++i)
    w.symbols.push_back(l.stem.symbols[i]);
  std::size_t i = w.symbols.size();
  while (i < n) {
    w.symbols.push_back(l.cycle.symbols[(i - l.stem.size()) % l.cycle.size()]);
    ++i;
  }
  return w;
}

FiniteTrace prefix(const FiniteTrace& w, std::size_t n) {
  FiniteTrace out;
  out.alphabet = w.alphabet;
  out.symbols.assign(w.symbols.begin(),
                     w.symbols.begin() + std::min(n, w.symbols.size()));
  return out;
}

FiniteTrace concat(const FiniteTrace& a, const FiniteTrace& b) {
  FiniteTrace out = a;
  out.symbols.insert(out.symbols.end(), b.symbols.begin(), b.symbols.end());
  if (!out.alphabet) out.alphabet = b.alphabet;
  return out;
}

std::string format_trace(const FiniteTrace& w) {
  std::string out;
  for (std::size_t i = 0; i < w.symbols.size(); ++i) {
    if (i) out += ' ';
    out += w.alphabet->label(w.symbols[i]);
  }
  return out;
}

std::string format_lasso(const Lasso& l) {
  std::string stem = format_trace(l.stem);
  std::string cycle = format_trace(l.cycle);
  if (stem.empty()) return "; " + cycle;
  return stem + " ; " + cycle;
}

bool same_infinite_trace(const Lasso& a, const Lasso& b) {
  Lasso na = normalize(a), nb = normalize(b);
  return na.stem.symbols == nb.stem.symbols &&
         na.cycle.symbols == nb.cycle.symbols &&
         same_alphabet(na.stem.alphabet ? na.stem.alphabet : na.cycle.alphabet,
                       nb.stem.alphabet ? nb.stem.alphabet : nb.cycle.alphabet);
}

}  // namespace qsl
