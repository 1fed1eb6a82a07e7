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
#ifndef QSL_TRACE_HPP
#define QSL_TRACE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsl/errors.hpp"

namespace qsl {

class Alphabet;
using AlphabetPtr = std::shared_ptr<const Alphabet>;

/// A finite set of named observation symbols. Symbol order is the declared
/// order; algorithms that need a canonical order sort by label instead.
class Alphabet {
 public:
  /// Throws BadParams on empty sets, duplicate labels, empty labels, or
  /// labels containing whitespace, '#', or ';' (reserved by the trace
  /// syntax).
  static AlphabetPtr make(std::vector<std::string> symbols);

  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const std::string& label(std::uint32_t i) const { return symbols_[i]; }
  std::optional<std::uint32_t> find(std::string_view label) const;

  /// Symbol indices ordered by label (lexicographic), for canonical
  /// enumeration independent of declaration order.
  const std::vector<std::uint32_t>& lex_order() const { return lex_order_; }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
  std::vector<std::uint32_t> lex_order_;
};

/// Pointer equality or identical label sequences.
bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b);

/// A finite trace: symbol indices into an alphabet.
struct FiniteTrace {
  AlphabetPtr alphabet;
  std::vector<std::uint32_t> symbols;

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
};

/// Build a trace from labels. Throws UnknownSymbol (1-based position).
FiniteTrace make_trace(const AlphabetPtr& alphabet,
                       const std::vector<std::string>& labels);

/// An ultimately periodic infinite trace stem·cycle^ω. The cycle is nonempty.
struct Lasso {
  FiniteTrace stem;
  FiniteTrace cycle;
};

Lasso make_lasso(const AlphabetPtr& alphabet,
                 const std::vector<std::string>& stem,
                 const std::vector<std::string>& cycle);

using ParsedTrace = std::variant<FiniteTrace, Lasso>;

/// Parse whitespace-separated symbol labels. '#' starts a comment running to
/// end of line. An optional ';' splits stem from cycle and turns the result
/// into a lasso. Throws UnknownSymbol (with the 1-based symbol position),
/// EmptyCycle when ';' is followed by no symbols, and ParseError on a second
/// ';'.
ParsedTrace parse_trace(const std::string& text, const AlphabetPtr& alphabet);

/// Like parse_trace but requires the ';' form.
Lasso parse_lasso(const std::string& text, const AlphabetPtr& alphabet);

/// Canonical form denoting the same infinite trace: the cycle is reduced to
/// its primitive root and stem symbols equal to the cycle's last symbol are
/// absorbed into a rotation. normalize is idempotent and two lassos denoting
/// the same infinite trace normalize identically.
Lasso normalize(const Lasso& l);

/// Occurrences of `label` in a finite trace. Throws UnknownSymbol when the
/// label is not in the trace's alphabet.
std::size_t count_symbol(const FiniteTrace& w, std::string_view label);

/// First n symbols of stem·cycle^ω.
FiniteTrace unroll(const Lasso& l, std::size_t n);

FiniteTrace prefix(const FiniteTrace& w, std::size_t n);
FiniteTrace concat(const FiniteTrace& a, const FiniteTrace& b);

std::string format_trace(const FiniteTrace& w);  // space-joined labels
std::string format_lasso(const Lasso& l);        // "stem ; cycle"

/// True when both denote the same infinite trace (compares normal forms).
bool same_infinite_trace(const Lasso& a, const Lasso& b);

}  // namespace qsl

#endif  // QSL_TRACE_HPP
