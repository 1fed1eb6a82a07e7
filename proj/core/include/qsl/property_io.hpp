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

#ifndef QSL_PROPERTY_IO_HPP
#define QSL_PROPERTY_IO_HPP

#include <string>

#include "qsl/property.hpp"

namespace qsl {

/// Parses a version-1 property file. Three forms are accepted, selected by
/// which field is present:
///
///   - {"version": 1, "builtin": <name>, "params": {...}} builds a
///     built-in property; params may carry "cap", "skip", and "dfa".
///   - {"version": 1, "fixture": <name>} builds a named fixture.
///   - {"version": 1, "alphabet": [...], "domain": {...}, "states": [...],
///     "initial": ..., "transitions": [...], "value_function": ...}
///     builds a machine-backed property directly.
///
/// Parsing is strict: unknown fields are rejected so golden files stay
/// stable. Throws ParseError with a dotted field path on malformed input.
PropertyPtr parse_property_json(const std::string& text);

/// Reads and parses a property file. Throws ParseError when the file
/// cannot be read.
PropertyPtr load_property(const std::string& path);

/// Serializes a machine-backed property to the machine form of the
/// version-1 format, with transitions sorted by state then symbol.
/// Throws UnsupportedBackend for oracle and derived backends, whose
/// analytic hooks have no file representation.
std::string property_to_json(const Property& p);

/// Serializes and writes a machine-backed property. Throws ParseError
/// when the file cannot be written and UnsupportedBackend as above.
void save_property(const Property& p, const std::string& path);

}  // namespace qsl

#endif  // QSL_PROPERTY_IO_HPP
