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
#ifndef QSL_ERRORS_HPP
#define QSL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two values (or properties) live in structurally different value domains.
class DomainMismatch : public Error {
 public:
  explicit DomainMismatch(const std::string& what = "value domains differ")
      : Error(what) {}
};

/// A trace or property referenced a symbol outside its alphabet.
/// `position` is 1-based within the offending trace; 0 when not positional.
class UnknownSymbol : public Error {
 public:
  UnknownSymbol(std::string label_, std::size_t position_ = 0)
      : Error(position_ == 0
                  ? "unknown symbol '" + label_ + "'"
                  : "unknown symbol '" + label_ + "' at position " +
                        std::to_string(position_)),
        label(std::move(label_)),
        position(position_) {}

  std::string label;
  std::size_t position;
};

/// A lasso was given an empty cycle.
class EmptyCycle : public Error {
 public:
  EmptyCycle() : Error("lasso cycle must be nonempty") {}
};

/// An aggregate (join/meet) was requested over an empty set of values.
class EmptySet : public Error {
 public:
  EmptySet() : Error("aggregate over empty value set") {}
};

/// Two properties were combined over different alphabets.
class AlphabetMismatch : public Error {
 public:
  explicit AlphabetMismatch(const std::string& what = "alphabets differ")
      : Error(what) {}
};

/// The requested operation is not defined for the property's backend.
class UnsupportedBackend : public Error {
 public:
  explicit UnsupportedBackend(const std::string& what)
      : Error("unsupported backend: " + what) {}
};

/// Bad parameters for a builtin property constructor.
class BadParams : public Error {
 public:
  explicit BadParams(const std::string& what) : Error(what) {}
};

/// Unknown fixture name.
class UnknownFixture : public Error {
 public:
  explicit UnknownFixture(const std::string& name)
      : Error("unknown fixture '" + name + "'") {}
};

/// A numeric embedding was requested for a non-numeric value domain.
class DomainNotNumeric : public Error {
 public:
  explicit DomainNotNumeric(const std::string& what = "domain is not numeric")
      : Error(what) {}
};

/// An operation over a family of properties received an empty family.
class EmptyFamily : public Error {
 public:
  EmptyFamily() : Error("property family must be nonempty") {}
};

/// A decomposition that needs two distinct symbols was given fewer.
class UnaryAlphabet : public Error {
 public:
  explicit UnaryAlphabet(
      const std::string& what = "need two distinct alphabet symbols")
      : Error(what) {}
};

/// Monitor synthesis hit the depth bound while the frontier was still wide.
class DepthExceeded : public Error {
 public:
  explicit DepthExceeded(std::size_t max_depth_)
      : Error("monitor synthesis exceeded max depth " +
              std::to_string(max_depth_)),
        max_depth(max_depth_) {}

  std::size_t max_depth;
};

/// Malformed input text (property file, monitor file, trace string).
/// Carries a human-readable position where one is known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace qsl

#endif  // QSL_ERRORS_HPP
