/*
 * Copyright 2026 The rcsat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rcsat {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- netlist parsing ---

struct UndefinedSignalError : Error {
  std::string signal;
  explicit UndefinedSignalError(std::string name)
      : Error("undefined signal: " + name), signal(std::move(name)) {}
};

struct DuplicateDefinitionError : Error {
  std::string signal;
  explicit DuplicateDefinitionError(std::string name)
      : Error("duplicate definition of signal: " + name), signal(std::move(name)) {}
};

struct UnsupportedGateError : Error {
  explicit UnsupportedGateError(const std::string& what) : Error("unsupported gate: " + what) {}
};

struct MalformedLineError : Error {
  std::size_t line_no;
  MalformedLineError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_no(line) {}
};

struct EmptyNetlistError : Error {
  explicit EmptyNetlistError(const std::string& what) : Error("empty netlist: " + what) {}
};

// --- circuit construction / evaluation ---

struct CombinationalCycleError : Error {
  std::vector<std::string> cycle;  // signals on the cycle
  explicit CombinationalCycleError(std::vector<std::string> sigs)
      : Error(describe(sigs)), cycle(std::move(sigs)) {}

 private:
  static std::string describe(const std::vector<std::string>& sigs) {
    std::string s = "combinational cycle:";
    for (const auto& x : sigs) s += " " + x;
    return s;
  }
};

struct DimensionMismatchError : Error {
  explicit DimensionMismatchError(const std::string& what) : Error("dimension mismatch: " + what) {}
};

// --- relaxed engine ---

struct NonFiniteInputError : Error {
  explicit NonFiniteInputError(const std::string& what) : Error("non-finite input: " + what) {}
};

struct ArityError : Error {
  explicit ArityError(const std::string& what) : Error("arity error: " + what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error("domain error: " + what) {}
};

struct TraceMismatchError : Error {
  explicit TraceMismatchError(const std::string& what) : Error("trace mismatch: " + what) {}
};

// --- sampler ---

struct NonFiniteGradientError : Error {
  explicit NonFiniteGradientError(const std::string& what)
      : Error("non-finite gradient: " + what) {}
};

// --- cnf export ---

struct IncompleteModelError : Error {
  explicit IncompleteModelError(const std::string& what) : Error("incomplete model: " + what) {}
};

struct InvalidModelError : Error {
  explicit InvalidModelError(const std::string& what) : Error("invalid model: " + what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io error: " + what) {}
};

}  // namespace rcsat
