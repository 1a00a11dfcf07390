// Copyright 2026 The bornstat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bornstat {

/// Operands live on different numbers of qubits.
class DimensionError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

/// A probability vector does not sum to one within tolerance.
class NormalizationError : public DomainError {
 public:
    using DomainError::DomainError;
};

/// The request exceeds a hard size cap (dense storage, statevector, quadratic sums).
class ResourceError : public std::length_error {
 public:
    using std::length_error::length_error;
};

/// Malformed input file or configuration.
class ParseError : public std::runtime_error {
 public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    /// 1-based line number, or 0 when the error is not tied to a line.
    std::size_t line() const { return line_; }

 private:
    std::size_t line_;
};

}  // namespace bornstat
