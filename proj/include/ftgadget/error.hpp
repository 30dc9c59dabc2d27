// Copyright 2026 The ftgadget Authors
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

namespace ftgadget {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes disagree (Pauli lengths, state dimensions, block widths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A qubit, location, or record index is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (non-unitary matrix, bad code).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The requested simulation does not fit the configured resource ceiling.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The backend or construction cannot handle this configuration.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A forced measurement outcome contradicts a deterministic one.
class ContradictionError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (Pauli strings, code files, circuit files).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ftgadget
