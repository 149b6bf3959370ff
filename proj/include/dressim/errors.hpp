// Copyright 2026 The dressim Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace dressim {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** An argument broke a documented precondition (non-Hermitian input, bad
 * dimension, negative time, ...). */
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/** Operator or state tagged with a basis the operation does not accept. */
class BasisMismatch : public Error {
 public:
  using Error::Error;
};

/** A parameter set is missing a field the requested construction needs. */
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/** Perturbative reduction requested outside its validity window. */
class OutOfRegime : public Error {
 public:
  using Error::Error;
};

/** The closed-form reduction assumes equal Rabi frequencies. */
class UnsupportedAssumption : public Error {
 public:
  using Error::Error;
};

/** Rotation axis undefined (both exchange and Ising terms vanish). */
class UndefinedAxis : public Error {
 public:
  using Error::Error;
};

class CalibrationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace dressim
