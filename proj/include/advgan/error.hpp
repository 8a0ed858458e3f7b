// Copyright 2026 The advgan Authors
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

namespace advgan {

// Base of every error the library raises. The C API maps each subclass onto
// one advgan_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf produced or consumed by a computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Unsupported or out-of-range configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated files.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures (missing, unreadable or unwritable paths).
class IoError : public Error {
 public:
  using Error::Error;
};

// Violated API preconditions, e.g. backward() on a non-scalar.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace advgan
