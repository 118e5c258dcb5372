// Copyright 2026 The noiseswitch Authors
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

namespace noiseswitch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or dimensions that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Values outside their admissible range (rates, angles, invariants).
class DomainError : public Error {
 public:
  using Error::Error;
};

class BoundError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A requested transfer is not possible under the given noise.
class ReachabilityError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace noiseswitch
