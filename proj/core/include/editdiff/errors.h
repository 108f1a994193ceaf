// Copyright 2026 The editdiff Authors
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

#ifndef EDITDIFF_ERRORS_H_
#define EDITDIFF_ERRORS_H_

#include <stdexcept>
#include <string>

namespace editdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or domain violation by the caller (bad noise level, DEL in
// the prompt, prompt mismatch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Row/column counts of a prediction do not match what the contract requires.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// User-supplied configuration is malformed. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NonFiniteLossError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace editdiff

#endif  // EDITDIFF_ERRORS_H_
