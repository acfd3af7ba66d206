/* Copyright 2026 The ctxattack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef CTXATTACK_ERRORS_HPP_
#define CTXATTACK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ctxattack {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyText : public Error {
 public:
  EmptyText() : Error("text is empty after trimming") {}
};

// Failures raised by a model backend. The harness treats these as per-sample
// errors rather than fatal ones.
class BackendError : public Error {
 public:
  using Error::Error;
};

// Transport failure or non-200 reply from a remote target, after retries.
class TargetUnavailable : public BackendError {
 public:
  using BackendError::BackendError;
};

// The remote target answered, but not in the expected shape.
class ProtocolError : public BackendError {
 public:
  using BackendError::BackendError;
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("cosine similarity of a zero-norm embedding") {}
};

class EmptyScores : public Error {
 public:
  EmptyScores() : Error("dynamic threshold over an empty score list") {}
};

class EmptySearchSpace : public Error {
 public:
  EmptySearchSpace() : Error("every per-word candidate list is empty") {}
};

// Thrown by CountedTarget when the next query would exceed the budget.
class BudgetExhausted : public Error {
 public:
  explicit BudgetExhausted(std::size_t budget)
      : Error("query budget of " + std::to_string(budget) + " exhausted") {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxattack

#endif  // CTXATTACK_ERRORS_HPP_
