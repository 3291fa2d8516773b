// Copyright 2026 The epnilab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EPNILAB_ERRORS_HPP_
#define EPNILAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace epnilab {

// Error kinds surfaced by the library. Everything derives from std::exception
// so callers that do not care about the kind can catch the base.

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested state or operator would exceed the configured maximum dimension.
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A density operator failed a hard validity threshold (e.g. eigenvalue < -1e-8).
struct InvalidState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input violates a trial precondition (non-zero mean field, wrong entropy).
struct RejectedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleConstraint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form quantity is infinite for the given parameters.
struct Divergence : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace epnilab

#endif  // EPNILAB_ERRORS_HPP_
