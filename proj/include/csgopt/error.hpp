// Copyright 2026 The csgopt Authors
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

#ifndef CSGOPT_ERROR_HPP
#define CSGOPT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csgopt {

/// Thrown when arguments violate a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a problem returns a non-finite objective or gradient sample.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// File system failures while writing experiment output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace detail
}  // namespace csgopt

#endif  // CSGOPT_ERROR_HPP
