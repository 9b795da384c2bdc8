// Copyright 2026 The difflim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIFFLIM_ERROR_HPP
#define DIFFLIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace difflim {

// Bad inputs: invalid instances, policy parameters, grids, configs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A path could not be integrated or simulated (non-finite drift, clock
// misuse, too many failed replications).
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Takes the message by reference so string literals are not copied on the
// success path.
template <class Message>
inline void require(bool ok, const Message& message) {
  if (!ok) [[unlikely]] throw ConfigError(std::string(message));
}

}  // namespace detail
}  // namespace difflim

#endif  // DIFFLIM_ERROR_HPP
