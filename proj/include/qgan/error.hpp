// Copyright 2026 The qganlab Authors
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

namespace qgan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when an argument violates a documented precondition
/// (wrong dimension, index out of range, probabilities not summing to one).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Raised by file loaders and parsers.
class FormatError : public Error {
  public:
    using Error::Error;
};

} // namespace qgan
