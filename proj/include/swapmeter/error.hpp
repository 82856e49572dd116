// Copyright 2026 The swapmeter Authors
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

#ifndef SWAPMETER_ERROR_HPP
#define SWAPMETER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace swapmeter {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Mismatched or invalid subsystem dimensions / indices.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// A matrix that fails the density-matrix, hermiticity or unitarity checks.
class InvalidStateError : public Error {
   public:
    using Error::Error;
};

/// Parameter outside the admissible range of a constructor or operation.
class DomainError : public Error {
   public:
    using Error::Error;
};

}  // namespace swapmeter

#endif  // SWAPMETER_ERROR_HPP
