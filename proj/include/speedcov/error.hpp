// Copyright 2026 The speedcov Authors
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

namespace speedcov {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument is outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Vector lengths or index ranges do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Instance or model file could not be read; the message names the field.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// An instance failed validation.
class InvalidInstanceError : public Error {
 public:
  using Error::Error;
};

/// An LP that must be feasible is not (e.g. an equality-mode closure
/// query outside the sample hull).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or vertex-set construction would exceed its size cap.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// MPS export problems (duplicate names, unwritable file).
class ExportError : public Error {
 public:
  using Error::Error;
};

}  // namespace speedcov
