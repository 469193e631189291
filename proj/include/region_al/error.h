// Copyright 2026 The region_al Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REGION_AL_ERROR_H_
#define REGION_AL_ERROR_H_

#include <stdexcept>
#include <string>

namespace region_al {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags, config keys or parameter combinations supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input data that violates a format or value contract.
class DataError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures: missing inputs, unwritable outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace region_al

#endif  // REGION_AL_ERROR_H_
