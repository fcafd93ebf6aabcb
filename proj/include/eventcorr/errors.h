// Copyright 2026 The eventcorr Authors.
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

#ifndef EVENTCORR_ERRORS_H_
#define EVENTCORR_ERRORS_H_

#include <stdexcept>
#include <string>

namespace eventcorr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent input data (unsorted streams, corrupt artifacts, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// A caller violated an ordering contract between pipeline steps.
class PipelineOrderError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  enum class Kind { kMalformed, kDuplicateDefinition, kUnknownDefinition, kBadValue };

  ConfigError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace eventcorr

#endif  // EVENTCORR_ERRORS_H_
