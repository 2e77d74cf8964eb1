// include/csdetect/errors.hpp

// Copyright 2026 The csdetect Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CSDETECT_ERRORS_H_
#define CSDETECT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace csd {

// Malformed input or a violated data invariant.  The CLI maps this to
// exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A metric that is undefined for the given data, e.g. a DET curve whose
// miss rates never cross inside the weight grid.  The CLI maps this to
// exit code 3.
class MetricDomainError : public std::runtime_error {
 public:
  explicit MetricDomainError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace csd

#endif  // CSDETECT_ERRORS_H_
