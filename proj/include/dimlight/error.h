// Copyright 2026 The Dimlight Authors
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

#ifndef DIMLIGHT_ERROR_H_
#define DIMLIGHT_ERROR_H_

#include <stdexcept>
#include <string>

namespace dimlight {

enum class ErrorKind {
  kConfig,      // bad configuration values or ranges
  kDimension,   // image/raster shapes that violate a contract
  kDomain,      // values outside an operation's domain
  kIo,          // file system or decode failures
  kStructural,  // inconsistent inputs (mismatched rasters, missing assets)
  kUsage,       // command-line misuse
  kEmptyReport, // scoring an empty record set
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dimlight

#endif  // DIMLIGHT_ERROR_H_
