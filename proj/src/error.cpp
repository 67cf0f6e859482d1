// Copyright 2026 The QRC Memory Authors
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

#include "qrc/error.hpp"

namespace qrc {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
    case ErrorKind::kEspViolation: return "esp_violation";
    case ErrorKind::kUndefinedCapacity: return "undefined_capacity";
    case ErrorKind::kNonFinite: return "non_finite";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

int error_kind_exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return 2;
    case ErrorKind::kInvalidArgument: return 3;
    case ErrorKind::kIo: return 4;
    case ErrorKind::kParse: return 5;
    case ErrorKind::kDimensionMismatch: return 6;
    case ErrorKind::kEspViolation: return 7;
    case ErrorKind::kUndefinedCapacity: return 8;
    case ErrorKind::kNonFinite: return 9;
  }
  return 1;
}

}  // namespace qrc
