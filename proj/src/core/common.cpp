// Copyright 2026 The Medpair Authors.
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

#include "core/common.hpp"

#include <string>

namespace medpair {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kVersion: return "version mismatch";
    case ErrorCode::kTruncated: return "truncated file";
    case ErrorCode::kDimMismatch: return "dimension mismatch";
    case ErrorCode::kSchema: return "schema violation";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kTransport: return "transport error";
    case ErrorCode::kClassification: return "classification error";
    case ErrorCode::kEmbedding: return "embedding error";
    case ErrorCode::kMissingIndex: return "missing index";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

std::string_view ToString(Role role) {
  return role == Role::kDoctor ? "doctor" : "pharmacist";
}

Role ParseRole(std::string_view text) {
  if (text == "doctor") return Role::kDoctor;
  if (text == "pharmacist") return Role::kPharmacist;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown role '" + std::string(text) + "'");
}

}  // namespace medpair
