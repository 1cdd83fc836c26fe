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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace medpair {

// Error categories. Mirrored one-to-one by mp_status in the C API.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kFormat,
  kVersion,
  kTruncated,
  kDimMismatch,
  kSchema,
  kParse,
  kTransport,
  kClassification,
  kEmbedding,
  kMissingIndex,
  kInternal,
};

const char* ToString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class Role { kDoctor, kPharmacist };

std::string_view ToString(Role role);
Role ParseRole(std::string_view text);

}  // namespace medpair
