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

#include <chrono>
#include <thread>

#include "core/common.hpp"

namespace medpair::llm {

template <typename Fn>
auto WithRetry(const RetryPolicy& policy, int* attempts, Fn&& fn)
    -> decltype(fn()) {
  const int budget = policy.max_attempts < 1 ? 1 : policy.max_attempts;
  int delay_ms = policy.base_delay_ms;
  for (int attempt = 1;; ++attempt) {
    if (attempts != nullptr) ++*attempts;
    try {
      return fn();
    } catch (const TransportError& e) {
      if (attempt >= budget) {
        throw Error(ErrorCode::kTransport,
                    std::string(e.what()) + " (after " +
                        std::to_string(attempt) + " attempts)");
      }
    }
    if (delay_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      delay_ms *= 2;
    }
  }
}

}  // namespace medpair::llm
