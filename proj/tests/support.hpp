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

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/kb/kb.hpp"
#include "core/llm/backend.hpp"
#include "core/llm/mock.hpp"
#include "core/vector.hpp"

namespace medpair::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("medpair-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void Spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Chat backend driven by a callable. Thread-safe call log.
class FnChat : public llm::ChatBackend {
 public:
  using Fn = std::function<std::string(const llm::ChatRequest&)>;
  explicit FnChat(Fn fn) : fn_(std::move(fn)) {}
  std::string Send(const llm::ChatRequest& r) override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      calls_.push_back(r);
    }
    return fn_(r);
  }
  std::vector<llm::ChatRequest> calls() const {
    std::lock_guard<std::mutex> lock(mu_);
    return calls_;
  }

 private:
  Fn fn_;
  mutable std::mutex mu_;
  std::vector<llm::ChatRequest> calls_;
};

inline EmbeddingVector RandomUnit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  EmbeddingVector v;
  for (;;) {
    v.values.assign(dim, 0.0f);
    for (auto& x : v.values) x = static_cast<float>(g(rng));
    if (v.Normalize()) return v;
  }
}

inline kb::VectorIndex RandomIndex(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                   Role role = Role::kDoctor) {
  kb::VectorIndex idx;
  idx.role = role;
  idx.dim = dim;
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "d%03zu#0000", i);
    idx.entries.push_back({id, RandomUnit(rng, dim)});
    kb::Chunk c;
    c.chunk_id = id;
    c.doc_id = std::string(id).substr(0, 4);
    c.text = "passage " + std::to_string(i);
    c.end = c.text.size();
    idx.chunk_store[id] = c;
  }
  return idx;
}

// Short texts over a tiny vocabulary so that n-grams collide often.
inline std::string RandomText(std::mt19937_64& rng, std::size_t max_words) {
  static const std::vector<std::string> vocab = {"the", "cat", "sat", "on", "mat",
                                                 "dog", "ran", "a",   "red", "Fever,",
                                                 "cough.", "pain", "THE"};
  std::uniform_int_distribution<std::size_t> len(0, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += vocab[pick(rng)];
  }
  return s;
}

}  // namespace medpair::testing
