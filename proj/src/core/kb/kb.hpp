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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/llm/backend.hpp"
#include "core/vector.hpp"

namespace medpair::kb {

struct SourceDocument {
  std::string doc_id;
  std::string title;
  std::string body;
  std::map<std::string, std::string> metadata;
};

enum class DomainTarget { kDoctorOnly, kPharmacistOnly, kBoth };

std::string_view ToString(DomainTarget target);
DomainTarget ParseDomainTarget(std::string_view text);

struct DomainAssignment {
  DomainTarget target = DomainTarget::kBoth;
  std::string rationale;
  // "backend" or "lexicon".
  std::string source;
};

struct Chunk {
  std::string chunk_id;
  std::string doc_id;
  std::string text;
  std::size_t start = 0;  // byte offsets into the document body
  std::size_t end = 0;

  bool operator==(const Chunk&) const = default;
};

struct IndexEntry {
  std::string chunk_id;
  EmbeddingVector vector;

  bool operator==(const IndexEntry&) const = default;
};

// Role-scoped store. Immutable once built; safe for concurrent readers.
struct VectorIndex {
  Role role = Role::kDoctor;
  std::size_t dim = 0;
  std::vector<IndexEntry> entries;
  std::map<std::string, Chunk> chunk_store;

  std::size_t size() const { return entries.size(); }
  const Chunk& chunk(const std::string& chunk_id) const;

  // Throws Error(kFormat) describing the first broken invariant.
  void Validate() const;

  bool operator==(const VectorIndex&) const = default;
};

struct KnowledgeBases {
  VectorIndex doctor;
  VectorIndex pharmacist;

  const VectorIndex& For(Role role) const {
    return role == Role::kDoctor ? doctor : pharmacist;
  }
};

struct ChunkParams {
  std::size_t max_chars = 800;
  std::size_t overlap_chars = 80;
};

// Keyword lists used when no classification backend is reachable.
struct Lexicon {
  std::vector<std::string> diagnostic;
  std::vector<std::string> medication;

  static Lexicon Default();
};

// Lexicon-only routing: only diagnostic hits -> DoctorOnly, only medication
// hits -> PharmacistOnly, anything else (mixed or no hits) -> Both.
DomainAssignment ClassifyByLexicon(const SourceDocument& doc,
                                   const Lexicon& lexicon);

// Structured backend call with lexicon fallback when the backend is absent
// or unreachable after retries. Empty bodies and invalid backend replies
// raise Error(kClassification) naming the doc_id.
DomainAssignment ClassifyDocument(const SourceDocument& doc,
                                  llm::ChatBackend* backend,
                                  const Lexicon& lexicon,
                                  const llm::RetryPolicy& policy = {});

// Splits `doc.body` into windows of at most max_chars bytes. Consecutive
// chunks share exactly overlap_chars bytes. Window ends snap back to the last
// paragraph break, else sentence terminator, that still leaves the window
// longer than the overlap.
std::vector<Chunk> ChunkDocument(const SourceDocument& doc,
                                 const ChunkParams& params);

struct BuildOptions {
  ChunkParams chunking;
  llm::ChatBackend* classifier = nullptr;
  Lexicon lexicon = Lexicon::Default();
  llm::RetryPolicy retry;
  std::size_t embed_batch = 32;
};

struct BuildResult {
  KnowledgeBases indexes;
  // Corpus order.
  std::vector<std::pair<std::string, DomainAssignment>> assignments;
};

BuildResult BuildIndexes(const std::vector<SourceDocument>& corpus,
                         llm::EmbeddingBackend& embedder,
                         const BuildOptions& options);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

void SaveIndex(const VectorIndex& index, const std::filesystem::path& path);

// Dim comes from the file header. When `expected_dim` is given and differs,
// raises Error(kDimMismatch). Bad magic -> kFormat, unknown version ->
// kVersion, short file -> kTruncated.
VectorIndex LoadIndex(const std::filesystem::path& path,
                      std::optional<std::size_t> expected_dim = std::nullopt);

// Line-delimited corpus records {doc_id, title, body, metadata}.
std::vector<SourceDocument> ParseCorpus(const std::string& content);
std::vector<SourceDocument> LoadCorpus(const std::filesystem::path& path);
std::string SerializeCorpus(const std::vector<SourceDocument>& corpus);

}  // namespace medpair::kb
