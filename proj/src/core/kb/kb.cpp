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

#include "core/kb/kb.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "core/llm/client.hpp"
#include "core/llm/prompt_format.hpp"
#include "core/text.hpp"

namespace medpair::kb {
namespace {

std::string ChunkId(const std::string& doc_id, std::size_t ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%04zu", ordinal);
  return doc_id + buf;
}

bool IsSentenceEnd(const std::string& body, std::size_t p) {
  // Boundary sits right after a terminator followed by whitespace.
  const char c = body[p - 1];
  if (c != '.' && c != '!' && c != '?') return false;
  return p == body.size() || std::isspace(static_cast<unsigned char>(body[p]));
}

// Number of lexicon terms present in the space-joined token stream.
std::size_t CountHits(const std::string& joined,
                      const std::vector<std::string>& terms) {
  std::size_t hits = 0;
  for (const auto& term : terms) {
    std::string needle = " ";
    for (const auto& t : text::Tokenize(term)) needle += t + " ";
    if (needle.size() > 1 && text::Contains(joined, needle)) ++hits;
  }
  return hits;
}

}  // namespace

std::string_view ToString(DomainTarget target) {
  switch (target) {
    case DomainTarget::kDoctorOnly: return "DoctorOnly";
    case DomainTarget::kPharmacistOnly: return "PharmacistOnly";
    case DomainTarget::kBoth: return "Both";
  }
  return "?";
}

DomainTarget ParseDomainTarget(std::string_view text) {
  if (text == "DoctorOnly") return DomainTarget::kDoctorOnly;
  if (text == "PharmacistOnly") return DomainTarget::kPharmacistOnly;
  if (text == "Both") return DomainTarget::kBoth;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown domain label '" + std::string(text) + "'");
}

const Chunk& VectorIndex::chunk(const std::string& chunk_id) const {
  auto it = chunk_store.find(chunk_id);
  if (it == chunk_store.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown chunk " + chunk_id);
  }
  return it->second;
}

void VectorIndex::Validate() const {
  if (dim == 0) throw Error(ErrorCode::kFormat, "index dim must be positive");
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.chunk_id).second) {
      throw Error(ErrorCode::kFormat, "duplicate chunk id " + e.chunk_id);
    }
    if (!chunk_store.count(e.chunk_id)) {
      throw Error(ErrorCode::kFormat, "entry " + e.chunk_id + " has no stored chunk");
    }
    if (e.vector.dim() != dim) {
      throw Error(ErrorCode::kDimMismatch, "entry " + e.chunk_id + " has wrong dim");
    }
  }
}

Lexicon Lexicon::Default() {
  return Lexicon{
      {"symptom", "symptoms", "diagnosis", "diagnostic", "diagnose",
       "pathology", "pathological", "differential", "etiology",
       "clinical presentation", "clinical features", "physical examination",
       "signs", "findings", "lesion", "lesions", "biopsy", "imaging",
       "prognosis"},
      {"drug", "drugs", "medication", "medications", "dose", "doses",
       "dosage", "dosing", "mg", "tablet", "tablets", "contraindication",
       "contraindications", "contraindicated", "interaction", "interactions",
       "precaution", "precautions", "adverse effects", "pharmacokinetics",
       "prescription", "prescribe", "prescribed"},
  };
}

DomainAssignment ClassifyByLexicon(const SourceDocument& doc,
                                   const Lexicon& lexicon) {
  std::string joined = " ";
  for (const auto& t : text::Tokenize(doc.title + "\n" + doc.body)) joined += t + " ";
  const std::size_t dx = CountHits(joined, lexicon.diagnostic);
  const std::size_t rx = CountHits(joined, lexicon.medication);
  DomainAssignment out;
  out.source = "lexicon";
  if (dx > 0 && rx == 0) {
    out.target = DomainTarget::kDoctorOnly;
  } else if (rx > 0 && dx == 0) {
    out.target = DomainTarget::kPharmacistOnly;
  } else {
    out.target = DomainTarget::kBoth;
  }
  out.rationale = "lexicon hits: diagnostic=" + std::to_string(dx) +
                  " medication=" + std::to_string(rx);
  return out;
}

DomainAssignment ClassifyDocument(const SourceDocument& doc,
                                  llm::ChatBackend* backend,
                                  const Lexicon& lexicon,
                                  const llm::RetryPolicy& policy) {
  if (doc.doc_id.empty() || text::Trim(doc.body).empty()) {
    throw Error(ErrorCode::kClassification,
                "document '" + doc.doc_id + "' has an empty body");
  }
  if (backend == nullptr) return ClassifyByLexicon(doc, lexicon);

  llm::ChatRequest req;
  req.schema_tag = llm::SchemaTag::kClassify;
  req.system_prompt =
      "You route medical reference documents into knowledge bases. Documents "
      "only about disease symptoms, pathology or diagnosis are DoctorOnly. "
      "Documents only about medication guidelines, dosages or precautions are "
      "PharmacistOnly. Documents covering both diagnosis and treatment are Both.";
  req.user_prompt = llm::PromptBuilder()
                        .Field("Task", "classify-document")
                        .Field("Document", doc.doc_id)
                        .Field("Title", doc.title)
                        .Block("Body", doc.body)
                        .Line("Respond with JSON: {\"label\": \"DoctorOnly\" | "
                              "\"PharmacistOnly\" | \"Both\", \"rationale\": "
                              "\"...\"}")
                        .str();
  try {
    const auto out = llm::Complete(*backend, req, policy);
    DomainAssignment a;
    a.target = ParseDomainTarget(out.payload["label"].get<std::string>());
    if (auto it = out.payload.find("rationale"); it != out.payload.end() && it->is_string()) {
      a.rationale = it->get<std::string>();
    }
    a.source = "backend";
    return a;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTransport) return ClassifyByLexicon(doc, lexicon);
    throw Error(ErrorCode::kClassification,
                "classifying '" + doc.doc_id + "': " + e.what());
  }
}

std::vector<Chunk> ChunkDocument(const SourceDocument& doc,
                                 const ChunkParams& params) {
  if (params.max_chars == 0 || params.overlap_chars >= params.max_chars) {
    throw Error(ErrorCode::kInvalidArgument,
                "chunking requires 0 <= overlap < max_chars");
  }
  const std::string& body = doc.body;
  const std::size_t n = body.size();
  std::vector<Chunk> chunks;
  std::size_t start = 0;
  while (true) {
    const std::size_t limit = start + params.max_chars;
    std::size_t end = n;
    if (limit < n) {
      const std::size_t min_end = start + params.overlap_chars + 1;
      end = limit;
      bool snapped = false;
      for (std::size_t p = limit; p >= min_end && p >= 2; --p) {
        if (body[p - 1] == '\n' && body[p - 2] == '\n') {
          end = p;
          snapped = true;
          break;
        }
      }
      if (!snapped) {
        for (std::size_t p = limit; p >= min_end && p >= 1; --p) {
          if (IsSentenceEnd(body, p)) {
            end = p;
            break;
          }
        }
      }
    }
    Chunk c;
    c.chunk_id = ChunkId(doc.doc_id, chunks.size());
    c.doc_id = doc.doc_id;
    c.start = start;
    c.end = end;
    c.text = body.substr(start, end - start);
    chunks.push_back(std::move(c));
    if (end >= n) break;
    start = end - params.overlap_chars;
  }
  return chunks;
}

BuildResult BuildIndexes(const std::vector<SourceDocument>& corpus,
                         llm::EmbeddingBackend& embedder,
                         const BuildOptions& options) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "corpus is empty");
  }
  std::set<std::string> ids;
  for (const auto& doc : corpus) {
    if (doc.doc_id.empty() || !ids.insert(doc.doc_id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "doc_id '" + doc.doc_id + "' is empty or duplicated");
    }
  }

  BuildResult result;
  result.indexes.doctor.role = Role::kDoctor;
  result.indexes.pharmacist.role = Role::kPharmacist;
  result.indexes.doctor.dim = embedder.dim();
  result.indexes.pharmacist.dim = embedder.dim();

  std::vector<Chunk> chunks;
  std::vector<DomainTarget> targets;
  for (const auto& doc : corpus) {
    auto assignment = ClassifyDocument(doc, options.classifier, options.lexicon,
                                       options.retry);
    for (auto& c : ChunkDocument(doc, options.chunking)) {
      chunks.push_back(std::move(c));
      targets.push_back(assignment.target);
    }
    result.assignments.emplace_back(doc.doc_id, std::move(assignment));
  }

  const std::size_t batch = options.embed_batch == 0 ? 1 : options.embed_batch;
  std::vector<EmbeddingVector> vectors;
  vectors.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); i += batch) {
    const std::size_t stop = std::min(chunks.size(), i + batch);
    std::vector<std::string> texts;
    for (std::size_t j = i; j < stop; ++j) texts.push_back(chunks[j].text);
    try {
      for (auto& v : llm::Embed(embedder, texts, options.retry)) {
        vectors.push_back(std::move(v));
      }
    } catch (const Error&) {
      // Re-embed one at a time to name the chunk that breaks.
      for (std::size_t j = i; j < stop; ++j) {
        try {
          vectors.push_back(std::move(
              llm::Embed(embedder, {chunks[j].text}, options.retry).front()));
        } catch (const Error& e) {
          throw Error(ErrorCode::kEmbedding, "embedding chunk " +
                                                 chunks[j].chunk_id + ": " +
                                                 e.what());
        }
      }
    }
  }

  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const DomainTarget t = targets[i];
    auto add = [&](VectorIndex& index) {
      index.entries.push_back({chunks[i].chunk_id, vectors[i]});
      index.chunk_store.emplace(chunks[i].chunk_id, chunks[i]);
    };
    if (t != DomainTarget::kPharmacistOnly) add(result.indexes.doctor);
    if (t != DomainTarget::kDoctorOnly) add(result.indexes.pharmacist);
  }
  return result;
}

// --- Index files -----------------------------------------------------------
//
// Layout, all integers little-endian:
//   magic "MPVINDEX" | u32 version | u8 role | u32 dim | u64 entry_count
//   entry_count x { str chunk_id | str doc_id | str text |
//                   u64 start | u64 end | f32[dim] vector }
// where str = u32 length + bytes.

namespace {

constexpr char kMagic[8] = {'M', 'P', 'V', 'I', 'N', 'D', 'E', 'X'};

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  void U8(std::uint8_t v) { os_.put(static_cast<char>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(float f) {
    std::uint32_t bits;
    static_assert(sizeof(bits) == sizeof(f));
    std::memcpy(&bits, &f, sizeof(f));
    U32(bits);
  }
  void Str(const std::string& s) {
    U32(static_cast<std::uint32_t>(s.size()));
    os_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& os_;
};

class Reader {
 public:
  Reader(std::istream& is, std::string path) : is_(is), path_(std::move(path)) {}
  void Bytes(char* out, std::size_t n) {
    is_.read(out, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n) {
      throw Error(ErrorCode::kTruncated, "index file " + path_ + " is truncated");
    }
  }
  std::uint8_t U8() {
    char c;
    Bytes(&c, 1);
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t U32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(U8()) << (8 * i);
    return v;
  }
  std::uint64_t U64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(U8()) << (8 * i);
    return v;
  }
  float F32() {
    const std::uint32_t bits = U32();
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    return f;
  }
  std::string Str() {
    const std::uint32_t n = U32();
    std::string s(n, '\0');
    if (n > 0) Bytes(s.data(), n);
    return s;
  }

 private:
  std::istream& is_;
  std::string path_;
};

}  // namespace

void SaveIndex(const VectorIndex& index, const std::filesystem::path& path) {
  index.Validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  os.write(kMagic, sizeof(kMagic));
  Writer w(os);
  w.U32(kIndexFormatVersion);
  w.U8(index.role == Role::kDoctor ? 0 : 1);
  w.U32(static_cast<std::uint32_t>(index.dim));
  w.U64(index.entries.size());
  for (const auto& e : index.entries) {
    const Chunk& c = index.chunk(e.chunk_id);
    w.Str(c.chunk_id);
    w.Str(c.doc_id);
    w.Str(c.text);
    w.U64(c.start);
    w.U64(c.end);
    for (float f : e.vector.values) w.F32(f);
  }
  os.flush();
  if (!os) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

VectorIndex LoadIndex(const std::filesystem::path& path,
                      std::optional<std::size_t> expected_dim) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kMissingIndex, "cannot open index " + path.string());
  Reader r(is, path.string());

  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (is.gcount() != static_cast<std::streamsize>(sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kFormat, path.string() + " is not a vector index file");
  }
  const std::uint32_t version = r.U32();
  if (version != kIndexFormatVersion) {
    throw Error(ErrorCode::kVersion, "index format version " +
                                         std::to_string(version) +
                                         " is not supported (expected " +
                                         std::to_string(kIndexFormatVersion) + ")");
  }
  VectorIndex index;
  const std::uint8_t role = r.U8();
  if (role > 1) throw Error(ErrorCode::kFormat, "bad role byte in " + path.string());
  index.role = role == 0 ? Role::kDoctor : Role::kPharmacist;
  index.dim = r.U32();
  if (index.dim == 0) throw Error(ErrorCode::kFormat, "index dim is zero");
  if (expected_dim && *expected_dim != index.dim) {
    throw Error(ErrorCode::kDimMismatch,
                "index " + path.string() + " has dim " +
                    std::to_string(index.dim) + ", expected " +
                    std::to_string(*expected_dim));
  }
  const std::uint64_t count = r.U64();
  for (std::uint64_t i = 0; i < count; ++i) {
    Chunk c;
    c.chunk_id = r.Str();
    c.doc_id = r.Str();
    c.text = r.Str();
    c.start = r.U64();
    c.end = r.U64();
    IndexEntry e;
    e.chunk_id = c.chunk_id;
    e.vector.values.resize(index.dim);
    for (auto& f : e.vector.values) f = r.F32();
    index.chunk_store.emplace(c.chunk_id, std::move(c));
    index.entries.push_back(std::move(e));
  }
  index.Validate();
  return index;
}

// --- Corpus records --------------------------------------------------------

std::vector<SourceDocument> ParseCorpus(const std::string& content) {
  std::vector<SourceDocument> docs;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& line : text::SplitLines(content)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const std::string where = "corpus line " + std::to_string(line_no) + ": ";
    SourceDocument d;
    try {
      const auto j = nlohmann::json::parse(line);
      d.doc_id = j.at("doc_id").get<std::string>();
      d.title = j.value("title", std::string());
      d.body = j.at("body").get<std::string>();
      if (j.contains("metadata") && !j["metadata"].is_null()) {
        d.metadata = j["metadata"].get<std::map<std::string, std::string>>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, where + e.what());
    }
    if (d.doc_id.empty()) throw Error(ErrorCode::kFormat, where + "empty doc_id");
    if (text::Trim(d.body).empty()) {
      throw Error(ErrorCode::kFormat, where + "document '" + d.doc_id + "' has an empty body");
    }
    if (!seen.insert(d.doc_id).second) {
      throw Error(ErrorCode::kFormat, where + "duplicate doc_id '" + d.doc_id + "'");
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<SourceDocument> LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read corpus " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCorpus(buf.str());
}

std::string SerializeCorpus(const std::vector<SourceDocument>& corpus) {
  std::ostringstream os;
  for (const auto& d : corpus) {
    nlohmann::json j = {{"doc_id", d.doc_id},
                        {"title", d.title},
                        {"body", d.body},
                        {"metadata", d.metadata}};
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace medpair::kb
