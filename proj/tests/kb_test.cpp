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

#include <gtest/gtest.h>

#include "core/common.hpp"
#include "core/kb/kb.hpp"
#include "core/llm/mock.hpp"
#include "support.hpp"

namespace medpair::kb {
namespace {

using testing::FnChat;
using testing::Slurp;
using testing::Spit;
using testing::TempDir;

SourceDocument Doc(std::string id, std::string body, std::string title = "") {
  return {std::move(id), std::move(title), std::move(body), {}};
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(Lexicon, RoutesByWhichVocabularyAppears) {
  const auto lex = Lexicon::Default();
  EXPECT_EQ(ClassifyByLexicon(Doc("a", "Typical symptoms and the differential."), lex).target,
            DomainTarget::kDoctorOnly);
  EXPECT_EQ(ClassifyByLexicon(Doc("b", "Usual dose is 5 mg daily."), lex).target,
            DomainTarget::kPharmacistOnly);
  EXPECT_EQ(ClassifyByLexicon(Doc("c", "Symptoms improve once the dose is raised."), lex).target,
            DomainTarget::kBoth);
  EXPECT_EQ(ClassifyByLexicon(Doc("d", "Nothing clinical here."), lex).target,
            DomainTarget::kBoth);
  EXPECT_EQ(ClassifyByLexicon(Doc("e", "x"), lex).source, "lexicon");
}

TEST(Classify, UsesTheBackendLabel) {
  FnChat chat([](const llm::ChatRequest& r) {
    EXPECT_NE(r.user_prompt.find("Document: doc-7"), std::string::npos);
    return R"({"label": "PharmacistOnly", "rationale": null})";
  });
  const auto a = ClassifyDocument(Doc("doc-7", "symptoms"), &chat, Lexicon::Default(), {1, 0});
  EXPECT_EQ(a.target, DomainTarget::kPharmacistOnly);
  EXPECT_EQ(a.source, "backend");
}

TEST(Classify, UnreachableBackendFallsBackToTheLexicon) {
  FnChat dead([](const llm::ChatRequest&) -> std::string { throw llm::TransportError("x"); });
  const auto a = ClassifyDocument(Doc("d", "symptoms only"), &dead, Lexicon::Default(), {2, 0});
  EXPECT_EQ(a.target, DomainTarget::kDoctorOnly);
  EXPECT_EQ(a.source, "lexicon");
}

TEST(Classify, InvalidRepliesAndEmptyBodiesAreClassificationErrors) {
  FnChat bad([](const llm::ChatRequest&) { return R"({"label": "Nurse"})"; });
  EXPECT_EQ(CodeOf([&] { ClassifyDocument(Doc("d", "text"), &bad, Lexicon::Default(), {1, 0}); }),
            ErrorCode::kClassification);
  EXPECT_EQ(CodeOf([&] { ClassifyDocument(Doc("d", "  \n"), nullptr, Lexicon::Default()); }),
            ErrorCode::kClassification);
}

std::string RandomBody(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {"word ", "longer words ", ". ", ".\n",
                                                  "\n\n", "ok? ", "x", "y!"};
  std::uniform_int_distribution<std::size_t> count(1, 300);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::string s;
  const auto n = count(rng);
  for (std::size_t i = 0; i < n; ++i) s += pieces[pick(rng)];
  return s;
}

TEST(Chunking, WindowsCoverTheBodyWithExactOverlap) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const auto body = RandomBody(rng);
    std::uniform_int_distribution<std::size_t> max_d(2, 200);
    ChunkParams p;
    p.max_chars = max_d(rng);
    p.overlap_chars = std::uniform_int_distribution<std::size_t>(0, p.max_chars - 1)(rng);
    const auto chunks = ChunkDocument(Doc("doc", body), p);
    ASSERT_FALSE(chunks.empty());
    EXPECT_EQ(chunks.front().start, 0u);
    EXPECT_EQ(chunks.back().end, body.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      const auto& c = chunks[i];
      ASSERT_LE(c.end - c.start, p.max_chars);
      ASSERT_GT(c.end, c.start);
      EXPECT_EQ(c.text, body.substr(c.start, c.end - c.start));
      EXPECT_EQ(c.doc_id, "doc");
      char want[32];
      std::snprintf(want, sizeof want, "doc#%04zu", i);
      EXPECT_EQ(c.chunk_id, want);
      if (i > 0) {
        ASSERT_EQ(chunks[i - 1].end - c.start, p.overlap_chars) << "trial " << trial;
      }
    }
  }
}

TEST(Chunking, PrefersParagraphThenSentenceBreaks) {
  ChunkParams p{20, 2};
  const auto para = ChunkDocument(Doc("d", "aaaa. bbbb\n\ncccc dddd eeee ffff"), p);
  EXPECT_EQ(para[0].text, "aaaa. bbbb\n\n");
  const auto sent = ChunkDocument(Doc("d", "aaaa. bbbb cccc dddd eeee ffff"), p);
  EXPECT_EQ(sent[0].text, "aaaa.");
  EXPECT_EQ(CodeOf([] { ChunkDocument(Doc("d", "x"), {5, 5}); }), ErrorCode::kInvalidArgument);
}

TEST(Build, RoutesChunksByAssignment) {
  const std::vector<SourceDocument> corpus = {
      Doc("dx", "Symptoms and findings."),
      Doc("rx", "Dose 5 mg."),
      Doc("both", "Symptoms then dose."),
  };
  llm::HashEmbedder emb(16, 1);
  BuildOptions opts;
  const auto r = BuildIndexes(corpus, emb, opts);
  ASSERT_EQ(r.assignments.size(), 3u);
  EXPECT_EQ(r.indexes.doctor.size(), 2u);
  EXPECT_EQ(r.indexes.pharmacist.size(), 2u);
  EXPECT_EQ(r.indexes.doctor.entries[0].chunk_id, "dx#0000");
  EXPECT_EQ(r.indexes.doctor.entries[1].chunk_id, "both#0000");
  EXPECT_EQ(r.indexes.pharmacist.entries[0].chunk_id, "rx#0000");
  EXPECT_EQ(r.indexes.doctor.dim, 16u);
  EXPECT_NO_THROW(r.indexes.doctor.Validate());

  EXPECT_EQ(CodeOf([&] { BuildIndexes({}, emb, opts); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { BuildIndexes({Doc("a", "x"), Doc("a", "y")}, emb, opts); }),
            ErrorCode::kInvalidArgument);
}

TEST(Build, BadEmbeddingNamesTheChunk) {
  class Broken : public llm::EmbeddingBackend {
   public:
    std::size_t dim() const override { return 2; }
    std::vector<EmbeddingVector> EmbedBatch(const std::vector<std::string>& t) override {
      std::vector<EmbeddingVector> out;
      for (const auto& s : t) {
        out.push_back(s == "poison" ? EmbeddingVector{{0.0f, 0.0f}} : EmbeddingVector{{1.0f, 0.0f}});
      }
      return out;
    }
  } broken;
  try {
    BuildIndexes({Doc("ok", "fine"), Doc("bad", "poison")}, broken, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmbedding);
    EXPECT_NE(std::string(e.what()).find("bad#0000"), std::string::npos);
  }
}

TEST(IndexFile, RoundTripsExactly) {
  std::mt19937_64 rng(5);
  TempDir dir;
  for (std::size_t n : {0u, 1u, 17u}) {
    const auto idx = testing::RandomIndex(rng, n, 24, Role::kPharmacist);
    SaveIndex(idx, dir / "x.idx");
    EXPECT_EQ(LoadIndex(dir / "x.idx"), idx);
    EXPECT_EQ(LoadIndex(dir / "x.idx", 24u), idx);
  }
}

TEST(IndexFile, CorruptionsMapToDistinctErrors) {
  std::mt19937_64 rng(6);
  TempDir dir;
  const auto path = dir / "x.idx";
  SaveIndex(testing::RandomIndex(rng, 3, 8), path);
  const std::string good = Slurp(path);

  EXPECT_EQ(CodeOf([&] { LoadIndex(path, 9u); }), ErrorCode::kDimMismatch);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  Spit(path, bad_magic);
  EXPECT_EQ(CodeOf([&] { LoadIndex(path); }), ErrorCode::kFormat);

  std::string bad_version = good;
  bad_version[8] = 99;
  Spit(path, bad_version);
  EXPECT_EQ(CodeOf([&] { LoadIndex(path); }), ErrorCode::kVersion);

  for (std::size_t cut : {std::size_t{4}, std::size_t{12}, std::size_t{20}, good.size() - 1}) {
    Spit(path, good.substr(0, cut));
    EXPECT_NE(CodeOf([&] { LoadIndex(path); }), ErrorCode::kInternal) << cut;
  }
  Spit(path, good.substr(0, good.size() - 1));
  EXPECT_EQ(CodeOf([&] { LoadIndex(path); }), ErrorCode::kTruncated);

  EXPECT_EQ(CodeOf([&] { LoadIndex(dir / "missing.idx"); }), ErrorCode::kMissingIndex);
}

TEST(Corpus, ParsesAndRoundTrips) {
  const std::string src =
      R"({"doc_id": "a", "title": "T", "body": "B", "metadata": {"k": "v"}}
{"doc_id": "b", "body": "C"}
)";
  const auto docs = ParseCorpus(src);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].metadata.at("k"), "v");
  EXPECT_EQ(docs[1].title, "");
  const auto again = ParseCorpus(SerializeCorpus(docs));
  EXPECT_EQ(SerializeCorpus(again), SerializeCorpus(docs));
}

TEST(Corpus, RejectsBrokenRecords) {
  EXPECT_EQ(CodeOf([] { ParseCorpus("{oops"); }), ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { ParseCorpus(R"({"doc_id": "a", "body": " "})"); }), ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { ParseCorpus(R"({"doc_id": "a", "body": "x"}
{"doc_id": "a", "body": "y"})"); }),
            ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { ParseCorpus(R"({"body": "x"})"); }), ErrorCode::kFormat);
}

}  // namespace
}  // namespace medpair::kb
