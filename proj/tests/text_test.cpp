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
#include "core/text.hpp"
#include "core/vector.hpp"
#include "support.hpp"

namespace medpair {
namespace {

TEST(Text, NormalizeAnswerCollapsesCaseSpaceAndTrailingPunctuation) {
  EXPECT_EQ(text::NormalizeAnswer("  Acute   Bronchitis. "), "acute bronchitis");
  EXPECT_EQ(text::NormalizeAnswer("Acute Bronchitis "), text::NormalizeAnswer("acute bronchitis"));
  EXPECT_EQ(text::NormalizeAnswer("x!?"), "x");
  EXPECT_EQ(text::NormalizeAnswer(""), "");
  EXPECT_EQ(text::NormalizeAnswer("..."), "");
}

TEST(Text, NormalizeAnswerIsIdempotent) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto s = testing::RandomText(rng, 8) + (i % 2 ? " ." : "\t");
    const auto once = text::NormalizeAnswer(s);
    EXPECT_EQ(text::NormalizeAnswer(once), once);
  }
}

TEST(Text, TokenizeSplitsOnPunctuationAndFoldsCase) {
  const std::vector<std::string> want = {"the", "cat", "sat", "e", "g", "x"};
  EXPECT_EQ(text::Tokenize("The cat, sat (e.g. X)"), want);
  EXPECT_TRUE(text::Tokenize("  ,.;  ").empty());
}

TEST(Text, SplitLinesHandlesCarriageReturnsAndMissingFinalNewline) {
  const auto lines = text::SplitLines("a\r\nb\n\nc");
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "a");
  EXPECT_EQ(lines[1], "b");
  EXPECT_EQ(lines[2], "");
  EXPECT_EQ(lines[3], "c");
}

TEST(Text, TrimAndContains) {
  EXPECT_EQ(text::Trim("\t x y \n"), "x y");
  EXPECT_TRUE(text::Contains("abc", "b"));
  EXPECT_FALSE(text::Contains("abc", "d"));
}

TEST(Vector, NormalizeProducesUnitNormAndRejectsDegenerate) {
  EmbeddingVector v{{3.0f, 4.0f}};
  ASSERT_TRUE(v.Normalize());
  EXPECT_NEAR(v.Norm(), 1.0, 1e-6);
  EmbeddingVector zero{{0.0f, 0.0f}};
  EXPECT_FALSE(zero.Normalize());
  EmbeddingVector nan{{std::nanf(""), 1.0f}};
  EXPECT_FALSE(nan.AllFinite());
  EXPECT_FALSE(nan.Normalize());
}

TEST(Vector, DotAccumulatesInDouble) {
  const std::vector<float> a = {1.0f, 2.0f, 3.0f};
  const std::vector<float> b = {4.0f, -5.0f, 6.0f};
  EXPECT_DOUBLE_EQ(Dot(a, b), 12.0);
}

TEST(Common, RoleAndErrorCodeNames) {
  EXPECT_EQ(ToString(Role::kDoctor), "doctor");
  EXPECT_EQ(ParseRole("pharmacist"), Role::kPharmacist);
  EXPECT_THROW(ParseRole("nurse"), Error);
  const Error e(ErrorCode::kSchema, "bad");
  EXPECT_EQ(e.code(), ErrorCode::kSchema);
  EXPECT_FALSE(std::string(ToString(ErrorCode::kTransport)).empty());
}

}  // namespace
}  // namespace medpair
