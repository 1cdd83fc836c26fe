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

#include "core/dataset/fixture.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>

#include "core/common.hpp"

namespace medpair::dataset {
namespace {

using llm::json;
using llm::MockResponse;
using llm::MockRule;
using llm::SchemaTag;

// std distributions are implementation-defined; plain modulo keeps the
// fixture identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t Below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[Below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p",
                                   "r", "s", "t", "v", "z", "th", "br", "kr", "st"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
constexpr const char* kConditionSuffixes[] = {"syndrome", "fever", "disease", "disorder"};
constexpr const char* kDrugSuffixes[] = {"mab", "pril", "statin", "cillin", "zole", "vir"};
constexpr const char* kDepartments[] = {"cardiology", "dermatology", "neurology",
                                        "pulmonology", "gastroenterology", "rheumatology"};

class Lexis {
 public:
  explicit Lexis(Rng& rng) : rng_(rng) {}

  // Fresh pseudo-word of three syllables, never handed out twice.
  std::string Word() {
    for (;;) {
      std::string w;
      for (int s = 0; s < 3; ++s) {
        w += kOnsets[rng_.Below(std::size(kOnsets))];
        w += kVowels[rng_.Below(std::size(kVowels))];
      }
      w += "n";
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

std::string Pad4(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", i);
  return buf;
}

std::string Capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct CasePlan {
  std::string case_id;
  std::string token;  // appears in the complaint only
  std::vector<std::string> dx_words;
  std::vector<std::string> rx_words;
  std::string condition;
  std::string drug;
  std::vector<std::string> dx_distractors;  // three names
  std::string drug_distractor;
  std::string department;
  bool options = false;
};

std::vector<std::string> Designate(Rng& rng, const std::vector<CasePlan>& plans, int n) {
  std::vector<std::string> ids;
  for (const auto& p : plans) ids.push_back(p.case_id);
  rng.Shuffle(ids);
  ids.resize(static_cast<std::size_t>(n));
  return ids;
}

Options MakeOptions(Rng& rng, const std::string& gold, std::vector<std::string> others) {
  std::vector<std::string> texts = {gold};
  texts.insert(texts.end(), others.begin(), others.end());
  rng.Shuffle(texts);
  Options out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({std::string(1, static_cast<char>('A' + i)), texts[i]});
  }
  return out;
}

MockRule Rule(SchemaTag tag, std::vector<std::string> contains, json payload) {
  MockRule r;
  r.tag = tag;
  r.contains = std::move(contains);
  MockResponse resp;
  resp.payload = std::move(payload);
  r.responses.push_back(std::move(resp));
  return r;
}

json RankedPayload(const std::vector<std::string>& names) {
  json ranked = json::array();
  for (const auto& n : names) {
    ranked.push_back({{"condition", n}, {"rationale", "scripted"}});
  }
  return {{"ranked", ranked}};
}

json MedicationPayload(const std::string& drug, const std::optional<Options>& options) {
  json j = {{"recommended", json::array({{{"drug", drug}, {"rationale", "scripted"}}})},
            {"selected_option", nullptr}};
  if (options) {
    for (const auto& o : *options) {
      if (o.text == drug) j["selected_option"] = o.letter;
    }
  }
  return j;
}

std::string Join(const std::vector<std::string>& words, std::size_t from, std::size_t n) {
  std::string s;
  for (std::size_t i = from; i < from + n && i < words.size(); ++i) {
    if (!s.empty()) s += ' ';
    s += words[i];
  }
  return s;
}

}  // namespace

void FixtureSpec::Validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, m); };
  if (n_cases < 4 || n_cases > 9999) fail("fixture needs between 4 and 9999 cases");
  if (n_general_docs < 0) fail("n_general_docs must be >= 0");
  for (int n : {n_option_cases, n_reflection_cases, n_rejected_adoptions, n_naive_top1_miss,
                n_naive_top3_miss, n_naive_drug_miss, n_corrupt_drug}) {
    if (n < 0 || n > n_cases) fail("designated case counts must lie in [0, n_cases]");
  }
  if (n_naive_top1_miss + n_naive_top3_miss > n_cases) {
    fail("naive diagnosis misses exceed the case count");
  }
  if (embed_dim == 0) fail("embed_dim must be positive");
}

std::vector<ExpectedOutcome> Fixture::Expected(bool doctor_agent,
                                               bool pharmacist_agent) const {
  std::vector<ExpectedOutcome> out;
  for (const auto& c : cases) {
    ExpectedOutcome e;
    e.case_id = c.case_id;
    if (doctor_agent) {
      e.top1 = e.top3 = true;
    } else {
      e.top1 = !naive_top1_miss.count(c.case_id) && !naive_top3_miss.count(c.case_id);
      e.top3 = !naive_top3_miss.count(c.case_id);
    }
    e.drug = pharmacist_agent ? !corrupt_drug.count(c.case_id)
                              : !naive_drug_miss.count(c.case_id);
    out.push_back(std::move(e));
  }
  return out;
}

Fixture GenerateFixture(const FixtureSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  Lexis lexis(rng);
  Fixture fx;
  fx.spec = spec;

  std::vector<CasePlan> plans;
  for (int i = 1; i <= spec.n_cases; ++i) {
    CasePlan p;
    p.case_id = "case-" + Pad4(i);
    p.token = "C" + Pad4(i);
    for (int k = 0; k < 4; ++k) p.dx_words.push_back(lexis.Word());
    for (int k = 0; k < 4; ++k) p.rx_words.push_back(lexis.Word());
    p.condition = Capitalize(lexis.Word()) + " " +
                  kConditionSuffixes[rng.Below(std::size(kConditionSuffixes))];
    p.drug = lexis.Word() + kDrugSuffixes[rng.Below(std::size(kDrugSuffixes))];
    p.department = kDepartments[rng.Below(std::size(kDepartments))];
    plans.push_back(std::move(p));
  }
  const std::size_t n = plans.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    rng.Shuffle(others);
    for (int k = 0; k < 3; ++k) plans[i].dx_distractors.push_back(plans[others[k]].condition);
    plans[i].drug_distractor = plans[others[3 % others.size()]].drug;
  }
  for (const auto& id : Designate(rng, plans, spec.n_option_cases)) {
    for (auto& p : plans) {
      if (p.case_id == id) p.options = true;
    }
  }
  auto designate_set = [&](int count) {
    auto v = Designate(rng, plans, count);
    return std::set<std::string>(v.begin(), v.end());
  };
  fx.reflection_cases = designate_set(spec.n_reflection_cases);
  const auto rejected = designate_set(spec.n_rejected_adoptions);
  {
    auto v = Designate(rng, plans, spec.n_naive_top1_miss + spec.n_naive_top3_miss);
    fx.naive_top1_miss.insert(v.begin(), v.begin() + spec.n_naive_top1_miss);
    fx.naive_top3_miss.insert(v.begin() + spec.n_naive_top1_miss, v.end());
  }
  fx.naive_drug_miss = designate_set(spec.n_naive_drug_miss);
  fx.corrupt_drug = designate_set(spec.n_corrupt_drug);

  // Corpus.
  for (const auto& p : plans) {
    const auto& w = p.dx_words;
    kb::SourceDocument dx;
    dx.doc_id = "dx-" + p.token.substr(1);
    dx.title = p.condition;
    dx.body = p.condition + " presents with " + w[0] + " " + w[1] + " and persistent " + w[2] +
              ". Examination often reveals " + w[3] + " " + w[0] +
              ". Diagnostic criteria: " + w[0] + " " + w[1] + " " + w[2] + " " + w[3] +
              " on two visits. Differential diagnosis includes " + p.dx_distractors[0] + ".";
    dx.metadata = {{"expected_label", "DoctorOnly"}, {"case", p.case_id}};
    fx.corpus.push_back(std::move(dx));
  }
  for (const auto& p : plans) {
    const auto& w = p.rx_words;
    kb::SourceDocument rx;
    rx.doc_id = "rx-" + p.token.substr(1);
    rx.title = p.drug;
    rx.body = p.drug + " acts on " + w[0] + " " + w[1] + " receptors. Indicated for " + w[2] +
              " " + w[3] + " states. Dosage " + w[0] + " " + w[2] +
              " once daily. Contraindicated with " + w[1] + " " + w[3] + " inhibitors.";
    rx.metadata = {{"expected_label", "PharmacistOnly"}, {"case", p.case_id}};
    fx.corpus.push_back(std::move(rx));
  }
  for (int g = 1; g <= spec.n_general_docs; ++g) {
    kb::SourceDocument doc;
    doc.doc_id = "gen-" + Pad4(g);
    std::vector<std::string> w;
    for (int k = 0; k < 6; ++k) w.push_back(lexis.Word());
    doc.title = "General note " + Pad4(g);
    doc.body = "Patients with " + w[0] + " " + w[1] + " symptoms are diagnosed by " + w[2] +
               " testing.\n\nTreatment uses " + w[3] + " " + w[4] + " with " + w[5] +
               " monitoring.";
    doc.metadata = {{"expected_label", "Both"}};
    fx.corpus.push_back(std::move(doc));
  }

  // Cases.
  for (const auto& p : plans) {
    PatientCase c;
    c.case_id = p.case_id;
    c.complaint = "Patient " + p.token + " reports " + p.dx_words[0] + " " + p.dx_words[1] +
                  " for several days, with intermittent " + p.dx_words[2] + " " +
                  p.dx_words[3] + ".";
    c.gold_diagnosis = p.condition;
    c.gold_medication = p.drug;
    c.department = p.department;
    if (p.options) {
      c.diagnosis_options = MakeOptions(rng, p.condition, p.dx_distractors);
      std::vector<std::string> drugs = {p.drug_distractor};
      for (std::size_t k = 0; k < 2; ++k) {
        drugs.push_back(plans[(std::stoul(p.token.substr(1)) + k) % n].drug);
      }
      std::vector<std::string> uniq;
      for (const auto& d : drugs) {
        if (d != p.drug && std::find(uniq.begin(), uniq.end(), d) == uniq.end()) {
          uniq.push_back(d);
        }
      }
      c.medication_options = MakeOptions(rng, p.drug, uniq);
      // Gold answers as option letters, the usual multiple-choice form.
      c.gold_diagnosis = *ResolveOption(*c.diagnosis_options, p.condition);
      c.gold_medication = *ResolveOption(*c.medication_options, p.drug);
    }
    fx.cases.push_back(std::move(c));
  }

  // Mock chat script.
  auto& rules = fx.script.rules;
  rules.push_back(Rule(SchemaTag::kClassify, {"Document: dx-"},
                       {{"label", "DoctorOnly"}, {"rationale", "diagnostic reference"}}));
  rules.push_back(Rule(SchemaTag::kClassify, {"Document: rx-"},
                       {{"label", "PharmacistOnly"}, {"rationale", "drug monograph"}}));
  rules.push_back(Rule(SchemaTag::kClassify, {"Document: gen-"},
                       {{"label", "Both"}, {"rationale", "mixed guidance"}}));

  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = plans[i];
    const auto& c = fx.cases[i];
    const std::string dx_chunk = "[dx-" + p.token.substr(1) + "#";
    const std::string rx_chunk = "[rx-" + p.token.substr(1) + "#";
    const std::vector<std::string> dx_queries = {Join(p.dx_words, 0, 2), Join(p.dx_words, 2, 2)};
    const std::vector<std::string> rx_queries = {Join(p.rx_words, 0, 2), Join(p.rx_words, 2, 2)};
    const bool reflect = fx.reflection_cases.count(p.case_id) > 0;

    rules.push_back(Rule(
        SchemaTag::kPlan, {p.token},
        {{"department", p.department},
         {"queries", reflect ? json::array({"general assessment of presenting symptoms"})
                             : json(dx_queries)},
         {"reasoning", "scripted plan"}}));
    if (reflect) {
      rules.push_back(Rule(SchemaTag::kConfidence, {"Role: doctor", "Round: 0", p.token},
                           {{"sufficiency", 0.3},
                            {"accuracy", 0.5},
                            {"rationale", "evidence does not address the complaint"}}));
    }
    rules.push_back(Rule(SchemaTag::kQueries, {"Task: regenerate-queries", "Role: doctor", p.token},
                         {{"queries", dx_queries}}));
    rules.push_back(Rule(SchemaTag::kQueries, {"Task: regenerate-queries", "Role: pharmacist", p.token},
                         {{"queries", rx_queries}}));
    rules.push_back(Rule(SchemaTag::kQueries, {"Task: pharmacist-plan", p.token},
                         {{"queries", rx_queries}}));
    if (rejected.count(p.case_id)) {
      rules.push_back(Rule(SchemaTag::kAdoption, {p.token},
                           {{"adopt", false}, {"justification", "scripted rejection"}}));
    }

    // Diagnosis: naive answers are scripted per case; agent answers depend
    // on whether the planted document was retrieved.
    const std::vector<std::string> honest = {p.condition, p.dx_distractors[0], p.dx_distractors[1]};
    const std::vector<std::string> second = {p.dx_distractors[0], p.condition, p.dx_distractors[1]};
    const std::vector<std::string> wrong = p.dx_distractors;
    const std::vector<std::string>* naive_dx = &honest;
    if (fx.naive_top1_miss.count(p.case_id)) naive_dx = &second;
    if (fx.naive_top3_miss.count(p.case_id)) naive_dx = &wrong;
    rules.push_back(Rule(SchemaTag::kDiagnosis, {"Mode: naive-rag", p.token}, RankedPayload(*naive_dx)));
    rules.push_back(Rule(SchemaTag::kDiagnosis, {dx_chunk, p.token}, RankedPayload(honest)));
    rules.push_back(Rule(SchemaTag::kDiagnosis, {p.token}, RankedPayload(wrong)));

    const json good_med = MedicationPayload(p.drug, c.medication_options);
    const json bad_med = MedicationPayload(p.drug_distractor, c.medication_options);
    rules.push_back(Rule(SchemaTag::kMedication, {"Mode: naive-rag", p.token},
                         fx.naive_drug_miss.count(p.case_id) ? bad_med : good_med));
    if (fx.corrupt_drug.count(p.case_id)) {
      rules.push_back(Rule(SchemaTag::kMedication, {p.token}, bad_med));
    }
    rules.push_back(Rule(SchemaTag::kMedication, {rx_chunk, p.token}, good_med));
    rules.push_back(Rule(SchemaTag::kMedication, {p.token}, bad_med));
  }
  return fx;
}

void WriteFixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / name).string());
  };
  write("cases.jsonl", SerializeCases(fixture.cases));
  write("corpus.jsonl", kb::SerializeCorpus(fixture.corpus));
  write("chat_mock.jsonl", fixture.script.ToJsonLines());

  json expected = json::array();
  for (const auto& [d, ph] : std::vector<std::pair<bool, bool>>{
           {true, true}, {true, false}, {false, true}, {false, false}}) {
    json rows = json::array();
    for (const auto& e : fixture.Expected(d, ph)) {
      rows.push_back({{"case_id", e.case_id}, {"top1", e.top1}, {"top3", e.top3}, {"drug", e.drug}});
    }
    expected.push_back({{"doctor_agent", d}, {"pharmacist_agent", ph}, {"outcomes", rows}});
  }
  write("expected.json", expected.dump(2) + "\n");
}

}  // namespace medpair::dataset
