// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/providers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bacon/errors.hpp"
#include "bacon/text.hpp"

namespace bacon {
namespace {

using nlohmann::json;

constexpr char kSep = '\x1f';

std::string box_key(const Box& b) {
  return format_fixed(b.x1()) + "," + format_fixed(b.y1()) + "," + format_fixed(b.x2()) + "," +
         format_fixed(b.y2());
}

std::string key(std::initializer_list<std::string_view> parts) {
  std::string out;
  bool first = true;
  for (auto p : parts) {
    if (!first) out.push_back(kSep);
    first = false;
    out.append(p);
  }
  return out;
}

template <typename V>
const V* find_value(const std::vector<std::pair<std::string, V>>& table, const std::string& k) {
  for (const auto& [key, value] : table) {
    if (key == k) return &value;
  }
  return nullptr;
}

const json& field(const json& j, const std::string& ptr, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw SchemaError(ptr + "/" + name, "missing key");
  return j.at(name);
}

std::string string_field(const json& j, const std::string& ptr, const char* name) {
  const json& v = field(j, ptr, name);
  if (!v.is_string()) throw SchemaError(ptr + "/" + name, "expected a string");
  return v.get<std::string>();
}

double unit_field(const json& j, const std::string& ptr, const char* name) {
  const json& v = field(j, ptr, name);
  if (!v.is_number()) throw SchemaError(ptr + "/" + name, "expected a number");
  double d = v.get<double>();
  if (!(d >= 0.0 && d <= 1.0)) throw SchemaError(ptr + "/" + name, "expected a value in [0,1]");
  return d;
}

Box box_field(const json& j, const std::string& ptr, const char* name) {
  const json& v = field(j, ptr, name);
  std::string p = ptr + "/" + name;
  if (!v.is_array() || v.size() != 4) throw SchemaError(p, "expected an array of 4 numbers");
  for (const auto& c : v) {
    if (!c.is_number()) throw SchemaError(p, "expected an array of 4 numbers");
  }
  try {
    return Box(v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>());
  } catch (const InvalidBox& e) {
    throw SchemaError(p, e.what());
  }
}

const json& array_field(const json& j, const std::string& ptr, const char* name) {
  const json& v = field(j, ptr, name);
  if (!v.is_array()) throw SchemaError(ptr + "/" + name, "expected an array");
  return v;
}

}  // namespace

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("embedding dimensions differ: " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  if (a.values == b.values) return 1.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

EmbeddingVector TextEmbedder::embed_one(const std::string& text) const {
  auto v = embed(std::span<const std::string>(&text, 1));
  return std::move(v.at(0));
}

double TextEmbedder::similarity(const std::string& a, const std::string& b) const {
  std::string both[2] = {a, b};
  auto v = embed(both);
  return cosine(v.at(0), v.at(1));
}

std::uint32_t fnv1a32(std::string_view bytes) noexcept {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) != 0 || c >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

HashedBagOfWordsEmbedder::HashedBagOfWordsEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
}

std::vector<EmbeddingVector> HashedBagOfWordsEmbedder::embed(std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    EmbeddingVector v{std::vector<double>(dim_, 0.0)};
    for (const auto& tok : tokenize_words(t)) v.values[fnv1a32(tok) % dim_] += 1.0;
    double norm = 0.0;
    for (double x : v.values) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : v.values) x /= norm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

// --- FixtureTable -----------------------------------------------------------

void FixtureTable::add_image(std::string image_id) {
  if (!knows_image(image_id)) images_.push_back(std::move(image_id));
}

void FixtureTable::add_regions(std::string image_id, std::string query,
                               std::vector<ProposedRegion> regions) {
  std::stable_sort(regions.begin(), regions.end(), [](const ProposedRegion& a, const ProposedRegion& b) {
    return a.detector_confidence > b.detector_confidence;
  });
  regions_.emplace_back(key({image_id, query}), std::move(regions));
  add_image(std::move(image_id));
}

void FixtureTable::add_judgment(std::string image_id, const Box& box, std::string name, JudgeVerdict v) {
  judgments_.emplace_back(key({image_id, box_key(box), name}), v);
  add_image(std::move(image_id));
}

void FixtureTable::add_crop_score(std::string image_id, const Box& box, std::string text, double score) {
  crop_scores_.emplace_back(key({image_id, box_key(box), text}), score);
  add_image(std::move(image_id));
}

void FixtureTable::add_answer(std::string question, std::string answer, std::optional<std::string> context) {
  answers_.push_back({std::move(context), std::move(question), std::move(answer)});
}

bool FixtureTable::knows_image(std::string_view image_id) const {
  return std::find(images_.begin(), images_.end(), image_id) != images_.end();
}

const std::vector<ProposedRegion>* FixtureTable::regions(std::string_view image_id,
                                                         std::string_view query) const {
  return find_value(regions_, key({image_id, query}));
}

const JudgeVerdict* FixtureTable::judgment(std::string_view image_id, const Box& box,
                                           std::string_view name) const {
  return find_value(judgments_, key({image_id, box_key(box), name}));
}

const double* FixtureTable::crop_score(std::string_view image_id, const Box& box,
                                       std::string_view text) const {
  return find_value(crop_scores_, key({image_id, box_key(box), text}));
}

const std::string* FixtureTable::answer(std::string_view context, std::string_view question) const {
  for (const auto& a : answers_) {
    if (a.context && *a.context == context && a.question == question) return &a.answer;
  }
  for (const auto& a : answers_) {
    if (!a.context && a.question == question) return &a.answer;
  }
  return nullptr;
}

FixtureTable FixtureTable::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "fixture file must be a JSON object");
  FixtureTable t;
  if (j.contains("images")) {
    const json& imgs = array_field(j, "", "images");
    for (std::size_t i = 0; i < imgs.size(); ++i) {
      if (!imgs[i].is_string()) throw SchemaError("/images/" + std::to_string(i), "expected a string");
      t.add_image(imgs[i].get<std::string>());
    }
  }
  if (j.contains("regions")) {
    const json& arr = array_field(j, "", "regions");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string p = "/regions/" + std::to_string(i);
      std::vector<ProposedRegion> regions;
      const json& rs = array_field(arr[i], p, "regions");
      for (std::size_t k = 0; k < rs.size(); ++k) {
        std::string rp = p + "/regions/" + std::to_string(k);
        regions.push_back({box_field(rs[k], rp, "box"), unit_field(rs[k], rp, "confidence")});
      }
      t.add_regions(string_field(arr[i], p, "image_id"), string_field(arr[i], p, "query"), std::move(regions));
    }
  }
  if (j.contains("judgments")) {
    const json& arr = array_field(j, "", "judgments");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string p = "/judgments/" + std::to_string(i);
      const json& keep = field(arr[i], p, "keep");
      if (!keep.is_boolean()) throw SchemaError(p + "/keep", "expected a boolean");
      t.add_judgment(string_field(arr[i], p, "image_id"), box_field(arr[i], p, "box"),
                     string_field(arr[i], p, "name"), {keep.get<bool>(), unit_field(arr[i], p, "score")});
    }
  }
  if (j.contains("crop_scores")) {
    const json& arr = array_field(j, "", "crop_scores");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string p = "/crop_scores/" + std::to_string(i);
      t.add_crop_score(string_field(arr[i], p, "image_id"), box_field(arr[i], p, "box"),
                       string_field(arr[i], p, "text"), unit_field(arr[i], p, "score"));
    }
  }
  if (j.contains("answers")) {
    const json& arr = array_field(j, "", "answers");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string p = "/answers/" + std::to_string(i);
      std::optional<std::string> context;
      if (arr[i].contains("context")) context = string_field(arr[i], p, "context");
      t.add_answer(string_field(arr[i], p, "question"), string_field(arr[i], p, "answer"), std::move(context));
    }
  }
  return t;
}

FixtureTable FixtureTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fixture file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("", "invalid fixture JSON in " + path + ": " + e.what());
  }
  return from_json(j);
}

// --- Stub providers ---------------------------------------------------------

StubRegionProposer::StubRegionProposer(std::shared_ptr<const FixtureTable> fixtures)
    : fixtures_(std::move(fixtures)) {}

std::vector<ProposedRegion> StubRegionProposer::propose_regions(std::string_view image_id,
                                                                std::string_view query) const {
  if (!fixtures_->knows_image(image_id)) {
    throw BackendUnavailable("proposer: unknown image id '" + std::string(image_id) + "'");
  }
  const auto* r = fixtures_->regions(image_id, query);
  return r ? *r : std::vector<ProposedRegion>{};
}

StubRegionJudge::StubRegionJudge(std::shared_ptr<const FixtureTable> fixtures)
    : fixtures_(std::move(fixtures)) {}

JudgeVerdict StubRegionJudge::judge_region(std::string_view image_id, const Box& box,
                                           std::string_view name) const {
  const auto* v = fixtures_->judgment(image_id, box, name);
  if (v == nullptr) {
    throw BackendUnavailable("judge: no fixture for image '" + std::string(image_id) + "', box " +
                             box_key(box) + ", name '" + std::string(name) + "'");
  }
  return *v;
}

StubCropScorer::StubCropScorer(std::shared_ptr<const FixtureTable> fixtures)
    : fixtures_(std::move(fixtures)) {}

double StubCropScorer::score_crop(std::string_view image_id, const Box& box,
                                  std::string_view description) const {
  const auto* s = fixtures_->crop_score(image_id, box, description);
  if (s == nullptr) {
    throw BackendUnavailable("crop scorer: no fixture for image '" + std::string(image_id) + "', box " +
                             box_key(box) + ", text '" + std::string(description) + "'");
  }
  return *s;
}

StubQaModel::StubQaModel(std::shared_ptr<const FixtureTable> fixtures) : fixtures_(std::move(fixtures)) {}

std::string StubQaModel::answer(std::string_view context, std::string_view question) const {
  if (trim(context).empty()) return "unknown";
  const auto* a = fixtures_->answer(context, question);
  if (a == nullptr) throw BackendUnavailable("qa: no fixture answer for question '" + std::string(question) + "'");
  return a->empty() ? std::string("unknown") : *a;
}

ProviderSet make_stub_providers(std::shared_ptr<const FixtureTable> fixtures) {
  if (!fixtures) fixtures = std::make_shared<const FixtureTable>();
  return ProviderSet{
      std::make_shared<HashedBagOfWordsEmbedder>(),
      std::make_shared<StubCropScorer>(fixtures),
      std::make_shared<StubRegionProposer>(fixtures),
      std::make_shared<StubRegionJudge>(fixtures),
      std::make_shared<StubQaModel>(fixtures),
  };
}

}  // namespace bacon
