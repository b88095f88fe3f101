// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/datasetio.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "bacon/errors.hpp"
#include "bacon/format.hpp"
#include "bacon/providers.hpp"
#include "bacon/text.hpp"

namespace bacon {
namespace {

std::string json_string(std::string_view s) {
  return nlohmann::json(std::string(s)).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

TermCounts top_terms(const std::map<std::string, std::size_t>& counts, std::size_t top_n) {
  TermCounts out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > top_n) out.resize(top_n);
  return out;
}

}  // namespace

std::string record_to_line(const DatasetRecord& record) {
  std::string out = "{\"image_id\":" + json_string(record.image_id) + ",\"image_ref\":";
  out += record.image_ref ? json_string(*record.image_ref) : "null";
  out += ",\"caption\":" + to_json(record.caption) + "}";
  return out;
}

DatasetRecord record_from_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("/", "record must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k != "image_id" && k != "image_ref" && k != "caption") throw SchemaError("/" + k, "unknown key");
  }
  DatasetRecord r;
  auto id = j.find("image_id");
  if (id == j.end() || !id->is_string() || id->get<std::string>().empty())
    throw SchemaError("/image_id", "expected a non-empty string");
  r.image_id = id->get<std::string>();
  if (auto ref = j.find("image_ref"); ref != j.end() && !ref->is_null()) {
    if (!ref->is_string()) throw SchemaError("/image_ref", "expected a string or null");
    r.image_ref = ref->get<std::string>();
  }
  auto cap = j.find("caption");
  if (cap == j.end()) throw SchemaError("/caption", "missing");
  r.caption = graph_from_json(*cap, "/caption");
  return r;
}

JsonlReader::JsonlReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open " + path);
}

std::optional<DatasetRecord> JsonlReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    try {
      DatasetRecord r = record_from_line(line);
      if (!seen_.insert(r.image_id).second) {
        errors_.push_back({line_no_, "duplicate image_id '" + r.image_id + "'"});
        continue;
      }
      return r;
    } catch (const Error& e) {
      errors_.push_back({line_no_, e.what()});
    }
  }
  if (in_.bad()) throw IoError("read failure in " + path_);
  return std::nullopt;
}

LoadResult load_jsonl(const std::string& path) {
  JsonlReader reader(path);
  LoadResult out;
  while (auto r = reader.next()) out.records.push_back(std::move(*r));
  out.errors = reader.errors();
  return out;
}

void write_jsonl(const std::vector<DatasetRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& r : records) out << record_to_line(r) << '\n';
  out.flush();
  if (!out) throw IoError("write failure in " + path);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t record_hash(const DatasetRecord& record) { return fnv1a64(to_json(record.caption)); }

std::string predicate_head(std::string_view predicate) {
  static const std::unordered_set<std::string> kStop = {"is", "are", "was", "were", "be", "being",
                                                        "been", "am", "a", "an", "the"};
  auto words = tokenize_words(predicate);
  for (const auto& w : words) {
    if (kStop.count(w) == 0) return w;
  }
  return words.empty() ? std::string() : words.front();
}

CorpusStats corpus_stats(const std::vector<DatasetRecord>& records, std::size_t top_n) {
  if (top_n == 0) throw ConfigError("top_n must be at least 1");
  std::map<std::string, std::size_t> categories, nouns, predicates;
  CorpusStats s;
  s.images = records.size();
  for (const auto& r : records) {
    s.objects += r.caption.objects.size();
    s.relationships += r.caption.relationships.size();
    for (const auto& o : r.caption.objects) {
      auto c = to_lower_ascii(collapse_whitespace(o.category));
      if (!c.empty()) ++categories[c];
      auto n = to_lower_ascii(collapse_whitespace(category_head(o.name)));
      if (!n.empty()) ++nouns[n];
    }
    for (const auto& rel : r.caption.relationships) {
      auto p = predicate_head(rel.predicate);
      if (!p.empty()) ++predicates[p];
    }
  }
  s.categories = top_terms(categories, top_n);
  s.nouns = top_terms(nouns, top_n);
  s.predicates = top_terms(predicates, top_n);
  return s;
}

}  // namespace bacon
