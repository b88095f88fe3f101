// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "bacon/datasetio.hpp"
#include "bacon/errors.hpp"
#include "support/generators.hpp"

using namespace bacon;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "bacon_datasetio_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::vector<DatasetRecord> random_records(gen::Rng& rng, std::size_t n) {
  std::vector<DatasetRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    DatasetRecord r;
    r.image_id = "img-" + std::to_string(i);
    if (gen::coin(rng)) r.image_ref = "images/" + std::to_string(i) + ".jpg";
    r.caption = gen::graph(rng);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

TEST_CASE("write then read reproduces records and bytes") {
  gen::Rng rng(3);
  auto records = random_records(rng, 3);
  auto p = scratch("three.jsonl"), q = scratch("three_again.jsonl");
  write_jsonl(records, p.string());
  auto loaded = load_jsonl(p.string());
  CHECK(loaded.errors.empty());
  CHECK(loaded.records == records);
  write_jsonl(loaded.records, q.string());
  CHECK(slurp(p) == slurp(q));
  for (std::size_t i = 0; i < records.size(); ++i) CHECK(record_hash(loaded.records[i]) == record_hash(records[i]));
}

TEST_CASE("malformed lines are reported and skipped") {
  gen::Rng rng(4);
  auto records = random_records(rng, 2);
  auto p = scratch("bad.jsonl");
  spit(p, record_to_line(records[0]) + "\n{not json\n\n" + record_to_line(records[1]) + "\n" +
              record_to_line(records[0]) + "\n");
  auto loaded = load_jsonl(p.string());
  REQUIRE(loaded.records.size() == 2);
  REQUIRE(loaded.errors.size() == 2);
  CHECK(loaded.errors[0].line == 2);
  CHECK(loaded.errors[1].line == 5);  // duplicate image_id

  spit(p, "");
  loaded = load_jsonl(p.string());
  CHECK(loaded.records.empty());
  CHECK(loaded.errors.empty());

  CHECK_THROWS_AS(load_jsonl(scratch("missing/none.jsonl").string()), IoError);
  CHECK_THROWS_AS(record_from_line(R"({"image_id":3})"), SchemaError);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("corpus statistics") {
  CHECK(predicate_head("is next to") == "next");
  CHECK(predicate_head("holding") == "holding");
  CHECK(predicate_head("is") == "is");

  DatasetRecord a, b;
  a.image_id = "a";
  b.image_id = "b";
  ObjectEntry o;
  o.category = "Dog";
  o.name = "dog 1";
  a.caption.objects = {o};
  o.name = "dog 2";
  a.caption.objects.push_back(o);
  o.category = "cat";
  o.name = "cat 1";
  b.caption.objects = {o};
  a.caption.relationships = {{"dog 1", "is next to", "dog 2"}};
  b.caption.relationships = {{"cat 1", "next to", "cat 1"}, {"cat 1", "holding", "cat 1"}};
  auto s = corpus_stats({a, b}, 10);
  CHECK(s.images == 2);
  CHECK(s.objects == 3);
  CHECK(s.relationships == 3);
  CHECK(s.categories == TermCounts{{"dog", 2}, {"cat", 1}});
  CHECK(s.nouns == TermCounts{{"dog", 2}, {"cat", 1}});
  CHECK(s.predicates == TermCounts{{"next", 2}, {"holding", 1}});
  CHECK(corpus_stats({a, b}, 1).predicates.size() == 1);
  CHECK_THROWS_AS(corpus_stats({a}, 0), ConfigError);
}

TEST_CASE("totals equal a naive fold") {
  gen::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto records = random_records(rng, gen::uniform(rng, 0, 15));
    auto s = corpus_stats(records, 1000);
    std::size_t objects = 0, rels = 0, cat_total = 0;
    std::map<std::string, std::size_t> cats;
    for (const auto& r : records) {
      objects += r.caption.objects.size();
      rels += r.caption.relationships.size();
      for (const auto& o : r.caption.objects) ++cats[o.category];
    }
    for (const auto& [k, v] : s.categories) {
      cat_total += v;
      CHECK(cats[k] == v);
    }
    CHECK(s.objects == objects);
    CHECK(s.relationships == rels);
    CHECK(cat_total == objects);
    for (std::size_t i = 1; i < s.categories.size(); ++i)
      CHECK(s.categories[i - 1].second >= s.categories[i].second);
  }
}
