// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bacon/model.hpp"

namespace bacon {

struct DatasetRecord {
  std::string image_id;
  std::optional<std::string> image_ref;
  CaptionGraph caption;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// One rejected input line.
struct LineError {
  std::size_t line = 0;
  std::string message;
};

/// Canonical single-line JSON for a record, without the trailing newline.
std::string record_to_line(const DatasetRecord& record);

/// Throws SchemaError on a malformed line.
DatasetRecord record_from_line(std::string_view line);

/// Streams records from a JSONL file one line at a time. Blank lines are
/// skipped; malformed lines and repeated image ids are collected as
/// LineError and skipped.
class JsonlReader {
 public:
  /// Throws IoError when the file cannot be opened.
  explicit JsonlReader(const std::string& path);

  std::optional<DatasetRecord> next();
  const std::vector<LineError>& errors() const noexcept { return errors_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  std::unordered_set<std::string> seen_;
  std::vector<LineError> errors_;
};

struct LoadResult {
  std::vector<DatasetRecord> records;
  std::vector<LineError> errors;
};

LoadResult load_jsonl(const std::string& path);

/// One line per record, each terminated by '\n'. Throws IoError.
void write_jsonl(const std::vector<DatasetRecord>& records, const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Content hash of the caption only, for deduplication across image ids.
std::uint64_t record_hash(const DatasetRecord& record);

using TermCounts = std::vector<std::pair<std::string, std::size_t>>;

struct CorpusStats {
  TermCounts categories;
  TermCounts nouns;
  TermCounts predicates;
  std::size_t images = 0;
  std::size_t objects = 0;
  std::size_t relationships = 0;
};

/// First predicate token after dropping leading auxiliaries and articles,
/// lowercased; the first token itself when nothing else remains.
std::string predicate_head(std::string_view predicate);

/// Term lists are sorted by count descending then term ascending and cut
/// to top_n. Throws ConfigError when top_n is 0.
CorpusStats corpus_stats(const std::vector<DatasetRecord>& records, std::size_t top_n);

}  // namespace bacon
