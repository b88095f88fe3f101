// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bacon/model.hpp"

namespace bacon {

/// Section titles and subtitle vocabulary of the caption string format.
///
///   %%Overall Description%%
///   &&Background&& A sunny park.
///   %%Object List%%
///   <dog 1>(category: dog; description: a small brown dog; color: brown)
///   %%Relationships%%
///   <dog 1> [runs in] <park 1>
struct GrammarConfig {
  std::array<std::string, 3> main_titles{"Overall Description", "Object List", "Relationships"};
  std::vector<std::string> canonical_subtitles{"Theme", "Style", "Background", "Foreground"};
  /// When false, unknown subtitles are carried through instead of rejected.
  bool strict = true;

  /// Throws ConfigError if titles are not three distinct non-empty strings
  /// or the subtitle list is empty.
  void check() const;

  friend bool operator==(const GrammarConfig&, const GrammarConfig&) = default;
};

/// Parses the string format. Fails fast with the first ParseError.
/// Blank lines and trailing whitespace are ignored; whitespace around
/// detail separators is not significant.
CaptionGraph parse(std::string_view input, const GrammarConfig& cfg = {});

/// Renders the string format: one line per section header, overall
/// section, object and relationship, LF-separated, no trailing newline.
/// Boxes and masks are not part of the string format.
/// Throws ParseError{ReservedCharInText} for fields holding grammar
/// characters (or line breaks).
std::string serialize(const CaptionGraph& graph, const GrammarConfig& cfg = {});

/// Canonical compact JSON with fixed key order; box coordinates carry
/// exactly four fractional digits, masks use the "WxH:runs" form.
std::string to_json(const CaptionGraph& graph);

/// Throws SchemaError with a JSON pointer to the first offending value.
CaptionGraph from_json(std::string_view json_text);

/// Same as from_json for an already-parsed value; `pointer` prefixes every
/// reported location.
CaptionGraph graph_from_json(const nlohmann::json& j, const std::string& pointer = "");

/// Example slots of the instruction template that callers may override.
std::vector<std::string> instruction_example_slots();

/// Version tag of the bundled instruction template.
std::string_view instruction_template_version();

/// Raw bundled template with {{slot}} placeholders.
std::string_view instruction_template();

/// Fills the instruction template with the grammar symbols of `cfg` and the
/// example blocks (defaults unless overridden by `examples`).
/// Throws UnknownSlot for a slot the template does not declare.
std::string build_instruction_prompt(const GrammarConfig& cfg,
                                     const std::vector<std::pair<std::string, std::string>>& examples = {});

}  // namespace bacon
