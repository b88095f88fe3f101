// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <set>

#include "bacon/errors.hpp"
#include "bacon/format.hpp"
#include "bacon/text.hpp"

namespace bacon {
namespace detail {
extern const std::string_view kInstructionTemplate;
}

namespace {

const std::vector<std::string>& example_slots() {
  static const std::vector<std::string> slots{"numbering",         "object_structure",
                                              "object_details",    "relationship_pattern",
                                              "one_way",           "full_example"};
  return slots;
}

std::set<std::string> declared_slots(std::string_view tpl) {
  std::set<std::string> out;
  std::size_t pos = 0;
  while ((pos = tpl.find("{{", pos)) != std::string_view::npos) {
    auto end = tpl.find("}}", pos + 2);
    if (end == std::string_view::npos) break;
    out.emplace(trim(tpl.substr(pos + 2, end - pos - 2)));
    pos = end + 2;
  }
  return out;
}

CaptionGraph sample_graph(const GrammarConfig& cfg) {
  const auto& subs = cfg.canonical_subtitles;
  CaptionGraph g;
  g.overall.push_back({subs.front(), "A quiet kitchen in the morning."});
  g.overall.push_back({subs.size() > 1 ? subs[1] : subs.front(),
                       "<man 1> pours coffee while <man 2> reads at the table."});
  g.objects.push_back({"man 1", "man", "a tall man in a grey apron", "grey", {}, {}});
  g.objects.push_back({"man 2", "man", "an older man wearing glasses", "blue", {}, {}});
  g.objects.push_back({"cup 1", "cup", "a white ceramic cup", "white", {}, {}});
  g.objects.push_back({"table 1", "table", "a round wooden table", "brown", {}, {}});
  g.relationships.push_back({"man 1", "holds", "cup 1"});
  g.relationships.push_back({"man 2", "sits at", "table 1"});
  g.relationships.push_back({"cup 1", "is on", "table 1"});
  return g;
}

}  // namespace

std::vector<std::string> instruction_example_slots() { return example_slots(); }

std::string_view instruction_template_version() { return BACON_INSTRUCTION_VERSION; }

std::string_view instruction_template() { return detail::kInstructionTemplate; }

std::string build_instruction_prompt(const GrammarConfig& cfg,
                                     const std::vector<std::pair<std::string, std::string>>& examples) {
  cfg.check();
  const std::string_view tpl = detail::kInstructionTemplate;
  const auto declared = declared_slots(tpl);

  std::string subtitles;
  for (const auto& s : cfg.canonical_subtitles) {
    if (!subtitles.empty()) subtitles += ", ";
    subtitles += s;
  }

  std::map<std::string, std::string, std::less<>> values{
      {"overall_title", cfg.main_titles[0]},
      {"objects_title", cfg.main_titles[1]},
      {"relationships_title", cfg.main_titles[2]},
      {"subtitles", subtitles},
      {"subtitle_example", cfg.canonical_subtitles.front()},
      {"numbering", "<person 1>, <person 2>, <dog 1>"},
      {"object_structure", "<object name>(category: the category; description: a short description; color: the main colors)"},
      {"object_details", "<cup 1>(category: cup; description: a white cup on the table; color: white)"},
      {"relationship_pattern", "<subject name> [predicate] <object name>"},
      {"one_way", "<man 1> [holds] <cup 1> is enough; do not add <cup 1> [is held by] <man 1>"},
      {"full_example", serialize(sample_graph(cfg), cfg)},
  };

  const auto& allowed = example_slots();
  for (const auto& [slot, text] : examples) {
    if (std::find(allowed.begin(), allowed.end(), slot) == allowed.end() || !declared.contains(slot)) {
      throw UnknownSlot("unknown instruction slot '" + slot + "'");
    }
    values[slot] = text;
  }

  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto open = tpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    auto close = tpl.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(tpl.substr(pos, open - pos));
    auto slot = trim(tpl.substr(open + 2, close - open - 2));
    auto it = values.find(slot);
    if (it == values.end()) throw UnknownSlot("template slot '" + std::string(slot) + "' has no value");
    out += it->second;
    pos = close + 2;
  }
  out.append(tpl.substr(pos));
  return out;
}

}  // namespace bacon
