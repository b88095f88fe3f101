// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <fstream>
#include <iterator>
#include <utility>
#include <vector>

#include "bacon/errors.hpp"

namespace bacon::cli {
namespace {

using json = nlohmann::json;

template <typename T>
void read_field(const json& obj, const char* key, T& dst, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "/" + key + ": wrong type");
  }
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    if (!ok) throw ConfigError(where + "/" + k + ": unknown key");
  }
}

}  // namespace

void Config::check() const {
  const std::pair<const char*, double> all[] = {
      {"rho", thresholds.rho},
      {"rho_stable", thresholds.rho_stable},
      {"tau_crop", thresholds.tau_crop},
      {"tau_sim_ovd", thresholds.tau_sim_ovd},
      {"tau_iou_ovd", thresholds.tau_iou_ovd},
      {"tau_sim_sgg", thresholds.tau_sim_sgg},
      {"tau_iou_sgg", thresholds.tau_iou_sgg},
      {"tau_iou_region", thresholds.tau_iou_region},
      {"tau_mask", thresholds.tau_mask},
      {"tau_name", thresholds.tau_name},
  };
  for (const auto& [name, v] : all) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string("threshold ") + name + " must lie in [0,1]");
  }
  if (provider.kind != "stub" && provider.kind != "http")
    throw ConfigError("provider kind must be 'stub' or 'http'");
  if (provider.kind == "http" && provider.endpoint.empty())
    throw ConfigError("http provider requires an endpoint");
  if (provider.kind == "stub" && !provider.endpoint.empty())
    throw ConfigError("endpoint is only valid with the http provider");
  if (max_candidates == 0) throw ConfigError("max_candidates must be at least 1");
  grammar.check();
}

Config apply_config_json(Config cfg, const json& doc) {
  reject_unknown(doc, {"thresholds", "provider", "grammar", "grounding", "consistency"}, "");
  if (auto t = doc.find("thresholds"); t != doc.end()) {
    reject_unknown(*t,
                   {"rho", "rho_stable", "tau_crop", "tau_sim_ovd", "tau_iou_ovd", "tau_sim_sgg", "tau_iou_sgg",
                    "tau_iou_region", "tau_mask", "tau_name"},
                   "/thresholds");
    auto& th = cfg.thresholds;
    read_field(*t, "rho", th.rho, "/thresholds");
    read_field(*t, "rho_stable", th.rho_stable, "/thresholds");
    read_field(*t, "tau_crop", th.tau_crop, "/thresholds");
    read_field(*t, "tau_sim_ovd", th.tau_sim_ovd, "/thresholds");
    read_field(*t, "tau_iou_ovd", th.tau_iou_ovd, "/thresholds");
    read_field(*t, "tau_sim_sgg", th.tau_sim_sgg, "/thresholds");
    read_field(*t, "tau_iou_sgg", th.tau_iou_sgg, "/thresholds");
    read_field(*t, "tau_iou_region", th.tau_iou_region, "/thresholds");
    read_field(*t, "tau_mask", th.tau_mask, "/thresholds");
    read_field(*t, "tau_name", th.tau_name, "/thresholds");
  }
  if (auto p = doc.find("provider"); p != doc.end()) {
    reject_unknown(*p, {"kind", "endpoint", "fixture_path"}, "/provider");
    read_field(*p, "kind", cfg.provider.kind, "/provider");
    read_field(*p, "endpoint", cfg.provider.endpoint, "/provider");
    read_field(*p, "fixture_path", cfg.provider.fixture_path, "/provider");
  }
  if (auto g = doc.find("grammar"); g != doc.end()) {
    reject_unknown(*g, {"main_titles", "subtitles", "strict"}, "/grammar");
    std::vector<std::string> titles;
    read_field(*g, "main_titles", titles, "/grammar");
    if (g->contains("main_titles")) {
      if (titles.size() != 3) throw ConfigError("/grammar/main_titles: expected three titles");
      for (std::size_t i = 0; i < 3; ++i) cfg.grammar.main_titles[i] = titles[i];
    }
    read_field(*g, "subtitles", cfg.grammar.canonical_subtitles, "/grammar");
    read_field(*g, "strict", cfg.grammar.strict, "/grammar");
  }
  if (auto g = doc.find("grounding"); g != doc.end()) {
    reject_unknown(*g, {"max_candidates", "assign_same_category"}, "/grounding");
    read_field(*g, "max_candidates", cfg.max_candidates, "/grounding");
    read_field(*g, "assign_same_category", cfg.assign_same_category, "/grounding");
  }
  if (auto c = doc.find("consistency"); c != doc.end()) {
    reject_unknown(*c, {"normalize"}, "/consistency");
    read_field(*c, "normalize", cfg.normalize_consistency, "/consistency");
  }
  return cfg;
}

Config load_config_file(const std::string& path, Config base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return apply_config_json(std::move(base), doc);
}

nlohmann::ordered_json config_to_json(const Config& cfg) {
  nlohmann::ordered_json j;
  const auto& t = cfg.thresholds;
  j["thresholds"] = {{"rho", t.rho},
                     {"rho_stable", t.rho_stable},
                     {"tau_crop", t.tau_crop},
                     {"tau_sim_ovd", t.tau_sim_ovd},
                     {"tau_iou_ovd", t.tau_iou_ovd},
                     {"tau_sim_sgg", t.tau_sim_sgg},
                     {"tau_iou_sgg", t.tau_iou_sgg},
                     {"tau_iou_region", t.tau_iou_region},
                     {"tau_mask", t.tau_mask},
                     {"tau_name", t.tau_name}};
  j["provider"] = {{"kind", cfg.provider.kind},
                   {"endpoint", cfg.provider.endpoint.empty() ? nlohmann::ordered_json(nullptr)
                                                              : nlohmann::ordered_json(cfg.provider.endpoint)},
                   {"fixture_path", cfg.provider.fixture_path.empty()
                                        ? nlohmann::ordered_json(nullptr)
                                        : nlohmann::ordered_json(cfg.provider.fixture_path)}};
  j["grammar"] = {{"main_titles", cfg.grammar.main_titles},
                  {"subtitles", cfg.grammar.canonical_subtitles},
                  {"strict", cfg.grammar.strict}};
  j["grounding"] = {{"max_candidates", cfg.max_candidates}, {"assign_same_category", cfg.assign_same_category}};
  j["consistency"] = {{"normalize", cfg.normalize_consistency}};
  return j;
}

}  // namespace bacon::cli
