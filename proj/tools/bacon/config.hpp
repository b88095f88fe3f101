// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

#include "bacon/format.hpp"

namespace bacon::cli {

struct Thresholds {
  double rho = 0.8;
  double rho_stable = 0.8;
  double tau_crop = 0.25;
  double tau_sim_ovd = 0.85;
  double tau_iou_ovd = 0.5;
  double tau_sim_sgg = 0.9;
  double tau_iou_sgg = 0.5;
  double tau_iou_region = 0.3;
  double tau_mask = 0.8;
  double tau_name = 0.85;
};

struct ProviderConfig {
  std::string kind = "stub";  // stub | http
  std::string endpoint;
  std::string fixture_path;
};

struct Config {
  Thresholds thresholds;
  ProviderConfig provider;
  GrammarConfig grammar;
  std::size_t max_candidates = 10;
  bool assign_same_category = true;
  bool normalize_consistency = true;

  /// Throws ConfigError on a threshold outside [0,1], an unknown provider
  /// kind, or an http provider without endpoint.
  void check() const;
};

/// Overlays a JSON config document onto `base`. Unknown keys are rejected.
Config apply_config_json(Config base, const nlohmann::json& doc);
Config load_config_file(const std::string& path, Config base = {});

nlohmann::ordered_json config_to_json(const Config& cfg);

}  // namespace bacon::cli
