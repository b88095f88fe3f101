// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "bacon/errors.hpp"
#include "bacon/providers.hpp"
#include "httplib.h"

namespace bacon {
namespace {

using nlohmann::json;

json box_json(const Box& b) { return json::array({b.x1(), b.y1(), b.x2(), b.y2()}); }

// Every endpoint is read-only, so a failed attempt can be repeated safely.
class SidecarClient {
 public:
  explicit SidecarClient(HttpProviderOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) throw ConfigError("http provider requires an endpoint");
    if (options_.max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
  }

  json get(const std::string& path) const { return call(path, nullptr); }
  json post(const std::string& path, const json& body) const { return call(path, &body); }

 private:
  json call(const std::string& path, const json* body) const {
    std::string last_error;
    for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
      httplib::Client cli(options_.endpoint);
      auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
      auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
      cli.set_connection_timeout(secs.count(), usecs.count());
      cli.set_read_timeout(secs.count(), usecs.count());
      cli.set_write_timeout(secs.count(), usecs.count());

      auto res = body ? cli.Post(path, body->dump(), "application/json") : cli.Get(path);
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw BackendUnavailable(path + " returned HTTP " + std::to_string(res->status) + ": " + res->body);
      }
      try {
        return json::parse(res->body);
      } catch (const json::parse_error&) {
        throw BackendUnavailable(path + " returned malformed JSON");
      }
    }
    throw BackendUnavailable(options_.endpoint + path + " unreachable after " +
                             std::to_string(options_.max_attempts) + " attempt(s): " + last_error);
  }

  HttpProviderOptions options_;
};

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
  throw BackendUnavailable(path + " response malformed: " + what);
}

double finite_number(const json& v, const std::string& path, const char* what) {
  if (!v.is_number()) malformed(path, std::string(what) + " is not a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) malformed(path, std::string(what) + " is not finite");
  return d;
}

Box box_from(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) malformed(path, "box is not an array of 4 numbers");
  try {
    return Box(finite_number(v[0], path, "box"), finite_number(v[1], path, "box"),
               finite_number(v[2], path, "box"), finite_number(v[3], path, "box"));
  } catch (const InvalidBox& e) {
    malformed(path, e.what());
  }
}

class HttpTextEmbedder final : public TextEmbedder {
 public:
  HttpTextEmbedder(std::shared_ptr<const SidecarClient> client, std::size_t dim)
      : client_(std::move(client)), dim_(dim) {}

  std::size_t dim() const override { return dim_; }

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override {
    const std::string path = "/v1/embed";
    json res = client_->post(path, {{"texts", json(std::vector<std::string>(texts.begin(), texts.end()))}});
    if (!res.is_object() || !res.contains("dim") || !res.contains("vectors")) malformed(path, "missing keys");
    if (!res["dim"].is_number_unsigned() || res["dim"].get<std::size_t>() != dim_) {
      throw DimensionMismatch("sidecar embedding dimension changed from " + std::to_string(dim_));
    }
    const json& vecs = res["vectors"];
    if (!vecs.is_array() || vecs.size() != texts.size()) malformed(path, "vector count mismatch");
    std::vector<EmbeddingVector> out;
    out.reserve(vecs.size());
    for (const auto& v : vecs) {
      if (!v.is_array() || v.size() != dim_) {
        throw DimensionMismatch("sidecar returned a vector of the wrong dimension");
      }
      EmbeddingVector e;
      e.values.reserve(dim_);
      for (const auto& x : v) e.values.push_back(finite_number(x, path, "vector component"));
      out.push_back(std::move(e));
    }
    return out;
  }

 private:
  std::shared_ptr<const SidecarClient> client_;
  std::size_t dim_;
};

class HttpRegionProposer final : public RegionProposer {
 public:
  explicit HttpRegionProposer(std::shared_ptr<const SidecarClient> client) : client_(std::move(client)) {}

  std::vector<ProposedRegion> propose_regions(std::string_view image_id, std::string_view query) const override {
    const std::string path = "/v1/propose";
    json res = client_->post(path, {{"image_id", image_id}, {"query", query}});
    if (!res.is_object() || !res.contains("regions") || !res["regions"].is_array()) {
      malformed(path, "missing regions array");
    }
    std::vector<ProposedRegion> out;
    for (const auto& r : res["regions"]) {
      if (!r.is_object() || !r.contains("box") || !r.contains("confidence")) malformed(path, "bad region");
      double conf = finite_number(r["confidence"], path, "confidence");
      if (conf < 0.0 || conf > 1.0) malformed(path, "confidence outside [0,1]");
      out.push_back({box_from(r["box"], path), conf});
    }
    std::stable_sort(out.begin(), out.end(), [](const ProposedRegion& a, const ProposedRegion& b) {
      return a.detector_confidence > b.detector_confidence;
    });
    return out;
  }

 private:
  std::shared_ptr<const SidecarClient> client_;
};

class HttpRegionJudge final : public RegionJudge {
 public:
  explicit HttpRegionJudge(std::shared_ptr<const SidecarClient> client) : client_(std::move(client)) {}

  JudgeVerdict judge_region(std::string_view image_id, const Box& box, std::string_view name) const override {
    const std::string path = "/v1/judge";
    json res = client_->post(path, {{"image_id", image_id}, {"box", box_json(box)}, {"name", name}});
    if (!res.is_object() || !res.contains("keep") || !res["keep"].is_boolean() || !res.contains("score")) {
      malformed(path, "expected {keep, score}");
    }
    return {res["keep"].get<bool>(), finite_number(res["score"], path, "score")};
  }

 private:
  std::shared_ptr<const SidecarClient> client_;
};

class HttpCropScorer final : public CropScorer {
 public:
  explicit HttpCropScorer(std::shared_ptr<const SidecarClient> client) : client_(std::move(client)) {}

  double score_crop(std::string_view image_id, const Box& box, std::string_view description) const override {
    const std::string path = "/v1/score_crop";
    json res = client_->post(path, {{"image_id", image_id}, {"box", box_json(box)}, {"text", description}});
    if (!res.is_object() || !res.contains("score")) malformed(path, "expected {score}");
    double s = finite_number(res["score"], path, "score");
    if (s < 0.0 || s > 1.0) malformed(path, "score outside [0,1]");
    return s;
  }

 private:
  std::shared_ptr<const SidecarClient> client_;
};

class HttpQaModel final : public QaModel {
 public:
  explicit HttpQaModel(std::shared_ptr<const SidecarClient> client) : client_(std::move(client)) {}

  std::string answer(std::string_view context, std::string_view question) const override {
    const std::string path = "/v1/qa";
    json res = client_->post(path, {{"context", context}, {"question", question}});
    if (!res.is_object() || !res.contains("answer") || !res["answer"].is_string()) {
      malformed(path, "expected {answer}");
    }
    auto a = res["answer"].get<std::string>();
    return a.empty() ? std::string("unknown") : a;
  }

 private:
  std::shared_ptr<const SidecarClient> client_;
};

}  // namespace

ProviderSet make_http_providers(const HttpProviderOptions& options) {
  auto client = std::make_shared<const SidecarClient>(options);
  json health = client->get("/v1/health");
  if (!health.is_object() || !health.value("ok", false) || !health.contains("dim") ||
      !health["dim"].is_number_unsigned() || health["dim"].get<std::size_t>() == 0) {
    throw BackendUnavailable("sidecar health check failed: " + health.dump());
  }
  auto dim = health["dim"].get<std::size_t>();
  return ProviderSet{
      std::make_shared<HttpTextEmbedder>(client, dim),
      std::make_shared<HttpCropScorer>(client),
      std::make_shared<HttpRegionProposer>(client),
      std::make_shared<HttpRegionJudge>(client),
      std::make_shared<HttpQaModel>(client),
  };
}

}  // namespace bacon
