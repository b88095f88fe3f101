// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include "bacon/errors.hpp"
#include "bacon/format.hpp"
#include "bacon/text.hpp"

namespace bacon {
namespace {

using nlohmann::json;

std::string quote(const std::string& s) {
  return json(s).dump(-1, ' ', false, json::error_handler_t::replace);
}

void expect_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.contains(it.key())) throw SchemaError(ptr + "/" + it.key(), "unexpected key");
  }
  for (const char* k : keys) {
    if (!j.contains(k)) throw SchemaError(ptr + "/" + k, "missing key");
  }
}

std::string get_string(const json& j, const std::string& ptr, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw SchemaError(ptr + "/" + key, "expected a string");
  return v.get<std::string>();
}

const json& get_array(const json& j, const std::string& ptr, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw SchemaError(ptr + "/" + key, "expected an array");
  return v;
}

std::optional<Box> get_box(const json& v, const std::string& ptr) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_array() || v.size() != 4) throw SchemaError(ptr, "expected null or an array of 4 numbers");
  double c[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v[i].is_number()) throw SchemaError(ptr + "/" + std::to_string(i), "expected a number");
    c[i] = v[i].get<double>();
  }
  try {
    return Box(c[0], c[1], c[2], c[3]);
  } catch (const InvalidBox& e) {
    throw SchemaError(ptr, e.what());
  }
}

std::optional<MaskRLE> get_mask(const json& v, const std::string& ptr) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw SchemaError(ptr, "expected null or an RLE string");
  try {
    return MaskRLE::parse(v.get<std::string>());
  } catch (const InvalidMask& e) {
    throw SchemaError(ptr, e.what());
  }
}

}  // namespace

std::string to_json(const CaptionGraph& graph) {
  std::string out = "{\"overall\":[";
  for (std::size_t i = 0; i < graph.overall.size(); ++i) {
    const auto& s = graph.overall[i];
    if (i > 0) out.push_back(',');
    out += "{\"subtitle\":" + quote(s.subtitle) + ",\"text\":" + quote(s.text) + "}";
  }
  out += "],\"objects\":[";
  for (std::size_t i = 0; i < graph.objects.size(); ++i) {
    const auto& o = graph.objects[i];
    if (i > 0) out.push_back(',');
    out += "{\"name\":" + quote(o.name) + ",\"category\":" + quote(o.category) +
           ",\"description\":" + quote(o.description) + ",\"color\":" + quote(o.color) + ",\"box\":";
    if (o.box) {
      out += "[" + format_fixed(o.box->x1()) + "," + format_fixed(o.box->y1()) + "," +
             format_fixed(o.box->x2()) + "," + format_fixed(o.box->y2()) + "]";
    } else {
      out += "null";
    }
    out += ",\"mask\":";
    out += o.mask ? quote(o.mask->to_string()) : std::string("null");
    out += "}";
  }
  out += "],\"relationships\":[";
  for (std::size_t i = 0; i < graph.relationships.size(); ++i) {
    const auto& r = graph.relationships[i];
    if (i > 0) out.push_back(',');
    out += "{\"subject\":" + quote(r.subject) + ",\"predicate\":" + quote(r.predicate) +
           ",\"object\":" + quote(r.object) + "}";
  }
  out += "]}";
  return out;
}

CaptionGraph graph_from_json(const json& j, const std::string& pointer) {
  expect_keys(j, pointer, {"overall", "objects", "relationships"});
  CaptionGraph g;

  const json& overall = get_array(j, pointer, "overall");
  for (std::size_t i = 0; i < overall.size(); ++i) {
    std::string ptr = pointer + "/overall/" + std::to_string(i);
    expect_keys(overall[i], ptr, {"subtitle", "text"});
    g.overall.push_back({get_string(overall[i], ptr, "subtitle"), get_string(overall[i], ptr, "text")});
  }

  const json& objects = get_array(j, pointer, "objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    std::string ptr = pointer + "/objects/" + std::to_string(i);
    const json& o = objects[i];
    expect_keys(o, ptr, {"name", "category", "description", "color", "box", "mask"});
    g.objects.push_back(ObjectEntry{get_string(o, ptr, "name"), get_string(o, ptr, "category"),
                                    get_string(o, ptr, "description"), get_string(o, ptr, "color"),
                                    get_box(o.at("box"), ptr + "/box"),
                                    get_mask(o.at("mask"), ptr + "/mask")});
  }

  const json& rels = get_array(j, pointer, "relationships");
  for (std::size_t i = 0; i < rels.size(); ++i) {
    std::string ptr = pointer + "/relationships/" + std::to_string(i);
    expect_keys(rels[i], ptr, {"subject", "predicate", "object"});
    g.relationships.push_back({get_string(rels[i], ptr, "subject"), get_string(rels[i], ptr, "predicate"),
                               get_string(rels[i], ptr, "object")});
  }
  return g;
}

CaptionGraph from_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return graph_from_json(j);
}

}  // namespace bacon
