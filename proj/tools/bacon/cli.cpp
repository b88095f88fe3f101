// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bacon/consistency.hpp"
#include "bacon/datasetio.hpp"
#include "bacon/errors.hpp"
#include "bacon/evalsuite.hpp"
#include "bacon/format.hpp"
#include "bacon/grounding.hpp"
#include "bacon/model.hpp"
#include "bacon/providers.hpp"
#include "bacon/regionqa.hpp"
#include "bacon/text.hpp"
#include "bacon/videodiff.hpp"
#include "config.hpp"

namespace bacon::cli {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

struct Options {
  std::string config_path;
  std::string provider;
  std::string fixtures;
  std::string endpoint;
  bool json_errors = false;
  bool version = false;

  std::string input = "-";
  std::string image_id;
  bool trace = false;
  std::vector<std::string> examples;
  std::string answers_path;
  bool raw = false;
  std::string frames_path;
  std::string diff_format = "json";
  bool keep_ids = false;
  std::string dataset_path;
  std::size_t top_n = 10;
  std::string box;
  std::string regions_path;
  std::string question;
  std::string pred_path;
  std::string gt_path;
  std::string cases_path;
  std::string cqa_mode = "exact";
  std::size_t jobs = 1;

  std::optional<double> rho, rho_stable, tau_crop, tau_sim, tau_iou, iou_min, tau_mask, tau_name;
};

// Usage problems found after CLI11 accepted the arguments.
struct UsageError : Error {
  using Error::Error;
};

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") return read_all(in);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  return read_all(f);
}

bool looks_like_json(std::string_view text) {
  auto t = trim(text);
  return !t.empty() && t.front() == '{';
}

// A caption arrives either in the string format or as JSON.
CaptionGraph read_graph(const std::string& text, const GrammarConfig& grammar) {
  return looks_like_json(text) ? from_json(text) : parse(text, grammar);
}

json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", where + ": invalid JSON: " + e.what());
  }
}

// Calls fn(value, line_number) for each non-blank line.
template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(f, line)) {
    ++n;
    if (trim(line).empty()) continue;
    json v;
    try {
      v = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError("/", path + ":" + std::to_string(n) + ": invalid JSON: " + e.what());
    }
    try {
      fn(v, n);
    } catch (const SchemaError& e) {
      throw SchemaError(e.pointer(), path + ":" + std::to_string(n) + ": " + e.detail());
    } catch (const json::exception& e) {
      throw SchemaError("/", path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

Box box_from(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 4) throw SchemaError(pointer, "expected [x1,y1,x2,y2]");
  for (const auto& v : j)
    if (!v.is_number()) throw SchemaError(pointer, "expected numbers");
  try {
    return Box(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
  } catch (const InvalidBox& e) {
    throw SchemaError(pointer, e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& pointer) {
  if (!obj.is_object()) throw SchemaError(pointer.empty() ? "/" : pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(pointer + "/" + key, "missing");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& pointer) {
  const auto& v = field(obj, key, pointer);
  if (!v.is_string()) throw SchemaError(pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

void print_json(std::ostream& out, const ojson& j) { out << j.dump(2) << '\n'; }

class Runner {
 public:
  Runner(const Options& o, std::istream& in, std::ostream& out) : o_(o), in_(in), out_(out) {}

  void set_config(Config cfg) { cfg_ = std::move(cfg); }
  const Config& config() const { return cfg_; }

  int parse_cmd() {
    out_ << to_json(parse(read_input(o_.input, in_), cfg_.grammar)) << '\n';
    return kExitOk;
  }

  int serialize_cmd() {
    out_ << serialize(from_json(read_input(o_.input, in_)), cfg_.grammar) << '\n';
    return kExitOk;
  }

  int json_cmd() {
    out_ << to_json(read_graph(read_input(o_.input, in_), cfg_.grammar)) << '\n';
    return kExitOk;
  }

  int validate_cmd() {
    auto report = validate(read_graph(read_input(o_.input, in_), cfg_.grammar));
    ojson j;
    j["valid"] = !report.has_errors();
    ojson list = ojson::array();
    for (const auto& v : report.violations) {
      ojson x;
      x["severity"] = to_string(v.severity);
      x["section"] = to_string(v.section);
      x["index"] = v.index ? ojson(*v.index) : ojson(nullptr);
      x["message"] = v.message;
      list.push_back(std::move(x));
    }
    j["violations"] = std::move(list);
    print_json(out_, j);
    return report.has_errors() ? kExitDomain : kExitOk;
  }

  int prompt_cmd() {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& slot_arg : o_.examples) {
      auto eq = slot_arg.find('=');
      if (eq == std::string::npos) throw UsageError("--example expects slot=file, got '" + slot_arg + "'");
      overrides.emplace_back(slot_arg.substr(0, eq), read_input(slot_arg.substr(eq + 1), in_));
    }
    out_ << build_instruction_prompt(cfg_.grammar, overrides);
    return kExitOk;
  }

  int renumber_cmd() {
    auto text = read_input(o_.input, in_);
    auto g = renumber_graph(read_graph(text, cfg_.grammar));
    out_ << (looks_like_json(text) ? to_json(g) : serialize(g, cfg_.grammar)) << '\n';
    return kExitOk;
  }

  int ground_cmd() {
    auto g = read_graph(read_input(o_.input, in_), cfg_.grammar);
    GroundingConfig gc;
    gc.crop_sim_threshold = cfg_.thresholds.tau_crop;
    gc.max_candidates = cfg_.max_candidates;
    gc.assign_same_category = cfg_.assign_same_category;
    auto result = ground_graph(g, o_.image_id, providers(), gc);
    bool backend_failed = false;
    for (const auto& oc : result.outcomes) backend_failed = backend_failed || oc.error.has_value();
    if (o_.trace) {
      ojson j;
      j["graph"] = ojson::parse(to_json(result.graph));
      j["trace"] = trace_to_json(result.outcomes);
      print_json(out_, j);
    } else {
      out_ << to_json(result.graph) << '\n';
    }
    return backend_failed ? kExitBackend : kExitOk;
  }

  int consistency_cmd() {
    auto text = read_input(o_.answers_path, in_);
    std::vector<std::string> answers;
    if (looks_like_json(text) || trim(text).starts_with("[")) {
      auto j = parse_json_text(text, "answers");
      if (!j.is_array()) throw SchemaError("/", "answers must be a JSON array of strings");
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) throw SchemaError("/" + std::to_string(i), "expected a string");
        answers.push_back(j[i].get<std::string>());
      }
    } else {
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line))
        if (!trim(line).empty()) answers.emplace_back(trim(line));
    }
    ConsistencyConfig cc{cfg_.thresholds.rho, cfg_.normalize_consistency};
    auto s = set_score(answers, *providers().text_embedder, cc);
    ojson j;
    j["config"] = config_to_json(cfg_);
    j["answers"] = answers.size();
    j["set_score"] = s.set_score;
    j["pair_matrix"] = s.pair_matrix;
    print_json(out_, j);
    return kExitOk;
  }

  int diff_cmd() {
    if (o_.diff_format != "json" && o_.diff_format != "ansi" && o_.diff_format != "html")
      throw UsageError("--format must be ansi, html or json");
    std::vector<TrackedFrame> frames;
    for_each_jsonl(o_.frames_path, [&](const json& v, std::size_t) { frames.push_back(frame_from_json(v)); });
    if (!o_.keep_ids) frames = merge_track_ids(frames, cfg_.thresholds.tau_mask);
    std::stable_sort(frames.begin(), frames.end(),
                     [](const TrackedFrame& a, const TrackedFrame& b) { return a.frame_index < b.frame_index; });
    const auto& embedder = *providers().text_embedder;
    std::vector<DiffReport> reports;
    for (std::size_t k = 1; k < frames.size(); ++k)
      reports.push_back(diff_captions(frames[k - 1], frames[k], embedder, cfg_.thresholds.rho_stable));
    if (o_.diff_format == "json") {
      ojson j;
      j["config"] = config_to_json(cfg_);
      ojson ids = ojson::array();
      for (const auto& f : frames) {
        ojson x;
        x["frame_index"] = f.frame_index;
        ojson t = ojson::object();
        for (const auto& [name, id] : f.track_ids) t[name] = id;
        x["track_ids"] = std::move(t);
        ids.push_back(std::move(x));
      }
      j["tracks"] = std::move(ids);
      ojson diffs = ojson::array();
      for (const auto& r : reports) diffs.push_back(diff_to_json(r));
      j["diffs"] = std::move(diffs);
      print_json(out_, j);
    } else {
      for (const auto& r : reports) out_ << (o_.diff_format == "ansi" ? render_ansi(r) : render_html(r));
    }
    return kExitOk;
  }

  int stats_cmd() {
    auto loaded = load_jsonl(o_.dataset_path);
    auto s = corpus_stats(loaded.records, o_.top_n);
    auto terms = [](const TermCounts& tc) {
      ojson a = ojson::array();
      for (const auto& [term, count] : tc) a.push_back({{"term", term}, {"count", count}});
      return a;
    };
    ojson j;
    j["totals"] = {{"images", s.images}, {"objects", s.objects}, {"relationships", s.relationships}};
    j["categories"] = terms(s.categories);
    j["nouns"] = terms(s.nouns);
    j["predicates"] = terms(s.predicates);
    ojson errors = ojson::array();
    for (const auto& e : loaded.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
    j["errors"] = std::move(errors);
    print_json(out_, j);
    return kExitOk;
  }

  int point_cmd() {
    auto g = read_graph(read_input(o_.input, in_), cfg_.grammar);
    Box target = [&] {
      try {
        return Box::parse(o_.box);
      } catch (const InvalidBox& e) {
        throw UsageError(std::string("--box: ") + e.what());
      }
    }();
    auto d = region_description(g, RegionQuery{target, cfg_.thresholds.tau_iou_region});
    ojson j;
    j["text"] = d.text;
    j["skipped"] = d.skipped;
    print_json(out_, j);
    return kExitOk;
  }

  int pointing_cmd() {
    auto g = read_graph(read_input(o_.input, in_), cfg_.grammar);
    auto rj = parse_json_text(read_input(o_.regions_path, in_), o_.regions_path);
    if (!rj.is_array()) throw SchemaError("/", "regions must be a JSON array of boxes");
    std::vector<Box> regions;
    for (std::size_t i = 0; i < rj.size(); ++i) regions.push_back(box_from(rj[i], "/" + std::to_string(i)));
    auto r = pointing_select(g, o_.question, regions, *providers().text_embedder);
    ojson j;
    j["index"] = r.index;
    j["scores"] = r.scores;
    print_json(out_, j);
    return kExitOk;
  }

  int eval_ovd_cmd() {
    auto parse_set = [](const json& v, DetectionSet& set) {
      const auto& items = field(v, "detections", "");
      if (!items.is_array()) throw SchemaError("/detections", "expected an array");
      for (std::size_t i = 0; i < items.size(); ++i) {
        std::string p = "/detections/" + std::to_string(i);
        Detection d{string_field(items[i], "label", p), box_from(field(items[i], "box", p), p + "/box"), {}};
        if (auto c = items[i].find("confidence"); c != items[i].end() && !c->is_null()) {
          if (!c->is_number()) throw SchemaError(p + "/confidence", "expected a number");
          d.confidence = c->get<double>();
        }
        set.items.push_back(std::move(d));
      }
    };
    auto images = join_images<DetectionSet>(parse_set);
    OvdOptions opts{cfg_.thresholds.tau_sim_ovd, cfg_.thresholds.tau_iou_ovd};
    return emit_report("ovd", eval_ovd(images, *providers().text_embedder, opts, o_.jobs));
  }

  int eval_sgg_cmd() {
    auto parse_set = [](const json& v, TripletSet& set) {
      const auto& items = field(v, "triplets", "");
      if (!items.is_array()) throw SchemaError("/triplets", "expected an array");
      for (std::size_t i = 0; i < items.size(); ++i) {
        std::string p = "/triplets/" + std::to_string(i);
        set.items.push_back(Triplet{string_field(items[i], "subject", p), string_field(items[i], "predicate", p),
                                    string_field(items[i], "object", p),
                                    box_from(field(items[i], "subject_box", p), p + "/subject_box"),
                                    box_from(field(items[i], "object_box", p), p + "/object_box")});
      }
    };
    auto images = join_images<TripletSet>(parse_set);
    SggOptions opts{cfg_.thresholds.tau_sim_sgg, cfg_.thresholds.tau_iou_sgg};
    return emit_report("sgg", eval_sgg_recall(images, *providers().text_embedder, opts, o_.jobs));
  }

  int eval_layout_cmd() {
    auto parse_set = [](const json& v, Layout& set) {
      const auto& items = field(v, "layout", "");
      if (!items.is_array()) throw SchemaError("/layout", "expected an array");
      for (std::size_t i = 0; i < items.size(); ++i) {
        std::string p = "/layout/" + std::to_string(i);
        set.items.push_back(LayoutItem{string_field(items[i], "name", p), box_from(field(items[i], "box", p), p + "/box")});
      }
    };
    auto images = join_images<Layout>(parse_set);
    NameMatchOptions opts{cfg_.thresholds.tau_name};
    return emit_report("layout", eval_layout(images, *providers().text_embedder, opts, o_.jobs));
  }

  int eval_objects_cmd() {
    auto parse_set = [](const json& v, std::vector<std::string>& set) {
      const auto& items = field(v, "objects", "");
      if (!items.is_array()) throw SchemaError("/objects", "expected an array");
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].is_string()) throw SchemaError("/objects/" + std::to_string(i), "expected a string");
        set.push_back(items[i].get<std::string>());
      }
    };
    auto images = join_images<std::vector<std::string>>(parse_set);
    NameMatchOptions opts{cfg_.thresholds.tau_name};
    return emit_report("objects", object_list_pr(images, *providers().text_embedder, opts, o_.jobs));
  }

  int eval_cqa_cmd() {
    CqaMode mode;
    if (o_.cqa_mode == "exact") {
      mode = CqaMode::Exact;
    } else if (o_.cqa_mode == "vqa") {
      mode = CqaMode::Vqa;
    } else {
      throw UsageError("--mode must be exact or vqa");
    }
    std::vector<CqaCase> cases;
    for_each_jsonl(o_.cases_path, [&](const json& v, std::size_t) {
      CqaCase c;
      const auto& cap = field(v, "caption", "");
      if (cap.is_string()) {
        c.caption = cap.get<std::string>();
      } else {
        c.caption = serialize(graph_from_json(cap, "/caption"), cfg_.grammar);
      }
      c.question = string_field(v, "question", "");
      const auto& ans = field(v, "answers", "");
      if (!ans.is_array()) throw SchemaError("/answers", "expected an array");
      for (std::size_t i = 0; i < ans.size(); ++i) {
        if (!ans[i].is_string()) throw SchemaError("/answers/" + std::to_string(i), "expected a string");
        c.answers.push_back(ans[i].get<std::string>());
      }
      cases.push_back(std::move(c));
    });
    return emit_report("cqa", eval_cqa(cases, *providers().qa_model, mode, o_.jobs));
  }

 private:
  const ProviderSet& providers() {
    if (providers_) return *providers_;
    if (cfg_.provider.kind == "http") {
      HttpProviderOptions ho;
      ho.endpoint = cfg_.provider.endpoint;
      providers_ = make_http_providers(ho);
    } else {
      auto table = cfg_.provider.fixture_path.empty()
                       ? std::make_shared<const FixtureTable>()
                       : std::make_shared<const FixtureTable>(FixtureTable::load(cfg_.provider.fixture_path));
      providers_ = make_stub_providers(table);
    }
    return *providers_;
  }

  // Pairs predictions with ground truth by image_id: gt order first, then
  // images that only appear among predictions.
  template <typename T, typename ParseFn>
  std::vector<ImagePair<T>> join_images(ParseFn parse_set) {
    std::vector<ImagePair<T>> images;
    std::map<std::string, std::size_t> index;
    auto load = [&](const std::string& path, bool is_gt) {
      for_each_jsonl(path, [&](const json& v, std::size_t) {
        std::string id = string_field(v, "image_id", "");
        auto [it, fresh] = index.emplace(id, images.size());
        if (fresh) images.push_back(ImagePair<T>{id, T{}, T{}});
        auto& pair = images[it->second];
        T parsed{};
        parse_set(v, parsed);
        auto& dst = is_gt ? pair.gts : pair.preds;
        if (!fresh && dst_seen(is_gt, id)) throw SchemaError("/image_id", "duplicate image_id '" + id + "'");
        mark_seen(is_gt, id);
        dst = std::move(parsed);
      });
    };
    seen_[0].clear();
    seen_[1].clear();
    load(o_.gt_path, true);
    load(o_.pred_path, false);
    return images;
  }

  bool dst_seen(bool is_gt, const std::string& id) const { return seen_[is_gt ? 1 : 0].count(id) != 0; }
  void mark_seen(bool is_gt, const std::string& id) { seen_[is_gt ? 1 : 0].insert(id); }

  int emit_report(const char* task, const EvalReport& report) {
    ojson j;
    j["task"] = task;
    j["config"] = config_to_json(cfg_);
    auto body = report.to_json();
    for (auto& [k, v] : body.items()) j[k] = v;
    print_json(out_, j);
    return kExitOk;
  }

  const Options& o_;
  std::istream& in_;
  std::ostream& out_;
  Config cfg_;
  std::optional<ProviderSet> providers_;
  std::set<std::string> seen_[2];
};

ojson error_json(const std::exception& e, const char* type) {
  ojson j;
  j["type"] = type;
  j["message"] = e.what();
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["kind"] = to_string(pe->kind());
    j["line"] = pe->line();
  } else if (const auto* se = dynamic_cast<const SchemaError*>(&e)) {
    j["pointer"] = se->pointer();
  }
  return ojson{{"error", j}};
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
  if (dynamic_cast<const InvalidBox*>(&e)) return "InvalidBox";
  if (dynamic_cast<const InvalidMask*>(&e)) return "InvalidMask";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const EmptyMask*>(&e)) return "EmptyMask";
  if (dynamic_cast<const BackendUnavailable*>(&e)) return "BackendUnavailable";
  if (dynamic_cast<const UnknownSlot*>(&e)) return "UnknownSlot";
  if (dynamic_cast<const ModeUnavailable*>(&e)) return "ModeUnavailable";
  if (dynamic_cast<const NoGroundedObjects*>(&e)) return "NoGroundedObjects";
  if (dynamic_cast<const IoError*>(&e)) return "IoError";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const UsageError*>(&e)) return "UsageError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

int report_error(const std::exception& e, int code, bool as_json, std::ostream& err) {
  if (as_json) {
    err << error_json(e, error_type(e)).dump() << '\n';
  } else {
    err << "bacon: " << error_type(e) << ": " << e.what() << '\n';
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Structured caption toolkit: parse, validate, ground and evaluate caption graphs.", "bacon"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  app.add_option("--config", o.config_path, "JSON config file; flags override its values");
  app.add_option("--provider", o.provider, "Model provider")->check(CLI::IsMember({"stub", "http"}));
  app.add_option("--fixtures", o.fixtures, "Fixture table for the stub provider");
  app.add_option("--endpoint", o.endpoint, "Sidecar base URL for the http provider");
  app.add_flag("--json-errors", o.json_errors, "Print errors as JSON on stderr");
  app.add_flag("--version", o.version, "Print version and exit");
  app.add_option("--rho", o.rho, "Consistency coverage threshold");
  app.add_option("--rho-stable", o.rho_stable, "Video diff stability threshold");
  app.add_option("--tau-crop", o.tau_crop, "Grounding crop similarity threshold");
  app.add_option("--tau-sim", o.tau_sim, "Label similarity threshold for eval ovd/sgg");
  app.add_option("--tau-iou", o.tau_iou, "Box IoU threshold for eval ovd/sgg");
  app.add_option("--iou-min", o.iou_min, "Region overlap threshold for regionqa point");
  app.add_option("--tau-mask", o.tau_mask, "Track merge overlap threshold");
  app.add_option("--tau-name", o.tau_name, "Name similarity threshold for eval layout/objects");

  auto input_opt = [&](CLI::App* sub) { sub->add_option("-i,--input", o.input, "Input file, '-' for stdin"); };

  auto* c_parse = app.add_subcommand("parse", "Caption string -> canonical JSON");
  input_opt(c_parse);
  auto* c_serialize = app.add_subcommand("serialize", "JSON -> caption string");
  input_opt(c_serialize);
  auto* c_json = app.add_subcommand("json", "Caption string or JSON -> canonical JSON");
  input_opt(c_json);
  auto* c_validate = app.add_subcommand("validate", "Report invariant violations");
  input_opt(c_validate);
  auto* c_prompt = app.add_subcommand("prompt", "Print the instruction prompt");
  c_prompt->add_option("--example", o.examples, "Override an example slot: slot=file");
  auto* c_renumber = app.add_subcommand("renumber", "Canonical per-category object numbering");
  input_opt(c_renumber);
  auto* c_ground = app.add_subcommand("ground", "Attach boxes to every object");
  input_opt(c_ground);
  c_ground->add_option("--image", o.image_id, "Image id known to the provider")->required();
  c_ground->add_flag("--trace", o.trace, "Include the per-candidate stage log");
  auto* c_cons = app.add_subcommand("consistency", "Semantic consistency of repeated answers");
  c_cons->add_option("--answers", o.answers_path, "JSON array or one answer per line, '-' for stdin")
      ->default_val("-");
  c_cons->add_flag("--raw", o.raw, "Report unnormalized coverage counts");
  auto* c_diff = app.add_subcommand("diff", "Classify caption changes across video frames");
  c_diff->add_option("--frames", o.frames_path, "Frames JSONL")->required();
  c_diff->add_option("--format", o.diff_format, "ansi, html or json")->default_val("json");
  c_diff->add_flag("--keep-ids", o.keep_ids, "Use the given track ids instead of merging");
  auto* c_stats = app.add_subcommand("stats", "Corpus statistics over a dataset JSONL");
  c_stats->add_option("--dataset", o.dataset_path, "Dataset JSONL")->required();
  c_stats->add_option("--top", o.top_n, "Entries per term list")->default_val(10)->check(CLI::PositiveNumber);

  auto* c_rqa = app.add_subcommand("regionqa", "Region question answering helpers");
  c_rqa->require_subcommand(1);
  auto* c_point = c_rqa->add_subcommand("point", "Describe the objects inside a target box");
  input_opt(c_point);
  c_point->add_option("--box", o.box, "x1,y1,x2,y2")->required();
  auto* c_pointing = c_rqa->add_subcommand("pointing", "Pick the candidate region that answers a question");
  input_opt(c_pointing);
  c_pointing->add_option("--regions", o.regions_path, "JSON array of boxes")->required();
  c_pointing->add_option("--question", o.question, "Question text")->required();

  auto* c_eval = app.add_subcommand("eval", "Benchmark evaluators");
  c_eval->require_subcommand(1);
  auto eval_sub = [&](const char* name, const char* help) {
    auto* s = c_eval->add_subcommand(name, help);
    s->add_option("--pred", o.pred_path, "Prediction JSONL")->required();
    s->add_option("--gt", o.gt_path, "Ground-truth JSONL")->required();
    s->add_option("--jobs", o.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
    return s;
  };
  auto* c_ovd = eval_sub("ovd", "Open-vocabulary detection recall, mIoU, AP50");
  auto* c_sgg = eval_sub("sgg", "Open-vocabulary scene graph recall");
  auto* c_layout = eval_sub("layout", "Layout mIoU, precision, recall");
  auto* c_objects = eval_sub("objects", "Object list precision and recall");
  auto* c_cqa = c_eval->add_subcommand("cqa", "Caption question answering accuracy");
  c_cqa->add_option("--cases", o.cases_path, "Cases JSONL")->required();
  c_cqa->add_option("--mode", o.cqa_mode, "exact or vqa")->default_val("exact");
  c_cqa->add_option("--jobs", o.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    if (o.json_errors) {
      err << ojson{{"error", {{"type", "UsageError"}, {"message", e.what()}}}}.dump() << '\n';
      return kExitUsage;
    }
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (o.version) {
    out << "bacon " << BACON_VERSION << " (" << instruction_template_version() << ")\n";
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kExitUsage;
  }

  Runner runner(o, in, out);
  try {
    Config cfg;
    if (!o.config_path.empty()) cfg = load_config_file(o.config_path, cfg);
    if (!o.provider.empty()) cfg.provider.kind = o.provider;
    if (!o.fixtures.empty()) cfg.provider.fixture_path = o.fixtures;
    if (!o.endpoint.empty()) cfg.provider.endpoint = o.endpoint;
    auto& t = cfg.thresholds;
    if (o.rho) t.rho = *o.rho;
    if (o.rho_stable) t.rho_stable = *o.rho_stable;
    if (o.tau_crop) t.tau_crop = *o.tau_crop;
    if (o.iou_min) t.tau_iou_region = *o.iou_min;
    if (o.tau_mask) t.tau_mask = *o.tau_mask;
    if (o.tau_name) t.tau_name = *o.tau_name;
    if (o.tau_sim) t.tau_sim_ovd = t.tau_sim_sgg = *o.tau_sim;
    if (o.tau_iou) t.tau_iou_ovd = t.tau_iou_sgg = *o.tau_iou;
    if (o.raw) cfg.normalize_consistency = false;
    cfg.check();
    runner.set_config(std::move(cfg));

    if (c_parse->parsed()) return runner.parse_cmd();
    if (c_serialize->parsed()) return runner.serialize_cmd();
    if (c_json->parsed()) return runner.json_cmd();
    if (c_validate->parsed()) return runner.validate_cmd();
    if (c_prompt->parsed()) return runner.prompt_cmd();
    if (c_renumber->parsed()) return runner.renumber_cmd();
    if (c_ground->parsed()) return runner.ground_cmd();
    if (c_cons->parsed()) return runner.consistency_cmd();
    if (c_diff->parsed()) return runner.diff_cmd();
    if (c_stats->parsed()) return runner.stats_cmd();
    if (c_point->parsed()) return runner.point_cmd();
    if (c_pointing->parsed()) return runner.pointing_cmd();
    if (c_ovd->parsed()) return runner.eval_ovd_cmd();
    if (c_sgg->parsed()) return runner.eval_sgg_cmd();
    if (c_layout->parsed()) return runner.eval_layout_cmd();
    if (c_objects->parsed()) return runner.eval_objects_cmd();
    if (c_cqa->parsed()) return runner.eval_cqa_cmd();
    err << app.help();
    return kExitUsage;
  } catch (const BackendUnavailable& e) {
    return report_error(e, kExitBackend, o.json_errors, err);
  } catch (const ConfigError& e) {
    return report_error(e, kExitUsage, o.json_errors, err);
  } catch (const UsageError& e) {
    return report_error(e, kExitUsage, o.json_errors, err);
  } catch (const Error& e) {
    return report_error(e, kExitDomain, o.json_errors, err);
  } catch (const nlohmann::json::exception& e) {
    return report_error(e, kExitDomain, o.json_errors, err);
  }
}

}  // namespace bacon::cli
