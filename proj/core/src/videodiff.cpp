// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/videodiff.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "bacon/errors.hpp"
#include "bacon/format.hpp"
#include "bacon/text.hpp"

namespace bacon {
namespace {

using ojson = nlohmann::ordered_json;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins, so every root is its component's minimum.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::optional<double> occurrence_overlap(const ObjectEntry& a, const ObjectEntry& b) {
  if (a.mask && b.mask) return iou_mask(*a.mask, *b.mask);
  if (a.box && b.box) return iou_box(*a.box, *b.box);
  return std::nullopt;
}

void check_tracks(const TrackedFrame& f) {
  for (const auto& [name, id] : f.track_ids) {
    if (f.graph.find_object(name) == nullptr)
      throw Error("track id for unknown object '" + name + "' in frame " + std::to_string(f.frame_index));
  }
}

// Similarity of two element texts; equal strings are fully similar even when
// they embed to the zero vector.
class Similarity {
 public:
  explicit Similarity(const TextEmbedder& e) : embedder_(e) {}

  std::vector<std::vector<double>> matrix(const std::vector<std::string>& a, const std::vector<std::string>& b) const {
    std::vector<std::string> all(a);
    all.insert(all.end(), b.begin(), b.end());
    auto vecs = all.empty() ? std::vector<EmbeddingVector>{} : embedder_.embed(all);
    std::vector<std::vector<double>> m(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        m[i][j] = a[i] == b[j] ? 1.0 : cosine(vecs[i], vecs[a.size() + j]);
    return m;
  }

 private:
  const TextEmbedder& embedder_;
};


std::vector<std::string> overall_sentences(const CaptionGraph& g) {
  std::vector<std::string> out;
  for (const auto& s : g.overall) {
    auto pieces = split_sentences(s.text);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return out;
}

std::string relation_text(const RelationTriplet& r) { return r.subject + " " + r.predicate + " " + r.object; }

std::string object_text(const ObjectEntry& o) { return o.name + ": " + o.description; }

void emit(DiffReport& report, ElementKind kind, std::size_t n_prev, std::size_t n_curr,
          const std::vector<std::optional<std::size_t>>& prev_to_curr, const std::vector<double>& sims,
          double rho, bool allow_altered, const std::vector<std::string>& prev_text,
          const std::vector<std::string>& curr_text) {
  std::vector<bool> curr_used(n_curr, false);
  for (std::size_t i = 0; i < n_prev; ++i) {
    DiffEntry e;
    e.kind = kind;
    e.prev_index = i;
    e.prev_text = prev_text[i];
    if (prev_to_curr[i]) {
      std::size_t j = *prev_to_curr[i];
      curr_used[j] = true;
      e.curr_index = j;
      e.curr_text = curr_text[j];
      e.similarity = sims[i];
      e.status = (!allow_altered || sims[i] >= rho) ? DiffStatus::Persistent : DiffStatus::Altered;
    } else {
      e.status = DiffStatus::Removed;
    }
    report.entries.push_back(std::move(e));
  }
  for (std::size_t j = 0; j < n_curr; ++j) {
    if (curr_used[j]) continue;
    DiffEntry e;
    e.kind = kind;
    e.status = DiffStatus::New;
    e.curr_index = j;
    e.curr_text = curr_text[j];
    report.entries.push_back(std::move(e));
  }
}

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(DiffStatus s) {
  switch (s) {
    case DiffStatus::New: return "new";
    case DiffStatus::Removed: return "removed";
    case DiffStatus::Altered: return "altered";
    case DiffStatus::Persistent: return "persistent";
  }
  return "?";
}

std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Object: return "object";
    case ElementKind::Relationship: return "relationship";
    case ElementKind::Sentence: return "sentence";
  }
  return "?";
}

std::vector<TrackedFrame> merge_track_ids(const std::vector<TrackedFrame>& frames, double tau_mask) {
  if (!(tau_mask >= 0.0 && tau_mask <= 1.0)) throw ConfigError("tau_mask must lie in [0,1]");
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return frames[a].frame_index < frames[b].frame_index; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (frames[order[k]].frame_index == frames[order[k - 1]].frame_index)
      throw Error("repeated frame_index " + std::to_string(frames[order[k]].frame_index));
  }

  // Node numbering follows (frame_index, object position).
  std::vector<std::size_t> base(frames.size());
  std::size_t n = 0;
  for (std::size_t f : order) {
    base[f] = n;
    n += frames[f].graph.objects.size();
  }
  DisjointSets sets(n);
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& a = frames[order[k - 1]].graph.objects;
    const auto& b = frames[order[k]].graph.objects;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        auto ov = occurrence_overlap(a[i], b[j]);
        if (ov && *ov >= tau_mask) sets.unite(base[order[k - 1]] + i, base[order[k]] + j);
      }
    }
  }

  std::vector<std::size_t> dense(n, 0);
  std::size_t next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (sets.find(v) == v) dense[v] = next++;
  }
  std::vector<TrackedFrame> out(frames);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out[f].track_ids.clear();
    const auto& objs = out[f].graph.objects;
    for (std::size_t i = 0; i < objs.size(); ++i) out[f].track_ids[objs[i].name] = dense[sets.find(base[f] + i)];
  }
  return out;
}

std::size_t DiffReport::count(ElementKind kind, DiffStatus status) const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const DiffEntry& e) {
    return e.kind == kind && e.status == status;
  }));
}

DiffReport diff_captions(const TrackedFrame& prev, const TrackedFrame& curr, const TextEmbedder& embedder,
                         double rho_stable) {
  if (!(rho_stable >= 0.0 && rho_stable <= 1.0)) throw ConfigError("rho_stable must lie in [0,1]");
  check_tracks(prev);
  check_tracks(curr);
  Similarity sim(embedder);
  DiffReport report;
  report.prev_frame = prev.frame_index;
  report.curr_frame = curr.frame_index;

  // Objects: track id first, exact name second.
  const auto& po = prev.graph.objects;
  const auto& co = curr.graph.objects;
  std::vector<std::optional<std::size_t>> obj_match(po.size());
  std::vector<bool> curr_taken(co.size(), false);
  auto id_of = [](const TrackedFrame& f, const std::string& name) -> std::optional<std::size_t> {
    auto it = f.track_ids.find(name);
    if (it == f.track_ids.end()) return std::nullopt;
    return it->second;
  };
  for (std::size_t i = 0; i < po.size(); ++i) {
    auto pid = id_of(prev, po[i].name);
    if (!pid) continue;
    for (std::size_t j = 0; j < co.size(); ++j) {
      if (!curr_taken[j] && id_of(curr, co[j].name) == pid) {
        obj_match[i] = j;
        curr_taken[j] = true;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < po.size(); ++i) {
    if (obj_match[i]) continue;
    for (std::size_t j = 0; j < co.size(); ++j) {
      if (!curr_taken[j] && co[j].name == po[i].name) {
        obj_match[i] = j;
        curr_taken[j] = true;
        break;
      }
    }
  }
  {
    std::vector<std::string> pd, cd, pt, ct;
    for (const auto& o : po) {
      pd.push_back(o.description);
      pt.push_back(object_text(o));
    }
    for (const auto& o : co) {
      cd.push_back(o.description);
      ct.push_back(object_text(o));
    }
    auto m = sim.matrix(pd, cd);
    std::vector<double> s(po.size(), 0.0);
    for (std::size_t i = 0; i < po.size(); ++i)
      if (obj_match[i]) s[i] = m[i][*obj_match[i]];
    emit(report, ElementKind::Object, po.size(), co.size(), obj_match, s, rho_stable, true, pt, ct);
  }

  // Relationships: endpoints must be paired objects.
  {
    std::map<std::string, std::string> prev_to_curr_name;
    for (std::size_t i = 0; i < po.size(); ++i)
      if (obj_match[i]) prev_to_curr_name[po[i].name] = co[*obj_match[i]].name;
    const auto& pr = prev.graph.relationships;
    const auto& cr = curr.graph.relationships;
    std::vector<std::string> pp, cp, pt, ct;
    for (const auto& r : pr) {
      pp.push_back(r.predicate);
      pt.push_back(relation_text(r));
    }
    for (const auto& r : cr) {
      cp.push_back(r.predicate);
      ct.push_back(relation_text(r));
    }
    auto m = sim.matrix(pp, cp);
    auto endpoints_paired = [&](std::size_t i, std::size_t j) {
      auto s = prev_to_curr_name.find(pr[i].subject);
      auto o = prev_to_curr_name.find(pr[i].object);
      return s != prev_to_curr_name.end() && o != prev_to_curr_name.end() && s->second == cr[j].subject &&
             o->second == cr[j].object;
    };
    auto result = greedy_match(
        pr.size(), cr.size(), [&](std::size_t i, std::size_t j) { return m[i][j]; },
        [&](std::size_t i, std::size_t j) { return endpoints_paired(i, j) && m[i][j] >= rho_stable; });
    std::vector<std::optional<std::size_t>> match(pr.size());
    std::vector<double> s(pr.size(), 0.0);
    for (const auto& p : result.pairs) {
      match[p.pred] = p.gt;
      s[p.pred] = m[p.pred][p.gt];
    }
    emit(report, ElementKind::Relationship, pr.size(), cr.size(), match, s, rho_stable, false, pt, ct);
  }

  // Overall sub-sentences.
  {
    auto ps = overall_sentences(prev.graph);
    auto cs = overall_sentences(curr.graph);
    auto m = sim.matrix(ps, cs);
    auto result = greedy_match(
        ps.size(), cs.size(), [&](std::size_t i, std::size_t j) { return m[i][j]; },
        [&](std::size_t i, std::size_t j) { return m[i][j] >= rho_stable; });
    std::vector<std::optional<std::size_t>> match(ps.size());
    std::vector<double> s(ps.size(), 0.0);
    for (const auto& p : result.pairs) {
      match[p.pred] = p.gt;
      s[p.pred] = m[p.pred][p.gt];
    }
    emit(report, ElementKind::Sentence, ps.size(), cs.size(), match, s, rho_stable, false, ps, cs);
  }
  return report;
}

std::string render_ansi(const DiffReport& report) {
  std::string out = "frame " + std::to_string(report.prev_frame) + " -> " + std::to_string(report.curr_frame) + "\n";
  for (const auto& e : report.entries) {
    const char* color = "";
    std::string body;
    switch (e.status) {
      case DiffStatus::New: color = "\x1b[34m"; body = "+ " + e.curr_text; break;
      case DiffStatus::Removed: color = "\x1b[31m"; body = "- " + e.prev_text; break;
      case DiffStatus::Altered: color = "\x1b[95m"; body = "~ " + e.prev_text + " => " + e.curr_text; break;
      case DiffStatus::Persistent: body = "  " + e.curr_text; break;
    }
    out += color;
    out += "[";
    out += to_string(e.kind);
    out += "] ";
    out += body;
    if (*color != '\0') out += "\x1b[0m";
    out += "\n";
  }
  return out;
}

std::string render_html(const DiffReport& report) {
  std::string out = "<div class=\"bacon-diff\" data-prev=\"" + std::to_string(report.prev_frame) +
                    "\" data-curr=\"" + std::to_string(report.curr_frame) + "\">\n";
  for (const auto& e : report.entries) {
    const char* color = "black";
    std::string body;
    switch (e.status) {
      case DiffStatus::New: color = "blue"; body = html_escape(e.curr_text); break;
      case DiffStatus::Removed: color = "red"; body = "<s>" + html_escape(e.prev_text) + "</s>"; break;
      case DiffStatus::Altered:
        color = "pink";
        body = html_escape(e.prev_text) + " &rarr; " + html_escape(e.curr_text);
        break;
      case DiffStatus::Persistent: body = html_escape(e.curr_text); break;
    }
    out += "<p class=\"";
    out += to_string(e.kind);
    out += " ";
    out += to_string(e.status);
    out += "\" style=\"color:";
    out += color;
    out += "\">" + body + "</p>\n";
  }
  out += "</div>\n";
  return out;
}

nlohmann::ordered_json diff_to_json(const DiffReport& report) {
  ojson j;
  j["prev_frame"] = report.prev_frame;
  j["curr_frame"] = report.curr_frame;
  ojson counts = ojson::object();
  for (auto k : {ElementKind::Object, ElementKind::Relationship, ElementKind::Sentence}) {
    ojson c;
    for (auto s : {DiffStatus::New, DiffStatus::Removed, DiffStatus::Altered, DiffStatus::Persistent})
      c[std::string(to_string(s))] = report.count(k, s);
    counts[std::string(to_string(k))] = std::move(c);
  }
  j["counts"] = std::move(counts);
  ojson entries = ojson::array();
  for (const auto& e : report.entries) {
    ojson x;
    x["kind"] = to_string(e.kind);
    x["status"] = to_string(e.status);
    x["prev"] = e.prev_index ? ojson(e.prev_text) : ojson(nullptr);
    x["curr"] = e.curr_index ? ojson(e.curr_text) : ojson(nullptr);
    x["similarity"] = e.similarity;
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  return j;
}

TrackedFrame frame_from_json(const nlohmann::json& j, const std::string& pointer) {
  if (!j.is_object()) throw SchemaError(pointer.empty() ? "/" : pointer, "frame must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k != "frame_index" && k != "caption" && k != "track_ids") throw SchemaError(pointer + "/" + k, "unknown key");
  }
  TrackedFrame f;
  auto idx = j.find("frame_index");
  if (idx == j.end() || !idx->is_number_unsigned())
    throw SchemaError(pointer + "/frame_index", "expected a non-negative integer");
  f.frame_index = idx->get<std::size_t>();
  auto cap = j.find("caption");
  if (cap == j.end()) throw SchemaError(pointer + "/caption", "missing");
  f.graph = graph_from_json(*cap, pointer + "/caption");
  if (auto t = j.find("track_ids"); t != j.end()) {
    if (!t->is_object()) throw SchemaError(pointer + "/track_ids", "expected an object");
    for (const auto& [name, id] : t->items()) {
      if (!id.is_number_unsigned()) throw SchemaError(pointer + "/track_ids/" + name, "expected a non-negative integer");
      f.track_ids[name] = id.get<std::size_t>();
    }
  }
  check_tracks(f);
  return f;
}

nlohmann::ordered_json frame_to_json(const TrackedFrame& frame) {
  ojson j;
  j["frame_index"] = frame.frame_index;
  j["caption"] = ojson::parse(to_json(frame.graph));
  ojson t = ojson::object();
  for (const auto& [name, id] : frame.track_ids) t[name] = id;
  j["track_ids"] = std::move(t);
  return j;
}

}  // namespace bacon
