#include "cmix/gallery.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

#include "cmix/errors.hpp"

namespace cmix {

using nlohmann::json;

const PatchEntry& Gallery::by_patch_id(int64_t patch_id) const {
  auto it = id_index_.find(patch_id);
  if (it == id_index_.end()) {
    throw Error("unknown patch_id " + std::to_string(patch_id));
  }
  return entries[it->second];
}

void Gallery::rebuild_index() {
  concept_index.clear();
  concept_vocab.clear();
  id_index_.clear();
  for (size_t i = 0; i < entries.size(); ++i) {
    concept_index[entries[i].concept_word].push_back(i);
    concept_vocab.insert(entries[i].concept_word);
    id_index_[entries[i].patch_id] = i;
  }
}

namespace {

bool valid_bbox(const std::array<double, 4>& b) {
  return 0.0 <= b[0] && b[0] < b[2] && b[2] <= 1.0 &&
         0.0 <= b[1] && b[1] < b[3] && b[3] <= 1.0;
}

Region parse_region(const json& j, size_t record_index, size_t expected_dim) {
  Region r;
  if (!j.contains("bbox") || !j["bbox"].is_array() || j["bbox"].size() != 4) {
    throw MalformedRecord(record_index, "region bbox must be [x1,y1,x2,y2]");
  }
  for (int k = 0; k < 4; ++k) r.bbox[k] = j["bbox"][k].get<double>();
  if (!valid_bbox(r.bbox)) {
    throw MalformedRecord(record_index, "bbox violates 0<=x1<x2<=1, 0<=y1<y2<=1");
  }
  if (!j.contains("concept") || !j["concept"].is_string()) {
    throw MalformedRecord(record_index, "region missing concept string");
  }
  r.concept_word = j["concept"].get<std::string>();
  if (!j.contains("confidence") || !j["confidence"].is_number()) {
    throw MalformedRecord(record_index, "region missing confidence");
  }
  r.confidence = j["confidence"].get<double>();
  if (!(r.confidence > 0.0) || r.confidence > 1.0) {
    throw MalformedRecord(record_index, "confidence must be in (0,1]");
  }
  if (!j.contains("feature") || !j["feature"].is_array() || j["feature"].empty()) {
    throw MalformedRecord(record_index, "region missing feature vector");
  }
  r.feature = j["feature"].get<std::vector<double>>();
  if (expected_dim != 0 && r.feature.size() != expected_dim) {
    throw MalformedRecord(record_index, "feature dimension mismatch");
  }
  return r;
}

}  // namespace

std::vector<DetectionRecord> load_detections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open detections file: " + path);
  std::vector<DetectionRecord> out;
  std::string line;
  size_t index = 0;
  size_t feature_dim = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      ++index;
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw MalformedRecord(index, e.what());
    }
    if (!j.contains("image_id") || !j["image_id"].is_number_integer()) {
      throw MalformedRecord(index, "missing integer image_id");
    }
    DetectionRecord rec;
    rec.image_id = j["image_id"].get<int64_t>();
    if (!j.contains("regions") || !j["regions"].is_array()) {
      throw MalformedRecord(index, "missing regions array");
    }
    for (const auto& rj : j["regions"]) {
      rec.regions.push_back(parse_region(rj, index, feature_dim));
      if (feature_dim == 0) feature_dim = rec.regions.back().feature.size();
    }
    out.push_back(std::move(rec));
    ++index;
  }
  return out;
}

Gallery build_gallery(const std::vector<DetectionRecord>& detections,
                      double min_confidence, size_t max_per_concept,
                      const std::set<std::string>* keep_concepts) {
  if (max_per_concept < 1) throw Error("max_per_concept must be >= 1");

  std::vector<PatchEntry> candidates;
  int64_t next_patch_id = 0;
  for (const auto& rec : detections) {
    for (size_t i = 0; i < rec.regions.size(); ++i) {
      const Region& region = rec.regions[i];
      int64_t patch_id = next_patch_id++;
      if (region.confidence < min_confidence) continue;
      if (keep_concepts && !keep_concepts->count(region.concept_word)) continue;

      PatchEntry e;
      e.patch_id = patch_id;
      e.source_image_id = rec.image_id;
      e.bbox = region.bbox;
      e.feature = region.feature;
      e.concept_word = region.concept_word;
      e.confidence = region.confidence;
      // context = other regions of the same image, merged by word, max conf
      std::map<std::string, double> ctx;
      for (size_t o = 0; o < rec.regions.size(); ++o) {
        if (o == i) continue;
        const Region& other = rec.regions[o];
        auto [it, inserted] = ctx.emplace(other.concept_word, other.confidence);
        if (!inserted) it->second = std::max(it->second, other.confidence);
      }
      e.context.assign(ctx.begin(), ctx.end());
      candidates.push_back(std::move(e));
    }
  }

  // cap per concept: descending confidence, ascending patch_id on ties
  std::map<std::string, std::vector<size_t>> per_concept;
  for (size_t i = 0; i < candidates.size(); ++i) {
    per_concept[candidates[i].concept_word].push_back(i);
  }
  std::vector<bool> keep(candidates.size(), false);
  for (auto& [word, idxs] : per_concept) {
    std::sort(idxs.begin(), idxs.end(), [&](size_t a, size_t b) {
      if (candidates[a].confidence != candidates[b].confidence) {
        return candidates[a].confidence > candidates[b].confidence;
      }
      return candidates[a].patch_id < candidates[b].patch_id;
    });
    for (size_t k = 0; k < idxs.size() && k < max_per_concept; ++k) {
      keep[idxs[k]] = true;
    }
  }

  Gallery g;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (keep[i]) g.entries.push_back(std::move(candidates[i]));
  }
  if (g.entries.empty()) throw EmptyGallery();
  g.feature_dim = g.entries.front().feature.size();
  for (const auto& e : g.entries) {
    if (e.feature.size() != g.feature_dim) {
      throw Error("inconsistent feature dimensions in gallery");
    }
  }
  g.rebuild_index();
  return g;
}

std::vector<double> sampling_weights(
    const Gallery& gallery, const std::string& concept_word,
    const std::unordered_set<std::string>& sentence_words, double r_ctx) {
  std::vector<double> weights(gallery.entries.size(), 0.0);
  auto it = gallery.concept_index.find(concept_word);
  if (it == gallery.concept_index.end()) return weights;
  for (size_t idx : it->second) {
    const PatchEntry& e = gallery.entries[idx];
    double ctx_sum = 0.0;
    size_t ctx_count = 0;
    for (const auto& [word, conf] : e.context) {
      if (sentence_words.count(word)) {
        ctx_sum += conf;
        ++ctx_count;
      }
    }
    double p = e.confidence;
    if (ctx_count > 0) p += r_ctx / static_cast<double>(ctx_count) * ctx_sum;
    weights[idx] = p;
  }
  return weights;
}

std::optional<std::vector<double>> normalize_weights(
    const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return std::nullopt;
  std::vector<double> out(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / total;
  return out;
}

std::optional<size_t> sample_patch(
    const Gallery& gallery, const std::string& concept_word,
    const std::unordered_set<std::string>& sentence_words, double r_ctx,
    const std::unordered_set<int64_t>& exclude_images, RandomStream& rng) {
  std::vector<double> weights =
      sampling_weights(gallery, concept_word, sentence_words, r_ctx);
  double total = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0 &&
        exclude_images.count(gallery.entries[i].source_image_id)) {
      weights[i] = 0.0;
    }
    total += weights[i];
  }
  if (total <= 0.0) return std::nullopt;
  return rng.weighted_index(weights);
}

void save_gallery(const Gallery& gallery, const std::string& path,
                  const std::string& extra_header_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open gallery file for writing: " + path);
  json header = {{"magic", "CMCG"},
                 {"version", 1},
                 {"feature_dim", gallery.feature_dim}};
  if (!extra_header_json.empty()) {
    header["config"] = json::parse(extra_header_json);
  }
  out << header.dump() << "\n";
  for (const auto& e : gallery.entries) {
    json ctx = json::array();
    for (const auto& [word, conf] : e.context) ctx.push_back({word, conf});
    json j = {{"patch_id", e.patch_id},
              {"image_id", e.source_image_id},
              {"bbox", e.bbox},
              {"concept", e.concept_word},
              {"confidence", e.confidence},
              {"context", ctx},
              {"feature", e.feature}};
    out << j.dump() << "\n";
  }
}

Gallery load_gallery(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open gallery file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty gallery file: " + path);
  json header = json::parse(line);
  if (!header.contains("magic") || header["magic"] != "CMCG") {
    throw Error("bad gallery magic in " + path);
  }
  if (header["version"].get<int>() != 1) {
    throw Error("unsupported gallery version in " + path);
  }
  Gallery g;
  g.feature_dim = header["feature_dim"].get<size_t>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    PatchEntry e;
    e.patch_id = j["patch_id"].get<int64_t>();
    e.source_image_id = j["image_id"].get<int64_t>();
    for (int k = 0; k < 4; ++k) e.bbox[k] = j["bbox"][k].get<double>();
    e.concept_word = j["concept"].get<std::string>();
    e.confidence = j["confidence"].get<double>();
    for (const auto& c : j["context"]) {
      e.context.emplace_back(c[0].get<std::string>(), c[1].get<double>());
    }
    e.feature = j["feature"].get<std::vector<double>>();
    if (e.feature.size() != g.feature_dim) {
      throw Error("gallery entry feature dim mismatch in " + path);
    }
    g.entries.push_back(std::move(e));
  }
  if (g.entries.empty()) throw EmptyGallery();
  g.rebuild_index();
  return g;
}

}  // namespace cmix
