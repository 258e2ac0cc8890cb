#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cmix/rng.hpp"

namespace cmix {

// One detected region of one source image.
struct Region {
  std::array<double, 4> bbox;  // x1,y1,x2,y2 in normalized [0,1] coordinates
  std::string concept_word;
  double confidence = 0.0;  // in (0,1]
  std::vector<double> feature;
};

struct DetectionRecord {
  int64_t image_id = 0;
  std::vector<Region> regions;
};

// A gallery entry: a region plus the concepts detected elsewhere in its
// source image ("contextual concepts"). Context is merged by word keeping
// the max confidence and never contains the entry's own region.
struct PatchEntry {
  int64_t patch_id = 0;
  int64_t source_image_id = 0;
  std::array<double, 4> bbox{};
  std::vector<double> feature;
  std::string concept_word;
  double confidence = 0.0;
  std::vector<std::pair<std::string, double>> context;  // sorted by word
};

class Gallery {
 public:
  std::vector<PatchEntry> entries;  // ascending patch_id
  std::unordered_map<std::string, std::vector<size_t>> concept_index;
  std::set<std::string> concept_vocab;
  size_t feature_dim = 0;

  bool has_concept(const std::string& word) const {
    return concept_vocab.count(word) > 0;
  }
  const PatchEntry& by_patch_id(int64_t patch_id) const;
  void rebuild_index();

 private:
  std::unordered_map<int64_t, size_t> id_index_;
};

// Line-delimited JSON, one image per line:
//   {"image_id": int, "regions": [{"bbox": [x1,y1,x2,y2], "concept": str,
//    "confidence": float, "feature": [float, ...]}]}
// Throws MalformedRecord with the 0-based line index on invalid input.
std::vector<DetectionRecord> load_detections(const std::string& path);

// Filters regions below min_confidence, keeps at most max_per_concept
// entries per concept (descending confidence, ascending patch_id on ties)
// and fills context lists from co-detected regions.
// Patch ids are assigned in stream order before filtering, so they are
// stable across different filter settings.
// If keep_concepts is non-null, only those concepts enter the gallery.
Gallery build_gallery(const std::vector<DetectionRecord>& detections,
                      double min_confidence, size_t max_per_concept,
                      const std::set<std::string>* keep_concepts = nullptr);

// Context-aware sampling weights over all entries:
//   p_i = c_i + (r_ctx / |G_i|) * sum_{w in G_i} c_ctx(w)   if concept matches
//   p_i = 0                                                 otherwise
// where G_i is the intersection of sentence_words with entry i's context
// words. An empty G_i contributes 0 (empty sum over an empty set).
// All-zero output means no entry carries the concept.
std::vector<double> sampling_weights(
    const Gallery& gallery, const std::string& concept_word,
    const std::unordered_set<std::string>& sentence_words, double r_ctx);

// Normalizes weights into a distribution; nullopt when all weights are 0.
std::optional<std::vector<double>> normalize_weights(
    const std::vector<double>& weights);

// Draws one entry index proportionally to its weight, restricted to entries
// whose source image is not excluded. nullopt = NoPatchForConcept (the
// caller decides to skip replacement).
std::optional<size_t> sample_patch(
    const Gallery& gallery, const std::string& concept_word,
    const std::unordered_set<std::string>& sentence_words, double r_ctx,
    const std::unordered_set<int64_t>& exclude_images, RandomStream& rng);

// Gallery file: header {"magic":"CMCG","version":1,"feature_dim":d} then one
// JSON entry per line. extra_header keys (e.g. the effective run config) are
// merged into the header object.
void save_gallery(const Gallery& gallery, const std::string& path,
                  const std::string& extra_header_json = "");
Gallery load_gallery(const std::string& path);

}  // namespace cmix
