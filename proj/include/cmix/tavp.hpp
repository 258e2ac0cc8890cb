#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cmix/gallery.hpp"
#include "cmix/textproc.hpp"

namespace cmix {

// The image branch input Q: detected regions plus their tag words,
// aligned 1:1. The framed stream is [CLS] regions [SEP] tags [SEP].
struct ImageTokens {
  int64_t image_id = 0;
  std::vector<std::array<double, 4>> bboxes;
  std::vector<std::vector<double>> features;
  std::vector<int32_t> tag_ids;
  std::vector<double> confidences;

  size_t num_regions() const { return features.size(); }
  size_t framed_size() const { return 2 * num_regions() + 3; }
};

// Orders regions by descending confidence (region order on ties), truncates
// to max_regions, and maps tags through the vocabulary ([UNK] when absent).
// max_regions is clamped so the framed stream stays within the 100 cap.
// Throws EmptyImage for a record with zero regions.
ImageTokens build_image_tokens(const DetectionRecord& record,
                               const Vocabulary& vocab, size_t max_regions);

}  // namespace cmix
