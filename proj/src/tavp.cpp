#include "cmix/tavp.hpp"

#include <algorithm>
#include <numeric>

#include "cmix/errors.hpp"

namespace cmix {

ImageTokens build_image_tokens(const DetectionRecord& record,
                               const Vocabulary& vocab, size_t max_regions) {
  if (record.regions.empty()) throw EmptyImage();
  if (max_regions < 1) throw Error("max_regions must be >= 1");
  // framed = 2n + 3 <= kImageCap
  const size_t hard_cap = (kImageCap - 3) / 2;
  max_regions = std::min(max_regions, hard_cap);

  std::vector<size_t> order(record.regions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return record.regions[a].confidence > record.regions[b].confidence;
  });
  if (order.size() > max_regions) order.resize(max_regions);

  ImageTokens q;
  q.image_id = record.image_id;
  for (size_t i : order) {
    const Region& r = record.regions[i];
    q.bboxes.push_back(r.bbox);
    q.features.push_back(r.feature);
    q.tag_ids.push_back(vocab.id(r.concept_word));
    q.confidences.push_back(r.confidence);
  }
  return q;
}

}  // namespace cmix
