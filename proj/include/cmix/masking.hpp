#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cmix/rng.hpp"
#include "cmix/tavp.hpp"
#include "cmix/textproc.hpp"

namespace cmix {

enum class ElemKind : uint8_t {
  kClsTok,
  kSepTok,
  kWord,     // word or tag token (token_id may have been corrupted)
  kMaskTok,  // literal [MASK] symbol
  kPatch,    // CMC patch, carries feature + bbox
  kRegion,   // image region feature token
  kPadTok,
};

struct MaskedElem {
  ElemKind kind = ElemKind::kWord;
  int32_t token_id = 0;            // for Cls/Sep/Word/MaskTok/Pad
  std::vector<double> feature;     // for Patch/Region
  std::array<double, 4> bbox{};    // for Patch/Region
  size_t position = 0;             // position-embedding index
};

// A framed token stream [CLS] ... [SEP] with reconstruction targets.
// targets maps stream index -> original token id; every masked/CMC position
// has a target and nothing else does.
struct MaskedSequence {
  std::vector<MaskedElem> elems;
  std::map<size_t, int32_t> targets;

  size_t size() const { return elems.size(); }
  size_t count_kind(ElemKind k) const;
};

// BERT-style masking: each token is independently selected with probability
// `rate`; a selected token becomes [MASK] 80% of the time, a uniformly
// random vocab word 10%, and stays unchanged 10%. All selected positions get
// targets. Framed with [CLS]/[SEP].
MaskedSequence mask_language(const TextSequence& seq, double rate,
                             const Vocabulary& vocab, RandomStream& rng);

// Masking of the cross-modal view: word slots behave exactly like
// mask_language; each patch group gets one [MASK] inserted immediately
// before its K patches with target = the replaced word (always, independent
// of rate). Patches are never masked and carry no targets. The mask and the
// K patches share the replaced word's original position.
MaskedSequence mask_multimodal(const MultiModalSequence& s, double rate,
                               const Vocabulary& vocab, RandomStream& rng);

// Tag masking for the image branch: only tag tokens are maskable (same
// 80/10/10 rule); region tokens pass through untouched.
MaskedSequence mask_tags(const ImageTokens& q, double rate,
                         const Vocabulary& vocab, RandomStream& rng);

// Debug dump mirroring the augmented-output JSON with "m" elements added.
std::string debug_dump(const MaskedSequence& s);

}  // namespace cmix
