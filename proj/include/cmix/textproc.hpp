#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cmix/gallery.hpp"
#include "cmix/rng.hpp"

namespace cmix {

// Reserved special token ids.
enum SpecialToken : int32_t {
  kPad = 0,
  kCls = 1,
  kSep = 2,
  kMask = 3,
  kUnk = 4,
  kNumSpecials = 5,
};

// Framed sequence caps: [CLS] ... [SEP] streams stay within these.
inline constexpr size_t kTextCap = 80;    // text and cross-modal views
inline constexpr size_t kImageCap = 100;  // image (region+tag) views
inline constexpr size_t kMaxSentenceWords = kTextCap - 2;
inline constexpr size_t kMinSentenceWords = 5;

class Vocabulary {
 public:
  Vocabulary();
  // Words are added in the given order after the 5 reserved specials.
  static Vocabulary from_words(const std::vector<std::string>& words);
  // Sorted unique words of a corpus file.
  static Vocabulary from_corpus(const std::string& path);

  int32_t id(const std::string& word) const;  // kUnk when absent
  bool contains(const std::string& word) const;
  const std::string& word(int32_t id) const;
  int32_t size() const { return static_cast<int32_t>(id_to_word_.size()); }
  const std::vector<std::string>& words() const { return id_to_word_; }

 private:
  std::vector<std::string> id_to_word_;
  std::unordered_map<std::string, int32_t> word_to_id_;
};

struct TextSequence {
  std::vector<int32_t> tokens;         // no [CLS]/[SEP]
  std::vector<std::string> raw_words;  // lowercased, aligned with tokens

  size_t size() const { return tokens.size(); }
  std::unordered_set<std::string> word_set() const {
    return {raw_words.begin(), raw_words.end()};
  }
};

// Lowercases, splits on anything that is not [a-z0-9], maps OOV words to
// [UNK]. Throws EmptySentence if no token survives. Length filtering is the
// corpus loader's job, not the tokenizer's.
std::vector<std::string> split_words(const std::string& text);
TextSequence tokenize(const std::string& text, const Vocabulary& vocab);

// 1-based positions whose raw word is in the concept vocabulary, ascending.
std::vector<size_t> find_grounded_positions(const TextSequence& seq,
                                            const std::set<std::string>& concept_vocab);

struct PatchRef {
  int64_t patch_id = 0;
  int64_t source_image_id = 0;
  std::array<double, 4> bbox{};
  std::vector<double> feature;
  std::string concept_word;
};

// One slot of a multi-modal sentence: either the original word or a group
// of K patches standing in for it. original_position is 1-based and covers
// 1..N exactly once across the slots.
struct Slot {
  size_t original_position = 0;
  int32_t word_id = 0;  // the word, or the replaced word for a patch group
  std::vector<PatchRef> patches;  // empty = word slot, size K = patch group

  bool is_patch_group() const { return !patches.empty(); }
};

struct MultiModalSequence {
  std::vector<Slot> slots;

  size_t num_patch_groups() const;
  size_t num_tokens() const;  // words + individual patches, before framing
};

// Cross-modal CutMix: independently per grounded position, with probability
// r_cmc the word is replaced by K patches drawn with replacement from the
// gallery (context-aware sampling, paired images excluded). Positions where
// no patch is available stay words.
MultiModalSequence cutmix(const TextSequence& seq, const Gallery& gallery,
                          double r_cmc, size_t k_shot, double r_ctx,
                          const std::unordered_set<int64_t>& exclude_images,
                          RandomStream& rng);

enum class AugmentMode { kCrop, kDelete };

// crop: keep a uniformly-placed contiguous run of round(N*(1-k%)) tokens.
// delete: remove round(N*k%) uniformly chosen positions, order preserved.
TextSequence text_augment(const TextSequence& seq, AugmentMode mode,
                          double k_percent, RandomStream& rng);

// A corpus sentence together with its provenance. paired_image_id is -1
// when no alignment info was provided (the normal unpaired case).
struct TextExample {
  TextSequence seq;
  int64_t line_index = 0;
  int64_t paired_image_id = -1;
};

struct Corpus {
  Vocabulary vocab;
  std::vector<TextExample> sentences;
  size_t rejected_short = 0;
  size_t total_lines = 0;
};

// Plain text, one sentence per line. Sentences shorter than 5 words are
// dropped; longer than 78 words are truncated to fit the framed cap.
Corpus load_corpus(const std::string& path);

// One augmented record: {"line": n, "slots": [{"w": id} |
//   {"p": {"orig": id, "patches": [patch_id, ...]}}]}
std::string augmented_record_json(const MultiModalSequence& s, int64_t line_index);

}  // namespace cmix
