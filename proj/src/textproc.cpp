#include "cmix/textproc.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "cmix/errors.hpp"

namespace cmix {

using nlohmann::json;

namespace {
const std::array<std::string, kNumSpecials> kSpecialWords = {
    "[PAD]", "[CLS]", "[SEP]", "[MASK]", "[UNK]"};
}

Vocabulary::Vocabulary() {
  for (const auto& w : kSpecialWords) {
    word_to_id_[w] = static_cast<int32_t>(id_to_word_.size());
    id_to_word_.push_back(w);
  }
}

Vocabulary Vocabulary::from_words(const std::vector<std::string>& words) {
  Vocabulary v;
  for (const auto& w : words) {
    if (v.word_to_id_.count(w)) continue;
    v.word_to_id_[w] = static_cast<int32_t>(v.id_to_word_.size());
    v.id_to_word_.push_back(w);
  }
  return v;
}

Vocabulary Vocabulary::from_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& w : split_words(line)) words.insert(std::move(w));
  }
  return from_words({words.begin(), words.end()});
}

int32_t Vocabulary::id(const std::string& word) const {
  auto it = word_to_id_.find(word);
  return it == word_to_id_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(const std::string& word) const {
  return word_to_id_.count(word) > 0;
}

const std::string& Vocabulary::word(int32_t id) const {
  if (id < 0 || id >= size()) throw Error("token id out of range");
  return id_to_word_[static_cast<size_t>(id)];
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

TextSequence tokenize(const std::string& text, const Vocabulary& vocab) {
  TextSequence seq;
  seq.raw_words = split_words(text);
  if (seq.raw_words.empty()) throw EmptySentence();
  seq.tokens.reserve(seq.raw_words.size());
  for (const auto& w : seq.raw_words) seq.tokens.push_back(vocab.id(w));
  return seq;
}

std::vector<size_t> find_grounded_positions(const TextSequence& seq,
                                            const std::set<std::string>& concept_vocab) {
  std::vector<size_t> out;
  for (size_t n = 0; n < seq.raw_words.size(); ++n) {
    if (concept_vocab.count(seq.raw_words[n])) out.push_back(n + 1);
  }
  return out;
}

size_t MultiModalSequence::num_patch_groups() const {
  size_t n = 0;
  for (const auto& s : slots) n += s.is_patch_group() ? 1 : 0;
  return n;
}

size_t MultiModalSequence::num_tokens() const {
  size_t n = 0;
  for (const auto& s : slots) n += s.is_patch_group() ? s.patches.size() : 1;
  return n;
}

MultiModalSequence cutmix(const TextSequence& seq, const Gallery& gallery,
                          double r_cmc, size_t k_shot, double r_ctx,
                          const std::unordered_set<int64_t>& exclude_images,
                          RandomStream& rng) {
  if (r_cmc < 0.0 || r_cmc > 1.0) throw Error("r_cmc must be in [0,1]");
  if (k_shot < 1) throw Error("K must be >= 1");

  const auto sentence_words = seq.word_set();
  MultiModalSequence out;
  out.slots.reserve(seq.size());
  for (size_t n = 0; n < seq.size(); ++n) {
    Slot slot;
    slot.original_position = n + 1;
    slot.word_id = seq.tokens[n];
    const std::string& word = seq.raw_words[n];
    // Per grounded position: one Bernoulli draw, then K sampling draws.
    // The draw order is part of the deterministic contract.
    if (gallery.has_concept(word) && rng.uniform() < r_cmc) {
      std::vector<PatchRef> patches;
      patches.reserve(k_shot);
      bool ok = true;
      for (size_t k = 0; k < k_shot; ++k) {
        auto idx = sample_patch(gallery, word, sentence_words, r_ctx,
                                exclude_images, rng);
        if (!idx) {
          ok = false;  // NoPatchForConcept: degrade to keeping the word
          break;
        }
        const PatchEntry& e = gallery.entries[*idx];
        PatchRef ref;
        ref.patch_id = e.patch_id;
        ref.source_image_id = e.source_image_id;
        ref.bbox = e.bbox;
        ref.feature = e.feature;
        ref.concept_word = e.concept_word;
        patches.push_back(std::move(ref));
      }
      if (ok) slot.patches = std::move(patches);
    }
    out.slots.push_back(std::move(slot));
  }
  return out;
}

TextSequence text_augment(const TextSequence& seq, AugmentMode mode,
                          double k_percent, RandomStream& rng) {
  if (k_percent < 0.0 || k_percent > 50.0) {
    throw Error("k_percent must be in [0,50]");
  }
  const size_t n = seq.size();
  TextSequence out;
  if (mode == AugmentMode::kCrop) {
    size_t keep = static_cast<size_t>(
        std::lround(static_cast<double>(n) * (1.0 - k_percent / 100.0)));
    if (keep < 1) throw AugmentTooAggressive();
    size_t start = static_cast<size_t>(rng.uniform_index(n - keep + 1));
    out.tokens.assign(seq.tokens.begin() + start, seq.tokens.begin() + start + keep);
    out.raw_words.assign(seq.raw_words.begin() + start,
                         seq.raw_words.begin() + start + keep);
  } else {
    size_t remove = static_cast<size_t>(
        std::lround(static_cast<double>(n) * k_percent / 100.0));
    if (remove >= n) throw AugmentTooAggressive();
    auto removed = rng.sample_without_replacement(n, remove);
    std::vector<bool> drop(n, false);
    for (size_t i : removed) drop[i] = true;
    for (size_t i = 0; i < n; ++i) {
      if (drop[i]) continue;
      out.tokens.push_back(seq.tokens[i]);
      out.raw_words.push_back(seq.raw_words[i]);
    }
  }
  return out;
}

Corpus load_corpus(const std::string& path) {
  Corpus corpus;
  corpus.vocab = Vocabulary::from_corpus(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  std::string line;
  int64_t line_index = 0;
  while (std::getline(in, line)) {
    ++corpus.total_lines;
    auto words = split_words(line);
    if (words.size() < kMinSentenceWords) {
      ++corpus.rejected_short;
      ++line_index;
      continue;
    }
    TextExample ex;
    ex.line_index = line_index;
    ex.seq = tokenize(line, corpus.vocab);
    if (ex.seq.size() > kMaxSentenceWords) {
      ex.seq.tokens.resize(kMaxSentenceWords);
      ex.seq.raw_words.resize(kMaxSentenceWords);
    }
    corpus.sentences.push_back(std::move(ex));
    ++line_index;
  }
  return corpus;
}

std::string augmented_record_json(const MultiModalSequence& s, int64_t line_index) {
  json slots = json::array();
  for (const auto& slot : s.slots) {
    if (slot.is_patch_group()) {
      json pids = json::array();
      for (const auto& p : slot.patches) pids.push_back(p.patch_id);
      slots.push_back({{"p", {{"orig", slot.word_id}, {"patches", pids}}}});
    } else {
      slots.push_back({{"w", slot.word_id}});
    }
  }
  json rec = {{"line", line_index}, {"slots", slots}};
  return rec.dump();
}

}  // namespace cmix
