#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmix {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A detection record failed validation. Carries the 0-based record index.
struct MalformedRecord : Error {
  MalformedRecord(std::size_t index, const std::string& what)
      : Error("malformed record " + std::to_string(index) + ": " + what),
        record_index(index) {}
  std::size_t record_index;
};

struct EmptyGallery : Error {
  EmptyGallery() : Error("gallery is empty after filtering") {}
};

struct EmptySentence : Error {
  EmptySentence() : Error("sentence has no tokens") {}
};

struct AugmentTooAggressive : Error {
  AugmentTooAggressive() : Error("augmentation left fewer than 1 token") {}
};

struct SequenceTooLong : Error {
  SequenceTooLong(std::size_t length, std::size_t cap)
      : Error("sequence length " + std::to_string(length) +
              " exceeds cap " + std::to_string(cap)) {}
};

struct EmptyImage : Error {
  EmptyImage() : Error("detection record has zero regions") {}
};

struct NumericalDivergence : Error {
  NumericalDivergence(const std::string& where)
      : Error("non-finite values in " + where) {}
};

struct ZeroVectorInCosine : Error {
  ZeroVectorInCosine() : Error("zero-norm vector in cosine similarity") {}
};

}  // namespace cmix
