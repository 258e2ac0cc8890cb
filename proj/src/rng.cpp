#include "cmix/rng.hpp"

#include <algorithm>

namespace cmix {

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t mix_seed(uint64_t seed, std::string_view stage) {
  return splitmix64(seed ^ fnv1a64(stage));
}

uint64_t mix_seed(uint64_t seed, uint64_t index) {
  return splitmix64(seed ^ (index * 0x9e3779b97f4a7c15ull));
}

std::vector<size_t> RandomStream::sample_without_replacement(size_t n, size_t k) {
  k = std::min(k, n);
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + static_cast<size_t>(uniform_index(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace cmix
