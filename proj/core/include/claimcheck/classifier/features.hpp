#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace claimcheck::classifier {

// MurmurHash3 x86_32.
std::uint32_t murmur3_32(std::string_view key, std::uint32_t seed);

struct HashingParams {
  std::uint32_t min_n = 1;
  std::uint32_t max_n = 5;
  std::uint32_t dim = 1u << 18;  // power of two
  std::uint32_t seed = 0;
  bool sentinels = true;

  // Throws ConfigError.
  void validate() const;

  friend bool operator==(const HashingParams&, const HashingParams&) = default;
};

// Prepended / appended to the code point sequence when sentinels are on.
inline constexpr char32_t kStartSentinel = U'\u0002';
inline constexpr char32_t kEndSentinel = U'\u0003';

// Sorted, duplicate-free indices.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

// Every character n-gram (n in [min_n, max_n], over Unicode scalar values)
// is hashed with murmur3_32 of its UTF-8 bytes into dim buckets; bucket
// counts are L2-normalized. Empty text gives the zero vector.
SparseVector featurize(std::string_view text, const HashingParams& params);

}  // namespace claimcheck::classifier
