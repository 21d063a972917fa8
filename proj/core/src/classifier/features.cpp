#include "claimcheck/classifier/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "claimcheck/error.hpp"
#include "claimcheck/unicode.hpp"

namespace claimcheck::classifier {
namespace {

inline std::uint32_t rotl32(std::uint32_t x, int r) { return (x << r) | (x >> (32 - r)); }

inline std::uint32_t fmix32(std::uint32_t h) {
  h ^= h >> 16;
  h *= 0x85ebca6bu;
  h ^= h >> 13;
  h *= 0xc2b2ae35u;
  h ^= h >> 16;
  return h;
}

}  // namespace

std::uint32_t murmur3_32(std::string_view key, std::uint32_t seed) {
  const auto* data = reinterpret_cast<const unsigned char*>(key.data());
  const std::size_t len = key.size();
  const std::size_t nblocks = len / 4;
  constexpr std::uint32_t c1 = 0xcc9e2d51u;
  constexpr std::uint32_t c2 = 0x1b873593u;
  std::uint32_t h1 = seed;

  for (std::size_t i = 0; i < nblocks; ++i) {
    // Little-endian block read regardless of host order.
    std::uint32_t k1 = static_cast<std::uint32_t>(data[4 * i]) |
                       static_cast<std::uint32_t>(data[4 * i + 1]) << 8 |
                       static_cast<std::uint32_t>(data[4 * i + 2]) << 16 |
                       static_cast<std::uint32_t>(data[4 * i + 3]) << 24;
    k1 *= c1;
    k1 = rotl32(k1, 15);
    k1 *= c2;
    h1 ^= k1;
    h1 = rotl32(h1, 13);
    h1 = h1 * 5 + 0xe6546b64u;
  }

  const unsigned char* tail = data + nblocks * 4;
  std::uint32_t k1 = 0;
  switch (len & 3) {
    case 3: k1 ^= static_cast<std::uint32_t>(tail[2]) << 16; [[fallthrough]];
    case 2: k1 ^= static_cast<std::uint32_t>(tail[1]) << 8; [[fallthrough]];
    case 1:
      k1 ^= tail[0];
      k1 *= c1;
      k1 = rotl32(k1, 15);
      k1 *= c2;
      h1 ^= k1;
  }

  h1 ^= static_cast<std::uint32_t>(len);
  return fmix32(h1);
}

void HashingParams::validate() const {
  if (min_n < 1 || max_n < min_n) {
    throw ConfigError("n-gram range must satisfy 1 <= min_n <= max_n (got " + std::to_string(min_n) +
                      ".." + std::to_string(max_n) + ")");
  }
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw ConfigError("hash dimension must be a power of two (got " + std::to_string(dim) + ")");
  }
}

SparseVector featurize(std::string_view text, const HashingParams& params) {
  SparseVector out;
  if (text.empty()) return out;

  // UTF-8 byte offset of every code point boundary, sentinels included.
  std::string bytes;
  std::vector<std::size_t> offsets;
  const auto cps = unicode::decode(text);
  bytes.reserve(text.size() + 2);
  offsets.reserve(cps.size() + 3);
  auto push = [&](char32_t cp) {
    offsets.push_back(bytes.size());
    unicode::append_utf8(bytes, cp);
  };
  if (params.sentinels) push(kStartSentinel);
  for (char32_t cp : cps) push(cp);
  if (params.sentinels) push(kEndSentinel);
  offsets.push_back(bytes.size());

  const std::size_t length = offsets.size() - 1;
  const std::uint32_t mask = params.dim - 1;
  std::vector<std::uint32_t> buckets;
  buckets.reserve(length * (params.max_n - params.min_n + 1));
  for (std::size_t n = params.min_n; n <= params.max_n && n <= length; ++n) {
    for (std::size_t start = 0; start + n <= length; ++start) {
      const std::string_view gram(bytes.data() + offsets[start], offsets[start + n] - offsets[start]);
      buckets.push_back(murmur3_32(gram, params.seed) & mask);
    }
  }
  std::sort(buckets.begin(), buckets.end());

  double norm2 = 0.0;
  for (std::size_t i = 0; i < buckets.size();) {
    std::size_t j = i;
    while (j < buckets.size() && buckets[j] == buckets[i]) ++j;
    const auto count = static_cast<double>(j - i);
    out.indices.push_back(buckets[i]);
    out.values.push_back(count);
    norm2 += count * count;
    i = j;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : out.values) v *= inv;
  }
  return out;
}

}  // namespace claimcheck::classifier
