#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <map>

#include "claimcheck/classifier/features.hpp"
#include "claimcheck/error.hpp"
#include "claimcheck/random.hpp"
#include "claimcheck/unicode.hpp"

namespace claimcheck::classifier {
namespace {

TEST(Murmur3, PublishedVectors) {
  EXPECT_EQ(murmur3_32("", 0), 0u);
  EXPECT_EQ(murmur3_32("", 1), 0x514E28B7u);
  EXPECT_EQ(murmur3_32("", 0xffffffffu), 0x81F16F39u);
  EXPECT_EQ(murmur3_32(std::string_view("\0\0\0\0", 4), 0), 0x2362F9DEu);
  const std::uint32_t s = 0x9747b28c;
  EXPECT_EQ(murmur3_32("aaaa", s), 0x5A97808Au);
  EXPECT_EQ(murmur3_32("aaa", s), 0x283E0130u);
  EXPECT_EQ(murmur3_32("aa", s), 0x5D211726u);
  EXPECT_EQ(murmur3_32("a", s), 0x7FA09EA6u);
  EXPECT_EQ(murmur3_32("abcd", s), 0xF0478627u);
  EXPECT_EQ(murmur3_32("abc", s), 0xC84A62DDu);
  EXPECT_EQ(murmur3_32("ab", s), 0x74875592u);
  EXPECT_EQ(murmur3_32("Hello, world!", s), 0x24884CBAu);
  EXPECT_EQ(murmur3_32("The quick brown fox jumps over the lazy dog", s), 0x2FA826CDu);
}

// Straight transcription of the reference algorithm, kept apart from the library.
std::uint32_t reference_murmur(const std::string& key, std::uint32_t seed) {
  auto rotl = [](std::uint32_t x, int r) { return (x << r) | (x >> (32 - r)); };
  const std::uint32_t c1 = 0xcc9e2d51, c2 = 0x1b873593;
  std::uint32_t h = seed;
  const std::size_t blocks = key.size() / 4;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::uint32_t k = 0;
    for (int b = 3; b >= 0; --b) k = (k << 8) | static_cast<unsigned char>(key[i * 4 + b]);
    k *= c1;
    k = rotl(k, 15);
    k *= c2;
    h ^= k;
    h = rotl(h, 13);
    h = h * 5 + 0xe6546b64;
  }
  std::uint32_t k = 0;
  const std::size_t tail = blocks * 4;
  for (std::size_t r = key.size() - tail; r > 0; --r) k = (k << 8) | static_cast<unsigned char>(key[tail + r - 1]);
  if (key.size() % 4 != 0) {
    k *= c1;
    k = rotl(k, 15);
    k *= c2;
    h ^= k;
  }
  h ^= static_cast<std::uint32_t>(key.size());
  h ^= h >> 16;
  h *= 0x85ebca6b;
  h ^= h >> 13;
  h *= 0xc2b2ae35;
  h ^= h >> 16;
  return h;
}

TEST(Murmur3, AgreesWithReferenceOnRandomKeys) {
  SeededRng rng(77);
  for (int i = 0; i < 500; ++i) {
    std::string key(rng.uniform_below(40), '\0');
    for (auto& ch : key) ch = static_cast<char>(rng.uniform_below(256));
    const auto seed = static_cast<std::uint32_t>(rng.next());
    ASSERT_EQ(murmur3_32(key, seed), reference_murmur(key, seed));
  }
}

std::map<std::uint32_t, double> oracle_features(const std::vector<std::string>& grams, const HashingParams& p) {
  std::map<std::uint32_t, double> counts;
  for (const auto& g : grams) counts[reference_murmur(g, p.seed) % p.dim] += 1.0;
  double norm = 0.0;
  for (const auto& [k, v] : counts) norm += v * v;
  for (auto& [k, v] : counts) v /= std::sqrt(norm);
  return counts;
}

void expect_matches(const SparseVector& got, const std::map<std::uint32_t, double>& want) {
  ASSERT_EQ(got.size(), want.size());
  std::size_t i = 0;
  for (const auto& [k, v] : want) {
    EXPECT_EQ(got.indices[i], k);
    EXPECT_NEAR(got.values[i], v, 1e-15);
    ++i;
  }
}

TEST(Featurize, HandEnumeratedGrams) {
  HashingParams p;
  p.min_n = 1;
  p.max_n = 2;
  p.sentinels = false;
  expect_matches(featurize("ab", p), oracle_features({"a", "b", "ab"}, p));

  p.sentinels = true;
  p.seed = 5;
  p.dim = 1u << 10;
  expect_matches(featurize("ab", p), oracle_features({"\x02", "a", "b", "\x03", "\x02" "a", "ab", "b\x03"}, p));

  // Grams are taken over code points, hashed as UTF-8.
  p.sentinels = false;
  p.max_n = 1;
  expect_matches(featurize("жж", p), oracle_features({"ж", "ж"}, p));
}

TEST(Featurize, EmptyAndDeterministic) {
  const HashingParams p;
  EXPECT_TRUE(featurize("", p).empty());
  const auto a = featurize("same text", p);
  const auto b = featurize("same text", p);
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_EQ(a.values, b.values);
}

TEST(Featurize, SortedUniqueUnitNorm) {
  SeededRng rng(9);
  HashingParams p;
  p.dim = 1u << 8;  // small enough to force collisions
  for (int trial = 0; trial < 200; ++trial) {
    std::u32string text;
    const auto len = 1 + rng.uniform_below(60);
    for (std::uint64_t i = 0; i < len; ++i) text.push_back(U'a' + static_cast<char32_t>(rng.uniform_below(5)));
    const auto v = featurize(unicode::encode(text), p);
    double norm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) {
        ASSERT_LT(v.indices[i - 1], v.indices[i]);
      }
      ASSERT_LT(v.indices[i], p.dim);
      ASSERT_GT(v.values[i], 0.0);
      norm += v.values[i] * v.values[i];
    }
    EXPECT_NEAR(norm, 1.0, 1e-12);
  }
}

TEST(HashingParams, Validation) {
  HashingParams p;
  p.dim = 1000;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.min_n = 3;
  p.max_n = 2;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.min_n = 0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace claimcheck::classifier
