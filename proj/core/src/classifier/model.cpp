#include "claimcheck/classifier/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "claimcheck/error.hpp"
#include "claimcheck/io.hpp"

namespace claimcheck::classifier {
namespace {

constexpr std::string_view kMagic = "CCHM";
constexpr std::size_t kChecksumBytes = 8;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

class Reader {
 public:
  Reader(std::string_view bytes, std::string_view origin) : bytes_(bytes), origin_(origin) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    const std::uint64_t lo = u32();
    const std::uint64_t hi = u32();
    return lo | (hi << 32);
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::string_view take(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw ChecksumError(std::string(origin_) + ": model file is truncated or corrupted");
    }
  }

  std::string_view bytes_;
  std::string_view origin_;
  std::size_t pos_ = 0;
};

std::string serialize_payload(const ScorerModel& model) {
  const auto& p = model.params();
  std::string out;
  out.reserve(64 + model.weights().size() * 4);
  out.append(kMagic);
  put_u32(out, ScorerModel::kFormatVersion);
  put_u32(out, p.min_n);
  put_u32(out, p.max_n);
  put_u32(out, p.dim);
  put_u32(out, p.seed);
  out.push_back(p.sentinels ? 1 : 0);
  out.append(3, '\0');
  put_u32(out, static_cast<std::uint32_t>(model.label_names().size()));
  for (const auto& name : model.label_names()) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.append(name);
  }
  for (float b : model.bias()) put_f32(out, b);
  for (float w : model.weights()) put_f32(out, w);
  return out;
}

}  // namespace

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Decision decide(const LabelVector& vector) {
  Decision d;
  if (vector.vfc) d.vfc = decide_pair(*vector.vfc);
  if (vector.harmful) d.harmful = decide_pair(*vector.harmful);
  return d;
}

ScorerModel::ScorerModel(HashingParams params) : params_(params) {
  params_.validate();
  weights_.assign(static_cast<std::size_t>(params_.dim) * 4, 0.0f);
  label_names_.assign(kLabelNames.begin(), kLabelNames.end());
}

std::array<double, 4> ScorerModel::logits(const SparseVector& features) const {
  std::array<double, 4> z{bias_[0], bias_[1], bias_[2], bias_[3]};
  for (std::size_t i = 0; i < features.size(); ++i) {
    const float* row = &weights_[static_cast<std::size_t>(features.indices[i]) * 4];
    const double x = features.values[i];
    for (std::size_t k = 0; k < 4; ++k) z[k] += x * row[k];
  }
  return z;
}

LabelVector ScorerModel::score_features(const SparseVector& features) const {
  auto z = logits(features);
  for (double& v : z) v = sigmoid(v);
  return LabelVector::from_array(z);
}

LabelVector ScorerModel::score(std::string_view text) const {
  return score_features(featurize(text, params_));
}

std::uint64_t ScorerModel::fingerprint() const { return fnv1a64(serialize_payload(*this)); }

void ScorerModel::validate() const {
  params_.validate();
  if (weights_.size() != static_cast<std::size_t>(params_.dim) * 4) {
    throw ConfigError("weight matrix does not match the hash dimension");
  }
  for (float w : weights_) {
    if (!std::isfinite(w)) throw ConfigError("model has a non-finite weight");
  }
  for (float b : bias_) {
    if (!std::isfinite(b)) throw ConfigError("model has a non-finite bias");
  }
  if (label_names_.size() != 4) throw ConfigError("model must have exactly four labels");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string serialize_model(const ScorerModel& model) {
  model.validate();
  std::string out = serialize_payload(model);
  put_u64(out, fnv1a64(out));
  return out;
}

ScorerModel deserialize_model(std::string_view bytes, std::string_view origin) {
  const std::string where(origin);
  if (bytes.size() < 8) throw ChecksumError(where + ": model file is truncated or corrupted");
  if (bytes.substr(0, 4) != kMagic) throw Error(where + ": not a claimcheck model file (bad magic)");

  Reader header(bytes.substr(4, 4), origin);
  const std::uint32_t version = header.u32();
  if (version != ScorerModel::kFormatVersion) {
    throw VersionError(where + ": unsupported model format version " + std::to_string(version) +
                           " (this build reads version " + std::to_string(ScorerModel::kFormatVersion) + ")",
                       version, ScorerModel::kFormatVersion);
  }

  if (bytes.size() < 8 + kChecksumBytes) throw ChecksumError(where + ": model file is truncated or corrupted");
  const auto payload = bytes.substr(0, bytes.size() - kChecksumBytes);
  Reader trailer(bytes.substr(bytes.size() - kChecksumBytes), origin);
  if (trailer.u64() != fnv1a64(payload)) {
    throw ChecksumError(where + ": checksum mismatch (model file is truncated or corrupted)");
  }

  Reader r(payload, origin);
  r.take(8);
  HashingParams params;
  params.min_n = r.u32();
  params.max_n = r.u32();
  params.dim = r.u32();
  params.seed = r.u32();
  params.sentinels = r.u8() != 0;
  r.take(3);
  try {
    params.validate();
  } catch (const ConfigError& e) {
    throw Error(where + ": " + e.what());
  }

  ScorerModel model(params);
  const std::uint32_t label_count = r.u32();
  if (label_count != 4) throw Error(where + ": expected 4 labels, found " + std::to_string(label_count));
  model.label_names().clear();
  for (std::uint32_t i = 0; i < label_count; ++i) {
    const std::uint32_t len = r.u32();
    model.label_names().emplace_back(r.take(len));
  }
  for (float& b : model.bias()) b = r.f32();
  if (r.remaining() != model.weights().size() * 4) {
    throw Error(where + ": weight block size does not match the hash dimension");
  }
  for (float& w : model.weights()) w = r.f32();
  try {
    model.validate();
  } catch (const ConfigError& e) {
    throw Error(where + ": " + e.what());
  }
  return model;
}

void save_model(const ScorerModel& model, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_model(model));
}

ScorerModel load_model(const std::filesystem::path& path) {
  return deserialize_model(io::read_file(path), path.string());
}

}  // namespace claimcheck::classifier
