#pragma once

// Model hyperparameters in one validated record.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "emoseq/common.hpp"

namespace emoseq {

enum class Arch { Cnn, ScnnC, ScnnV, ScnnCA, ScnnVA };

inline const char* arch_tag(Arch a) {
  switch (a) {
    case Arch::Cnn:    return "cnn";
    case Arch::ScnnC:  return "scnn-c";
    case Arch::ScnnV:  return "scnn-v";
    case Arch::ScnnCA: return "scnn-ca";
    case Arch::ScnnVA: return "scnn-va";
  }
  throw ArgumentError("arch_tag: invalid architecture");
}

inline Arch parse_arch(std::string_view tag) {
  if (tag == "cnn") return Arch::Cnn;
  if (tag == "scnn-c") return Arch::ScnnC;
  if (tag == "scnn-v") return Arch::ScnnV;
  if (tag == "scnn-ca") return Arch::ScnnCA;
  if (tag == "scnn-va") return Arch::ScnnVA;
  throw ArgumentError("unknown architecture tag '" + std::string(tag) +
                      "' (valid: cnn, scnn-c, scnn-v, scnn-ca, scnn-va)");
}

struct ModelConfig {
  Arch arch = Arch::ScnnC;
  std::size_t max_tokens = 40;       // tokens kept per utterance
  std::size_t embed_dim = 200;       // word vector size
  std::size_t conv1_max_region = 3;  // token-convolution region sizes 1..r
  std::size_t conv1_filters = 100;   // filters per region size
  std::size_t conv2_max_region = 2;  // sequence-convolution region sizes 1..b
  std::size_t conv2_filters = 50;    // filters per region size
  std::size_t fusion_field = 3;      // receptive field of the fusion conv
  std::size_t fusion_stride = 1;
  std::size_t seq_len = 4;           // current utterance + previous ones
  std::size_t num_classes = 7;
  std::uint64_t seed = 1;

  std::size_t feature_len() const { return conv1_max_region * conv1_filters; }
  std::size_t concat_len() const { return feature_len() * seq_len; }
  std::size_t conv2_out_len() const { return conv2_max_region * conv2_filters; }

  bool uses_conv2() const { return arch == Arch::ScnnV || arch == Arch::ScnnVA; }
  bool uses_fusion() const { return arch != Arch::Cnn; }

  // Length of the vector fed into the fusion convolution.
  std::size_t fused_input_len() const {
    switch (arch) {
      case Arch::Cnn:    return feature_len();
      case Arch::ScnnC:  return concat_len();
      case Arch::ScnnV:  return feature_len() + conv2_out_len();
      case Arch::ScnnCA: return feature_len();
      case Arch::ScnnVA: return feature_len();
    }
    throw ArgumentError("fused_input_len: invalid architecture");
  }

  // Fusion output length, accounting for stride padding.
  std::size_t fused_output_len() const {
    const std::size_t n = fused_input_len();
    std::size_t eff = n;
    if ((n - fusion_field) % fusion_stride != 0)
      eff = n + (fusion_stride - (n - fusion_field) % fusion_stride);
    return (eff - fusion_field) / fusion_stride + 1;
  }

  // Input width of the final classification layer.
  std::size_t classifier_input_len() const {
    return uses_fusion() ? fused_output_len() : feature_len();
  }

  void validate() const {
    if (max_tokens == 0 || embed_dim == 0 || conv1_max_region == 0 ||
        conv1_filters == 0 || fusion_stride == 0 || seq_len == 0)
      throw ArgumentError("model config: all dimensions must be positive");
    if (num_classes < 2) throw ArgumentError("model config: need at least 2 classes");
    if (conv1_max_region > max_tokens)
      throw ShapeError("model config: conv1 region " + std::to_string(conv1_max_region) +
                       " exceeds max_tokens " + std::to_string(max_tokens));
    if (uses_conv2()) {
      if (conv2_max_region == 0 || conv2_filters == 0)
        throw ArgumentError("model config: conv2 dimensions must be positive");
      if (conv2_max_region > seq_len)
        throw ShapeError("model config: conv2 region " + std::to_string(conv2_max_region) +
                         " exceeds sequence length " + std::to_string(seq_len));
    }
    if (uses_fusion()) {
      if (fusion_field == 0) throw ArgumentError("model config: fusion field must be positive");
      if (fusion_field > fused_input_len())
        throw ShapeError("model config: fusion field " + std::to_string(fusion_field) +
                         " exceeds fused vector length " +
                         std::to_string(fused_input_len()));
    }
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["arch"] = arch_tag(arch);
    j["max_tokens"] = max_tokens;
    j["embed_dim"] = embed_dim;
    j["conv1_max_region"] = conv1_max_region;
    j["conv1_filters"] = conv1_filters;
    j["conv2_max_region"] = conv2_max_region;
    j["conv2_filters"] = conv2_filters;
    j["fusion_field"] = fusion_field;
    j["fusion_stride"] = fusion_stride;
    j["seq_len"] = seq_len;
    j["num_classes"] = num_classes;
    j["seed"] = seed;
    return j;
  }

  static ModelConfig from_json(const nlohmann::ordered_json& j) {
    ModelConfig c;
    c.arch = parse_arch(j.at("arch").get<std::string>());
    c.max_tokens = j.at("max_tokens").get<std::size_t>();
    c.embed_dim = j.at("embed_dim").get<std::size_t>();
    c.conv1_max_region = j.at("conv1_max_region").get<std::size_t>();
    c.conv1_filters = j.at("conv1_filters").get<std::size_t>();
    c.conv2_max_region = j.at("conv2_max_region").get<std::size_t>();
    c.conv2_filters = j.at("conv2_filters").get<std::size_t>();
    c.fusion_field = j.at("fusion_field").get<std::size_t>();
    c.fusion_stride = j.at("fusion_stride").get<std::size_t>();
    c.seq_len = j.at("seq_len").get<std::size_t>();
    c.num_classes = j.at("num_classes").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.validate();
    return c;
  }
};

}  // namespace emoseq
