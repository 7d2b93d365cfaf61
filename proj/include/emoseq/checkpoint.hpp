#pragma once

// Versioned binary checkpoint: a JSON config blob plus named parameter
// tensors with raw little-endian doubles. Round-trips byte for byte.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "emoseq/config.hpp"
#include "emoseq/model.hpp"

namespace emoseq {

struct Checkpoint {
  std::string config_json;  // kept verbatim from save to load
  std::vector<std::pair<std::string, Tensor>> tensors;
};

inline constexpr char kCheckpointMagic[8] = {'E', 'M', 'O', 'S', 'E', 'Q', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T take(const std::string& in, std::size_t& off) {
  if (off + sizeof(T) > in.size())
    throw ParseError("checkpoint: truncated file");
  T v;
  std::memcpy(&v, in.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace detail

inline std::string checkpoint_bytes(const Checkpoint& ck) {
  std::string out;
  out.append(kCheckpointMagic, sizeof(kCheckpointMagic));
  detail::put<std::uint32_t>(out, kCheckpointVersion);
  detail::put<std::uint64_t>(out, ck.config_json.size());
  out.append(ck.config_json);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(ck.tensors.size()));
  for (const auto& [name, tensor] : ck.tensors) {
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.append(name);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.rank()));
    for (std::size_t d : tensor.shape) detail::put<std::uint64_t>(out, d);
    for (double v : tensor.data) detail::put<double>(out, v);
  }
  return out;
}

inline Checkpoint checkpoint_from_bytes(const std::string& in) {
  std::size_t off = 0;
  if (in.size() < sizeof(kCheckpointMagic) ||
      std::memcmp(in.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0)
    throw ParseError("checkpoint: bad magic");
  off = sizeof(kCheckpointMagic);
  const auto version = detail::take<std::uint32_t>(in, off);
  if (version != kCheckpointVersion)
    throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  Checkpoint ck;
  const auto json_len = detail::take<std::uint64_t>(in, off);
  if (off + json_len > in.size()) throw ParseError("checkpoint: truncated config");
  ck.config_json = in.substr(off, json_len);
  off += json_len;
  const auto n = detail::take<std::uint32_t>(in, off);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto name_len = detail::take<std::uint32_t>(in, off);
    if (off + name_len > in.size()) throw ParseError("checkpoint: truncated name");
    std::string name = in.substr(off, name_len);
    off += name_len;
    const auto rank = detail::take<std::uint32_t>(in, off);
    std::vector<std::size_t> shape;
    for (std::uint32_t d = 0; d < rank; ++d)
      shape.push_back(static_cast<std::size_t>(detail::take<std::uint64_t>(in, off)));
    Tensor t(shape);
    for (std::size_t j = 0; j < t.numel(); ++j) t.data[j] = detail::take<double>(in, off);
    ck.tensors.emplace_back(std::move(name), std::move(t));
  }
  return ck;
}

inline void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write checkpoint: " + path.string());
  const std::string bytes = checkpoint_bytes(ck);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return checkpoint_from_bytes(bytes);
}

// The checkpoint config blob is {"model": <ModelConfig>, ...}; extra keys
// (e.g. the CLI's resolved run config) ride along untouched.
inline Checkpoint checkpoint_from_model(const Model& model,
                                        const nlohmann::ordered_json& extra = {}) {
  Checkpoint ck;
  nlohmann::ordered_json cfg;
  cfg["model"] = model.cfg.to_json();
  if (extra.is_object())
    for (const auto& [key, value] : extra.items()) cfg[key] = value;
  ck.config_json = cfg.dump();
  for (const auto& p : model.params) ck.tensors.emplace_back(p->name, p->value);
  return ck;
}

inline Model model_from_checkpoint(const Checkpoint& ck) {
  nlohmann::ordered_json cfg;
  try {
    cfg = nlohmann::ordered_json::parse(ck.config_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("checkpoint: config blob is not valid JSON: ") + e.what());
  }
  if (!cfg.contains("model")) throw ParseError("checkpoint: config blob lacks 'model'");
  Model model = init_model(ModelConfig::from_json(cfg["model"]));
  for (const auto& [name, tensor] : ck.tensors) {
    Parameter& p = model.find(name);
    if (!p.value.same_shape(tensor))
      throw ShapeError("checkpoint: tensor '" + name + "' has shape " +
                       shape_str(tensor.shape) + ", model expects " +
                       shape_str(p.value.shape));
    p.value = tensor;
  }
  return model;
}

}  // namespace emoseq
