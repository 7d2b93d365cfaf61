#pragma once

// Pretrained word vectors in word2vec text format, plus token-sequence to
// input-matrix embedding. Vectors are frozen; they never receive gradients.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "emoseq/common.hpp"
#include "emoseq/tensor.hpp"

namespace emoseq {

enum class OovPolicy { Zero, SeededRandom };

inline OovPolicy parse_oov_policy(std::string_view s) {
  if (s == "zero") return OovPolicy::Zero;
  if (s == "seeded-random") return OovPolicy::SeededRandom;
  throw ArgumentError("unknown OOV policy '" + std::string(s) +
                      "' (expected zero or seeded-random)");
}

class EmbeddingTable {
 public:
  // An empty table: every token resolves through the OOV policy. Useful for
  // synthetic corpora where arbitrary seeded vectors are good enough.
  EmbeddingTable(std::size_t dim, OovPolicy policy, std::uint64_t seed)
      : dim_(dim), policy_(policy), seed_(seed) {
    if (dim == 0) throw ArgumentError("embedding dimension must be positive");
  }

  static EmbeddingTable load_word2vec_text(const std::filesystem::path& path,
                                           OovPolicy policy = OovPolicy::Zero,
                                           std::uint64_t seed = 0) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open embedding file: " + path.string());
    std::string line;
    if (!std::getline(in, line))
      throw ParseError("embedding file " + path.string() + " is empty");
    std::size_t declared = 0, dim = 0;
    {
      const char* s = line.c_str();
      char* end = nullptr;
      declared = std::strtoull(s, &end, 10);
      const char* s2 = end;
      dim = std::strtoull(s2, &end, 10);
      if (end == s2 || dim == 0)
        throw ParseError("embedding file " + path.string() +
                         " line 1: expected header 'count dim'");
    }
    EmbeddingTable table(dim, policy, seed);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::size_t sp = line.find(' ');
      if (sp == std::string::npos)
        throw ParseError("embedding file " + path.string() + " line " +
                         std::to_string(lineno) + ": no values after token");
      std::string token = line.substr(0, sp);
      std::vector<double> vec;
      vec.reserve(dim);
      const char* cursor = line.c_str() + sp;
      while (true) {
        char* end = nullptr;
        double v = std::strtod(cursor, &end);
        if (end == cursor) break;
        vec.push_back(v);
        cursor = end;
      }
      if (vec.size() != dim)
        throw ParseError("embedding file " + path.string() + " line " +
                         std::to_string(lineno) + ": expected " + std::to_string(dim) +
                         " values, got " + std::to_string(vec.size()));
      auto [it, inserted] = table.table_.try_emplace(std::move(token), std::move(vec));
      if (!inserted)
        log_note("embedding file: duplicate token '" + it->first +
                 "' at line " + std::to_string(lineno) + ", keeping first");
    }
    if (declared != table.table_.size())
      log_note("embedding file: header declares " + std::to_string(declared) +
               " vectors, found " + std::to_string(table.table_.size()));
    return table;
  }

  std::size_t dim() const { return dim_; }
  std::size_t vocab_size() const { return table_.size(); }
  OovPolicy policy() const { return policy_; }

  bool contains(std::string_view token) const {
    return table_.count(lower_ascii(token)) > 0;
  }

  // Lookup never fails: unknown tokens resolve via the OOV policy.
  std::vector<double> vector_for(std::string_view token) const {
    const std::string key = lower_ascii(token);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    if (policy_ == OovPolicy::Zero) return std::vector<double>(dim_, 0.0);
    // seeded-random: the same token maps to the same vector on every call
    Rng rng(derive_seed(seed_, fnv1a(key)));
    std::vector<double> vec(dim_);
    for (double& v : vec) v = rng.uniform(-0.25, 0.25);
    return vec;
  }

 private:
  std::size_t dim_;
  OovPolicy policy_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::vector<double>> table_;
};

// Token sequence -> [max_tokens x dim] matrix. Tokens are lowercased before
// lookup; short utterances are zero-padded, long ones truncated from the
// right (extra tokens dropped).
inline Tensor embed_utterance(const EmbeddingTable& table,
                              std::span<const std::string> tokens,
                              std::size_t max_tokens,
                              std::size_t* truncated_tokens = nullptr) {
  if (max_tokens == 0) throw ArgumentError("embed_utterance: max_tokens must be positive");
  Tensor x({max_tokens, table.dim()});
  const std::size_t n = std::min(tokens.size(), max_tokens);
  if (tokens.size() > max_tokens) {
    if (truncated_tokens) *truncated_tokens += tokens.size() - max_tokens;
    log_note("embed_utterance: truncating " + std::to_string(tokens.size() - max_tokens) +
             " tokens");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> vec = table.vector_for(tokens[i]);
    for (std::size_t j = 0; j < table.dim(); ++j) x(i, j) = vec[j];
  }
  return x;
}

}  // namespace emoseq
