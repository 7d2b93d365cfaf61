#pragma once

// The five architectures over a shared token-convolution encoder, plus the
// per-scene context ring. Previous utterances enter every forward pass as
// detached feature vectors; only the current utterance's path carries
// gradients.

#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "emoseq/config.hpp"
#include "emoseq/graph.hpp"
#include "emoseq/tensor.hpp"

namespace emoseq {

struct Model {
  ModelConfig cfg;
  // unique_ptr keeps Parameter addresses stable while a Graph references them
  std::vector<std::unique_ptr<Parameter>> params;

  Parameter& find(std::string_view name) {
    for (auto& p : params)
      if (p->name == name) return *p;
    throw ArgumentError("model has no parameter named '" + std::string(name) + "'");
  }
  const Parameter& find(std::string_view name) const {
    for (const auto& p : params)
      if (p->name == name) return *p;
    throw ArgumentError("model has no parameter named '" + std::string(name) + "'");
  }

  void zero_grads() {
    for (auto& p : params) p->zero_grad();
  }

  Model clone() const {
    Model copy;
    copy.cfg = cfg;
    for (const auto& p : params)
      copy.params.push_back(std::make_unique<Parameter>(*p));
    return copy;
  }
};

namespace detail {

inline Tensor glorot_uniform(std::vector<std::size_t> shape, std::size_t fan_in,
                             std::size_t fan_out, Rng& rng) {
  Tensor t(std::move(shape));
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.data) v = rng.uniform(-limit, limit);
  return t;
}

}  // namespace detail

// Seeded parameter construction. Weights are Glorot-uniform; biases behind a
// ReLU start at a small positive value so units are alive from the first
// step, the classifier bias starts at zero. Creation order is fixed so the
// same seed always yields the same model.
inline Model init_model(const ModelConfig& cfg) {
  cfg.validate();
  Model model;
  model.cfg = cfg;
  Rng rng(derive_seed(cfg.seed, 0x6d6f64656cULL));
  auto add_weight = [&](std::string name, std::vector<std::size_t> shape,
                        std::size_t fan_in, std::size_t fan_out) {
    model.params.push_back(std::make_unique<Parameter>(
        std::move(name), detail::glorot_uniform(std::move(shape), fan_in, fan_out, rng)));
  };
  auto add_bias = [&](std::string name, std::size_t len, double fill = 0.1) {
    Tensor t({len});
    std::fill(t.data.begin(), t.data.end(), fill);
    model.params.push_back(std::make_unique<Parameter>(std::move(name), std::move(t)));
  };

  for (std::size_t rho = 1; rho <= cfg.conv1_max_region; ++rho) {
    add_weight("conv1.r" + std::to_string(rho) + ".w",
               {cfg.conv1_filters, rho, cfg.embed_dim}, rho * cfg.embed_dim,
               cfg.conv1_filters);
    add_bias("conv1.r" + std::to_string(rho) + ".b", cfg.conv1_filters);
  }
  if (cfg.uses_conv2()) {
    for (std::size_t beta = 1; beta <= cfg.conv2_max_region; ++beta) {
      add_weight("conv2.r" + std::to_string(beta) + ".w",
                 {cfg.conv2_filters, beta, cfg.feature_len()},
                 beta * cfg.feature_len(), cfg.conv2_filters);
      add_bias("conv2.r" + std::to_string(beta) + ".b", cfg.conv2_filters);
    }
  }
  if (cfg.arch == Arch::ScnnCA)
    add_weight("attn.matrix", {cfg.feature_len(), cfg.seq_len}, cfg.feature_len(),
               cfg.seq_len);
  if (cfg.arch == Arch::ScnnVA)
    add_weight("attn.vector", {cfg.conv2_out_len()}, cfg.conv2_out_len(), 1);
  if (cfg.uses_fusion()) {
    add_weight("fusion.w", {cfg.fusion_field}, cfg.fusion_field, 1);
    add_bias("fusion.b", 1);
  }
  add_weight("fc.w", {cfg.num_classes, cfg.classifier_input_len()},
             cfg.classifier_input_len(), cfg.num_classes);
  add_bias("fc.b", cfg.num_classes, 0.0);
  return model;
}

// Token convolution: one feature map per region size 1..r.
inline std::vector<Value> conv_text(Graph& g, Model& model, Value x) {
  std::vector<Value> maps;
  for (std::size_t rho = 1; rho <= model.cfg.conv1_max_region; ++rho) {
    Value w = g.param(model.find("conv1.r" + std::to_string(rho) + ".w"));
    Value b = g.param(model.find("conv1.r" + std::to_string(rho) + ".b"));
    maps.push_back(g.conv_region(x, w, b, /*relu=*/true));
  }
  return maps;
}

// Utterance encoder: conv_text then per-region max pooling, concatenated in
// region order. Output length r*f.
inline Value encode_utterance(Graph& g, Model& model, Value x) {
  std::vector<Value> pooled;
  for (Value map : conv_text(g, model, x)) pooled.push_back(g.maxpool_time(map));
  if (pooled.size() == 1) return pooled.front();
  return g.concat(pooled);
}

// Ring of the most recent previous feature vectors within the current scene.
class SceneContext {
 public:
  explicit SceneContext(std::size_t seq_len) : seq_len_(seq_len) {
    if (seq_len == 0) throw ArgumentError("SceneContext: sequence length must be positive");
  }

  void reset() { ring_.clear(); }

  void push(Tensor h) {
    if (seq_len_ == 1) return;  // no history kept
    ring_.push_back(std::move(h));
    while (ring_.size() > seq_len_ - 1) ring_.pop_front();
  }

  std::size_t stored() const { return ring_.size(); }

  // Exactly seq_len-1 vectors, oldest first. Missing slots at scene start are
  // clamped to the earliest available vector (the current one on the very
  // first utterance).
  std::vector<Tensor> padded_history(const Tensor& current) const {
    std::vector<Tensor> out(ring_.begin(), ring_.end());
    if (seq_len_ == 1) return out;
    if (out.empty()) {
      out.assign(seq_len_ - 1, current);
      return out;
    }
    while (out.size() < seq_len_ - 1) out.insert(out.begin(), out.front());
    return out;
  }

 private:
  std::size_t seq_len_;
  std::deque<Tensor> ring_;
};

// The full ordered context (oldest ... newest, current last), seq_len entries.
inline std::vector<Tensor> context_vectors(const SceneContext& ctx, const Tensor& current) {
  std::vector<Tensor> out = ctx.padded_history(current);
  out.push_back(current);
  return out;
}

namespace detail {

// History vectors enter the graph as constants; gradients flow only through
// the live current vector.
inline std::vector<Value> sequence_values(Graph& g, Value current,
                                          const std::vector<Tensor>& history) {
  std::vector<Value> vals;
  vals.reserve(history.size() + 1);
  for (const Tensor& h : history) vals.push_back(g.constant(h));
  vals.push_back(current);
  return vals;
}

inline Value fusion_conv(Graph& g, Model& model, Value fused_input) {
  Value w = g.param(model.find("fusion.w"));
  Value b = g.param(model.find("fusion.b"));
  return g.conv1d(fused_input, w, b, model.cfg.fusion_stride, /*relu=*/true);
}

inline Value classifier(Graph& g, Model& model, Value features) {
  Value w = g.param(model.find("fc.w"));
  Value b = g.param(model.find("fc.b"));
  return g.affine(w, features, b);
}

// Sequence convolution over the stacked feature vectors, one region size per
// pass, max-pooled and concatenated. Output length d*b.
inline Value conv2_vector(Graph& g, Model& model, Value stacked) {
  std::vector<Value> pooled;
  for (std::size_t beta = 1; beta <= model.cfg.conv2_max_region; ++beta) {
    Value w = g.param(model.find("conv2.r" + std::to_string(beta) + ".w"));
    Value b = g.param(model.find("conv2.r" + std::to_string(beta) + ".b"));
    pooled.push_back(g.maxpool_time(g.conv_region(stacked, w, b, /*relu=*/true)));
  }
  if (pooled.size() == 1) return pooled.front();
  return g.concat(pooled);
}

}  // namespace detail

inline Value base_cnn_logits(Graph& g, Model& model, Value h) {
  return detail::classifier(g, model, h);
}

// Column-wise concatenation of the sequence, fused with a 1-D convolution.
inline Value scnn_c_logits(Graph& g, Model& model, Value h,
                           const std::vector<Tensor>& history) {
  Value fused_input = g.concat(detail::sequence_values(g, h, history));
  Value q = detail::fusion_conv(g, model, fused_input);
  return detail::classifier(g, model, q);
}

// Row-wise stacking plus a second convolution over the sequence axis; its
// pooled output is concatenated with the current feature vector.
inline Value scnn_v_logits(Graph& g, Model& model, Value h,
                           const std::vector<Tensor>& history) {
  Value stacked = g.stack_rows(detail::sequence_values(g, h, history));
  Value v = detail::conv2_vector(g, model, stacked);
  Value w = g.concat({h, v});
  Value q = detail::fusion_conv(g, model, w);
  return detail::classifier(g, model, q);
}

// Attention by matrix: u = h A Z with A [rf x k] trainable and Z the stacked
// sequence (current row live, history rows constant).
inline Value scnn_ca_logits(Graph& g, Model& model, Value h,
                            const std::vector<Tensor>& history) {
  const std::size_t rf = model.cfg.feature_len();
  const std::size_t k = model.cfg.seq_len;
  Value z = g.stack_rows(detail::sequence_values(g, h, history));
  Value h_row = g.reshape(h, {1, rf});
  Value a = g.param(model.find("attn.matrix"));
  Value weights = g.matmul(h_row, a);        // [1,k]
  Value u_row = g.matmul(weights, z);        // [1,rf]
  (void)k;
  Value u = g.reshape(u_row, {rf});
  Value q = detail::fusion_conv(g, model, u);
  return detail::classifier(g, model, q);
}

// Attention by vector: u = (h^T a v^T)^T with a [1 x d*b] trainable and v the
// pooled sequence-convolution output.
inline Value scnn_va_logits(Graph& g, Model& model, Value h,
                            const std::vector<Tensor>& history) {
  const std::size_t rf = model.cfg.feature_len();
  const std::size_t db = model.cfg.conv2_out_len();
  Value stacked = g.stack_rows(detail::sequence_values(g, h, history));
  Value v = detail::conv2_vector(g, model, stacked);
  Value h_col = g.reshape(h, {rf, 1});
  Value a_row = g.reshape(g.param(model.find("attn.vector")), {1, db});
  Value outer = g.matmul(h_col, a_row);            // [rf, db]
  Value u_col = g.matmul(outer, g.reshape(v, {db, 1}));  // [rf, 1]
  Value u = g.reshape(u_col, {rf});
  Value q = detail::fusion_conv(g, model, u);
  return detail::classifier(g, model, q);
}

// Dispatch on the configured architecture. `history` must hold exactly
// seq_len-1 vectors (oldest first); the base CNN ignores it.
inline Value model_logits(Graph& g, Model& model, Value h,
                          const std::vector<Tensor>& history) {
  if (model.cfg.arch != Arch::Cnn && history.size() != model.cfg.seq_len - 1)
    throw ShapeError("model_logits: expected " + std::to_string(model.cfg.seq_len - 1) +
                     " history vectors, got " + std::to_string(history.size()));
  switch (model.cfg.arch) {
    case Arch::Cnn:    return base_cnn_logits(g, model, h);
    case Arch::ScnnC:  return scnn_c_logits(g, model, h, history);
    case Arch::ScnnV:  return scnn_v_logits(g, model, h, history);
    case Arch::ScnnCA: return scnn_ca_logits(g, model, h, history);
    case Arch::ScnnVA: return scnn_va_logits(g, model, h, history);
  }
  throw ArgumentError("model_logits: invalid architecture");
}

// Raw attention weights h x A (one value per sequence slot, current last).
// Only meaningful for the matrix-attention architecture.
inline Tensor attention_row(Model& model, const Tensor& h_value) {
  if (model.cfg.arch != Arch::ScnnCA)
    throw ArgumentError("attention weights require the scnn-ca architecture, model is " +
                        std::string(arch_tag(model.cfg.arch)));
  const Tensor& a = model.find("attn.matrix").value;
  Tensor h_row({1, h_value.numel()}, h_value.data);
  Tensor out;
  matmul_into(h_row, false, a, false, out, false);
  return Tensor({model.cfg.seq_len}, out.data);
}

}  // namespace emoseq
