#pragma once

// Seeded training loop with per-utterance SGD, per-epoch dev evaluation,
// early stopping on dev macro-F1, and the evaluation/attention-export paths.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "emoseq/checkpoint.hpp"
#include "emoseq/corpus.hpp"
#include "emoseq/embeddings.hpp"
#include "emoseq/metrics.hpp"
#include "emoseq/model.hpp"

namespace emoseq {

struct TrainSettings {
  double learning_rate = 0.01;
  std::size_t max_epochs = 20;
  std::size_t patience = 5;  // epochs without dev f1_7 improvement
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  Metrics dev;
  bool best = false;
};

struct TrainOutcome {
  Model best_model;
  std::size_t best_epoch = 0;
  std::vector<EpochStats> log;
};

namespace detail {

struct SceneRef {
  const Scene* scene;
};

inline std::vector<SceneRef> collect_scenes(const Corpus& corpus,
                                            const std::vector<std::string>& episode_ids) {
  std::set<std::string> wanted(episode_ids.begin(), episode_ids.end());
  std::vector<SceneRef> out;
  for (const auto& ep : corpus.episodes) {
    if (!wanted.count(ep.id)) continue;
    wanted.erase(ep.id);
    for (const auto& sc : ep.scenes) out.push_back(SceneRef{&sc});
  }
  if (!wanted.empty())
    throw ArgumentError("split names episode '" + *wanted.begin() +
                        "' which is not in the corpus");
  return out;
}

inline std::size_t gold_index(const Utterance& u) {
  if (!u.gold) throw IntegrityError("utterance without gold label: " + u.id);
  return static_cast<std::size_t>(emotion_index(*u.gold));
}

}  // namespace detail

// One utterance's forward pass: embed, encode, classify against the scene
// context. Returns the logits node; h_out receives the encoder node.
inline Value utterance_forward(Graph& g, Model& model, const EmbeddingTable& table,
                               const Utterance& u, const SceneContext& ctx,
                               Value* h_out = nullptr) {
  Tensor x = embed_utterance(table, u.tokens, model.cfg.max_tokens);
  Value h = encode_utterance(g, model, g.constant(std::move(x)));
  if (h_out) *h_out = h;
  const std::vector<Tensor> history =
      model.cfg.arch == Arch::Cnn ? std::vector<Tensor>{}
                                  : ctx.padded_history(g.value(h));
  return model_logits(g, model, h, history);
}

// Walks the given episodes scene by scene (corpus order), predicting each
// utterance with the scene context; fills a 7x7 gold-by-predicted confusion.
inline Metrics evaluate_model(Model& model, const Corpus& corpus,
                              const std::vector<std::string>& episode_ids,
                              const EmbeddingTable& table) {
  if (table.dim() != model.cfg.embed_dim)
    throw ArgumentError("evaluate: embedding table dimension " +
                        std::to_string(table.dim()) +
                        " does not match checkpoint embed_dim " +
                        std::to_string(model.cfg.embed_dim));
  Confusion7 confusion{};
  for (const auto& ref : detail::collect_scenes(corpus, episode_ids)) {
    SceneContext ctx(model.cfg.seq_len);
    for (const Utterance& u : ref.scene->utterances) {
      Graph g;
      Value h;
      Value logits = utterance_forward(g, model, table, u, ctx, &h);
      const std::size_t pred = argmax(g.value(logits));
      ++confusion[detail::gold_index(u)][pred];
      ctx.push(g.value(h));
    }
  }
  return metrics_from_confusion(confusion);
}

inline Metrics evaluate_partition(Model& model, const Corpus& corpus,
                                  const DataSplit& split, const std::string& partition,
                                  const EmbeddingTable& table) {
  return evaluate_model(model, corpus, split_partition(split, partition), table);
}

// Prediction confusion is the confusion7 field of evaluate_model's Metrics.
inline Confusion7 prediction_confusion(Model& model, const Corpus& corpus,
                                       const std::vector<std::string>& episode_ids,
                                       const EmbeddingTable& table) {
  return evaluate_model(model, corpus, episode_ids, table).confusion7;
}

// Scenes are shuffled per epoch (seeded); utterances inside a scene stay in
// dialogue order so the context ring sees true history. One SGD step per
// utterance; history vectors are whatever the encoder produced earlier in
// the same scene pass, treated as constants.
inline TrainOutcome train_model(const ModelConfig& cfg, const Corpus& corpus,
                                const DataSplit& split, const EmbeddingTable& table,
                                const TrainSettings& settings) {
  cfg.validate();
  if (split.train.empty()) throw ArgumentError("train: empty training partition");
  if (split.dev.empty()) throw ArgumentError("train: empty dev partition");
  if (table.dim() != cfg.embed_dim)
    throw ArgumentError("train: embedding table dimension " + std::to_string(table.dim()) +
                        " does not match config embed_dim " + std::to_string(cfg.embed_dim));

  Model model = init_model(cfg);
  auto scenes = detail::collect_scenes(corpus, split.train);
  if (scenes.empty()) throw ArgumentError("train: training partition has no scenes");

  TrainOutcome outcome;
  double best_f1 = -1.0;
  for (std::size_t epoch = 1; epoch <= settings.max_epochs; ++epoch) {
    Rng epoch_rng(derive_seed(cfg.seed, 0x65706f6368ULL + epoch));
    epoch_rng.shuffle(scenes);

    double loss_sum = 0.0;
    std::size_t steps = 0;
    for (const auto& ref : scenes) {
      SceneContext ctx(cfg.seq_len);
      for (const Utterance& u : ref.scene->utterances) {
        const std::size_t gold = detail::gold_index(u);
        Graph g;
        Value h;
        Value logits = utterance_forward(g, model, table, u, ctx, &h);
        Value loss = g.softmax_xent(logits, gold);
        const double loss_value = g.value(loss).data[0];
        if (!std::isfinite(loss_value))
          throw NumericalError("training loss diverged at epoch " +
                               std::to_string(epoch) + ", utterance " + u.id);
        loss_sum += loss_value;
        ++steps;
        model.zero_grads();
        g.backward(loss);
        for (auto& p : model.params)
          for (std::size_t i = 0; i < p->value.numel(); ++i)
            p->value.data[i] -= settings.learning_rate * p->grad.data[i];
        ctx.push(g.value(h));
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = steps ? loss_sum / static_cast<double>(steps) : 0.0;
    stats.dev = evaluate_model(model, corpus, split.dev, table);
    if (stats.dev.f1_7 > best_f1) {
      best_f1 = stats.dev.f1_7;
      outcome.best_epoch = epoch;
      outcome.best_model = model.clone();
      stats.best = true;
    }
    outcome.log.push_back(stats);
    // patience 0 disables early stopping
    if (settings.patience > 0 && epoch - outcome.best_epoch >= settings.patience) break;
  }
  return outcome;
}

// Raw h x A rows for every utterance of a scene, walked with the same
// context rules as inference. Output [n_utterances x seq_len]; the last
// column is the current utterance, earlier columns are older slots.
inline Tensor export_attention(Model& model, const Scene& scene,
                               const EmbeddingTable& table) {
  if (model.cfg.arch != Arch::ScnnCA)
    throw ArgumentError("attention export requires an scnn-ca checkpoint, model is " +
                        std::string(arch_tag(model.cfg.arch)));
  const std::size_t k = model.cfg.seq_len;
  Tensor out({scene.utterances.size(), k});
  SceneContext ctx(k);
  for (std::size_t i = 0; i < scene.utterances.size(); ++i) {
    const Utterance& u = scene.utterances[i];
    Graph g;
    Tensor x = embed_utterance(table, u.tokens, model.cfg.max_tokens);
    Value h = encode_utterance(g, model, g.constant(std::move(x)));
    const Tensor row = attention_row(model, g.value(h));
    for (std::size_t j = 0; j < k; ++j) out(i, j) = row.data[j];
    ctx.push(g.value(h));
  }
  return out;
}

}  // namespace emoseq
