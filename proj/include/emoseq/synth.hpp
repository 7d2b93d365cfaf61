#pragma once

// Seeded synthetic dialogue corpus with controllable sequence dependence.
// Labels follow a deterministic transition on the two previous labels (plus
// noise); tokens reveal the utterance's own label with a tunable probability,
// so sequence-aware models have real signal to pick up that a per-utterance
// classifier cannot.

#include <string>
#include <vector>

#include "emoseq/corpus.hpp"

namespace emoseq {

struct SynthSettings {
  std::size_t episodes = 20;
  std::size_t scenes_per_episode = 10;
  std::size_t utterances_per_scene = 10;  // 20*10*10 = 2000 utterances
  std::size_t tokens_per_utterance = 6;
  std::size_t vocab_size = 500;
  double reveal = 0.55;           // chance an utterance contains its cue tokens
  double transition_noise = 0.03; // chance a label ignores the transition rule
  std::uint64_t seed = 7;
};

// Next label from the two previous ones: one step around the emotion wheel,
// plus one more when the older label has an odd index. Deterministic and
// genuinely dependent on both predecessors.
inline Emotion synth_transition(Emotion prev1, Emotion prev2) {
  const int step = 1 + (emotion_index(prev2) % 2);
  return emotion_at((emotion_index(prev1) + step) % kNumEmotions);
}

inline Corpus synth_corpus(const SynthSettings& s) {
  if (s.episodes == 0 || s.scenes_per_episode == 0 || s.utterances_per_scene == 0)
    throw ArgumentError("synth: all counts must be positive");
  if (s.tokens_per_utterance < 2)
    throw ArgumentError("synth: need at least 2 tokens per utterance");
  if (s.reveal < 0.0 || s.reveal > 1.0 || s.transition_noise < 0.0 ||
      s.transition_noise > 1.0)
    throw ArgumentError("synth: reveal and transition-noise must be in [0,1]");
  Rng rng(derive_seed(s.seed, 0x73796e7468ULL));
  Corpus corpus;
  for (std::size_t e = 0; e < s.episodes; ++e) {
    Episode ep;
    ep.id = "ep" + std::to_string(e + 1);
    for (std::size_t sc = 0; sc < s.scenes_per_episode; ++sc) {
      Scene scene;
      scene.id = "sc" + std::to_string(sc + 1);
      Emotion prev1 = Emotion::Neutral, prev2 = Emotion::Neutral;
      for (std::size_t ui = 0; ui < s.utterances_per_scene; ++ui) {
        Emotion label;
        if (ui < 2 || rng.uniform() < s.transition_noise)
          label = emotion_at(static_cast<int>(rng.index(kNumEmotions)));
        else
          label = synth_transition(prev1, prev2);
        Utterance u;
        u.index = ui;
        u.id = utterance_id(ep.id, scene.id, ui);
        u.speaker = "spk" + std::to_string(rng.index(6) + 1);
        u.gold = label;
        const bool revealed = rng.uniform() < s.reveal;
        for (std::size_t t = 0; t < s.tokens_per_utterance; ++t) {
          if (revealed && t < 2)
            u.tokens.push_back("cue" + std::to_string(emotion_index(label)));
          else
            u.tokens.push_back("w" + std::to_string(rng.index(s.vocab_size)));
        }
        scene.utterances.push_back(std::move(u));
        prev2 = prev1;
        prev1 = label;
      }
      ep.scenes.push_back(std::move(scene));
    }
    corpus.episodes.push_back(std::move(ep));
  }
  return corpus;
}

}  // namespace emoseq
