#include <doctest.h>

#include "emoseq/synth.hpp"

using namespace emoseq;

TEST_SUITE("synth") {

TEST_CASE("defaults produce 2000 labeled utterances") {
  SynthSettings s;
  Corpus corpus = synth_corpus(s);
  CHECK(corpus.episodes.size() == 20);
  CHECK(corpus.scene_count() == 200);
  CHECK(corpus.utterance_count() == 2000);
  for (const auto& ep : corpus.episodes)
    for (const auto& sc : ep.scenes)
      for (const auto& u : sc.utterances) {
        CHECK(u.gold.has_value());
        CHECK(u.tokens.size() == s.tokens_per_utterance);
      }
}

TEST_CASE("generation is deterministic per seed") {
  SynthSettings s;
  s.episodes = 3;
  s.scenes_per_episode = 2;
  s.seed = 7;
  CHECK(corpus_to_json(synth_corpus(s)) == corpus_to_json(synth_corpus(s)));
  SynthSettings other = s;
  other.seed = 8;
  CHECK(corpus_to_json(synth_corpus(other)) != corpus_to_json(synth_corpus(s)));
}

TEST_CASE("labels follow the two-step transition rule at the configured rate") {
  SynthSettings s;
  s.episodes = 10;
  s.transition_noise = 0.05;
  Corpus corpus = synth_corpus(s);
  std::size_t eligible = 0, followed = 0;
  for (const auto& ep : corpus.episodes)
    for (const auto& sc : ep.scenes)
      for (std::size_t i = 2; i < sc.utterances.size(); ++i) {
        ++eligible;
        const Emotion expected = synth_transition(*sc.utterances[i - 1].gold,
                                                  *sc.utterances[i - 2].gold);
        if (*sc.utterances[i].gold == expected) ++followed;
      }
  const double rate = static_cast<double>(followed) / static_cast<double>(eligible);
  // 1 - noise plus the accidental agreement of noisy draws
  CHECK(rate > 0.90);
  CHECK(rate < 1.0);
}

TEST_CASE("cue tokens appear at roughly the reveal rate and name the label") {
  SynthSettings s;
  s.reveal = 0.5;
  Corpus corpus = synth_corpus(s);
  std::size_t cued = 0, total = 0;
  for (const auto& ep : corpus.episodes)
    for (const auto& sc : ep.scenes)
      for (const auto& u : sc.utterances) {
        ++total;
        if (u.tokens[0].rfind("cue", 0) == 0) {
          ++cued;
          CHECK(u.tokens[0] == "cue" + std::to_string(emotion_index(*u.gold)));
          CHECK(u.tokens[1] == u.tokens[0]);
        }
      }
  const double rate = static_cast<double>(cued) / static_cast<double>(total);
  CHECK(rate > 0.45);
  CHECK(rate < 0.55);
}

TEST_CASE("parameter validation") {
  SynthSettings s;
  s.episodes = 0;
  CHECK_THROWS_AS(synth_corpus(s), ArgumentError);
  SynthSettings s2;
  s2.reveal = 1.5;
  CHECK_THROWS_AS(synth_corpus(s2), ArgumentError);
  SynthSettings s3;
  s3.tokens_per_utterance = 1;
  CHECK_THROWS_AS(synth_corpus(s3), ArgumentError);
}

TEST_CASE("transition function is total over the label pairs") {
  for (Emotion a : all_emotions())
    for (Emotion b : all_emotions()) {
      const Emotion next = synth_transition(a, b);
      CHECK(emotion_index(next) >= 0);
      CHECK(emotion_index(next) < kNumEmotions);
      CHECK(next != a);  // always moves at least one step
    }
}

}  // TEST_SUITE
