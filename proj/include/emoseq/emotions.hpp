#pragma once

// The seven fine emotion labels and their three-way coarse polarity.

#include <array>
#include <string_view>

#include "emoseq/common.hpp"

namespace emoseq {

enum class Emotion : int {
  Neutral = 0,
  Joyful = 1,
  Peaceful = 2,
  Powerful = 3,
  Scared = 4,
  Mad = 5,
  Sad = 6,
};

inline constexpr int kNumEmotions = 7;

enum class Polarity : int {
  Neutral = 0,
  Positive = 1,
  Negative = 2,
};

inline constexpr int kNumPolarities = 3;

inline constexpr std::array<Emotion, kNumEmotions> all_emotions() {
  return {Emotion::Neutral, Emotion::Joyful,  Emotion::Peaceful, Emotion::Powerful,
          Emotion::Scared,  Emotion::Mad,     Emotion::Sad};
}

inline const char* emotion_name(Emotion e) {
  switch (e) {
    case Emotion::Neutral:  return "neutral";
    case Emotion::Joyful:   return "joyful";
    case Emotion::Peaceful: return "peaceful";
    case Emotion::Powerful: return "powerful";
    case Emotion::Scared:   return "scared";
    case Emotion::Mad:      return "mad";
    case Emotion::Sad:      return "sad";
  }
  throw ArgumentError("emotion_name: invalid emotion value");
}

inline Emotion parse_emotion(std::string_view name) {
  const std::string low = lower_ascii(name);
  for (Emotion e : all_emotions())
    if (low == emotion_name(e)) return e;
  throw ArgumentError("unknown emotion label: '" + std::string(name) +
                      "' (expected one of neutral, joyful, peaceful, powerful, scared, mad, sad)");
}

inline Polarity to_coarse(Emotion e) {
  switch (e) {
    case Emotion::Neutral:
      return Polarity::Neutral;
    case Emotion::Joyful:
    case Emotion::Peaceful:
    case Emotion::Powerful:
      return Polarity::Positive;
    case Emotion::Scared:
    case Emotion::Mad:
    case Emotion::Sad:
      return Polarity::Negative;
  }
  throw ArgumentError("to_coarse: invalid emotion value");
}

inline const char* polarity_name(Polarity p) {
  switch (p) {
    case Polarity::Neutral:  return "neutral";
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
  }
  throw ArgumentError("polarity_name: invalid polarity value");
}

inline int emotion_index(Emotion e) { return static_cast<int>(e); }
inline Emotion emotion_at(int i) {
  if (i < 0 || i >= kNumEmotions) throw ArgumentError("emotion_at: index out of range");
  return static_cast<Emotion>(i);
}

}  // namespace emoseq
