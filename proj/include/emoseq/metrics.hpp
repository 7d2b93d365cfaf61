#pragma once

// Multiclass evaluation: confusion matrices over the 7 fine emotions, the
// derived 3-way coarse matrix, accuracies, and macro-averaged F1.

#include <array>

#include <json.hpp>

#include "emoseq/agreement.hpp"  // Confusion7
#include "emoseq/emotions.hpp"

namespace emoseq {

using Confusion3 = std::array<std::array<std::uint64_t, kNumPolarities>, kNumPolarities>;

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct Metrics {
  double acc7 = 0.0;
  double acc3 = 0.0;
  double f1_7 = 0.0;
  double f1_3 = 0.0;
  Confusion7 confusion7{};
  Confusion3 confusion3{};
  std::array<ClassScores, kNumEmotions> per_class{};
  std::uint64_t total = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["acc7"] = acc7;
    j["acc3"] = acc3;
    j["f1_7"] = f1_7;
    j["f1_3"] = f1_3;
    j["total"] = total;
    j["per_class"] = nlohmann::ordered_json::array();
    for (int e = 0; e < kNumEmotions; ++e) {
      const ClassScores& s = per_class[static_cast<std::size_t>(e)];
      nlohmann::ordered_json row;
      row["emotion"] = emotion_name(emotion_at(e));
      row["precision"] = s.precision;
      row["recall"] = s.recall;
      row["f1"] = s.f1;
      row["support"] = s.support;
      j["per_class"].push_back(std::move(row));
    }
    j["confusion7"] = confusion7;
    j["confusion3"] = confusion3;
    return j;
  }
};

namespace detail {

template <std::size_t N>
double macro_f1(const std::array<std::array<std::uint64_t, N>, N>& m,
                std::array<ClassScores, N>* per_class = nullptr) {
  double sum = 0.0;
  for (std::size_t c = 0; c < N; ++c) {
    std::uint64_t tp = m[c][c], fp = 0, fn = 0;
    for (std::size_t other = 0; other < N; ++other) {
      if (other == c) continue;
      fp += m[other][c];
      fn += m[c][other];
    }
    ClassScores s;
    s.support = tp + fn;
    s.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    s.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    // classes absent from both gold and predictions contribute f1 = 0
    s.f1 = (s.precision + s.recall > 0.0)
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    if (per_class) (*per_class)[c] = s;
    sum += s.f1;
  }
  return sum / static_cast<double>(N);
}

}  // namespace detail

inline Confusion3 coarsen_confusion(const Confusion7& fine) {
  Confusion3 coarse{};
  for (int g = 0; g < kNumEmotions; ++g)
    for (int p = 0; p < kNumEmotions; ++p)
      coarse[static_cast<std::size_t>(to_coarse(emotion_at(g)))]
            [static_cast<std::size_t>(to_coarse(emotion_at(p)))] +=
          fine[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)];
  return coarse;
}

inline Metrics metrics_from_confusion(const Confusion7& confusion) {
  Metrics m;
  m.confusion7 = confusion;
  m.confusion3 = coarsen_confusion(confusion);
  std::uint64_t trace7 = 0, trace3 = 0;
  for (int i = 0; i < kNumEmotions; ++i) {
    trace7 += confusion[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    for (int j = 0; j < kNumEmotions; ++j)
      m.total += confusion[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < kNumPolarities; ++i)
    trace3 += m.confusion3[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  if (m.total > 0) {
    m.acc7 = static_cast<double>(trace7) / static_cast<double>(m.total);
    m.acc3 = static_cast<double>(trace3) / static_cast<double>(m.total);
  }
  m.f1_7 = detail::macro_f1<kNumEmotions>(m.confusion7, &m.per_class);
  m.f1_3 = detail::macro_f1<kNumPolarities>(m.confusion3);
  return m;
}

}  // namespace emoseq
