#pragma once

// Inter-annotator agreement statistics and the three-phase voting/ranking
// gold-label assignment over quadruple annotations.

#include <array>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "emoseq/common.hpp"
#include "emoseq/emotions.hpp"

namespace emoseq {

struct Annotation {
  std::string annotator;
  Emotion label;
};

struct AnnotationItem {
  std::string utterance_id;
  std::vector<Annotation> labels;  // exactly 4, in file order
};

enum class Fold : int { F1 = 0, F2 = 1, F3 = 2, F4 = 3, F5 = 4 };

inline constexpr int kNumFolds = 5;

inline const char* fold_name(Fold f) {
  switch (f) {
    case Fold::F1: return "F1";
    case Fold::F2: return "F2";
    case Fold::F3: return "F3";
    case Fold::F4: return "F4";
    case Fold::F5: return "F5";
  }
  throw ArgumentError("fold_name: invalid fold");
}

// Fold of a 4-annotation item by its label-frequency multiset:
// {4} -> F1, {3,1} -> F2, {2,1,1} -> F3, {2,2} -> F4, {1,1,1,1} -> F5.
// Permutation-invariant by construction.
inline Fold classify_fold(std::span<const Emotion> labels) {
  if (labels.size() != 4)
    throw ArgumentError("classify_fold: expected exactly 4 labels, got " +
                        std::to_string(labels.size()));
  std::array<int, kNumEmotions> counts{};
  for (Emotion e : labels) ++counts[static_cast<std::size_t>(emotion_index(e))];
  std::vector<int> freq;
  for (int c : counts)
    if (c > 0) freq.push_back(c);
  std::sort(freq.begin(), freq.end(), std::greater<int>());
  if (freq[0] == 4) return Fold::F1;
  if (freq[0] == 3) return Fold::F2;
  if (freq[0] == 2 && freq.size() == 3) return Fold::F3;  // {2,1,1}
  if (freq[0] == 2 && freq.size() == 2) return Fold::F4;  // {2,2}
  return Fold::F5;                                        // {1,1,1,1}
}

// Cohen's kappa between two label sequences. Expected agreement comes from
// each annotator's marginal distribution. Degenerate case: if chance
// agreement is already certain (both marginals are the same point mass),
// perfect agreement scores 1.0; anything else scores 0.0 rather than
// dividing by zero.
inline double cohen_kappa(std::span<const Emotion> a, std::span<const Emotion> b) {
  if (a.size() != b.size())
    throw ArgumentError("cohen_kappa: sequence lengths differ (" +
                        std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw ArgumentError("cohen_kappa: empty sequences");
  const double n = static_cast<double>(a.size());
  std::array<double, kNumEmotions> ca{}, cb{};
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[static_cast<std::size_t>(emotion_index(a[i]))];
    ++cb[static_cast<std::size_t>(emotion_index(b[i]))];
    if (a[i] == b[i]) ++agree;
  }
  const double po = static_cast<double>(agree) / n;
  double pe = 0.0;
  for (int e = 0; e < kNumEmotions; ++e)
    pe += (ca[static_cast<std::size_t>(e)] / n) * (cb[static_cast<std::size_t>(e)] / n);
  if (pe >= 1.0) {
    if (po == 1.0) return 1.0;
    log_note("cohen_kappa: degenerate marginals with imperfect agreement; returning 0");
    return 0.0;
  }
  return (po - pe) / (1.0 - pe);
}

// Fleiss' kappa over per-item category count vectors. Every item must have
// counts summing to the rater count.
inline double fleiss_kappa(const std::vector<std::vector<std::size_t>>& items,
                           std::size_t raters) {
  if (items.empty()) throw ArgumentError("fleiss_kappa: no items");
  if (raters < 2) throw ArgumentError("fleiss_kappa: need at least 2 raters");
  const std::size_t categories = items.front().size();
  if (categories == 0) throw ArgumentError("fleiss_kappa: no categories");
  const double n = static_cast<double>(raters);
  const double big_n = static_cast<double>(items.size());
  std::vector<double> category_totals(categories, 0.0);
  double mean_agreement = 0.0;
  for (const auto& counts : items) {
    if (counts.size() != categories)
      throw ArgumentError("fleiss_kappa: inconsistent category counts across items");
    std::size_t sum = 0;
    double sq = 0.0;
    for (std::size_t j = 0; j < categories; ++j) {
      sum += counts[j];
      sq += static_cast<double>(counts[j]) * static_cast<double>(counts[j]);
      category_totals[j] += static_cast<double>(counts[j]);
    }
    if (sum != raters)
      throw ArgumentError("fleiss_kappa: item counts sum to " + std::to_string(sum) +
                          " but rater count is " + std::to_string(raters));
    mean_agreement += (sq - n) / (n * (n - 1.0));
  }
  mean_agreement /= big_n;
  double pe = 0.0;
  for (std::size_t j = 0; j < categories; ++j) {
    const double pj = category_totals[j] / (big_n * n);
    pe += pj * pj;
  }
  if (pe >= 1.0) {
    if (mean_agreement >= 1.0) return 1.0;
    log_note("fleiss_kappa: degenerate marginals with imperfect agreement; returning 0");
    return 0.0;
  }
  return (mean_agreement - pe) / (1.0 - pe);
}

// Fraction of items where at least one pair among the first k annotations
// agrees.
inline double partial_agreement(const std::vector<AnnotationItem>& items, std::size_t k) {
  if (k < 2 || k > 4)
    throw ArgumentError("partial_agreement: annotator count must be in [2,4], got " +
                        std::to_string(k));
  if (items.empty()) throw ArgumentError("partial_agreement: no items");
  std::size_t hits = 0;
  for (const auto& item : items) {
    if (item.labels.size() < k)
      throw ArgumentError("partial_agreement: item " + item.utterance_id +
                          " has fewer than " + std::to_string(k) + " annotations");
    bool agree = false;
    for (std::size_t i = 0; i < k && !agree; ++i)
      for (std::size_t j = i + 1; j < k && !agree; ++j)
        agree = item.labels[i].label == item.labels[j].label;
    if (agree) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

enum class Resolution : int { Majority = 0, Lae = 1, Fallback = 2 };

inline const char* resolution_name(Resolution r) {
  switch (r) {
    case Resolution::Majority: return "majority";
    case Resolution::Lae:      return "lae";
    case Resolution::Fallback: return "fallback";
  }
  throw ArgumentError("resolution_name: invalid resolution");
}

struct GoldAssignment {
  std::string utterance_id;
  Emotion gold = Emotion::Neutral;
  Fold fold = Fold::F1;
  Resolution resolution = Resolution::Majority;
};

struct AnnotatorRecord {
  std::string annotator_id;
  std::size_t lae = 0;           // disagreements with majority gold on F1-F3
  std::size_t items_scored = 0;  // F1-F3 items this annotator labeled
};

struct GoldResult {
  std::vector<GoldAssignment> items;  // input order
  std::array<std::size_t, kNumFolds> fold_counts{};
  std::array<double, kNumFolds> fold_ratios{};
  double majority_coverage = 0.0;  // F1-F3 fraction (phase 1)
  double ranking_coverage = 0.0;   // F4-F5 fraction (phases 2-3)
  std::vector<AnnotatorRecord> annotators;  // sorted by id
  std::size_t fallback_count = 0;
};

// The three-phase voting/ranking scheme. Phase 1: majority labels for items
// whose multiset has a unique mode (F1-F3). Phase 2: per-annotator LAE =
// count of disagreements with phase-1 gold. Phase 3: each F4/F5 item takes
// the label of its lowest-LAE annotator (ties by annotator id); annotators
// with no F1-F3 history rank below all scored ones, and items where all four
// are unscored fall back to the first annotation in file order.
inline GoldResult assign_gold(const std::vector<AnnotationItem>& items) {
  if (items.empty()) throw ArgumentError("assign_gold: no items");
  GoldResult result;
  result.items.resize(items.size());

  // phase 1: folds and majority labels
  std::vector<Fold> folds(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    if (item.labels.size() != 4)
      throw ArgumentError("assign_gold: item " + item.utterance_id +
                          " has " + std::to_string(item.labels.size()) +
                          " annotations (need 4)");
    std::array<Emotion, 4> ls{item.labels[0].label, item.labels[1].label,
                              item.labels[2].label, item.labels[3].label};
    folds[i] = classify_fold(ls);
    ++result.fold_counts[static_cast<std::size_t>(folds[i])];
    result.items[i].utterance_id = item.utterance_id;
    result.items[i].fold = folds[i];
    if (folds[i] == Fold::F1 || folds[i] == Fold::F2 || folds[i] == Fold::F3) {
      std::array<int, kNumEmotions> counts{};
      for (Emotion e : ls) ++counts[static_cast<std::size_t>(emotion_index(e))];
      int best = 0;
      for (int e = 1; e < kNumEmotions; ++e)
        if (counts[static_cast<std::size_t>(e)] > counts[static_cast<std::size_t>(best)])
          best = e;
      result.items[i].gold = emotion_at(best);
      result.items[i].resolution = Resolution::Majority;
    }
  }

  // phase 2: LAE per annotator over majority-resolved items
  std::map<std::string, AnnotatorRecord> records;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (folds[i] == Fold::F4 || folds[i] == Fold::F5) continue;
    for (const Annotation& a : items[i].labels) {
      AnnotatorRecord& rec = records[a.annotator];
      rec.annotator_id = a.annotator;
      ++rec.items_scored;
      if (a.label != result.items[i].gold) ++rec.lae;
    }
  }

  // phase 3: ranking resolution for F4/F5
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (folds[i] != Fold::F4 && folds[i] != Fold::F5) continue;
    const Annotation* chosen = nullptr;
    std::size_t best_lae = std::numeric_limits<std::size_t>::max();
    for (const Annotation& a : items[i].labels) {
      auto it = records.find(a.annotator);
      if (it == records.end() || it->second.items_scored == 0) continue;  // unscored
      if (!chosen || it->second.lae < best_lae ||
          (it->second.lae == best_lae && a.annotator < chosen->annotator)) {
        chosen = &a;
        best_lae = it->second.lae;
      }
    }
    if (chosen) {
      result.items[i].gold = chosen->label;
      result.items[i].resolution = Resolution::Lae;
    } else {
      result.items[i].gold = items[i].labels.front().label;
      result.items[i].resolution = Resolution::Fallback;
      ++result.fallback_count;
    }
  }

  const double total = static_cast<double>(items.size());
  for (int f = 0; f < kNumFolds; ++f)
    result.fold_ratios[static_cast<std::size_t>(f)] =
        static_cast<double>(result.fold_counts[static_cast<std::size_t>(f)]) / total;
  result.majority_coverage = result.fold_ratios[0] + result.fold_ratios[1] +
                             result.fold_ratios[2];
  result.ranking_coverage = 1.0 - result.majority_coverage;
  for (auto& [id, rec] : records) result.annotators.push_back(rec);
  return result;
}

using Confusion7 = std::array<std::array<std::uint64_t, kNumEmotions>, kNumEmotions>;

// Annotation confusion: cell (gold, selected) counts annotator choices; each
// item contributes 4 counts.
inline Confusion7 annotation_confusion(const std::vector<AnnotationItem>& items,
                                       const std::vector<GoldAssignment>& gold) {
  if (items.size() != gold.size())
    throw ArgumentError("annotation_confusion: item/gold size mismatch");
  Confusion7 m{};
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto g = static_cast<std::size_t>(emotion_index(gold[i].gold));
    for (const Annotation& a : items[i].labels)
      ++m[g][static_cast<std::size_t>(emotion_index(a.label))];
  }
  return m;
}

// Annotation input: CSV utterance_id,annotator_id,label with exactly 4 rows
// per utterance. Item order follows first appearance; annotation order
// follows file order.
inline std::vector<AnnotationItem> load_annotations_csv(const std::filesystem::path& path) {
  std::vector<AnnotationItem> items;
  std::map<std::string, std::size_t> index_of;
  for (const CsvRow& row : read_csv(path.string())) {
    if (row.fields.size() != 3)
      throw ParseError("annotation file " + path.string() + " line " +
                       std::to_string(row.line) + ": expected 3 fields, got " +
                       std::to_string(row.fields.size()));
    if (row.fields[0] == "utterance_id") continue;  // header
    const std::string& uid = row.fields[0];
    auto [it, inserted] = index_of.try_emplace(uid, items.size());
    if (inserted) items.push_back(AnnotationItem{uid, {}});
    AnnotationItem& item = items[it->second];
    for (const Annotation& a : item.labels)
      if (a.annotator == row.fields[1])
        throw IntegrityError("annotator '" + row.fields[1] +
                             "' appears twice for utterance " + uid);
    item.labels.push_back(Annotation{row.fields[1], parse_emotion(row.fields[2])});
  }
  for (const AnnotationItem& item : items)
    if (item.labels.size() != 4)
      throw IntegrityError("utterance " + item.utterance_id + " has " +
                           std::to_string(item.labels.size()) +
                           " annotations (need exactly 4)");
  return items;
}

struct AgreementReport {
  double kappa2 = 0.0;   // Cohen, first two annotations
  double kappa3 = 0.0;   // Fleiss, first three
  double kappa4 = 0.0;   // Fleiss, all four
  double partial2 = 0.0;
  double partial3 = 0.0;
  double partial4 = 0.0;
  std::array<std::size_t, kNumFolds> fold_counts{};
  std::array<double, kNumFolds> fold_ratios{};
  Confusion7 confusion{};
};

inline AgreementReport build_agreement_report(const std::vector<AnnotationItem>& items) {
  if (items.empty()) throw ArgumentError("agreement report: no items");
  AgreementReport report;
  std::vector<Emotion> first, second;
  std::vector<std::vector<std::size_t>> counts3, counts4;
  for (const auto& item : items) {
    if (item.labels.size() != 4)
      throw ArgumentError("agreement report: item " + item.utterance_id +
                          " does not have 4 annotations");
    first.push_back(item.labels[0].label);
    second.push_back(item.labels[1].label);
    std::vector<std::size_t> c3(kNumEmotions, 0), c4(kNumEmotions, 0);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto e = static_cast<std::size_t>(emotion_index(item.labels[i].label));
      if (i < 3) ++c3[e];
      ++c4[e];
    }
    counts3.push_back(std::move(c3));
    counts4.push_back(std::move(c4));
  }
  report.kappa2 = cohen_kappa(first, second);
  report.kappa3 = fleiss_kappa(counts3, 3);
  report.kappa4 = fleiss_kappa(counts4, 4);
  report.partial2 = partial_agreement(items, 2);
  report.partial3 = partial_agreement(items, 3);
  report.partial4 = partial_agreement(items, 4);
  GoldResult gold = assign_gold(items);
  report.fold_counts = gold.fold_counts;
  report.fold_ratios = gold.fold_ratios;
  report.confusion = annotation_confusion(items, gold.items);
  return report;
}

}  // namespace emoseq
