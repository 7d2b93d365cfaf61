#pragma once

// Episode/scene/utterance data model, transcript I/O, gold-label sidecar,
// label distributions, and episode-preserving splits.

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "emoseq/common.hpp"
#include "emoseq/emotions.hpp"

namespace emoseq {

using ordered_json = nlohmann::ordered_json;

struct Utterance {
  std::string id;  // "<episode>/<scene>/<index>", unique corpus-wide
  std::string speaker;
  std::vector<std::string> tokens;
  std::optional<Emotion> gold;
  std::size_t index = 0;  // position within its scene
};

struct Scene {
  std::string id;
  std::vector<Utterance> utterances;
};

struct Episode {
  std::string id;
  std::vector<Scene> scenes;
};

struct Corpus {
  std::vector<Episode> episodes;

  std::size_t scene_count() const {
    std::size_t n = 0;
    for (const auto& e : episodes) n += e.scenes.size();
    return n;
  }
  std::size_t utterance_count() const {
    std::size_t n = 0;
    for (const auto& e : episodes)
      for (const auto& s : e.scenes) n += s.utterances.size();
    return n;
  }
};

inline std::string utterance_id(const std::string& episode, const std::string& scene,
                                std::size_t index) {
  return episode + "/" + scene + "/" + std::to_string(index);
}

inline Corpus corpus_from_json(const ordered_json& doc) {
  if (!doc.is_object() || !doc.contains("episodes") || !doc["episodes"].is_array())
    throw ParseError("transcript document must be an object with an 'episodes' array");
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  for (const auto& je : doc["episodes"]) {
    Episode ep;
    if (!je.contains("id") || !je["id"].is_string())
      throw ParseError("episode missing string 'id'");
    ep.id = je["id"].get<std::string>();
    if (!je.contains("scenes") || !je["scenes"].is_array())
      throw ParseError("episode '" + ep.id + "' missing 'scenes' array");
    if (je["scenes"].empty())
      throw IntegrityError("episode '" + ep.id + "' has no scenes");
    for (const auto& js : je["scenes"]) {
      Scene sc;
      if (!js.contains("id") || !js["id"].is_string())
        throw ParseError("scene in episode '" + ep.id + "' missing string 'id'");
      sc.id = js["id"].get<std::string>();
      if (!js.contains("utterances") || !js["utterances"].is_array())
        throw ParseError("scene '" + sc.id + "' missing 'utterances' array");
      if (js["utterances"].empty())
        throw IntegrityError("scene '" + ep.id + "/" + sc.id + "' has no utterances");
      std::size_t idx = 0;
      for (const auto& ju : js["utterances"]) {
        Utterance u;
        u.index = idx;
        u.id = utterance_id(ep.id, sc.id, idx);
        if (!seen_ids.insert(u.id).second)
          throw IntegrityError("duplicate utterance id: " + u.id);
        if (!ju.contains("speaker") || !ju["speaker"].is_string())
          throw ParseError("utterance " + u.id + " missing string 'speaker'");
        u.speaker = ju["speaker"].get<std::string>();
        if (!ju.contains("tokens") || !ju["tokens"].is_array())
          throw ParseError("utterance " + u.id + " missing 'tokens' array");
        for (const auto& jt : ju["tokens"]) {
          if (!jt.is_string())
            throw ParseError("utterance " + u.id + " has a non-string token");
          u.tokens.push_back(jt.get<std::string>());
        }
        if (u.tokens.empty())
          throw IntegrityError("utterance " + u.id + " has no tokens");
        sc.utterances.push_back(std::move(u));
        ++idx;
      }
      ep.scenes.push_back(std::move(sc));
    }
    corpus.episodes.push_back(std::move(ep));
  }
  return corpus;
}

inline Corpus load_transcripts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open transcript file: " + path.string());
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("transcript parse failure in " + path.string() + " at byte " +
                     std::to_string(e.byte) + ": " + e.what());
  }
  return corpus_from_json(doc);
}

inline ordered_json corpus_to_json(const Corpus& corpus) {
  ordered_json doc;
  doc["episodes"] = ordered_json::array();
  for (const auto& ep : corpus.episodes) {
    ordered_json je;
    je["id"] = ep.id;
    je["scenes"] = ordered_json::array();
    for (const auto& sc : ep.scenes) {
      ordered_json js;
      js["id"] = sc.id;
      js["utterances"] = ordered_json::array();
      for (const auto& u : sc.utterances) {
        ordered_json ju;
        ju["speaker"] = u.speaker;
        ju["tokens"] = u.tokens;
        js["utterances"].push_back(std::move(ju));
      }
      je["scenes"].push_back(std::move(js));
    }
    doc["episodes"].push_back(std::move(je));
  }
  return doc;
}

inline void save_transcripts(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write transcript file: " + path.string());
  out << corpus_to_json(corpus).dump(2) << '\n';
}

// Gold sidecar: CSV utterance_id,label. Every id must exist; re-labeling an
// id twice is an integrity error.
inline void load_gold_labels(Corpus& corpus, const std::filesystem::path& path) {
  std::unordered_map<std::string, Utterance*> by_id;
  for (auto& ep : corpus.episodes)
    for (auto& sc : ep.scenes)
      for (auto& u : sc.utterances) by_id[u.id] = &u;
  std::unordered_set<std::string> assigned;
  for (const CsvRow& row : read_csv(path.string())) {
    if (row.fields.size() != 2)
      throw ParseError("gold label file " + path.string() + " line " +
                       std::to_string(row.line) + ": expected 2 fields, got " +
                       std::to_string(row.fields.size()));
    if (row.fields[0] == "utterance_id") continue;  // header
    auto it = by_id.find(row.fields[0]);
    if (it == by_id.end())
      throw IntegrityError("gold label for unknown utterance id: " + row.fields[0]);
    if (!assigned.insert(row.fields[0]).second)
      throw IntegrityError("duplicate gold label for utterance id: " + row.fields[0]);
    it->second->gold = parse_emotion(row.fields[1]);
  }
}

inline void save_gold_labels(const Corpus& corpus, const std::filesystem::path& path,
                             const std::string& header_comment = "") {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write gold label file: " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "utterance_id,label\n";
  for (const auto& ep : corpus.episodes)
    for (const auto& sc : ep.scenes)
      for (const auto& u : sc.utterances)
        if (u.gold) out << u.id << ',' << emotion_name(*u.gold) << '\n';
}

struct LabelDistribution {
  std::array<std::uint64_t, kNumEmotions> counts{};
  std::array<double, kNumEmotions> ratios{};
  std::uint64_t total = 0;
};

// Counts and ratios of gold labels, optionally restricted to a set of episode
// ids. Every utterance in scope must be labeled.
inline LabelDistribution label_distribution(
    const Corpus& corpus, const std::set<std::string>* episode_filter = nullptr) {
  LabelDistribution dist;
  for (const auto& ep : corpus.episodes) {
    if (episode_filter && !episode_filter->count(ep.id)) continue;
    for (const auto& sc : ep.scenes)
      for (const auto& u : sc.utterances) {
        if (!u.gold)
          throw IntegrityError("utterance without gold label in scope: " + u.id);
        ++dist.counts[static_cast<std::size_t>(emotion_index(*u.gold))];
        ++dist.total;
      }
  }
  if (dist.total > 0)
    for (int i = 0; i < kNumEmotions; ++i)
      dist.ratios[static_cast<std::size_t>(i)] =
          static_cast<double>(dist.counts[static_cast<std::size_t>(i)]) /
          static_cast<double>(dist.total);
  return dist;
}

struct DataSplit {
  std::vector<std::string> train, dev, test;
  std::uint64_t seed = 0;
};

namespace detail {

// L1 distance between a partition's emotion ratios and the global ratios.
// An unlabeled (or empty) partition contributes no divergence.
inline double split_divergence(
    const std::vector<std::array<std::uint64_t, kNumEmotions>>& per_episode,
    const std::vector<std::size_t>& members,
    const std::array<double, kNumEmotions>& global_ratios) {
  std::array<std::uint64_t, kNumEmotions> counts{};
  std::uint64_t total = 0;
  for (std::size_t id : members)
    for (int e = 0; e < kNumEmotions; ++e) {
      counts[static_cast<std::size_t>(e)] += per_episode[id][static_cast<std::size_t>(e)];
      total += per_episode[id][static_cast<std::size_t>(e)];
    }
  if (total == 0) return 0.0;
  double l1 = 0.0;
  for (int e = 0; e < kNumEmotions; ++e)
    l1 += std::fabs(static_cast<double>(counts[static_cast<std::size_t>(e)]) /
                        static_cast<double>(total) -
                    global_ratios[static_cast<std::size_t>(e)]);
  return l1;
}

}  // namespace detail

// Whole-episode split into train/dev/test. Candidate assignments are drawn
// from seeded shuffles; the one whose worst partition stays closest (L1) to
// the global emotion distribution wins, earliest candidate on ties.
inline DataSplit split_corpus(const Corpus& corpus, std::uint64_t seed,
                              std::array<std::size_t, 3> targets,
                              std::size_t candidates = 1000) {
  const std::size_t n = corpus.episodes.size();
  if (targets[0] + targets[1] + targets[2] != n)
    throw ArgumentError("split targets sum to " +
                        std::to_string(targets[0] + targets[1] + targets[2]) +
                        " but the corpus has " + std::to_string(n) + " episodes");
  if (candidates == 0) throw ArgumentError("split needs at least one candidate");

  // per-episode gold counts; unlabeled utterances do not influence scoring
  std::vector<std::array<std::uint64_t, kNumEmotions>> per_episode(n);
  std::array<double, kNumEmotions> global_ratios{};
  {
    std::array<std::uint64_t, kNumEmotions> global_counts{};
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      per_episode[i] = {};
      for (const auto& sc : corpus.episodes[i].scenes)
        for (const auto& u : sc.utterances)
          if (u.gold) {
            const auto e = static_cast<std::size_t>(emotion_index(*u.gold));
            ++per_episode[i][e];
            ++global_counts[e];
            ++total;
          }
    }
    if (total > 0)
      for (int e = 0; e < kNumEmotions; ++e)
        global_ratios[static_cast<std::size_t>(e)] =
            static_cast<double>(global_counts[static_cast<std::size_t>(e)]) /
            static_cast<double>(total);
  }

  std::vector<std::size_t> order(n);
  std::vector<std::size_t> best_order;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t cand = 0; cand < candidates; ++cand) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(derive_seed(seed, cand));
    rng.shuffle(order);
    std::vector<std::size_t> part_train(order.begin(), order.begin() + targets[0]);
    std::vector<std::size_t> part_dev(order.begin() + targets[0],
                                      order.begin() + targets[0] + targets[1]);
    std::vector<std::size_t> part_test(order.begin() + targets[0] + targets[1],
                                       order.end());
    const double score = std::max(
        {detail::split_divergence(per_episode, part_train, global_ratios),
         detail::split_divergence(per_episode, part_dev, global_ratios),
         detail::split_divergence(per_episode, part_test, global_ratios)});
    if (score < best_score) {
      best_score = score;
      best_order = order;
    }
  }

  DataSplit split;
  split.seed = seed;
  auto id_of = [&](std::size_t i) { return corpus.episodes[i].id; };
  for (std::size_t i = 0; i < targets[0]; ++i) split.train.push_back(id_of(best_order[i]));
  for (std::size_t i = 0; i < targets[1]; ++i)
    split.dev.push_back(id_of(best_order[targets[0] + i]));
  for (std::size_t i = 0; i < targets[2]; ++i)
    split.test.push_back(id_of(best_order[targets[0] + targets[1] + i]));
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.dev.begin(), split.dev.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

inline ordered_json split_to_json(const DataSplit& split) {
  ordered_json doc;
  doc["seed"] = split.seed;
  doc["train"] = split.train;
  doc["dev"] = split.dev;
  doc["test"] = split.test;
  return doc;
}

inline DataSplit split_from_json(const ordered_json& doc) {
  DataSplit split;
  if (!doc.contains("train") || !doc.contains("dev") || !doc.contains("test"))
    throw ParseError("split manifest must contain train/dev/test arrays");
  split.seed = doc.value("seed", std::uint64_t{0});
  split.train = doc["train"].get<std::vector<std::string>>();
  split.dev = doc["dev"].get<std::vector<std::string>>();
  split.test = doc["test"].get<std::vector<std::string>>();
  return split;
}

inline DataSplit load_split(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open split manifest: " + path.string());
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("split manifest parse failure in " + path.string() + ": " + e.what());
  }
  return split_from_json(doc);
}

// The episode ids named by one partition of a split manifest.
inline const std::vector<std::string>& split_partition(const DataSplit& split,
                                                       const std::string& name) {
  if (name == "train") return split.train;
  if (name == "dev") return split.dev;
  if (name == "test") return split.test;
  throw ArgumentError("unknown partition '" + name + "' (expected train, dev, or test)");
}

}  // namespace emoseq
