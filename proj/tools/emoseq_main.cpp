// emoseq command-line tool: annotation aggregation and agreement reporting,
// corpus splitting, training/evaluation of the sequence CNN models, attention
// export, and synthetic corpus generation.
//
// Every flag can also come from a JSON config file (--config); flags win.
// Artifacts embed the fully resolved run config, so any artifact can be
// reproduced with `emoseq --config <embedded run_config> <command>`.
//
// Exit codes: 0 ok, 1 usage or input error, 2 data-quality warnings,
// 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "emoseq/emoseq.hpp"

namespace {

using emoseq::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataQuality = 2;
constexpr int kExitNumerical = 3;

double pct2(double ratio) { return std::round(ratio * 10000.0) / 100.0; }

ordered_json load_config_file(const std::string& path) {
  if (path.empty()) return ordered_json::object();
  std::ifstream in(path);
  if (!in) throw emoseq::ParseError("cannot open config file: " + path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw emoseq::ParseError("config file " + path + ": " + e.what());
  }
}

// flag > config file > EMOSEQ_SEED > 1
std::uint64_t resolve_seed(CLI::Option* seed_opt, std::uint64_t flag_value,
                           const ordered_json& cfg) {
  if (seed_opt != nullptr && seed_opt->count() > 0) return flag_value;
  if (cfg.contains("seed")) return cfg["seed"].get<std::uint64_t>();
  if (const char* env = std::getenv("EMOSEQ_SEED")) {
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    throw emoseq::ArgumentError("EMOSEQ_SEED is not an integer: " + std::string(env));
  }
  return 1;
}

std::string resolve_path(CLI::Option* opt, const std::string& flag_value,
                         const ordered_json& cfg, const char* key, bool required,
                         const char* flag_name) {
  if (opt->count()) return flag_value;
  if (cfg.contains("paths") && cfg["paths"].contains(key) &&
      cfg["paths"][key].is_string() && !cfg["paths"][key].get<std::string>().empty())
    return cfg["paths"][key].get<std::string>();
  if (required && flag_value.empty())
    throw emoseq::ArgumentError(std::string("missing ") + flag_name +
                                " (pass the flag or set paths." + key + " in --config)");
  return flag_value;
}

template <class T>
T resolve_setting(CLI::Option* opt, T flag_value, const ordered_json& cfg,
                  const char* section, const char* key, T fallback) {
  if (opt->count()) return flag_value;
  if (cfg.contains(section) && cfg[section].contains(key))
    return cfg[section][key].get<T>();
  return fallback;
}

void write_json(const ordered_json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw emoseq::ParseError("cannot write output file: " + path);
  out << doc.dump(2) << '\n';
}

// ---- model/embedding option bundles shared by train/eval/attend ----

struct ModelFlags {
  std::string arch = "scnn-c";
  std::size_t context = 3;  // previous utterances; seq_len = context + 1
  std::size_t max_tokens = 40;
  std::size_t embed_dim = 200;
  std::size_t conv1_regions = 3;
  std::size_t conv1_filters = 100;
  std::size_t conv2_regions = 2;
  std::size_t conv2_filters = 50;
  std::size_t fusion_field = 3;
  std::size_t fusion_stride = 1;

  CLI::Option* arch_opt = nullptr;
  CLI::Option* context_opt = nullptr;
  CLI::Option* max_tokens_opt = nullptr;
  CLI::Option* embed_dim_opt = nullptr;
  CLI::Option* conv1_regions_opt = nullptr;
  CLI::Option* conv1_filters_opt = nullptr;
  CLI::Option* conv2_regions_opt = nullptr;
  CLI::Option* conv2_filters_opt = nullptr;
  CLI::Option* fusion_field_opt = nullptr;
  CLI::Option* fusion_stride_opt = nullptr;

  void attach(CLI::App* cmd) {
    arch_opt = cmd->add_option("--model", arch,
                               "architecture tag: cnn, scnn-c, scnn-v, scnn-ca, scnn-va");
    context_opt = cmd->add_option("--context", context,
                                  "previous utterances in the sequence window");
    max_tokens_opt = cmd->add_option("--max-tokens", max_tokens, "tokens kept per utterance");
    embed_dim_opt = cmd->add_option("--embed-dim", embed_dim, "embedding size");
    conv1_regions_opt = cmd->add_option("--regions", conv1_regions,
                                        "max region size of the token convolution");
    conv1_filters_opt = cmd->add_option("--filters", conv1_filters,
                                        "filters per token-convolution region");
    conv2_regions_opt = cmd->add_option("--seq-regions", conv2_regions,
                                        "max region size of the sequence convolution");
    conv2_filters_opt = cmd->add_option("--seq-filters", conv2_filters,
                                        "filters per sequence-convolution region");
    fusion_field_opt = cmd->add_option("--fusion-field", fusion_field,
                                       "receptive field of the fusion convolution");
    fusion_stride_opt = cmd->add_option("--fusion-stride", fusion_stride,
                                        "stride of the fusion convolution");
  }

  // config-file "model" object first, then explicit flags on top
  emoseq::ModelConfig resolve(const ordered_json& cfg, std::uint64_t seed) const {
    emoseq::ModelConfig mc;
    if (cfg.contains("model")) {
      const ordered_json& j = cfg["model"];
      if (j.contains("arch")) mc.arch = emoseq::parse_arch(j["arch"].get<std::string>());
      if (j.contains("max_tokens")) mc.max_tokens = j["max_tokens"].get<std::size_t>();
      if (j.contains("embed_dim")) mc.embed_dim = j["embed_dim"].get<std::size_t>();
      if (j.contains("conv1_max_region"))
        mc.conv1_max_region = j["conv1_max_region"].get<std::size_t>();
      if (j.contains("conv1_filters")) mc.conv1_filters = j["conv1_filters"].get<std::size_t>();
      if (j.contains("conv2_max_region"))
        mc.conv2_max_region = j["conv2_max_region"].get<std::size_t>();
      if (j.contains("conv2_filters")) mc.conv2_filters = j["conv2_filters"].get<std::size_t>();
      if (j.contains("fusion_field")) mc.fusion_field = j["fusion_field"].get<std::size_t>();
      if (j.contains("fusion_stride")) mc.fusion_stride = j["fusion_stride"].get<std::size_t>();
      if (j.contains("seq_len")) mc.seq_len = j["seq_len"].get<std::size_t>();
      if (j.contains("num_classes")) mc.num_classes = j["num_classes"].get<std::size_t>();
    }
    if (arch_opt->count()) mc.arch = emoseq::parse_arch(arch);
    if (context_opt->count() || !cfg.contains("model")) mc.seq_len = context + 1;
    if (max_tokens_opt->count()) mc.max_tokens = max_tokens;
    if (embed_dim_opt->count()) mc.embed_dim = embed_dim;
    if (conv1_regions_opt->count()) mc.conv1_max_region = conv1_regions;
    if (conv1_filters_opt->count()) mc.conv1_filters = conv1_filters;
    if (conv2_regions_opt->count()) mc.conv2_max_region = conv2_regions;
    if (conv2_filters_opt->count()) mc.conv2_filters = conv2_filters;
    if (fusion_field_opt->count()) mc.fusion_field = fusion_field;
    if (fusion_stride_opt->count()) mc.fusion_stride = fusion_stride;
    mc.seed = seed;
    mc.validate();
    return mc;
  }
};

struct EmbeddingFlags {
  std::string path;
  std::string oov = "zero";
  CLI::Option* path_opt = nullptr;
  CLI::Option* oov_opt = nullptr;

  void attach(CLI::App* cmd) {
    path_opt = cmd->add_option("--embeddings", path,
                               "word2vec text file; omit to use seeded random vectors");
    oov_opt = cmd->add_option("--oov", oov, "out-of-vocabulary policy: zero, seeded-random");
  }

  std::string resolved_path(const ordered_json& cfg) const {
    if (path_opt->count()) return path;
    if (cfg.contains("embeddings") && cfg["embeddings"].contains("path") &&
        cfg["embeddings"]["path"].is_string())
      return cfg["embeddings"]["path"].get<std::string>();
    return "";
  }

  std::string resolved_policy(const ordered_json& cfg, bool has_file) const {
    if (oov_opt->count()) return oov;
    if (cfg.contains("embeddings") && cfg["embeddings"].contains("oov"))
      return cfg["embeddings"]["oov"].get<std::string>();
    // without a vector file every token is OOV; zero vectors carry no signal
    return has_file ? "zero" : "seeded-random";
  }

  emoseq::EmbeddingTable resolve(const ordered_json& cfg, std::size_t dim,
                                 std::uint64_t seed) const {
    const std::string file = resolved_path(cfg);
    const std::string policy_name = resolved_policy(cfg, !file.empty());
    if (file.empty())
      return emoseq::EmbeddingTable(dim, emoseq::parse_oov_policy(policy_name), seed);
    auto table = emoseq::EmbeddingTable::load_word2vec_text(
        file, emoseq::parse_oov_policy(policy_name), seed);
    if (table.dim() != dim)
      throw emoseq::ArgumentError("embedding file dimension " + std::to_string(table.dim()) +
                                  " does not match configured embed_dim " +
                                  std::to_string(dim));
    return table;
  }

  ordered_json describe(const ordered_json& cfg, std::size_t dim) const {
    const std::string file = resolved_path(cfg);
    ordered_json j;
    if (file.empty())
      j["path"] = nullptr;
    else
      j["path"] = file;
    j["oov"] = resolved_policy(cfg, !file.empty());
    j["dim"] = dim;
    return j;
  }
};

// ---- subcommands ----

int cmd_aggregate(const std::string& annotations, const std::string& out_gold,
                  const std::string& out_report, const ordered_json& run_config) {
  const auto items = emoseq::load_annotations_csv(annotations);
  if (items.empty())
    throw emoseq::ArgumentError("annotation file has no items: " + annotations);
  const emoseq::GoldResult result = emoseq::assign_gold(items);

  {
    std::ofstream out(out_gold);
    if (!out) throw emoseq::ParseError("cannot write gold file: " + out_gold);
    out << "# run_config: " << run_config.dump() << '\n';
    out << "utterance_id,label,fold,resolution\n";
    for (const auto& g : result.items)
      out << g.utterance_id << ',' << emoseq::emotion_name(g.gold) << ','
          << emoseq::fold_name(g.fold) << ',' << emoseq::resolution_name(g.resolution)
          << '\n';
  }

  ordered_json report;
  report["run_config"] = run_config;
  report["items"] = result.items.size();
  report["folds"] = ordered_json::object();
  for (int f = 0; f < emoseq::kNumFolds; ++f) {
    ordered_json fj;
    fj["count"] = result.fold_counts[static_cast<std::size_t>(f)];
    fj["ratio_pct"] = pct2(result.fold_ratios[static_cast<std::size_t>(f)]);
    report["folds"][emoseq::fold_name(static_cast<emoseq::Fold>(f))] = fj;
  }
  report["majority_coverage_pct"] = pct2(result.majority_coverage);
  report["ranking_coverage_pct"] = pct2(result.ranking_coverage);
  report["fallback_items"] = ordered_json::array();
  for (const auto& g : result.items)
    if (g.resolution == emoseq::Resolution::Fallback)
      report["fallback_items"].push_back(g.utterance_id);
  report["annotators"] = ordered_json::array();
  for (const auto& rec : result.annotators) {
    ordered_json aj;
    aj["annotator_id"] = rec.annotator_id;
    aj["lae"] = rec.lae;
    aj["items_scored"] = rec.items_scored;
    report["annotators"].push_back(aj);
  }
  write_json(report, out_report);

  if (result.fallback_count > 0) {
    std::cerr << "warning: " << result.fallback_count
              << " item(s) resolved by fallback (no scored annotator)\n";
    return kExitDataQuality;
  }
  return kExitOk;
}

int cmd_agreement(const std::string& annotations, const std::string& out_report,
                  const ordered_json& run_config) {
  const auto items = emoseq::load_annotations_csv(annotations);
  if (items.empty())
    throw emoseq::ArgumentError("annotation file has no items: " + annotations);
  const emoseq::AgreementReport rep = emoseq::build_agreement_report(items);

  ordered_json doc;
  doc["run_config"] = run_config;
  doc["Kappa"] = {{"2", pct2(rep.kappa2)}, {"3", pct2(rep.kappa3)}, {"4", pct2(rep.kappa4)}};
  doc["Partial"] = {{"2", pct2(rep.partial2)},
                    {"3", pct2(rep.partial3)},
                    {"4", pct2(rep.partial4)}};
  doc["raw"] = {{"kappa2", rep.kappa2},     {"kappa3", rep.kappa3},
                {"kappa4", rep.kappa4},     {"partial2", rep.partial2},
                {"partial3", rep.partial3}, {"partial4", rep.partial4}};
  doc["folds"] = ordered_json::object();
  for (int f = 0; f < emoseq::kNumFolds; ++f) {
    ordered_json fj;
    fj["count"] = rep.fold_counts[static_cast<std::size_t>(f)];
    fj["ratio_pct"] = pct2(rep.fold_ratios[static_cast<std::size_t>(f)]);
    doc["folds"][emoseq::fold_name(static_cast<emoseq::Fold>(f))] = fj;
  }
  doc["confusion"] = rep.confusion;
  doc["confusion_labels"] = ordered_json::array();
  for (emoseq::Emotion e : emoseq::all_emotions())
    doc["confusion_labels"].push_back(emoseq::emotion_name(e));
  write_json(doc, out_report);
  return kExitOk;
}

int cmd_split(const std::string& transcripts, const std::string& labels,
              const std::vector<std::size_t>& targets, std::size_t candidates,
              std::uint64_t seed, const std::string& out,
              const ordered_json& run_config) {
  emoseq::Corpus corpus = emoseq::load_transcripts(transcripts);
  if (!labels.empty()) emoseq::load_gold_labels(corpus, labels);
  if (targets.size() != 3)
    throw emoseq::ArgumentError("--targets needs exactly 3 counts (train dev test)");
  const emoseq::DataSplit split = emoseq::split_corpus(
      corpus, seed, {targets[0], targets[1], targets[2]}, candidates);
  ordered_json doc = emoseq::split_to_json(split);
  doc["targets"] = targets;
  doc["run_config"] = run_config;
  write_json(doc, out);
  std::cout << "split: " << split.train.size() << " train / " << split.dev.size()
            << " dev / " << split.test.size() << " test episodes -> " << out << '\n';
  return kExitOk;
}

int cmd_train(const emoseq::ModelConfig& mc, const emoseq::TrainSettings& settings,
              const std::string& transcripts, const std::string& labels,
              const std::string& split_path, const emoseq::EmbeddingTable& table,
              const std::string& out_checkpoint, const std::string& out_log,
              const ordered_json& run_config) {
  emoseq::Corpus corpus = emoseq::load_transcripts(transcripts);
  emoseq::load_gold_labels(corpus, labels);
  const emoseq::DataSplit split = emoseq::load_split(split_path);

  const emoseq::TrainOutcome outcome =
      emoseq::train_model(mc, corpus, split, table, settings);

  emoseq::Checkpoint ck = emoseq::checkpoint_from_model(
      outcome.best_model, ordered_json{{"run_config", run_config}});
  emoseq::save_checkpoint(ck, out_checkpoint);

  if (!out_log.empty()) {
    std::ofstream log(out_log);
    if (!log) throw emoseq::ParseError("cannot write training log: " + out_log);
    log << ordered_json{{"run_config", run_config}}.dump() << '\n';
    for (const auto& stats : outcome.log) {
      ordered_json rec;
      rec["epoch"] = stats.epoch;
      rec["train_loss"] = stats.train_loss;
      rec["dev"] = {{"acc7", stats.dev.acc7},
                    {"acc3", stats.dev.acc3},
                    {"f1_7", stats.dev.f1_7},
                    {"f1_3", stats.dev.f1_3}};
      rec["best"] = stats.best;
      log << rec.dump() << '\n';
    }
  }
  std::cout << "best epoch " << outcome.best_epoch << ", dev f1_7 "
            << outcome.log[outcome.best_epoch - 1].dev.f1_7 << ", checkpoint "
            << out_checkpoint << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& transcripts,
             const std::string& labels, const std::string& split_path,
             const std::string& partition, const EmbeddingFlags& embedding_flags,
             const ordered_json& file_cfg, const std::string& out,
             ordered_json run_config) {
  const emoseq::Checkpoint ck = emoseq::load_checkpoint(checkpoint_path);
  emoseq::Model model = emoseq::model_from_checkpoint(ck);
  emoseq::Corpus corpus = emoseq::load_transcripts(transcripts);
  emoseq::load_gold_labels(corpus, labels);
  const emoseq::DataSplit split = emoseq::load_split(split_path);
  // the checkpoint's seed keeps seeded-random OOV vectors identical to training
  const emoseq::EmbeddingTable table =
      embedding_flags.resolve(file_cfg, model.cfg.embed_dim, model.cfg.seed);

  const emoseq::Metrics metrics =
      emoseq::evaluate_partition(model, corpus, split, partition, table);

  ordered_json doc;
  run_config["checkpoint_config"] = ordered_json::parse(ck.config_json);
  doc["run_config"] = run_config;
  doc["partition"] = partition;
  doc["metrics"] = metrics.to_json();
  write_json(doc, out);
  std::cout << "acc7 " << metrics.acc7 << "  acc3 " << metrics.acc3 << "  f1_7 "
            << metrics.f1_7 << "  f1_3 " << metrics.f1_3 << '\n';
  return kExitOk;
}

int cmd_attend(const std::string& checkpoint_path, const std::string& transcripts,
               const std::string& episode_id, const std::string& scene_id,
               const EmbeddingFlags& embedding_flags, const ordered_json& file_cfg,
               const std::string& out, const ordered_json& run_config) {
  const emoseq::Checkpoint ck = emoseq::load_checkpoint(checkpoint_path);
  emoseq::Model model = emoseq::model_from_checkpoint(ck);
  const emoseq::Corpus corpus = emoseq::load_transcripts(transcripts);
  const emoseq::Scene* scene = nullptr;
  for (const auto& ep : corpus.episodes) {
    if (ep.id != episode_id) continue;
    for (const auto& sc : ep.scenes)
      if (sc.id == scene_id) scene = &sc;
  }
  if (!scene)
    throw emoseq::ArgumentError("scene not found: " + episode_id + "/" + scene_id);
  const emoseq::EmbeddingTable table =
      embedding_flags.resolve(file_cfg, model.cfg.embed_dim, model.cfg.seed);

  const emoseq::Tensor heat = emoseq::export_attention(model, *scene, table);

  std::ofstream os(out);
  if (!os) throw emoseq::ParseError("cannot write attention export: " + out);
  os << "# run_config: " << run_config.dump() << '\n';
  os << "utt_index";
  for (std::size_t j = model.cfg.seq_len - 1; j >= 1; --j) os << ",w_prev" << j;
  os << ",w_current\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < heat.shape[0]; ++i) {
    os << i;
    for (std::size_t j = 0; j < heat.shape[1]; ++j) os << ',' << heat(i, j);
    os << '\n';
  }
  return kExitOk;
}

int cmd_synth(const emoseq::SynthSettings& settings, const std::string& out_transcripts,
              const std::string& out_labels, const ordered_json& run_config) {
  const emoseq::Corpus corpus = emoseq::synth_corpus(settings);
  ordered_json doc;
  doc["run_config"] = run_config;
  const ordered_json corpus_json = emoseq::corpus_to_json(corpus);
  for (const auto& [key, value] : corpus_json.items()) doc[key] = value;
  write_json(doc, out_transcripts);
  emoseq::save_gold_labels(corpus, out_labels, "run_config: " + run_config.dump());
  std::cout << "synthetic corpus: " << corpus.episodes.size() << " episodes, "
            << corpus.scene_count() << " scenes, " << corpus.utterance_count()
            << " utterances\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emoseq: emotion labeling and sequence-CNN toolkit for multiparty dialogue"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed_flag = 1;
  bool verbose = false;
  app.add_option("--config", config_path, "JSON config file; flags override its fields");
  CLI::Option* seed_opt = app.add_option("--seed", seed_flag, "seed (fallback: EMOSEQ_SEED)");
  app.add_flag("--verbose", verbose, "log padding/truncation notes to stderr");

  // aggregate
  auto* agg = app.add_subcommand("aggregate", "assign gold labels by voting/ranking");
  std::string agg_annotations, agg_gold = "gold.csv", agg_report = "aggregate_report.json";
  CLI::Option* agg_ann_opt =
      agg->add_option("--annotations", agg_annotations, "CSV utterance_id,annotator_id,label");
  CLI::Option* agg_gold_opt = agg->add_option("--out-gold", agg_gold, "output gold CSV");
  CLI::Option* agg_rep_opt = agg->add_option("--out-report", agg_report, "output report JSON");

  // agreement
  auto* agr = app.add_subcommand("agreement", "inter-annotator agreement report");
  std::string agr_annotations, agr_out = "agreement_report.json";
  CLI::Option* agr_ann_opt =
      agr->add_option("--annotations", agr_annotations, "CSV utterance_id,annotator_id,label");
  CLI::Option* agr_out_opt = agr->add_option("--out", agr_out, "output report JSON");

  // split
  auto* spl = app.add_subcommand("split", "episode-preserving train/dev/test split");
  std::string spl_transcripts, spl_labels, spl_out = "split.json";
  std::vector<std::size_t> spl_targets{77, 11, 9};
  std::size_t spl_candidates = 1000;
  CLI::Option* spl_tr_opt = spl->add_option("--transcripts", spl_transcripts, "transcript JSON");
  CLI::Option* spl_lb_opt =
      spl->add_option("--labels", spl_labels, "gold label CSV (used for ratio balancing)");
  CLI::Option* spl_tg_opt =
      spl->add_option("--targets", spl_targets, "episode counts: train dev test")->expected(3);
  CLI::Option* spl_cand_opt =
      spl->add_option("--candidates", spl_candidates, "seeded candidate assignments to score");
  CLI::Option* spl_out_opt = spl->add_option("--out", spl_out, "output split manifest JSON");

  // train
  auto* trn = app.add_subcommand("train", "train a model");
  std::string trn_transcripts, trn_labels, trn_split;
  std::string trn_checkpoint = "model.ckpt", trn_log = "train_log.ndjson";
  double trn_lr = 0.01;
  std::size_t trn_epochs = 20, trn_patience = 5;
  ModelFlags trn_model;
  EmbeddingFlags trn_embed;
  CLI::Option* trn_tr_opt = trn->add_option("--transcripts", trn_transcripts, "transcript JSON");
  CLI::Option* trn_lb_opt = trn->add_option("--labels", trn_labels, "gold label CSV");
  CLI::Option* trn_sp_opt = trn->add_option("--split", trn_split, "split manifest JSON");
  trn_model.attach(trn);
  trn_embed.attach(trn);
  CLI::Option* lr_opt = trn->add_option("--lr", trn_lr, "SGD learning rate");
  CLI::Option* epochs_opt = trn->add_option("--epochs", trn_epochs, "max epochs");
  CLI::Option* patience_opt =
      trn->add_option("--patience", trn_patience, "early-stop patience (0 disables)");
  CLI::Option* trn_ck_opt =
      trn->add_option("--out-checkpoint", trn_checkpoint, "output checkpoint");
  CLI::Option* trn_log_opt =
      trn->add_option("--out-log", trn_log, "output ndjson training log");

  // eval
  auto* evl = app.add_subcommand("eval", "evaluate a checkpoint on a partition");
  std::string evl_checkpoint, evl_transcripts, evl_labels, evl_split;
  std::string evl_partition = "test", evl_out = "metrics.json";
  EmbeddingFlags evl_embed;
  CLI::Option* evl_ck_opt = evl->add_option("--checkpoint", evl_checkpoint, "model checkpoint");
  CLI::Option* evl_tr_opt = evl->add_option("--transcripts", evl_transcripts, "transcript JSON");
  CLI::Option* evl_lb_opt = evl->add_option("--labels", evl_labels, "gold label CSV");
  CLI::Option* evl_sp_opt = evl->add_option("--split", evl_split, "split manifest JSON");
  CLI::Option* evl_pt_opt = evl->add_option("--partition", evl_partition, "train, dev, or test");
  evl_embed.attach(evl);
  CLI::Option* evl_out_opt = evl->add_option("--out", evl_out, "output metrics JSON");

  // attend
  auto* att = app.add_subcommand("attend", "export attention heat-map rows for a scene");
  std::string att_checkpoint, att_transcripts, att_episode, att_scene;
  std::string att_out = "attention.csv";
  EmbeddingFlags att_embed;
  CLI::Option* att_ck_opt = att->add_option("--checkpoint", att_checkpoint, "scnn-ca checkpoint");
  CLI::Option* att_tr_opt = att->add_option("--transcripts", att_transcripts, "transcript JSON");
  CLI::Option* att_ep_opt = att->add_option("--episode", att_episode, "episode id");
  CLI::Option* att_sc_opt = att->add_option("--scene", att_scene, "scene id");
  att_embed.attach(att);
  CLI::Option* att_out_opt = att->add_option("--out", att_out, "output CSV");

  // synth
  auto* syn = app.add_subcommand("synth", "generate a seeded synthetic corpus");
  emoseq::SynthSettings syn_settings;
  std::string syn_transcripts = "synth_transcripts.json", syn_labels = "synth_gold.csv";
  CLI::Option* syn_ep_opt = syn->add_option("--episodes", syn_settings.episodes, "episode count");
  CLI::Option* syn_sc_opt = syn->add_option("--scenes-per-episode",
                                            syn_settings.scenes_per_episode, "scenes per episode");
  CLI::Option* syn_ut_opt = syn->add_option("--utterances-per-scene",
                                            syn_settings.utterances_per_scene,
                                            "utterances per scene");
  CLI::Option* syn_tk_opt = syn->add_option("--tokens", syn_settings.tokens_per_utterance,
                                            "tokens per utterance");
  CLI::Option* syn_vc_opt = syn->add_option("--vocab", syn_settings.vocab_size,
                                            "noise vocabulary size");
  CLI::Option* syn_rv_opt = syn->add_option("--reveal", syn_settings.reveal,
                                            "chance an utterance contains cue tokens");
  CLI::Option* syn_no_opt = syn->add_option("--noise", syn_settings.transition_noise,
                                            "chance a label ignores the transition rule");
  CLI::Option* syn_tr_opt =
      syn->add_option("--out-transcripts", syn_transcripts, "output transcript JSON");
  CLI::Option* syn_lb_opt = syn->add_option("--out-labels", syn_labels, "output gold CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  emoseq::verbose_flag().store(verbose);

  try {
    const ordered_json cfg = load_config_file(config_path);
    const std::uint64_t seed = resolve_seed(seed_opt, seed_flag, cfg);

    if (*agg) {
      const std::string ann =
          resolve_path(agg_ann_opt, agg_annotations, cfg, "annotations", true, "--annotations");
      const std::string gold =
          resolve_path(agg_gold_opt, agg_gold, cfg, "out_gold", false, "--out-gold");
      const std::string rep =
          resolve_path(agg_rep_opt, agg_report, cfg, "out_report", false, "--out-report");
      ordered_json rc{{"command", "aggregate"},
                      {"seed", seed},
                      {"paths", {{"annotations", ann}, {"out_gold", gold}, {"out_report", rep}}}};
      return cmd_aggregate(ann, gold, rep, rc);
    }
    if (*agr) {
      const std::string ann =
          resolve_path(agr_ann_opt, agr_annotations, cfg, "annotations", true, "--annotations");
      const std::string out = resolve_path(agr_out_opt, agr_out, cfg, "out", false, "--out");
      ordered_json rc{{"command", "agreement"},
                      {"seed", seed},
                      {"paths", {{"annotations", ann}, {"out", out}}}};
      return cmd_agreement(ann, out, rc);
    }
    if (*spl) {
      const std::string tr =
          resolve_path(spl_tr_opt, spl_transcripts, cfg, "transcripts", true, "--transcripts");
      const std::string lb = resolve_path(spl_lb_opt, spl_labels, cfg, "labels", false, "--labels");
      const std::string out = resolve_path(spl_out_opt, spl_out, cfg, "out", false, "--out");
      std::vector<std::size_t> targets = spl_targets;
      if (!spl_tg_opt->count() && cfg.contains("targets"))
        targets = cfg["targets"].get<std::vector<std::size_t>>();
      const std::size_t candidates = resolve_setting<std::size_t>(
          spl_cand_opt, spl_candidates, cfg, "split", "candidates", 1000);
      ordered_json rc{{"command", "split"},
                      {"seed", seed},
                      {"targets", targets},
                      {"split", {{"candidates", candidates}}},
                      {"paths", {{"transcripts", tr}, {"labels", lb}, {"out", out}}}};
      return cmd_split(tr, lb, targets, candidates, seed, out, rc);
    }
    if (*trn) {
      const std::string tr =
          resolve_path(trn_tr_opt, trn_transcripts, cfg, "transcripts", true, "--transcripts");
      const std::string lb = resolve_path(trn_lb_opt, trn_labels, cfg, "labels", true, "--labels");
      const std::string sp = resolve_path(trn_sp_opt, trn_split, cfg, "split", true, "--split");
      const std::string ck = resolve_path(trn_ck_opt, trn_checkpoint, cfg, "out_checkpoint",
                                          false, "--out-checkpoint");
      const std::string lg =
          resolve_path(trn_log_opt, trn_log, cfg, "out_log", false, "--out-log");
      const emoseq::ModelConfig mc = trn_model.resolve(cfg, seed);
      emoseq::TrainSettings settings;
      settings.learning_rate = resolve_setting<double>(lr_opt, trn_lr, cfg, "optimizer",
                                                       "learning_rate", settings.learning_rate);
      settings.max_epochs = resolve_setting<std::size_t>(epochs_opt, trn_epochs, cfg, "optimizer",
                                                         "max_epochs", settings.max_epochs);
      settings.patience = resolve_setting<std::size_t>(patience_opt, trn_patience, cfg,
                                                       "optimizer", "patience", settings.patience);
      const emoseq::EmbeddingTable table = trn_embed.resolve(cfg, mc.embed_dim, seed);
      ordered_json rc{{"command", "train"},
                      {"seed", seed},
                      {"model", mc.to_json()},
                      {"optimizer",
                       {{"learning_rate", settings.learning_rate},
                        {"max_epochs", settings.max_epochs},
                        {"patience", settings.patience}}},
                      {"embeddings", trn_embed.describe(cfg, mc.embed_dim)},
                      {"paths",
                       {{"transcripts", tr},
                        {"labels", lb},
                        {"split", sp},
                        {"out_checkpoint", ck},
                        {"out_log", lg}}}};
      return cmd_train(mc, settings, tr, lb, sp, table, ck, lg, rc);
    }
    if (*evl) {
      const std::string ck =
          resolve_path(evl_ck_opt, evl_checkpoint, cfg, "checkpoint", true, "--checkpoint");
      const std::string tr =
          resolve_path(evl_tr_opt, evl_transcripts, cfg, "transcripts", true, "--transcripts");
      const std::string lb = resolve_path(evl_lb_opt, evl_labels, cfg, "labels", true, "--labels");
      const std::string sp = resolve_path(evl_sp_opt, evl_split, cfg, "split", true, "--split");
      const std::string out = resolve_path(evl_out_opt, evl_out, cfg, "out", false, "--out");
      std::string partition = evl_partition;
      if (!evl_pt_opt->count() && cfg.contains("partition"))
        partition = cfg["partition"].get<std::string>();
      ordered_json rc{{"command", "eval"},
                      {"seed", seed},
                      {"partition", partition},
                      {"paths",
                       {{"checkpoint", ck},
                        {"transcripts", tr},
                        {"labels", lb},
                        {"split", sp},
                        {"out", out}}}};
      return cmd_eval(ck, tr, lb, sp, partition, evl_embed, cfg, out, rc);
    }
    if (*att) {
      const std::string ck =
          resolve_path(att_ck_opt, att_checkpoint, cfg, "checkpoint", true, "--checkpoint");
      const std::string tr =
          resolve_path(att_tr_opt, att_transcripts, cfg, "transcripts", true, "--transcripts");
      const std::string out = resolve_path(att_out_opt, att_out, cfg, "out", false, "--out");
      std::string episode = att_episode, scene = att_scene;
      if (!att_ep_opt->count() && cfg.contains("episode"))
        episode = cfg["episode"].get<std::string>();
      if (!att_sc_opt->count() && cfg.contains("scene"))
        scene = cfg["scene"].get<std::string>();
      if (episode.empty() || scene.empty())
        throw emoseq::ArgumentError("attend needs --episode and --scene");
      ordered_json rc{{"command", "attend"},
                      {"seed", seed},
                      {"episode", episode},
                      {"scene", scene},
                      {"paths", {{"checkpoint", ck}, {"transcripts", tr}, {"out", out}}}};
      return cmd_attend(ck, tr, episode, scene, att_embed, cfg, out, rc);
    }
    if (*syn) {
      syn_settings.episodes = resolve_setting<std::size_t>(
          syn_ep_opt, syn_settings.episodes, cfg, "synth", "episodes", syn_settings.episodes);
      syn_settings.scenes_per_episode = resolve_setting<std::size_t>(
          syn_sc_opt, syn_settings.scenes_per_episode, cfg, "synth", "scenes_per_episode",
          syn_settings.scenes_per_episode);
      syn_settings.utterances_per_scene = resolve_setting<std::size_t>(
          syn_ut_opt, syn_settings.utterances_per_scene, cfg, "synth", "utterances_per_scene",
          syn_settings.utterances_per_scene);
      syn_settings.tokens_per_utterance = resolve_setting<std::size_t>(
          syn_tk_opt, syn_settings.tokens_per_utterance, cfg, "synth", "tokens_per_utterance",
          syn_settings.tokens_per_utterance);
      syn_settings.vocab_size = resolve_setting<std::size_t>(
          syn_vc_opt, syn_settings.vocab_size, cfg, "synth", "vocab_size",
          syn_settings.vocab_size);
      syn_settings.reveal = resolve_setting<double>(syn_rv_opt, syn_settings.reveal, cfg, "synth",
                                                    "reveal", syn_settings.reveal);
      syn_settings.transition_noise =
          resolve_setting<double>(syn_no_opt, syn_settings.transition_noise, cfg, "synth",
                                  "transition_noise", syn_settings.transition_noise);
      syn_settings.seed = seed;
      const std::string tr = resolve_path(syn_tr_opt, syn_transcripts, cfg, "out_transcripts",
                                          false, "--out-transcripts");
      const std::string lb =
          resolve_path(syn_lb_opt, syn_labels, cfg, "out_labels", false, "--out-labels");
      ordered_json rc{{"command", "synth"},
                      {"seed", seed},
                      {"synth",
                       {{"episodes", syn_settings.episodes},
                        {"scenes_per_episode", syn_settings.scenes_per_episode},
                        {"utterances_per_scene", syn_settings.utterances_per_scene},
                        {"tokens_per_utterance", syn_settings.tokens_per_utterance},
                        {"vocab_size", syn_settings.vocab_size},
                        {"reveal", syn_settings.reveal},
                        {"transition_noise", syn_settings.transition_noise}}},
                      {"paths", {{"out_transcripts", tr}, {"out_labels", lb}}}};
      return cmd_synth(syn_settings, tr, lb, rc);
    }
  } catch (const emoseq::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
