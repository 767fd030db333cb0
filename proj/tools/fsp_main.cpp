// fsp: command-line front end for the frameshift library. Talks to the core
// exclusively through the C API in frameshift.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "frameshift.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct DataFlags {
  std::string dir;
  std::string frames, edges, lus, vectors, pairs;

  void attach(CLI::App* cmd) {
    cmd->add_option("--data", dir, "Directory holding frames.tsv, edges.tsv, lus.tsv, vectors.tsv, pairs.tsv");
    cmd->add_option("--frames", frames, "Frames TSV (name, definition)");
    cmd->add_option("--edges", edges, "Edges TSV (src, relation, dst)");
    cmd->add_option("--lus", lus, "Lexical unit TSV (lemma, pos, frame)");
    cmd->add_option("--vectors", vectors, "Vector TSV (frame:/lu: keys)");
    cmd->add_option("--pairs", pairs, "Annotation pair TSV");
  }

  void resolve() {
    auto fallback = [&](std::string& field, const char* name) {
      if (field.empty() && !dir.empty()) field = (std::filesystem::path(dir) / name).string();
      if (field.empty()) throw CLI::ValidationError(std::string("missing --") + std::string(name).substr(0, std::string(name).find('.')) + " (or --data)");
      if (!std::filesystem::exists(field)) throw CLI::ValidationError("input file does not exist: " + field);
    };
    fallback(frames, "frames.tsv");
    fallback(edges, "edges.tsv");
    fallback(lus, "lus.tsv");
    fallback(vectors, "vectors.tsv");
    fallback(pairs, "pairs.tsv");
  }
};

struct ConfigFlags {
  std::string config_path;
  uint64_t seed = 0;
  int jobs = 0;
  int top_k = 0;
  std::string tasks;
  double drop_edge = -1.0;
  std::string head_combine;

  CLI::Option *seed_opt = nullptr, *jobs_opt = nullptr, *k_opt = nullptr, *tasks_opt = nullptr,
              *drop_opt = nullptr, *combine_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (flags override config keys)");
    seed_opt = cmd->add_option("--seed", seed, "Root seed for all randomness");
    jobs_opt = cmd->add_option("--jobs", jobs, "Parallel CV fold/repetition jobs");
    k_opt = cmd->add_option("--k", top_k, "Top-k cutoff for scoring");
    tasks_opt = cmd->add_option("--tasks", tasks, "Comma-separated task list (fsp is always on)");
    drop_opt = cmd->add_option("--drop-edge", drop_edge, "Edge drop rate per training step");
    combine_opt = cmd->add_option("--head-combine", head_combine, "Second-layer head combination (mean|concat)")
                      ->check(CLI::IsMember({"mean", "concat"}));
  }

  // defaults < config file < flags
  std::string materialize() const {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw CLI::ValidationError("cannot open config file: " + config_path);
      std::ostringstream os;
      os << in.rdbuf();
      j = json::parse(os.str(), nullptr, false);
      if (j.is_discarded()) throw CLI::ValidationError("config file is not valid JSON: " + config_path);
    }
    if (seed_opt && seed_opt->count()) j["seed"] = seed;
    if (jobs_opt && jobs_opt->count()) j["jobs"] = jobs;
    if (k_opt && k_opt->count()) j["top_k"] = top_k;
    if (tasks_opt && tasks_opt->count()) {
      std::vector<std::string> list;
      std::stringstream ss(tasks);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) list.push_back(item);
      j["train"]["tasks"] = list;
    }
    if (drop_opt && drop_opt->count()) j["model"]["drop_edge"] = drop_edge;
    if (combine_opt && combine_opt->count()) j["model"]["head_combine"] = head_combine;
    return j.dump();
  }
};

struct StringOut {
  char* ptr = nullptr;
  ~StringOut() { fsp_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct DatasetHandle {
  fsp_dataset* ptr = nullptr;
  ~DatasetHandle() { fsp_dataset_close(ptr); }
};

struct ModelHandle {
  fsp_model* ptr = nullptr;
  ~ModelHandle() { fsp_model_close(ptr); }
};

int fail(fsp_status status) {
  std::cerr << fsp_status_name(status) << ": " << fsp_last_error() << "\n";
  return 1;
}

// temp file + rename, so partial output is never left behind
void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CLI::ValidationError("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

int open_dataset(DataFlags& data, DatasetHandle& ds) {
  data.resolve();
  fsp_status s = fsp_dataset_open(data.frames.c_str(), data.edges.c_str(), data.lus.c_str(),
                                  data.vectors.c_str(), data.pairs.c_str(), &ds.ptr);
  if (s != FSP_OK) return fail(s);
  return 0;
}

void print_stats(const std::string& stats_json) {
  json j = json::parse(stats_json);
  const json& s = j.at("stats");
  std::cout << s.at("frames").get<long>() << " frames, " << s.at("edges").get<long>() << " edges ("
            << s.at("duplicate_edges_dropped").get<long>() << " duplicates dropped), "
            << s.at("lexicon_entries").get<long>() << " lexicon entries\n";
  std::cout << "vectors: init_dim=" << s.at("init_dim").get<int>() << ", lu_dim=" << s.at("lu_dim").get<int>()
            << ", frames without vectors: " << s.at("frames_without_vectors").get<long>() << "\n";
  long total = s.at("pairs").get<long>();
  if (total == 0) return;
  std::cout << total << " annotation pairs:";
  for (const auto& [lang, count] : s.at("pairs_per_language").items())
    std::cout << " " << count.get<long>() << " " << lang;
  std::cout << "\nshift rate:";
  for (const auto& [lang, rate] : s.at("shift_rate").items()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %s=%.1f%%", lang.c_str(), 100.0 * rate.get<double>());
    std::cout << buf;
  }
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frameshift: frame-shift prediction over a frame relation graph"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate inputs and print dataset statistics");
  DataFlags ingest_data;
  ingest_data.attach(ingest);
  std::string ingest_out;
  ingest->add_option("--out", ingest_out, "Write the stats/digest JSON here");

  // train
  auto* train = app.add_subcommand("train", "Train a model and write a checkpoint + manifest");
  DataFlags train_data;
  train_data.attach(train);
  ConfigFlags train_cfg;
  train_cfg.attach(train);
  std::string checkpoint_out = "model.ckpt", manifest_out = "manifest.json";
  train->add_option("--checkpoint", checkpoint_out, "Checkpoint output path");
  train->add_option("--manifest", manifest_out, "Manifest JSON output path");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate via nested cross-validation or on a checkpoint");
  DataFlags eval_data;
  eval_data.attach(eval);
  ConfigFlags eval_cfg;
  eval_cfg.attach(eval);
  bool nested = false, holdout = false, ablate = false;
  std::string eval_checkpoint, report_out;
  eval->add_flag("--nested-cv", nested, "Nested cross-validation protocol (default)");
  eval->add_flag("--holdout", holdout, "Score an existing checkpoint on the whole pair set");
  eval->add_flag("--ablate", ablate, "Add the auxiliary-task ablation table");
  eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint to score (with --holdout)");
  eval->add_option("--report", report_out, "Write the report JSON here");

  // analyze-graph
  auto* analyze = app.add_subcommand("analyze-graph", "Shortest-path analytics over diverging pairs");
  DataFlags analyze_data;
  analyze_data.attach(analyze);
  bool directed = false;
  std::string analyze_out;
  analyze->add_flag("--directed", directed, "Respect edge direction (default: undirected view)");
  analyze->add_option("--out", analyze_out, "Write the analysis JSON here");

  // export-embeddings
  auto* exp = app.add_subcommand("export-embeddings", "Write (averaged) frame representations as a vector file");
  DataFlags exp_data;
  exp_data.attach(exp);
  std::vector<std::string> exp_checkpoints;
  std::string exp_out = "embeddings.tsv";
  exp->add_option("--checkpoint", exp_checkpoints, "Checkpoint(s); several are averaged")->required();
  exp->add_option("--out", exp_out, "Output vector file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      DatasetHandle ds;
      if (int rc = open_dataset(ingest_data, ds)) return rc;
      StringOut stats;
      if (fsp_status s = fsp_dataset_stats(ds.ptr, &stats.ptr); s != FSP_OK) return fail(s);
      json j = json::parse(stats.str());
      if (j.at("stats").at("pairs").get<long>() == 0) {
        std::cerr << "format_error: no annotation pairs in input\n";
        return 1;
      }
      print_stats(stats.str());
      if (!ingest_out.empty()) write_file_atomic(ingest_out, stats.str());
      return 0;
    }

    if (*train) {
      DatasetHandle ds;
      if (int rc = open_dataset(train_data, ds)) return rc;
      std::string config = train_cfg.materialize();
      StringOut manifest;
      if (fsp_status s = fsp_train(ds.ptr, config.c_str(), checkpoint_out.c_str(), &manifest.ptr); s != FSP_OK)
        return fail(s);
      write_file_atomic(manifest_out, manifest.str());
      json j = json::parse(manifest.str());
      std::cout << "checkpoint: " << checkpoint_out << "\nmanifest:   " << manifest_out
                << "\nbest epoch: " << j.at("best_epoch").get<int>() << ", train top-" << j.at("config").at("top_k").get<int>()
                << " F1: " << j.at("train_f1").get<double>() << "\n";
      return 0;
    }

    if (*eval) {
      if (holdout && nested) {
        std::cerr << "invalid_argument: choose one of --nested-cv or --holdout\n";
        return 1;
      }
      DatasetHandle ds;
      if (int rc = open_dataset(eval_data, ds)) return rc;
      std::string report;
      if (holdout) {
        if (eval_checkpoint.empty()) {
          std::cerr << "invalid_argument: --holdout requires --checkpoint\n";
          return 1;
        }
        ModelHandle model;
        if (fsp_status s = fsp_model_open(eval_checkpoint.c_str(), &model.ptr); s != FSP_OK) return fail(s);
        int k = eval_cfg.k_opt->count() ? eval_cfg.top_k : 5;
        StringOut out;
        if (fsp_status s = fsp_model_eval(model.ptr, ds.ptr, k, &out.ptr); s != FSP_OK) return fail(s);
        report = out.str();
        json j = json::parse(report);
        std::cout << "top-" << k << " F1 (combined): " << j.at("metrics").at("combined").at("f1").get<double>()
                  << "\n";
      } else {
        std::string config = eval_cfg.materialize();
        StringOut out;
        if (fsp_status s = fsp_evaluate(ds.ptr, config.c_str(), ablate ? 1 : 0, &out.ptr); s != FSP_OK)
          return fail(s);
        report = out.str();
        StringOut table;
        if (fsp_status s = fsp_render_report(report.c_str(), &table.ptr); s != FSP_OK) return fail(s);
        std::cout << table.str();
      }
      if (!report_out.empty()) write_file_atomic(report_out, report);
      return 0;
    }

    if (*analyze) {
      DatasetHandle ds;
      if (int rc = open_dataset(analyze_data, ds)) return rc;
      StringOut out;
      if (fsp_status s = fsp_analyze_graph(ds.ptr, directed ? 1 : 0, &out.ptr); s != FSP_OK) return fail(s);
      json j = json::parse(out.str());
      std::cout << j.at("diverging_pairs").get<long>() << " diverging of " << j.at("pairs").get<long>()
                << " pairs, " << j.at("disconnected").get<long>() << " disconnected\n";
      std::cout << "hops histogram:";
      for (const auto& [hops, count] : j.at("hop_histogram").items())
        std::cout << " " << hops << ":" << count.get<long>();
      std::cout << "\n";
      for (const auto& entry : j.at("paths")) {
        std::cout << entry.at("src").get<std::string>() << " -> " << entry.at("tgt").get<std::string>() << ": ";
        if (!entry.at("connected").get<bool>()) {
          std::cout << "(no path)\n";
          continue;
        }
        const json& names = entry.at("path");
        for (size_t i = 0; i < names.size(); ++i) std::cout << (i ? " - " : "") << names[i].get<std::string>();
        std::cout << "\n";
      }
      if (!analyze_out.empty()) write_file_atomic(analyze_out, out.str());
      return 0;
    }

    if (*exp) {
      DatasetHandle ds;
      if (int rc = open_dataset(exp_data, ds)) return rc;
      std::vector<const char*> paths;
      for (const std::string& p : exp_checkpoints) paths.push_back(p.c_str());
      if (fsp_status s = fsp_export_embeddings(ds.ptr, paths.data(), paths.size(), exp_out.c_str());
          s != FSP_OK)
        return fail(s);
      std::cout << "wrote " << exp_out << " (" << exp_checkpoints.size() << " checkpoint"
                << (exp_checkpoints.size() == 1 ? "" : "s, averaged") << ")\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "invalid_argument: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "internal_error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
