#include "fsp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fsp/config.hpp"
#include "fsp/error.hpp"
#include "fsp/io_util.hpp"
#include "json.hpp"

namespace fsp {

using nlohmann::json;

namespace {

json stats_to_json(const Dataset& ds) {
  PairStats stats = ds.stats();
  json j;
  j["frames"] = ds.frame_count();
  j["edges"] = ds.graph.edges().size();
  j["duplicate_edges_dropped"] = ds.graph.duplicate_edge_count();
  j["lexicon_entries"] = ds.graph.lexicon().size();
  j["init_dim"] = ds.init_dim();
  j["lu_dim"] = ds.lu_dim();
  j["frames_without_vectors"] = ds.node_init.missing.size();
  j["lu_vector_entries"] = ds.lu_vectors.entry_count();
  j["pairs"] = stats.total;
  j["pairs_per_language"] = stats.per_language;
  j["shift_rate"] = stats.shift_rate;
  j["digests"] = ds.digests;
  return j;
}

json block_to_json(const MetricsReport::Block& b) {
  return json{{"f1", b.f1}, {"support", b.support}};
}

json metrics_to_json(const MetricsReport& m) {
  json j;
  j["k"] = m.k;
  j["combined"] = block_to_json(m.combined);
  for (const auto& [lang, block] : m.per_language) j[lang] = block_to_json(block);
  return j;
}

json nested_cv_to_json(const NestedCvResult& r) {
  json j;
  j["mean_f1"] = r.mean_f1;
  j["std_f1"] = r.std_f1;
  j["per_language"] = json::object();
  for (const auto& [lang, mean] : r.mean_per_language) {
    j["per_language"][lang] = json{{"mean_f1", mean},
                                   {"std_f1", r.std_per_language.at(lang)},
                                   {"support", r.support_per_language.at(lang)}};
  }
  json reps = json::array();
  for (const RepetitionResult& rep : r.repetitions) {
    reps.push_back(json{{"seed", rep.seed},
                        {"combined_f1", rep.metrics.combined.f1},
                        {"fold_f1", rep.fold_f1},
                        {"chosen_epochs", rep.chosen_epochs}});
  }
  j["repetitions"] = reps;
  return j;
}

}  // namespace

std::string dataset_stats_json(const Dataset& ds) {
  json j;
  j["kind"] = "dataset_stats";
  j["stats"] = stats_to_json(ds);
  return j.dump(2);
}

std::string analyze_graph_json(const Dataset& ds, bool directed) {
  std::vector<std::pair<FrameId, FrameId>> diverging;
  for (const AnnotationPair& p : ds.pairs)
    if (p.shifted()) diverging.emplace_back(p.src_frame, p.tgt_frame);
  FrameGraph::PathHistogram hist = ds.graph.path_length_histogram(diverging, directed);

  json j;
  j["kind"] = "graph_analysis";
  j["directed"] = directed;
  j["pairs"] = ds.pairs.size();
  j["diverging_pairs"] = diverging.size();
  j["disconnected"] = hist.disconnected;
  json h = json::object();
  for (const auto& [hops, count] : hist.counts) h[std::to_string(hops)] = count;
  j["hop_histogram"] = h;
  json paths = json::array();
  for (const auto& [a, b] : diverging) {
    std::vector<FrameId> path = ds.graph.shortest_path(a, b, directed);
    json entry;
    entry["src"] = ds.graph.name(a);
    entry["tgt"] = ds.graph.name(b);
    if (path.empty()) {
      entry["connected"] = false;
    } else {
      entry["connected"] = true;
      entry["hops"] = path.size() - 1;
      json names = json::array();
      for (FrameId f : path) names.push_back(ds.graph.name(f));
      entry["path"] = names;
    }
    paths.push_back(entry);
  }
  j["paths"] = paths;
  return j.dump(2);
}

namespace {

// Deterministic stratified holdout: the first ceil(fraction * n) indices of
// each language group, after a seeded shuffle.
std::pair<std::vector<int>, std::vector<int>> holdout_split(const Dataset& ds, double fraction,
                                                            uint64_t seed) {
  std::vector<int> train, val;
  if (fraction <= 0.0) {
    train.resize(ds.pairs.size());
    for (size_t i = 0; i < train.size(); ++i) train[i] = static_cast<int>(i);
    return {train, val};
  }
  std::map<std::string, std::vector<int>> groups;
  for (size_t i = 0; i < ds.pairs.size(); ++i)
    groups[lang_pair_name(ds.pairs[i].lang)].push_back(static_cast<int>(i));
  Rng rng = Rng(seed).child(7001);
  for (auto& [lang, members] : groups) {
    rng.shuffle(members);
    size_t nval = static_cast<size_t>(std::ceil(fraction * static_cast<double>(members.size())));
    nval = std::min(nval, members.size() > 1 ? members.size() - 1 : size_t{0});
    for (size_t i = 0; i < members.size(); ++i) (i < nval ? val : train).push_back(members[i]);
  }
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  return {train, val};
}

}  // namespace

std::string run_training(const RunConfig& rc_in, const Dataset& ds, const std::string& checkpoint_path) {
  RunConfig rc = rc_in;
  rc.bind_dataset(ds);
  if (ds.pairs.empty()) raise(ErrorCode::training, "no annotation pairs to train on");
  auto [train_idx, val_idx] = holdout_split(ds, rc.holdout_fraction, rc.seed);
  TrainRunResult run = train_run(rc, ds, train_idx, val_idx, rc.seed);
  run.model.save(checkpoint_path);

  json j;
  j["kind"] = "train_manifest";
  j["config"] = json::parse(run_config_to_json(rc));
  j["dataset"] = stats_to_json(ds);
  j["train_pairs"] = train_idx.size();
  j["val_pairs"] = val_idx.size();
  j["best_epoch"] = run.best_epoch;
  json epochs = json::array();
  for (const EpochLog& e : run.log) {
    json entry{{"epoch", e.epoch}, {"loss", e.loss}};
    if (e.val_f1 >= 0.0) entry["val_f1"] = e.val_f1;
    epochs.push_back(entry);
  }
  j["epochs"] = epochs;
  // Final train-set score of the selected parameters.
  std::map<int, FrameId> gold;
  for (int idx : train_idx) gold[idx] = ds.pairs[idx].tgt_frame;
  j["train_f1"] = top_k_f1(predict_pairs(run.model, ds, train_idx, rc.top_k), gold, rc.top_k);
  return j.dump(2);
}

std::string evaluation_report_json(const RunConfig& rc_in, const Dataset& ds, bool ablate) {
  RunConfig rc = rc_in;
  rc.bind_dataset(ds);
  std::vector<int> all(ds.pairs.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

  json rows = json::array();
  {
    json row;
    row["model"] = "direct_transfer";
    row["metrics"] = metrics_to_json(direct_transfer_report(ds.pairs, all, rc.top_k));
    rows.push_back(row);
  }
  for (const std::string& baseline : rc.baselines) {
    if (baseline == "direct") continue;  // always reported above
    RunConfig brc = rc;
    brc.model.tasks = {"fsp"};
    brc.model.representation = baseline == "random" ? ReprKind::random_table : ReprKind::fixed;
    if (brc.model.representation == ReprKind::fixed) brc.model.table_dim = ds.lu_dim();
    brc.bind_dataset(ds);
    json row;
    row["model"] = baseline == "random" ? "randomized_embeddings" : "lu_centroid";
    row["metrics"] = nested_cv_to_json(nested_cv(brc, ds));
    rows.push_back(row);
  }
  {
    json row;
    row["model"] = std::string(repr_kind_name(rc.model.representation)) +
                   (rc.model.tasks.size() > 1 ? "+aux" : "");
    row["metrics"] = nested_cv_to_json(nested_cv(rc, ds));
    rows.push_back(row);
  }

  json j;
  j["kind"] = "evaluation_report";
  j["config"] = json::parse(run_config_to_json(rc));
  j["dataset"] = stats_to_json(ds);
  j["rows"] = rows;
  if (ablate) {
    json ab = json::array();
    for (const AblationRow& row : ablation_suite(rc, ds)) {
      ab.push_back(json{{"removed", row.removed},
                        {"mean_f1", row.mean_f1},
                        {"std_f1", row.std_f1},
                        {"delta_vs_full", row.delta_vs_full}});
    }
    j["ablation"] = ab;
  }
  return j.dump(2);
}

std::string holdout_eval_json(const Model& model, const Dataset& ds, int k) {
  if (model.config().frame_count != ds.frame_count())
    raise(ErrorCode::dimension, "checkpoint frame count does not match dataset");
  if (model.config().lu_dim != ds.lu_dim())
    raise(ErrorCode::dimension, "checkpoint LU dimension does not match dataset");
  if (model.config().representation == ReprKind::gat && model.config().init_dim != ds.init_dim())
    raise(ErrorCode::dimension, "checkpoint init dimension does not match dataset");
  std::vector<int> all(ds.pairs.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  json j;
  j["kind"] = "holdout_eval";
  j["metrics"] = metrics_to_json(score_predictions(ds.pairs, all, predict_pairs(model, ds, all, k), k));
  j["direct_transfer"] = metrics_to_json(direct_transfer_report(ds.pairs, all, k));
  j["dataset"] = stats_to_json(ds);
  return j.dump(2);
}

void export_embeddings(const Dataset& ds, const std::vector<std::string>& checkpoint_paths,
                       const std::string& out_path) {
  if (checkpoint_paths.empty()) raise(ErrorCode::invalid_argument, "no checkpoints to export");
  Tensor acc;
  for (const std::string& path : checkpoint_paths) {
    Model model = Model::load(path);
    if (model.config().frame_count != ds.frame_count())
      raise(ErrorCode::dimension, "checkpoint '" + path + "' frame count does not match dataset");
    Tape tape;
    ModelVars vars = model.leaves(tape);
    Var reprs = model.frame_representations(tape, vars, ds.node_init.matrix, ds.graph.adjacency());
    const Tensor& r = reprs.value();
    if (acc.size() == 0) {
      acc = r;
    } else {
      if (!acc.same_shape(r))
        raise(ErrorCode::dimension, "checkpoint '" + path + "' representation width differs from the others");
      for (size_t i = 0; i < acc.size(); ++i) acc[i] += r[i];
    }
  }
  for (size_t i = 0; i < acc.size(); ++i) acc[i] /= static_cast<double>(checkpoint_paths.size());
  std::vector<std::pair<std::string, std::vector<double>>> out_rows;
  for (FrameId f = 0; f < ds.frame_count(); ++f) {
    std::vector<double> row(static_cast<size_t>(acc.cols()));
    for (int j = 0; j < acc.cols(); ++j) row[static_cast<size_t>(j)] = acc.at(f, j);
    out_rows.emplace_back("frame:" + ds.graph.name(f), std::move(row));
  }
  write_vector_file(out_path, out_rows);
}

namespace {

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string cell(const json& metrics, const char* lang) {
  // nested-cv rows carry mean/std; deterministic rows carry plain f1.
  if (metrics.contains("per_language") || metrics.contains("mean_f1")) {
    if (std::string(lang) == "combined")
      return fmt1(metrics.at("mean_f1").get<double>()) + " (+/- " + fmt1(metrics.at("std_f1").get<double>()) + ")";
    if (metrics.at("per_language").contains(lang)) {
      const json& b = metrics.at("per_language").at(lang);
      return fmt1(b.at("mean_f1").get<double>()) + " (+/- " + fmt1(b.at("std_f1").get<double>()) + ")";
    }
    return "-";
  }
  if (std::string(lang) == "combined") return fmt1(metrics.at("combined").at("f1").get<double>());
  if (metrics.contains(lang)) return fmt1(metrics.at(lang).at("f1").get<double>());
  return "-";
}

}  // namespace

std::string render_evaluation_table(const std::string& report_json) {
  json j = json::parse(report_json);
  std::ostringstream os;
  os << "model                    | en->pt              | en->de              | en->(pt+de)\n";
  os << "-------------------------+---------------------+---------------------+--------------------\n";
  for (const json& row : j.at("rows")) {
    const json& m = row.at("metrics");
    char line[160];
    std::snprintf(line, sizeof(line), "%-24s | %-19s | %-19s | %s\n",
                  row.at("model").get<std::string>().c_str(), cell(m, "en-pt").c_str(),
                  cell(m, "en-de").c_str(), cell(m, "combined").c_str());
    os << line;
  }
  if (j.contains("ablation")) {
    os << "\nablation (removed task -> mean F1, delta vs full)\n";
    os << "removed                  | mean F1    | delta\n";
    os << "-------------------------+------------+---------\n";
    for (const json& row : j.at("ablation")) {
      char line[120];
      std::snprintf(line, sizeof(line), "%-24s | %-10s | %+.1f\n",
                    row.at("removed").get<std::string>().c_str(),
                    (fmt1(row.at("mean_f1").get<double>()) + " (+/- " + fmt1(row.at("std_f1").get<double>()) + ")").c_str(),
                    row.at("delta_vs_full").get<double>());
      os << line;
    }
  }
  return os.str();
}

}  // namespace fsp
