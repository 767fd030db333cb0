#include "fsp/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_set>

#include "fsp/error.hpp"

namespace fsp {

namespace {

// Stream labels for deriving independent RNG streams from a run seed.
enum Stream : uint64_t {
  kModelInit = 1,
  kShuffle = 2,
  kEdgeMask = 3,
  kTaskBase = 16,  // + task index
  kFoldOuter = 64,
  kFoldInner = 65,
  kFinalTrain = 66,
};

void require_disjoint(const std::vector<int>& a, const std::vector<int>& b, const char* what) {
  std::unordered_set<int> seen(a.begin(), a.end());
  for (int x : b)
    if (seen.count(x)) raise(ErrorCode::training, std::string(what) + ": split leakage on pair " + std::to_string(x));
}

int task_index(const std::string& task) {
  for (size_t i = 0; i < kAllTasks.size(); ++i)
    if (kAllTasks[i] == task) return static_cast<int>(i);
  raise(ErrorCode::invalid_argument, "unknown task '" + task + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (learning_rate <= 0.0) raise(ErrorCode::config, "learning_rate must be positive");
  if (weight_decay < 0.0) raise(ErrorCode::config, "weight_decay must be non-negative");
  if (batch_size <= 0) raise(ErrorCode::config, "batch_size must be positive");
  if (aux_batch_size <= 0) raise(ErrorCode::config, "aux_batch_size must be positive");
  if (max_epochs < 0) raise(ErrorCode::config, "max_epochs must be non-negative");
  if (top_k <= 0) raise(ErrorCode::config, "top_k must be positive");
  if (pathlen_max_hops <= 0) raise(ErrorCode::config, "pathlen_max_hops must be positive");
  if (holdout_fraction < 0.0 || holdout_fraction >= 1.0)
    raise(ErrorCode::config, "holdout_fraction must be in [0, 1)");
  if (cv_outer_folds < 2 || cv_inner_folds < 2) raise(ErrorCode::config, "cv folds must be >= 2");
  if (jobs <= 0) raise(ErrorCode::config, "jobs must be positive");
  for (const std::string& b : baselines)
    if (b != "direct" && b != "random" && b != "centroid")
      raise(ErrorCode::config, "unknown baseline '" + b + "'");
}

void RunConfig::bind_dataset(const Dataset& ds) {
  if (model.frame_count == 0) model.frame_count = ds.frame_count();
  if (model.lu_dim == 0) model.lu_dim = ds.lu_dim();
  if (model.init_dim == 0) model.init_dim = ds.init_dim();
  if (model.layer1.input_dim == 0) model.layer1.input_dim = model.init_dim;
  if (model.layer2.input_dim == 0) model.layer2.input_dim = model.layer1.output_dim();
  validate();
  model.validate();
  if (model.frame_count != ds.frame_count())
    raise(ErrorCode::dimension, "config frame_count does not match dataset");
  if (model.representation == ReprKind::gat && model.init_dim != ds.init_dim())
    raise(ErrorCode::dimension, "config init_dim does not match dataset vectors");
  if (model.lu_dim != ds.lu_dim()) raise(ErrorCode::dimension, "config lu_dim does not match dataset vectors");
}

namespace {

// Frame representations for a training step (edge drops applied) or for
// evaluation (full adjacency).
Var step_representations(const Model& model, Tape& tape, const ModelVars& vars, const Dataset& ds,
                         bool training, Rng* mask_rng) {
  if (model.config().representation != ReprKind::gat)
    return model.frame_representations(tape, vars, ds.node_init.matrix, ds.graph.adjacency());
  if (training && model.config().drop_edge > 0.0) {
    EdgeMask mask = sample_edge_mask(ds.graph, model.config().drop_edge, *mask_rng);
    return model.frame_representations(tape, vars, ds.node_init.matrix, masked_adjacency(ds.graph, mask));
  }
  return model.frame_representations(tape, vars, ds.node_init.matrix, ds.graph.adjacency());
}

double run_epoch(Model& model, AdamState& adam, const RunConfig& rc, const Dataset& ds,
                 const std::vector<int>& train_idx, Rng& run_rng, int epoch) {
  std::vector<int> order = train_idx;
  Rng shuffle_rng = run_rng.child(kShuffle).child(static_cast<uint64_t>(epoch));
  shuffle_rng.shuffle(order);
  const auto& tasks = model.config().tasks;
  double epoch_loss = 0.0;
  int batches = 0;
  for (size_t start = 0; start < order.size(); start += static_cast<size_t>(rc.batch_size)) {
    size_t end = std::min(order.size(), start + static_cast<size_t>(rc.batch_size));
    std::vector<int> chunk(order.begin() + start, order.begin() + end);
    uint64_t batch_id = static_cast<uint64_t>(epoch) * 1000003ULL + batches;

    Tape tape;
    ModelVars vars = model.leaves(tape);
    Rng mask_rng = run_rng.child(kEdgeMask).child(batch_id);
    Var reprs = step_representations(model, tape, vars, ds, true, &mask_rng);

    std::vector<std::pair<std::string, Var>> losses;
    FspBatch fsp = make_fsp_batch(ds, chunk);
    losses.emplace_back("fsp", fsp_loss(tape, vars, reprs, fsp));
    for (const std::string& task : kAllTasks) {
      if (task == "fsp" || !tasks.count(task)) continue;
      Rng task_rng = run_rng.child(kTaskBase + task_index(task)).child(batch_id);
      if (task == "link") {
        losses.emplace_back(task, link_pred_loss(tape, vars, reprs,
                                                 sample_link_batch(ds.graph, rc.aux_batch_size, task_rng)));
      } else if (task == "pathlen") {
        losses.emplace_back(task, path_len_loss(tape, vars, reprs,
                                                sample_path_batch(ds.graph, rc.aux_batch_size,
                                                                  rc.pathlen_max_hops, task_rng)));
      } else if (task == "binframe") {
        losses.emplace_back(task,
                            binary_frame_loss(tape, vars, reprs,
                                              sample_binframe_batch(ds.graph, ds.lu_vectors,
                                                                    rc.aux_batch_size, task_rng)));
      } else if (task == "reconstruct") {
        losses.emplace_back(task,
                            label_recon_loss(tape, vars, reprs,
                                             sample_recon_batch(ds.graph, ds.lu_vectors, rc.aux_batch_size,
                                                                model.config().perturb_p, task_rng)));
      }
    }
    Var total = combined_loss(tape, vars, losses);
    tape.backward(total);
    epoch_loss += total.value().item();
    ++batches;

    std::unordered_map<std::string, Tensor> grads;
    for (size_t i = 0; i < model.params().count(); ++i) {
      const std::string& name = model.params().name_at(i);
      grads.emplace(name, tape.grad(vars.at(name)));
    }
    adam.step(model.params(), grads);
  }
  return batches > 0 ? epoch_loss / batches : 0.0;
}

}  // namespace

std::vector<RankedPrediction> predict_pairs(const Model& model, const Dataset& ds,
                                            const std::vector<int>& pair_indices, int k) {
  std::vector<RankedPrediction> preds;
  if (pair_indices.empty()) return preds;
  Tape tape;
  ModelVars vars = model.leaves(tape);
  Var reprs = model.frame_representations(tape, vars, ds.node_init.matrix, ds.graph.adjacency());
  FspBatch batch = make_fsp_batch(ds, pair_indices);
  Var probs = softmax(fsp_logits(tape, vars, reprs, batch), 1);
  const Tensor& p = probs.value();
  preds.reserve(pair_indices.size());
  for (size_t i = 0; i < pair_indices.size(); ++i)
    preds.push_back(rank_row(pair_indices[i], p.data() + static_cast<size_t>(i) * p.cols(), p.cols(), k));
  return preds;
}

TrainRunResult train_run(const RunConfig& rc, const Dataset& ds, const std::vector<int>& train_idx,
                         const std::vector<int>& val_idx, uint64_t run_seed, int epochs_override) {
  if (train_idx.empty()) raise(ErrorCode::training, "train_run: empty training split");
  require_disjoint(train_idx, val_idx, "train/val");
  int epochs = epochs_override >= 0 ? epochs_override : rc.max_epochs;

  Rng run_rng(run_seed);
  Model model(rc.model, run_rng.child(kModelInit).seed());
  AdamState adam(AdamConfig{rc.learning_rate, rc.weight_decay, 0.9, 0.999, 1e-8});

  TrainRunResult result;
  result.best_epoch = 0;
  double best_f1 = -1.0;
  Model best = model.clone();
  std::map<int, FrameId> val_gold;
  for (int idx : val_idx) val_gold[idx] = ds.pairs[idx].tgt_frame;

  for (int epoch = 1; epoch <= epochs; ++epoch) {
    double loss = run_epoch(model, adam, rc, ds, train_idx, run_rng, epoch);
    EpochLog log{epoch, loss, -1.0};
    if (!val_idx.empty()) {
      log.val_f1 = top_k_f1(predict_pairs(model, ds, val_idx, rc.top_k), val_gold, rc.top_k);
      if (log.val_f1 > best_f1) {
        best_f1 = log.val_f1;
        best = model.clone();
        result.best_epoch = epoch;
      }
    }
    result.log.push_back(log);
  }
  if (val_idx.empty()) {
    result.model = std::move(model);
    result.best_epoch = epochs;
  } else {
    result.model = std::move(best);
    if (best_f1 < 0.0) result.best_epoch = 0;
  }
  return result;
}

std::vector<std::vector<int>> stratified_folds(const std::vector<AnnotationPair>& pairs,
                                               const std::vector<int>& indices, int fold_count, Rng& rng) {
  if (fold_count < 2) raise(ErrorCode::invalid_argument, "fold_count must be >= 2");
  std::map<std::string, std::vector<int>> groups;
  for (int idx : indices) groups[lang_pair_name(pairs[idx].lang)].push_back(idx);
  std::vector<std::vector<int>> folds(static_cast<size_t>(fold_count));
  int next_fold = 0;
  for (auto& [lang, members] : groups) {
    rng.shuffle(members);
    for (int idx : members) {
      folds[next_fold % fold_count].push_back(idx);
      ++next_fold;
    }
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

namespace {

std::vector<int> flatten_except(const std::vector<std::vector<int>>& folds, size_t skip) {
  std::vector<int> out;
  for (size_t i = 0; i < folds.size(); ++i) {
    if (i == skip) continue;
    out.insert(out.end(), folds[i].begin(), folds[i].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// One outer fold of one repetition: inner epoch selection, retrain, score.
struct FoldOutcome {
  int chosen_epoch = 0;
  double fold_f1 = 0.0;
  std::vector<RankedPrediction> predictions;
};

FoldOutcome run_outer_fold(const RunConfig& rc, const Dataset& ds, uint64_t rep_seed,
                           const std::vector<int>& train_pool, const std::vector<int>& test_fold,
                           size_t fold_index) {
  require_disjoint(train_pool, test_fold, "outer train/test");
  Rng fold_rng = Rng(rep_seed).child(kFoldInner).child(fold_index);
  std::vector<std::vector<int>> inner = stratified_folds(ds.pairs, train_pool, rc.cv_inner_folds, fold_rng);

  // Mean inner-validation trajectory over epochs 1..max_epochs.
  std::vector<double> mean_traj(static_cast<size_t>(rc.max_epochs), 0.0);
  int contributing = 0;
  for (size_t j = 0; j < inner.size(); ++j) {
    if (inner[j].empty()) continue;
    std::vector<int> inner_train = flatten_except(inner, j);
    if (inner_train.empty()) continue;
    uint64_t run_seed = Rng(rep_seed).child(kFoldOuter).child(fold_index * 1000 + j).seed();
    TrainRunResult run = train_run(rc, ds, inner_train, inner[j], run_seed);
    for (int e = 0; e < rc.max_epochs; ++e) mean_traj[e] += run.log[e].val_f1;
    ++contributing;
  }
  FoldOutcome outcome;
  if (contributing > 0 && rc.max_epochs > 0) {
    double best = -1.0;
    for (int e = 0; e < rc.max_epochs; ++e) {
      double v = mean_traj[e] / contributing;
      if (v > best) {  // strict: ties keep the earlier epoch
        best = v;
        outcome.chosen_epoch = e + 1;
      }
    }
  }
  uint64_t final_seed = Rng(rep_seed).child(kFinalTrain).child(fold_index).seed();
  TrainRunResult final_run = train_run(rc, ds, train_pool, {}, final_seed, outcome.chosen_epoch);
  outcome.predictions = predict_pairs(final_run.model, ds, test_fold, rc.top_k);
  std::map<int, FrameId> gold;
  for (int idx : test_fold) gold[idx] = ds.pairs[idx].tgt_frame;
  outcome.fold_f1 = top_k_f1(outcome.predictions, gold, rc.top_k);
  return outcome;
}

void run_parallel(int jobs, int task_count, const std::function<void(int)>& fn) {
  if (jobs <= 1 || task_count <= 1) {
    for (int i = 0; i < task_count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= task_count) return;
      fn(i);
    }
  };
  std::vector<std::thread> threads;
  int n = std::min(jobs, task_count);
  threads.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
}

}  // namespace

NestedCvResult nested_cv(const RunConfig& rc, const Dataset& ds) {
  rc.validate();
  if (static_cast<int>(ds.pairs.size()) < 10)
    raise(ErrorCode::training, "nested_cv: need at least 10 annotation pairs");
  if (rc.cv_repetitions < 2) raise(ErrorCode::config, "nested_cv: repetitions must be >= 2");

  std::vector<int> all(ds.pairs.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

  struct Task {
    int rep;
    size_t fold;
  };
  // Fold plans are derived per repetition up front; fold tasks then run
  // independently (possibly in parallel) into preallocated slots.
  std::vector<std::vector<std::vector<int>>> plans(static_cast<size_t>(rc.cv_repetitions));
  std::vector<Task> tasks;
  for (int r = 0; r < rc.cv_repetitions; ++r) {
    uint64_t rep_seed = rc.seed + static_cast<uint64_t>(r);
    Rng fold_rng = Rng(rep_seed).child(kFoldOuter);
    plans[r] = stratified_folds(ds.pairs, all, rc.cv_outer_folds, fold_rng);
    // The outer folds must partition the dataset.
    size_t covered = 0;
    for (size_t f = 0; f < plans[r].size(); ++f) {
      covered += plans[r][f].size();
      for (size_t g = f + 1; g < plans[r].size(); ++g) require_disjoint(plans[r][f], plans[r][g], "outer folds");
      if (!plans[r][f].empty()) tasks.push_back(Task{r, f});
    }
    if (covered != ds.pairs.size()) raise(ErrorCode::internal, "outer folds do not cover the dataset");
  }

  std::vector<FoldOutcome> outcomes(tasks.size());
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  run_parallel(rc.jobs, static_cast<int>(tasks.size()), [&](int i) {
    if (failed.load()) return;
    try {
      const Task& t = tasks[static_cast<size_t>(i)];
      uint64_t rep_seed = rc.seed + static_cast<uint64_t>(t.rep);
      std::vector<int> train_pool = flatten_except(plans[t.rep], t.fold);
      outcomes[static_cast<size_t>(i)] = run_outer_fold(rc, ds, rep_seed, train_pool, plans[t.rep][t.fold], t.fold);
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  });
  if (failed.load()) std::rethrow_exception(failure);

  NestedCvResult result;
  result.repetitions.resize(static_cast<size_t>(rc.cv_repetitions));
  for (size_t i = 0; i < tasks.size(); ++i) {
    RepetitionResult& rep = result.repetitions[static_cast<size_t>(tasks[i].rep)];
    rep.fold_f1.push_back(outcomes[i].fold_f1);
    rep.chosen_epochs.push_back(outcomes[i].chosen_epoch);
    rep.predictions.insert(rep.predictions.end(), outcomes[i].predictions.begin(),
                           outcomes[i].predictions.end());
  }
  std::vector<double> combined;
  std::map<std::string, std::vector<double>> per_language;
  for (int r = 0; r < rc.cv_repetitions; ++r) {
    RepetitionResult& rep = result.repetitions[static_cast<size_t>(r)];
    rep.seed = rc.seed + static_cast<uint64_t>(r);
    rep.metrics = score_predictions(ds.pairs, all, rep.predictions, rc.top_k);
    combined.push_back(rep.metrics.combined.f1);
    for (const auto& [lang, block] : rep.metrics.per_language) {
      per_language[lang].push_back(block.f1);
      result.support_per_language[lang] = block.support;
    }
  }
  result.mean_f1 = mean_of(combined);
  result.std_f1 = sample_std(combined);
  for (const auto& [lang, xs] : per_language) {
    result.mean_per_language[lang] = mean_of(xs);
    result.std_per_language[lang] = sample_std(xs);
  }
  return result;
}

std::vector<AblationRow> ablation_suite(const RunConfig& base, const Dataset& ds) {
  for (const std::string& task : kAllTasks)
    if (!base.model.tasks.count(task))
      raise(ErrorCode::config, "ablation requires the full task set; missing '" + task + "'");
  std::vector<AblationRow> rows;
  auto run_with = [&](const std::string& removed, const std::set<std::string>& tasks) {
    RunConfig rc = base;
    rc.model.tasks = tasks;
    NestedCvResult r = nested_cv(rc, ds);
    rows.push_back(AblationRow{removed, r.mean_f1, r.std_f1, 0.0});
  };
  run_with("none", base.model.tasks);
  for (const std::string& task : kAllTasks) {
    if (task == "fsp") continue;
    std::set<std::string> tasks = base.model.tasks;
    tasks.erase(task);
    run_with(task, tasks);
  }
  run_with("all", {"fsp"});
  for (AblationRow& row : rows) row.delta_vs_full = row.mean_f1 - rows[0].mean_f1;
  return rows;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double mu = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace fsp
