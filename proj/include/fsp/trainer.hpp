#ifndef FSP_TRAINER_HPP
#define FSP_TRAINER_HPP

#include <string>
#include <vector>

#include "fsp/dataset.hpp"
#include "fsp/metrics.hpp"
#include "fsp/model.hpp"

namespace fsp {

struct RunConfig {
  ModelConfig model;
  double learning_rate = 0.005;
  double weight_decay = 0.0005;
  int batch_size = 512;
  int aux_batch_size = 512;
  int max_epochs = 100;
  uint64_t seed = 42;
  int top_k = 5;
  int pathlen_max_hops = 8;
  double holdout_fraction = 0.0;  // train command: optional validation split
  int cv_outer_folds = 5;
  int cv_inner_folds = 5;
  int cv_repetitions = 5;
  int jobs = 1;
  std::vector<std::string> baselines;  // subset of {direct, random, centroid}

  void validate() const;
  // Fills data-derived dims (init/lu/frame counts, layer input dims) from the
  // dataset when they are unset.
  void bind_dataset(const Dataset& ds);
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double val_f1 = -1.0;  // -1 when the run has no validation split
};

struct TrainRunResult {
  Model model;  // parameters from the best validation epoch
  int best_epoch = 0;
  std::vector<EpochLog> log;
};

// One optimization run. Trains on train_idx with the combined multi-task
// loss; after each epoch scores top-k F1 on val_idx and keeps the best
// epoch's parameters (ties go to the earlier epoch). With an empty val_idx
// the final epoch wins. epochs_override >= 0 replaces max_epochs.
TrainRunResult train_run(const RunConfig& rc, const Dataset& ds, const std::vector<int>& train_idx,
                         const std::vector<int>& val_idx, uint64_t run_seed, int epochs_override = -1);

// Evaluation-mode ranked predictions (full adjacency, no edge drops).
std::vector<RankedPrediction> predict_pairs(const Model& model, const Dataset& ds,
                                            const std::vector<int>& pair_indices, int k);

// Disjoint covering folds, stratified by language pair so every fold sees
// both language pairs proportionally.
std::vector<std::vector<int>> stratified_folds(const std::vector<AnnotationPair>& pairs,
                                               const std::vector<int>& indices, int fold_count, Rng& rng);

struct RepetitionResult {
  uint64_t seed = 0;
  MetricsReport metrics;  // pooled over the outer test folds
  std::vector<double> fold_f1;
  std::vector<int> chosen_epochs;
  std::vector<RankedPrediction> predictions;  // pooled, one per pair
};

struct NestedCvResult {
  std::vector<RepetitionResult> repetitions;
  double mean_f1 = 0.0;
  double std_f1 = 0.0;  // sample standard deviation across repetitions
  std::map<std::string, double> mean_per_language;
  std::map<std::string, double> std_per_language;
  std::map<std::string, int> support_per_language;
};

// Nested cross-validation: the inner folds pick the epoch count (max mean
// inner-val F1, ties toward fewer epochs), the model is retrained on the
// full outer-train split and scored once on the untouched outer test fold.
// Repetition r runs with seed base_seed + r. Requires >= 2 repetitions and
// >= 10 pairs. Outer folds and repetitions run in parallel when jobs > 1;
// results are identical either way.
NestedCvResult nested_cv(const RunConfig& rc, const Dataset& ds);

struct AblationRow {
  std::string removed;  // "none", a task name, or "all"
  double mean_f1 = 0.0;
  double std_f1 = 0.0;
  double delta_vs_full = 0.0;
};

// Six-row ablation: the full model, each auxiliary task removed singly, and
// all auxiliary tasks removed. Requires the base config to enable all tasks.
std::vector<AblationRow> ablation_suite(const RunConfig& base, const Dataset& ds);

double mean_of(const std::vector<double>& xs);
double sample_std(const std::vector<double>& xs);

}  // namespace fsp

#endif
