#ifndef FSP_REPORT_HPP
#define FSP_REPORT_HPP

#include <string>
#include <vector>

#include "fsp/dataset.hpp"
#include "fsp/model.hpp"
#include "fsp/trainer.hpp"

namespace fsp {

// Ingestion stats: counts, vector coverage, per-language shift rates,
// input digests.
std::string dataset_stats_json(const Dataset& ds);

// Hop histogram over diverging pairs, disconnected count, and one shortest
// path per diverging pair (frame names).
std::string analyze_graph_json(const Dataset& ds, bool directed);

// One training run over the whole pair set (optionally with a stratified
// holdout split for epoch selection). Saves the checkpoint and returns the
// reproducibility manifest. The manifest contains no timing or host
// information: identical seed/config/dataset give identical bytes.
std::string run_training(const RunConfig& rc, const Dataset& ds, const std::string& checkpoint_path);

// Cross-validated evaluation report: a direct-transfer row, one row for the
// configured model, optional baseline rows and an optional ablation table.
std::string evaluation_report_json(const RunConfig& rc, const Dataset& ds, bool ablate);

// Scores an existing checkpoint on the dataset's pairs.
std::string holdout_eval_json(const Model& model, const Dataset& ds, int k);

// Mean frame representations over one or more checkpoints, written in the
// vector-file format (frame:<name> rows).
void export_embeddings(const Dataset& ds, const std::vector<std::string>& checkpoint_paths,
                       const std::string& out_path);

// Pretty text rendering of an evaluation report for terminals.
std::string render_evaluation_table(const std::string& report_json);

}  // namespace fsp

#endif
