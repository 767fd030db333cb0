#include "frameshift.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "fsp/config.hpp"
#include "fsp/dataset.hpp"
#include "fsp/error.hpp"
#include "fsp/metrics.hpp"
#include "fsp/model.hpp"
#include "fsp/report.hpp"
#include "fsp/trainer.hpp"

struct fsp_dataset {
  fsp::Dataset data;
};

struct fsp_model {
  fsp::Model model;
};

namespace {

thread_local std::string g_last_error;

fsp_status to_status(fsp::ErrorCode code) { return static_cast<fsp_status>(static_cast<int>(code)); }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs the body, translating exceptions into status codes and the
// thread-local error message.
template <class Fn>
fsp_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return FSP_OK;
  } catch (const fsp::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FSP_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FSP_ERROR_INTERNAL;
  }
}

fsp_status require(bool ok, const char* message) {
  if (ok) return FSP_OK;
  g_last_error = message;
  return FSP_ERROR_INVALID_ARGUMENT;
}

fsp::RunConfig config_from(const char* config_json) {
  return fsp::parse_run_config(config_json == nullptr || config_json[0] == '\0' ? "{}" : config_json);
}

}  // namespace

extern "C" {

const char* fsp_status_name(fsp_status status) {
  switch (status) {
    case FSP_OK: return "ok";
    case FSP_ERROR_IO: return "io_error";
    case FSP_ERROR_FORMAT: return "format_error";
    case FSP_ERROR_LOOKUP: return "lookup_error";
    case FSP_ERROR_DIMENSION: return "dimension_error";
    case FSP_ERROR_CONFIG: return "config_error";
    case FSP_ERROR_TRAINING: return "training_error";
    case FSP_ERROR_EVALUATION: return "evaluation_error";
    case FSP_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case FSP_ERROR_INTERNAL: return "internal_error";
  }
  return "unknown_error";
}

const char* fsp_last_error(void) { return g_last_error.c_str(); }

void fsp_string_free(char* s) { std::free(s); }

fsp_status fsp_dataset_open(const char* frames_tsv, const char* edges_tsv, const char* lus_tsv,
                            const char* vectors_tsv, const char* pairs_tsv, fsp_dataset** out) {
  if (fsp_status s = require(out != nullptr, "out pointer is NULL"); s != FSP_OK) return s;
  if (fsp_status s = require(frames_tsv && edges_tsv && lus_tsv && vectors_tsv && pairs_tsv,
                             "all five dataset paths are required");
      s != FSP_OK)
    return s;
  *out = nullptr;
  return guarded([&]() {
    fsp::DatasetPaths paths{frames_tsv, edges_tsv, lus_tsv, vectors_tsv, pairs_tsv};
    auto* handle = new fsp_dataset{fsp::load_dataset(paths)};
    *out = handle;
  });
}

void fsp_dataset_close(fsp_dataset* ds) { delete ds; }

fsp_status fsp_dataset_stats(const fsp_dataset* ds, char** json_out) {
  if (fsp_status s = require(ds && json_out, "dataset and out pointer are required"); s != FSP_OK) return s;
  return guarded([&]() { *json_out = dup_string(fsp::dataset_stats_json(ds->data)); });
}

fsp_status fsp_analyze_graph(const fsp_dataset* ds, int directed, char** json_out) {
  if (fsp_status s = require(ds && json_out, "dataset and out pointer are required"); s != FSP_OK) return s;
  return guarded([&]() { *json_out = dup_string(fsp::analyze_graph_json(ds->data, directed != 0)); });
}

fsp_status fsp_train(const fsp_dataset* ds, const char* config_json, const char* checkpoint_path,
                     char** manifest_json_out) {
  if (fsp_status s = require(ds && checkpoint_path && manifest_json_out,
                             "dataset, checkpoint path and out pointer are required");
      s != FSP_OK)
    return s;
  return guarded([&]() {
    fsp::RunConfig rc = config_from(config_json);
    *manifest_json_out = dup_string(fsp::run_training(rc, ds->data, checkpoint_path));
  });
}

fsp_status fsp_evaluate(const fsp_dataset* ds, const char* config_json, int ablate, char** report_json_out) {
  if (fsp_status s = require(ds && report_json_out, "dataset and out pointer are required"); s != FSP_OK)
    return s;
  return guarded([&]() {
    fsp::RunConfig rc = config_from(config_json);
    *report_json_out = dup_string(fsp::evaluation_report_json(rc, ds->data, ablate != 0));
  });
}

fsp_status fsp_model_open(const char* checkpoint_path, fsp_model** out) {
  if (fsp_status s = require(checkpoint_path && out, "checkpoint path and out pointer are required");
      s != FSP_OK)
    return s;
  *out = nullptr;
  return guarded([&]() { *out = new fsp_model{fsp::Model::load(checkpoint_path)}; });
}

void fsp_model_close(fsp_model* model) { delete model; }

fsp_status fsp_model_eval(const fsp_model* model, const fsp_dataset* ds, int top_k, char** report_json_out) {
  if (fsp_status s = require(model && ds && report_json_out, "model, dataset and out pointer are required");
      s != FSP_OK)
    return s;
  if (fsp_status s = require(top_k > 0, "top_k must be positive"); s != FSP_OK) return s;
  return guarded([&]() { *report_json_out = dup_string(fsp::holdout_eval_json(model->model, ds->data, top_k)); });
}

fsp_status fsp_model_predict(const fsp_model* model, const fsp_dataset* ds, int top_k, char** tsv_out) {
  if (fsp_status s = require(model && ds && tsv_out, "model, dataset and out pointer are required");
      s != FSP_OK)
    return s;
  if (fsp_status s = require(top_k > 0, "top_k must be positive"); s != FSP_OK) return s;
  return guarded([&]() {
    std::vector<int> all(ds->data.pairs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    auto preds = fsp::predict_pairs(model->model, ds->data, all, top_k);
    *tsv_out = dup_string(fsp::predictions_tsv(preds, ds->data.graph));
  });
}

fsp_status fsp_export_embeddings(const fsp_dataset* ds, const char* const* checkpoint_paths,
                                 size_t checkpoint_count, const char* out_tsv) {
  if (fsp_status s = require(ds && checkpoint_paths && out_tsv && checkpoint_count > 0,
                             "dataset, checkpoint list and output path are required");
      s != FSP_OK)
    return s;
  return guarded([&]() {
    std::vector<std::string> paths(checkpoint_paths, checkpoint_paths + checkpoint_count);
    fsp::export_embeddings(ds->data, paths, out_tsv);
  });
}

fsp_status fsp_render_report(const char* report_json, char** text_out) {
  if (fsp_status s = require(report_json && text_out, "report JSON and out pointer are required");
      s != FSP_OK)
    return s;
  return guarded([&]() { *text_out = dup_string(fsp::render_evaluation_table(report_json)); });
}

}  // extern "C"
