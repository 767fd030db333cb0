/*
 * frameshift: cross-lingual frame-shift prediction over a frame graph.
 *
 * C API for the shared library. All functions return fsp_status; FSP_OK
 * means success. On failure, fsp_last_error() returns a message for the
 * calling thread. Objects are opaque handles released with their _close
 * function; strings returned through char** are owned by the caller and
 * released with fsp_string_free().
 */
#ifndef FRAMESHIFT_H
#define FRAMESHIFT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fsp_status {
  FSP_OK = 0,
  FSP_ERROR_IO = 1,
  FSP_ERROR_FORMAT = 2,
  FSP_ERROR_LOOKUP = 3,
  FSP_ERROR_DIMENSION = 4,
  FSP_ERROR_CONFIG = 5,
  FSP_ERROR_TRAINING = 6,
  FSP_ERROR_EVALUATION = 7,
  FSP_ERROR_INVALID_ARGUMENT = 8,
  FSP_ERROR_INTERNAL = 9
} fsp_status;

typedef struct fsp_dataset fsp_dataset;
typedef struct fsp_model fsp_model;

/* Machine-parsable code name, e.g. "format_error". Never NULL. */
const char* fsp_status_name(fsp_status status);

/* Message for the last failing call on this thread; "" when none. */
const char* fsp_last_error(void);

void fsp_string_free(char* s);

/*
 * Loads a dataset bundle from TSV files:
 *   frames:  name <TAB> definition
 *   edges:   src <TAB> relation-type <TAB> dst
 *   lus:     lemma <TAB> pos <TAB> frame
 *   vectors: key <TAB> v1 v2 ... vD   (key = frame:<name> | lu:<lang>:<lemma>:<pos>)
 *   pairs:   lang_pair <TAB> src_frame <TAB> src_lemma <TAB> src_pos
 *            <TAB> tgt_lemma <TAB> tgt_pos <TAB> tgt_frame
 */
fsp_status fsp_dataset_open(const char* frames_tsv, const char* edges_tsv, const char* lus_tsv,
                            const char* vectors_tsv, const char* pairs_tsv, fsp_dataset** out);
void fsp_dataset_close(fsp_dataset* ds);

/* Ingestion stats (counts, shift rates, digests) as a JSON document. */
fsp_status fsp_dataset_stats(const fsp_dataset* ds, char** json_out);

/* Shortest-path analytics over diverging pairs as a JSON document. */
fsp_status fsp_analyze_graph(const fsp_dataset* ds, int directed, char** json_out);

/*
 * One training run. config_json may be NULL or "{}" for defaults; see the
 * README for the schema. Writes the checkpoint atomically and returns the
 * reproducibility manifest.
 */
fsp_status fsp_train(const fsp_dataset* ds, const char* config_json, const char* checkpoint_path,
                     char** manifest_json_out);

/*
 * Nested cross-validation evaluation report (direct-transfer row, model row,
 * optional baseline rows). Pass ablate != 0 for the six-row ablation table.
 */
fsp_status fsp_evaluate(const fsp_dataset* ds, const char* config_json, int ablate, char** report_json_out);

fsp_status fsp_model_open(const char* checkpoint_path, fsp_model** out);
void fsp_model_close(fsp_model* model);

/* Scores an existing checkpoint on the dataset's pairs (top-k). */
fsp_status fsp_model_eval(const fsp_model* model, const fsp_dataset* ds, int top_k, char** report_json_out);

/* Ranked predictions for every pair as TSV: pair_id, rank, frame, score. */
fsp_status fsp_model_predict(const fsp_model* model, const fsp_dataset* ds, int top_k, char** tsv_out);

/*
 * Mean frame representations over one or more checkpoints, written to
 * out_tsv in the vector-file format.
 */
fsp_status fsp_export_embeddings(const fsp_dataset* ds, const char* const* checkpoint_paths,
                                 size_t checkpoint_count, const char* out_tsv);

/* Renders an evaluation report JSON as an aligned text table. */
fsp_status fsp_render_report(const char* report_json, char** text_out);

#ifdef __cplusplus
}
#endif

#endif /* FRAMESHIFT_H */
