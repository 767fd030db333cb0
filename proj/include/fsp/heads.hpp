#ifndef FSP_HEADS_HPP
#define FSP_HEADS_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "fsp/dataset.hpp"
#include "fsp/graph.hpp"
#include "fsp/optim.hpp"
#include "fsp/rng.hpp"
#include "fsp/tape.hpp"

namespace fsp {

// Active-task names. "fsp" is always present.
extern const std::vector<std::string> kAllTasks;  // fsp, link, pathlen, binframe, reconstruct
bool is_task_name(const std::string&);

struct ModelVars {
  std::unordered_map<std::string, Var> by_name;
  Var at(const std::string& name) const;
};

// x . weight + bias, for x [b x in], weight [in x out], bias [out].
Var linear(Var x, Var weight, Var bias);

// ---- batches ----

// Primary task: one row per annotation pair.
struct FspBatch {
  std::vector<int> src_frame;
  Tensor lu_features;  // [b x 2*lu_dim] = [w_src ; w_tgt]
  std::vector<int> pos_src, pos_tgt;
  std::vector<int> gold;
  int size() const { return static_cast<int>(src_frame.size()); }
};
FspBatch make_fsp_batch(const Dataset& ds, const std::vector<int>& pair_indices);

// Binary edge classification over frame pairs; balanced 1:1 within one.
struct LinkBatch {
  std::vector<int> f1, f2;
  std::vector<int> label;  // 1 = edge
};
LinkBatch sample_link_batch(const FrameGraph& g, int batch_size, Rng& rng);

// Hop-count regression over connected pairs, capped at max_hops.
struct PathBatch {
  std::vector<int> f1, f2;
  std::vector<double> hops;
};
PathBatch sample_path_batch(const FrameGraph& g, int batch_size, int max_hops, Rng& rng);

// Does this LU evoke this frame; balanced 1:1 within one.
struct BinFrameBatch {
  std::vector<int> frame;
  Tensor lu_features;  // [b x lu_dim]
  std::vector<int> pos;
  std::vector<int> label;  // 1 = evokes
};
BinFrameBatch sample_binframe_batch(const FrameGraph& g, const VectorStore& lu_vectors, int batch_size,
                                    Rng& rng);

// Recover the gold frame from a possibly perturbed frame representation.
struct ReconBatch {
  std::vector<int> input_frame;  // gold, or a random wrong frame with prob perturb_p
  Tensor lu_features;            // [b x lu_dim]
  std::vector<int> pos;
  std::vector<int> gold;
  int perturbed_count = 0;
};
ReconBatch sample_recon_batch(const FrameGraph& g, const VectorStore& lu_vectors, int batch_size,
                              double perturb_p, Rng& rng);

// ---- head forward/loss builders ----
// Parameter naming (see Model): head.fsp.{weight,bias}, head.link.{weight,bias},
// head.pathlen.{weight1,bias1,weight2,bias2}, head.binframe.{weight,bias},
// head.recon.{weight,bias}, uncert.<task>.

// Classifier input [h_src ; w_src ; w_tgt ; p_src ; p_tgt]; returns logits
// over all frames.
Var fsp_logits(Tape& tape, const ModelVars& vars, Var reprs, const FspBatch& batch);
Var fsp_loss(Tape& tape, const ModelVars& vars, Var reprs, const FspBatch& batch);

Var link_pred_loss(Tape& tape, const ModelVars& vars, Var reprs, const LinkBatch& batch);
Var path_len_loss(Tape& tape, const ModelVars& vars, Var reprs, const PathBatch& batch);
Var binary_frame_loss(Tape& tape, const ModelVars& vars, Var reprs, const BinFrameBatch& batch);
// The single LU's (w, p) features fill both LU slots of the shared-width input.
Var label_recon_loss(Tape& tape, const ModelVars& vars, Var reprs, const ReconBatch& batch);

// sum_t exp(-s_t) * L_t + s_t with trainable per-task log-variances s_t.
// Requires the fsp loss to be present.
Var combined_loss(Tape& tape, const ModelVars& vars,
                  const std::vector<std::pair<std::string, Var>>& task_losses);

}  // namespace fsp

#endif
