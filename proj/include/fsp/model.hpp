#ifndef FSP_MODEL_HPP
#define FSP_MODEL_HPP

#include <set>
#include <string>
#include <vector>

#include "fsp/dataset.hpp"
#include "fsp/gat.hpp"
#include "fsp/heads.hpp"
#include "fsp/optim.hpp"

namespace fsp {

// How frames are represented for the classifier heads.
enum class ReprKind {
  gat,           // two-layer attention network over the frame graph
  random_table,  // trainable embedding table (baseline)
  fixed,         // frozen externally supplied matrix (e.g. LU centroids)
};

const char* repr_kind_name(ReprKind);
ReprKind parse_repr_kind(const std::string&);

struct ModelConfig {
  GatLayerConfig layer1{9, 109, 0, HeadCombine::concat, 0.2, Activation::elu};
  GatLayerConfig layer2{10, 256, 0, HeadCombine::mean, 0.2, Activation::identity};
  bool node_norm = true;
  double drop_edge = 0.3;
  int pos_dim = 16;
  int lu_dim = 0;    // from data
  int init_dim = 0;  // from data
  int frame_count = 0;
  int pathlen_hidden = 1024;
  double perturb_p = 0.3;
  ReprKind representation = ReprKind::gat;
  int table_dim = 256;  // random_table width
  std::set<std::string> tasks{"fsp", "link", "pathlen", "binframe", "reconstruct"};

  int frame_dim() const;  // representation width seen by the heads
  int fsp_input_dim() const { return frame_dim() + 2 * (lu_dim + pos_dim); }
  void validate() const;
};

// Parameters plus the wiring between the representation and the task heads.
// Construction seeds every parameter group from its own derived stream, so
// removing a head or task never shifts another group's initialization.
class Model {
 public:
  Model() = default;
  Model(ModelConfig cfg, uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // Frozen representation matrix for ReprKind::fixed.
  void set_fixed_table(Tensor table);
  const Tensor& fixed_table() const { return fixed_table_; }

  ModelVars leaves(Tape& tape) const;

  // Representations of every frame, [frame_count x frame_dim]. The neighbor
  // lists already reflect any per-step edge drops; evaluation passes the full
  // adjacency.
  Var frame_representations(Tape& tape, const ModelVars& vars, const Tensor& node_init,
                            const NeighborLists& nbrs) const;

  // Checkpoint: JSON header (config + tensor directory) followed by
  // length-prefixed named f64 arrays. See README for the exact layout.
  void save(const std::string& path) const;
  static Model load(const std::string& path);

  Model clone() const;

 private:
  ModelConfig cfg_;
  ParamStore params_;
  Tensor fixed_table_;

  void register_params(uint64_t seed);
};

// Layer-2 mean combination keeps the frame width at features_per_head; the
// paper-scale configuration (9x109 concat, 10x256 mean, 1024-dim inputs).
ModelConfig paper_model_config(int init_dim, int lu_dim, int frame_count);

}  // namespace fsp

#endif
