#ifndef FSP_GAT_HPP
#define FSP_GAT_HPP

#include <string>
#include <vector>

#include "fsp/graph.hpp"
#include "fsp/optim.hpp"
#include "fsp/rng.hpp"
#include "fsp/tape.hpp"

namespace fsp {

enum class HeadCombine { concat, mean };
enum class Activation { elu, identity };

struct GatLayerConfig {
  int heads = 1;
  int features_per_head = 8;
  int input_dim = 0;
  HeadCombine combine = HeadCombine::concat;
  double leaky_slope = 0.2;
  Activation activation = Activation::identity;

  int output_dim() const {
    return combine == HeadCombine::concat ? heads * features_per_head : features_per_head;
  }
};

// Per-head parameters of one attention layer, as tape vars for a step.
// Naming convention under a ParamStore prefix:
//   <prefix>.h<m>.weight      [input_dim x features_per_head]
//   <prefix>.h<m>.attn_self   [features_per_head x 1]
//   <prefix>.h<m>.attn_neigh  [features_per_head x 1]
struct GatLayerVars {
  struct Head {
    Var weight;
    Var attn_self;
    Var attn_neigh;
  };
  std::vector<Head> heads;
};

// Glorot-uniform initialization for every head of a layer.
void register_gat_layer_params(ParamStore& params, const std::string& prefix, const GatLayerConfig& cfg,
                               Rng& rng);

// Per-training-step boolean keep flag for each non-self edge of the graph.
struct EdgeMask {
  std::vector<uint8_t> keep;  // parallel to FrameGraph::edges()
  int kept_count() const;
};

// Each non-self edge is kept independently with probability 1 - rate.
// Self-loops are not part of the mask and always survive.
EdgeMask sample_edge_mask(const FrameGraph& graph, double rate, Rng& rng);
EdgeMask full_edge_mask(const FrameGraph& graph);  // evaluation: keep everything

// In-neighbor lists (self included) restricted to the kept edges.
NeighborLists masked_adjacency(const FrameGraph& graph, const EdgeMask& mask);

// Normalized attention coefficients for one head, flattened over the CSR
// neighborhoods of `nbrs`: entry k weights neighbor nbrs.targets[k] in the
// aggregation for its segment's node. Rows sum to 1 per node.
std::vector<double> attention_coefficients(const Tensor& features, const Tensor& weight,
                                           const Tensor& attn_self, const Tensor& attn_neigh,
                                           const NeighborLists& nbrs, double leaky_slope);

// Fused attention op: scores e_ij = leaky_relu(self_score_i + neigh_score_j),
// per-neighborhood softmax, then the alpha-weighted sum of transformed
// neighbor features.
Var gat_attention(Var transformed, Var self_score, Var neigh_score, const NeighborLists& nbrs,
                  double leaky_slope);

// One attention layer: per-head attention aggregation, head combination
// (concat or mean), optional per-node normalization, then the layer
// activation.
Var gat_layer_forward(Tape& tape, const GatLayerVars& vars, const GatLayerConfig& cfg, Var input,
                      const NeighborLists& nbrs, bool apply_node_norm);

}  // namespace fsp

#endif
