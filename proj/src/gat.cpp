#include "fsp/gat.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "fsp/error.hpp"

namespace fsp {

namespace {

Tensor glorot_uniform(int rows, int cols, int fan_in, int fan_out, Rng& rng) {
  double limit = std::sqrt(6.0 / (fan_in + fan_out));
  Tensor t = Tensor::matrix(rows, cols);
  for (size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-limit, limit);
  return t;
}

// Softmax over leaky-scored neighborhoods; shared by the tape op and the
// inspection path so both routes compute identical coefficients.
std::vector<double> segment_alpha(const double* self_score, const double* neigh_score,
                                  const NeighborLists& nbrs, double leaky_slope,
                                  std::vector<double>* raw_scores_out) {
  std::vector<double> alpha(nbrs.targets.size());
  if (raw_scores_out) raw_scores_out->resize(nbrs.targets.size());
  for (int i = 0; i < nbrs.node_count(); ++i) {
    int begin = nbrs.offsets[i], end = nbrs.offsets[i + 1];
    double mx = -HUGE_VAL;
    for (int k = begin; k < end; ++k) {
      double pre = self_score[i] + neigh_score[nbrs.targets[k]];
      double e = pre >= 0.0 ? pre : leaky_slope * pre;
      alpha[k] = e;
      if (raw_scores_out) (*raw_scores_out)[k] = pre;
      mx = std::max(mx, e);
    }
    double z = 0.0;
    for (int k = begin; k < end; ++k) {
      alpha[k] = std::exp(alpha[k] - mx);
      z += alpha[k];
    }
    for (int k = begin; k < end; ++k) alpha[k] /= z;
  }
  return alpha;
}

}  // namespace

void register_gat_layer_params(ParamStore& params, const std::string& prefix, const GatLayerConfig& cfg,
                               Rng& rng) {
  if (cfg.input_dim <= 0 || cfg.features_per_head <= 0 || cfg.heads <= 0)
    raise(ErrorCode::config, "attention layer '" + prefix + "' has non-positive dimensions");
  for (int m = 0; m < cfg.heads; ++m) {
    std::string head = prefix + ".h" + std::to_string(m);
    params.add(head + ".weight",
               glorot_uniform(cfg.input_dim, cfg.features_per_head, cfg.input_dim, cfg.features_per_head, rng));
    params.add(head + ".attn_self", glorot_uniform(cfg.features_per_head, 1, 2 * cfg.features_per_head, 1, rng));
    params.add(head + ".attn_neigh", glorot_uniform(cfg.features_per_head, 1, 2 * cfg.features_per_head, 1, rng));
  }
}

int EdgeMask::kept_count() const {
  int n = 0;
  for (uint8_t k : keep) n += k != 0;
  return n;
}

EdgeMask sample_edge_mask(const FrameGraph& graph, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) raise(ErrorCode::invalid_argument, "drop-edge rate must be in [0, 1)");
  EdgeMask mask;
  mask.keep.resize(graph.edges().size());
  for (size_t i = 0; i < mask.keep.size(); ++i) mask.keep[i] = rate == 0.0 || !rng.bernoulli(rate);
  return mask;
}

EdgeMask full_edge_mask(const FrameGraph& graph) {
  EdgeMask mask;
  mask.keep.assign(graph.edges().size(), 1);
  return mask;
}

NeighborLists masked_adjacency(const FrameGraph& graph, const EdgeMask& mask) {
  if (mask.keep.size() != graph.edges().size())
    raise(ErrorCode::invalid_argument, "edge mask does not match graph edge list");
  int n = graph.frame_count();
  std::vector<std::vector<int>> in_lists(n);
  for (int i = 0; i < n; ++i) in_lists[i].push_back(i);
  const auto& edges = graph.edges();
  for (size_t e = 0; e < edges.size(); ++e) {
    if (!mask.keep[e]) continue;
    if (edges[e].src != edges[e].dst) in_lists[edges[e].dst].push_back(edges[e].src);
  }
  NeighborLists nbrs;
  nbrs.offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) nbrs.offsets[i + 1] = nbrs.offsets[i] + static_cast<int>(in_lists[i].size());
  nbrs.targets.reserve(nbrs.offsets[n]);
  for (int i = 0; i < n; ++i) nbrs.targets.insert(nbrs.targets.end(), in_lists[i].begin(), in_lists[i].end());
  return nbrs;
}

std::vector<double> attention_coefficients(const Tensor& features, const Tensor& weight,
                                           const Tensor& attn_self, const Tensor& attn_neigh,
                                           const NeighborLists& nbrs, double leaky_slope) {
  if (features.cols() != weight.rows())
    raise(ErrorCode::dimension, "attention: features " + shape_str(features.shape()) + " vs weight " +
                                    shape_str(weight.shape()));
  int n = features.rows(), d = weight.cols();
  if (n != nbrs.node_count()) raise(ErrorCode::dimension, "attention: feature rows do not match graph nodes");
  std::vector<double> self_score(n, 0.0), neigh_score(n, 0.0);
  std::vector<double> wh(static_cast<size_t>(n) * d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < features.cols(); ++p) {
      double x = features.at(i, p);
      if (x == 0.0) continue;
      for (int j = 0; j < d; ++j) wh[static_cast<size_t>(i) * d + j] += x * weight.at(p, j);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      self_score[i] += wh[static_cast<size_t>(i) * d + j] * attn_self[static_cast<size_t>(j)];
      neigh_score[i] += wh[static_cast<size_t>(i) * d + j] * attn_neigh[static_cast<size_t>(j)];
    }
  return segment_alpha(self_score.data(), neigh_score.data(), nbrs, leaky_slope, nullptr);
}

Var gat_attention(Var transformed, Var self_score, Var neigh_score, const NeighborLists& nbrs,
                  double leaky_slope) {
  Tape* t = transformed.tape;
  const Tensor& wh = t->value(transformed);
  const Tensor& s = t->value(self_score);
  const Tensor& q = t->value(neigh_score);
  int n = wh.rows(), d = wh.cols();
  if (n != nbrs.node_count() || s.size() != static_cast<size_t>(n) || q.size() != static_cast<size_t>(n))
    raise(ErrorCode::dimension, "gat_attention: score/feature sizes do not match graph nodes");
  auto raw = std::make_shared<std::vector<double>>();
  auto alpha = std::make_shared<std::vector<double>>(
      segment_alpha(s.data(), q.data(), nbrs, leaky_slope, raw.get()));
  Tensor out = Tensor::matrix(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = nbrs.offsets[i]; k < nbrs.offsets[i + 1]; ++k) {
      int j = nbrs.targets[k];
      double a = (*alpha)[k];
      for (int c = 0; c < d; ++c) out.at(i, c) += a * wh.at(j, c);
    }
  Var self{t, static_cast<int>(t->node_count())};
  auto nb = std::make_shared<NeighborLists>(nbrs);  // keep alive through backward
  auto back = [t, transformed, self_score, neigh_score, self, alpha, raw, nb, leaky_slope, n, d]() {
    const Tensor& g = t->grad(self);
    const Tensor& wh = t->value(transformed);
    Tensor& gwh = t->grad_ref(transformed);
    Tensor& gs = t->grad_ref(self_score);
    Tensor& gq = t->grad_ref(neigh_score);
    std::vector<double> dalpha(nb->targets.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      int begin = nb->offsets[i], end = nb->offsets[i + 1];
      for (int k = begin; k < end; ++k) {
        int j = nb->targets[k];
        double a = (*alpha)[k];
        double dot = 0.0;
        for (int c = 0; c < d; ++c) {
          double gc = g.at(i, c);
          dot += gc * wh.at(j, c);
          gwh.at(j, c) += a * gc;
        }
        dalpha[k] = dot;
      }
      // softmax backward within the neighborhood, then leaky-relu backward.
      double inner = 0.0;
      for (int k = begin; k < end; ++k) inner += (*alpha)[k] * dalpha[k];
      double gs_acc = 0.0;
      for (int k = begin; k < end; ++k) {
        double de = (*alpha)[k] * (dalpha[k] - inner);
        double dpre = de * ((*raw)[k] >= 0.0 ? 1.0 : leaky_slope);
        gs_acc += dpre;
        gq[static_cast<size_t>(nb->targets[k])] += dpre;
      }
      gs[static_cast<size_t>(i)] += gs_acc;
    }
  };
  return t->make_node(std::move(out), back, "gat_attention");
}

Var gat_layer_forward(Tape& tape, const GatLayerVars& vars, const GatLayerConfig& cfg, Var input,
                      const NeighborLists& nbrs, bool apply_node_norm) {
  if (static_cast<int>(vars.heads.size()) != cfg.heads)
    raise(ErrorCode::dimension, "layer has " + std::to_string(vars.heads.size()) + " head params, config says " +
                                    std::to_string(cfg.heads));
  if (tape.value(input).cols() != cfg.input_dim)
    raise(ErrorCode::dimension, "layer input dim " + std::to_string(tape.value(input).cols()) +
                                    " does not match config " + std::to_string(cfg.input_dim));
  std::vector<Var> head_outputs;
  head_outputs.reserve(cfg.heads);
  for (int m = 0; m < cfg.heads; ++m) {
    const GatLayerVars::Head& head = vars.heads[m];
    Var wh = matmul(input, head.weight);                       // [n x d']
    Var s = matmul(wh, head.attn_self);                        // [n x 1]
    Var q = matmul(wh, head.attn_neigh);                       // [n x 1]
    head_outputs.push_back(gat_attention(wh, s, q, nbrs, cfg.leaky_slope));
  }
  Var combined = cfg.combine == HeadCombine::concat
                     ? concat_cols(head_outputs)
                     : scale(add_n(head_outputs), 1.0 / static_cast<double>(cfg.heads));
  if (apply_node_norm) combined = node_norm(combined);
  if (cfg.activation == Activation::elu) combined = elu(combined);
  return combined;
}

}  // namespace fsp
