#ifndef FSP_METRICS_HPP
#define FSP_METRICS_HPP

#include <map>
#include <string>
#include <vector>

#include "fsp/embeddings.hpp"
#include "fsp/graph.hpp"
#include "fsp/tensor.hpp"

namespace fsp {

// Ranked candidate frames for one annotation pair, scores non-increasing.
struct RankedPrediction {
  int pair_index = -1;
  std::vector<FrameId> frames;
  std::vector<double> scores;
};

// Top-k ranking of one score row; ties break toward the lower frame id.
RankedPrediction rank_row(int pair_index, const double* scores, int n, int k);

// Score on a 0..100 scale. An instance counts as correct iff its gold frame
// appears among the first k candidates. Micro averaging (the default)
// reduces to top-k accuracy: one gold label per instance makes micro
// precision, recall and F1 coincide. Macro averages the per-gold-class
// rates instead.
double top_k_f1(const std::vector<RankedPrediction>& predictions, const std::map<int, FrameId>& gold,
                int k, bool macro = false);

struct MetricsReport {
  int k = 5;
  struct Block {
    double f1 = 0.0;
    int support = 0;
  };
  std::map<std::string, Block> per_language;
  Block combined;
};

MetricsReport score_predictions(const std::vector<AnnotationPair>& pairs, const std::vector<int>& eval_indices,
                                const std::vector<RankedPrediction>& predictions, int k);

// Projects every frame unchanged (a single candidate per pair). The score
// identity 100*(1 - shift_rate) is asserted on every call.
MetricsReport direct_transfer_report(const std::vector<AnnotationPair>& pairs,
                                     const std::vector<int>& eval_indices, int k);
std::vector<RankedPrediction> direct_transfer_predictions(const std::vector<AnnotationPair>& pairs,
                                                          const std::vector<int>& eval_indices);

// Frozen frame table for the centroid baseline: the unweighted mean of the
// vectors of a frame's evoking LUs; frames with no LUs get zero rows.
Tensor centroid_frame_table(const FrameGraph& graph, const VectorStore& lu_vectors,
                            std::vector<FrameId>* non_lexical_out = nullptr);

std::string predictions_tsv(const std::vector<RankedPrediction>& predictions, const FrameGraph& graph);

}  // namespace fsp

#endif
