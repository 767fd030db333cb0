#include "fsp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fsp/error.hpp"

namespace fsp {

RankedPrediction rank_row(int pair_index, const double* scores, int n, int k) {
  k = std::min(k, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  RankedPrediction p;
  p.pair_index = pair_index;
  for (int i = 0; i < k; ++i) {
    p.frames.push_back(order[i]);
    p.scores.push_back(scores[order[i]]);
  }
  return p;
}

namespace {

bool hit(const RankedPrediction& p, FrameId gold, int k) {
  int limit = std::min<int>(k, static_cast<int>(p.frames.size()));
  for (int i = 0; i < limit; ++i)
    if (p.frames[i] == gold) return true;
  return false;
}

}  // namespace

double top_k_f1(const std::vector<RankedPrediction>& predictions, const std::map<int, FrameId>& gold,
                int k, bool macro) {
  if (gold.empty()) raise(ErrorCode::evaluation, "top_k_f1: no gold pairs to score");
  std::map<int, const RankedPrediction*> by_pair;
  for (const RankedPrediction& p : predictions) by_pair[p.pair_index] = &p;
  if (!macro) {
    int correct = 0;
    for (const auto& [pair_index, gold_frame] : gold) {
      auto it = by_pair.find(pair_index);
      if (it == by_pair.end())
        raise(ErrorCode::evaluation, "missing prediction for pair " + std::to_string(pair_index));
      correct += hit(*it->second, gold_frame, k);
    }
    return 100.0 * correct / static_cast<double>(gold.size());
  }
  std::map<FrameId, std::pair<int, int>> per_class;  // gold class -> (correct, total)
  for (const auto& [pair_index, gold_frame] : gold) {
    auto it = by_pair.find(pair_index);
    if (it == by_pair.end())
      raise(ErrorCode::evaluation, "missing prediction for pair " + std::to_string(pair_index));
    auto& [c, t] = per_class[gold_frame];
    c += hit(*it->second, gold_frame, k);
    t += 1;
  }
  double acc = 0.0;
  for (const auto& [cls, ct] : per_class) acc += static_cast<double>(ct.first) / ct.second;
  return 100.0 * acc / static_cast<double>(per_class.size());
}

MetricsReport score_predictions(const std::vector<AnnotationPair>& pairs, const std::vector<int>& eval_indices,
                                const std::vector<RankedPrediction>& predictions, int k) {
  MetricsReport report;
  report.k = k;
  std::map<std::string, std::map<int, FrameId>> gold_by_lang;
  std::map<int, FrameId> gold_all;
  for (int idx : eval_indices) {
    if (idx < 0 || idx >= static_cast<int>(pairs.size()))
      raise(ErrorCode::evaluation, "pair index " + std::to_string(idx) + " out of range");
    gold_all[idx] = pairs[idx].tgt_frame;
    gold_by_lang[lang_pair_name(pairs[idx].lang)][idx] = pairs[idx].tgt_frame;
  }
  report.combined.f1 = top_k_f1(predictions, gold_all, k);
  report.combined.support = static_cast<int>(gold_all.size());
  for (const auto& [lang, gold] : gold_by_lang) {
    MetricsReport::Block block;
    std::vector<RankedPrediction> subset;
    for (const RankedPrediction& p : predictions)
      if (gold.count(p.pair_index)) subset.push_back(p);
    block.f1 = top_k_f1(subset, gold, k);
    block.support = static_cast<int>(gold.size());
    report.per_language[lang] = block;
  }
  return report;
}

std::vector<RankedPrediction> direct_transfer_predictions(const std::vector<AnnotationPair>& pairs,
                                                          const std::vector<int>& eval_indices) {
  std::vector<RankedPrediction> preds;
  for (int idx : eval_indices) {
    RankedPrediction p;
    p.pair_index = idx;
    p.frames = {pairs[idx].src_frame};
    p.scores = {1.0};
    preds.push_back(std::move(p));
  }
  return preds;
}

MetricsReport direct_transfer_report(const std::vector<AnnotationPair>& pairs,
                                     const std::vector<int>& eval_indices, int k) {
  MetricsReport report = score_predictions(pairs, eval_indices, direct_transfer_predictions(pairs, eval_indices), k);
  // f1 + 100 * shift_rate == 100 exactly for this baseline, on any dataset.
  int shifted = 0;
  for (int idx : eval_indices) shifted += pairs[idx].shifted();
  double expect = 100.0 * (eval_indices.size() - shifted) / static_cast<double>(eval_indices.size());
  if (report.combined.f1 != expect)
    raise(ErrorCode::internal, "direct-transfer identity violated: " + std::to_string(report.combined.f1) +
                                   " vs " + std::to_string(expect));
  return report;
}

Tensor centroid_frame_table(const FrameGraph& graph, const VectorStore& lu_vectors,
                            std::vector<FrameId>* non_lexical_out) {
  int dim = lu_vectors.dim();
  if (dim <= 0) raise(ErrorCode::dimension, "centroid baseline: LU vector store is empty");
  Tensor table = Tensor::matrix(graph.frame_count(), dim);
  std::vector<int> counts(graph.frame_count(), 0);
  for (const LexiconEntry& lu : graph.lexicon()) {
    std::vector<double> v = lu_vectors.lookup_lu(lu.lemma, lu.pos, "en");
    for (int j = 0; j < dim; ++j) table.at(lu.frame, j) += v[j];
    ++counts[lu.frame];
  }
  for (FrameId f = 0; f < graph.frame_count(); ++f) {
    if (counts[f] == 0) {
      if (non_lexical_out) non_lexical_out->push_back(f);
      continue;
    }
    for (int j = 0; j < dim; ++j) table.at(f, j) /= counts[f];
  }
  return table;
}

std::string predictions_tsv(const std::vector<RankedPrediction>& predictions, const FrameGraph& graph) {
  std::ostringstream os;
  os.precision(10);
  for (const RankedPrediction& p : predictions)
    for (size_t r = 0; r < p.frames.size(); ++r)
      os << p.pair_index << '\t' << (r + 1) << '\t' << graph.name(p.frames[r]) << '\t' << p.scores[r] << '\n';
  return os.str();
}

}  // namespace fsp
