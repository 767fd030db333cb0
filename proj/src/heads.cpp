#include "fsp/heads.hpp"

#include <algorithm>
#include <cmath>

#include "fsp/error.hpp"

namespace fsp {

const std::vector<std::string> kAllTasks = {"fsp", "link", "pathlen", "binframe", "reconstruct"};

bool is_task_name(const std::string& s) {
  return std::find(kAllTasks.begin(), kAllTasks.end(), s) != kAllTasks.end();
}

Var ModelVars::at(const std::string& name) const {
  auto it = by_name.find(name);
  if (it == by_name.end()) raise(ErrorCode::lookup, "no tape var for parameter '" + name + "'");
  return it->second;
}

Var linear(Var x, Var weight, Var bias) { return add_rowvec(matmul(x, weight), bias); }

FspBatch make_fsp_batch(const Dataset& ds, const std::vector<int>& pair_indices) {
  FspBatch b;
  int lu2 = ds.pair_lu_features.cols();
  b.lu_features = Tensor::matrix(static_cast<int>(pair_indices.size()), lu2);
  int row = 0;
  for (int idx : pair_indices) {
    if (idx < 0 || idx >= static_cast<int>(ds.pairs.size()))
      raise(ErrorCode::lookup, "pair index " + std::to_string(idx) + " out of range");
    const AnnotationPair& p = ds.pairs[idx];
    b.src_frame.push_back(p.src_frame);
    b.gold.push_back(p.tgt_frame);
    b.pos_src.push_back(ds.pair_pos_src[idx]);
    b.pos_tgt.push_back(ds.pair_pos_tgt[idx]);
    for (int j = 0; j < lu2; ++j) b.lu_features.at(row, j) = ds.pair_lu_features.at(idx, j);
    ++row;
  }
  return b;
}

namespace {

// Sample k distinct indices from [0, n), or all of them when n <= k.
std::vector<int> sample_indices(int n, int k, Rng& rng) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (n <= k) return idx;
  rng.shuffle(idx);
  idx.resize(k);
  return idx;
}

constexpr int kMaxRejects = 10000;

}  // namespace

LinkBatch sample_link_batch(const FrameGraph& g, int batch_size, Rng& rng) {
  std::vector<int> nonself;
  const auto& edges = g.edges();
  for (size_t i = 0; i < edges.size(); ++i)
    if (edges[i].src != edges[i].dst) nonself.push_back(static_cast<int>(i));
  if (nonself.empty()) raise(ErrorCode::training, "link task: graph has no non-self edges");
  int n = g.frame_count();
  if (static_cast<long long>(n) * (n - 1) <= static_cast<long long>(nonself.size()))
    raise(ErrorCode::training, "link task: graph is complete, no negative pairs exist");
  LinkBatch b;
  std::vector<int> pos = sample_indices(static_cast<int>(nonself.size()), batch_size / 2, rng);
  for (int i : pos) {
    b.f1.push_back(edges[nonself[i]].src);
    b.f2.push_back(edges[nonself[i]].dst);
    b.label.push_back(1);
  }
  int negatives = static_cast<int>(pos.size());
  for (int k = 0; k < negatives; ++k) {
    int tries = 0;
    while (true) {
      if (++tries > kMaxRejects) raise(ErrorCode::training, "link task: negative sampling stalled");
      int a = rng.uniform_int(n), c = rng.uniform_int(n);
      if (a == c || g.has_edge(a, c)) continue;
      b.f1.push_back(a);
      b.f2.push_back(c);
      b.label.push_back(0);
      break;
    }
  }
  return b;
}

PathBatch sample_path_batch(const FrameGraph& g, int batch_size, int max_hops, Rng& rng) {
  PathBatch b;
  int n = g.frame_count();
  int tries = 0;
  while (static_cast<int>(b.f1.size()) < batch_size) {
    if (++tries > kMaxRejects + batch_size)
      raise(ErrorCode::training, "path-length task: could not sample connected pairs (graph too sparse?)");
    int a = rng.uniform_int(n);
    std::vector<int> dist = g.bfs_distances(a, false, max_hops);
    std::vector<int> candidates;
    for (int v = 0; v < n; ++v)
      if (v != a && dist[v] > 0) candidates.push_back(v);
    if (candidates.empty()) continue;
    int c = candidates[static_cast<size_t>(rng.uniform_int(static_cast<int>(candidates.size())))];
    b.f1.push_back(a);
    b.f2.push_back(c);
    b.hops.push_back(static_cast<double>(dist[c]));
  }
  return b;
}

BinFrameBatch sample_binframe_batch(const FrameGraph& g, const VectorStore& lu_vectors, int batch_size,
                                    Rng& rng) {
  const auto& lexicon = g.lexicon();
  if (lexicon.empty()) raise(ErrorCode::training, "binary-frame task: empty LU lexicon");
  int n = g.frame_count();
  BinFrameBatch b;
  std::vector<int> pos = sample_indices(static_cast<int>(lexicon.size()), batch_size / 2, rng);
  std::vector<std::vector<double>> rows;
  auto push = [&](const LexiconEntry& lu, int frame, int label) {
    b.frame.push_back(frame);
    b.pos.push_back(pos_id(lu.pos));
    b.label.push_back(label);
    rows.push_back(lu_vectors.lookup_lu(lu.lemma, lu.pos, "en"));
  };
  for (int i : pos) push(lexicon[i], lexicon[i].frame, 1);
  for (int k = 0; k < static_cast<int>(pos.size()); ++k) {
    const LexiconEntry& lu = lexicon[pos[k]];
    int tries = 0;
    while (true) {
      if (++tries > kMaxRejects)
        raise(ErrorCode::training, "binary-frame task: negative sampling stalled (LU evokes every frame?)");
      int f = rng.uniform_int(n);
      if (g.evokes(lu.lemma, lu.pos, f)) continue;
      push(lu, f, 0);
      break;
    }
  }
  b.lu_features = Tensor::matrix(static_cast<int>(rows.size()), lu_vectors.dim());
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < lu_vectors.dim(); ++j) b.lu_features.at(static_cast<int>(i), j) = rows[i][j];
  return b;
}

ReconBatch sample_recon_batch(const FrameGraph& g, const VectorStore& lu_vectors, int batch_size,
                              double perturb_p, Rng& rng) {
  const auto& lexicon = g.lexicon();
  if (lexicon.empty()) raise(ErrorCode::training, "label-reconstruction task: empty LU lexicon");
  int n = g.frame_count();
  ReconBatch b;
  std::vector<int> idx = sample_indices(static_cast<int>(lexicon.size()), batch_size, rng);
  std::vector<std::vector<double>> rows;
  for (int i : idx) {
    const LexiconEntry& lu = lexicon[i];
    int input_frame = lu.frame;
    if (n > 1 && rng.bernoulli(perturb_p)) {
      ++b.perturbed_count;
      do {
        input_frame = rng.uniform_int(n);
      } while (input_frame == lu.frame);
    }
    b.input_frame.push_back(input_frame);
    b.gold.push_back(lu.frame);
    b.pos.push_back(pos_id(lu.pos));
    rows.push_back(lu_vectors.lookup_lu(lu.lemma, lu.pos, "en"));
  }
  b.lu_features = Tensor::matrix(static_cast<int>(rows.size()), lu_vectors.dim());
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < lu_vectors.dim(); ++j) b.lu_features.at(static_cast<int>(i), j) = rows[i][j];
  return b;
}

Var fsp_logits(Tape& tape, const ModelVars& vars, Var reprs, const FspBatch& batch) {
  Var h = gather_rows(reprs, batch.src_frame);
  Var lu = tape.constant(batch.lu_features);
  Var pos_table = vars.at("pos.table");
  Var p_src = gather_rows(pos_table, batch.pos_src);
  Var p_tgt = gather_rows(pos_table, batch.pos_tgt);
  Var x = concat_cols({h, lu, p_src, p_tgt});
  return linear(x, vars.at("head.fsp.weight"), vars.at("head.fsp.bias"));
}

Var fsp_loss(Tape& tape, const ModelVars& vars, Var reprs, const FspBatch& batch) {
  return cross_entropy(fsp_logits(tape, vars, reprs, batch), batch.gold);
}

Var link_pred_loss(Tape& tape, const ModelVars& vars, Var reprs, const LinkBatch& batch) {
  (void)tape;
  Var x = concat_cols({gather_rows(reprs, batch.f1), gather_rows(reprs, batch.f2)});
  Var logits = linear(x, vars.at("head.link.weight"), vars.at("head.link.bias"));
  return cross_entropy(logits, batch.label);
}

Var path_len_loss(Tape& tape, const ModelVars& vars, Var reprs, const PathBatch& batch) {
  Var x = concat_cols({gather_rows(reprs, batch.f1), gather_rows(reprs, batch.f2)});
  Var hidden = elu(linear(x, vars.at("head.pathlen.weight1"), vars.at("head.pathlen.bias1")));
  Var pred = linear(hidden, vars.at("head.pathlen.weight2"), vars.at("head.pathlen.bias2"));
  Tensor target = Tensor::matrix(static_cast<int>(batch.hops.size()), 1, std::vector<double>(batch.hops));
  return mse(pred, tape.constant(std::move(target)));
}

Var binary_frame_loss(Tape& tape, const ModelVars& vars, Var reprs, const BinFrameBatch& batch) {
  Var x = concat_cols({gather_rows(reprs, batch.frame), tape.constant(batch.lu_features),
                       gather_rows(vars.at("pos.table"), batch.pos)});
  Var logits = linear(x, vars.at("head.binframe.weight"), vars.at("head.binframe.bias"));
  return cross_entropy(logits, batch.label);
}

Var label_recon_loss(Tape& tape, const ModelVars& vars, Var reprs, const ReconBatch& batch) {
  Var lu = tape.constant(batch.lu_features);
  Var p = gather_rows(vars.at("pos.table"), batch.pos);
  Var x = concat_cols({gather_rows(reprs, batch.input_frame), lu, lu, p, p});
  Var logits = linear(x, vars.at("head.recon.weight"), vars.at("head.recon.bias"));
  return cross_entropy(logits, batch.gold);
}

Var combined_loss(Tape& tape, const ModelVars& vars,
                  const std::vector<std::pair<std::string, Var>>& task_losses) {
  (void)tape;
  if (task_losses.empty()) raise(ErrorCode::invalid_argument, "combined_loss: no task losses");
  bool has_fsp = false;
  std::vector<Var> terms;
  for (const auto& [task, loss] : task_losses) {
    if (!is_task_name(task)) raise(ErrorCode::invalid_argument, "unknown task '" + task + "'");
    if (task == "fsp") has_fsp = true;
    if (!loss.value().all_finite() || loss.value().size() != 1)
      raise(ErrorCode::training, "non-finite or non-scalar loss for task '" + task + "'");
    Var s = vars.at("uncert." + task);
    terms.push_back(add(mul(exp(scale(s, -1.0)), loss), s));
  }
  if (!has_fsp) raise(ErrorCode::invalid_argument, "combined_loss: fsp loss must be present");
  return add_n(terms);
}

}  // namespace fsp
