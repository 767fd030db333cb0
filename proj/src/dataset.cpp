#include "fsp/dataset.hpp"

#include "fsp/error.hpp"
#include "fsp/io_util.hpp"

namespace fsp {

namespace {

void precompute_pair_features(Dataset& ds) {
  int lu_dim = ds.lu_vectors.dim();
  if (lu_dim <= 0) raise(ErrorCode::dimension, "LU vector store has no entries");
  int n = static_cast<int>(ds.pairs.size());
  ds.pair_lu_features = Tensor::matrix(n, 2 * lu_dim);
  ds.pair_pos_src.resize(n);
  ds.pair_pos_tgt.resize(n);
  for (int i = 0; i < n; ++i) {
    const AnnotationPair& p = ds.pairs[i];
    std::vector<double> w_src = ds.lu_vectors.lookup_lu(p.src_lemma, p.src_pos, "en");
    std::vector<double> w_tgt = ds.lu_vectors.lookup_lu(p.tgt_lemma, p.tgt_pos, target_language(p.lang));
    for (int j = 0; j < lu_dim; ++j) {
      ds.pair_lu_features.at(i, j) = w_src[j];
      ds.pair_lu_features.at(i, lu_dim + j) = w_tgt[j];
    }
    ds.pair_pos_src[i] = pos_id(p.src_pos);
    ds.pair_pos_tgt[i] = pos_id(p.tgt_pos);
  }
}

}  // namespace

Dataset load_dataset(const DatasetPaths& paths) {
  Dataset ds;
  ds.graph = FrameGraph::load(paths.frames, paths.edges, paths.lus);
  VectorBundle vectors = load_vectors(paths.vectors);
  ds.node_init = build_node_init(ds.graph, vectors.frames);
  ds.lu_vectors = std::move(vectors.lus);
  ds.pairs = load_pairs(paths.pairs, ds.graph);
  precompute_pair_features(ds);
  ds.digests["frames"] = file_digest_hex(paths.frames);
  ds.digests["edges"] = file_digest_hex(paths.edges);
  ds.digests["lus"] = file_digest_hex(paths.lus);
  ds.digests["vectors"] = file_digest_hex(paths.vectors);
  ds.digests["pairs"] = file_digest_hex(paths.pairs);
  return ds;
}

Dataset make_dataset(FrameGraph graph, NodeInitMatrix node_init, VectorStore lu_vectors,
                     std::vector<AnnotationPair> pairs) {
  Dataset ds;
  ds.graph = std::move(graph);
  ds.node_init = std::move(node_init);
  ds.lu_vectors = std::move(lu_vectors);
  ds.pairs = std::move(pairs);
  precompute_pair_features(ds);
  return ds;
}

}  // namespace fsp
