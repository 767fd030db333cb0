#ifndef FSP_DATASET_HPP
#define FSP_DATASET_HPP

#include <string>
#include <vector>

#include "fsp/embeddings.hpp"
#include "fsp/graph.hpp"

namespace fsp {

// Everything one run consumes: the frame graph, ingested vectors, the
// annotation pairs with their precomputed LU features, and input digests
// for reproducibility manifests.
struct Dataset {
  FrameGraph graph;
  NodeInitMatrix node_init;
  VectorStore lu_vectors;
  std::vector<AnnotationPair> pairs;

  // Per-pair LU features, precomputed once: row i = [w_src ; w_tgt].
  Tensor pair_lu_features;  // pairs x 2*lu_dim
  std::vector<int> pair_pos_src, pair_pos_tgt;

  std::map<std::string, std::string> digests;  // input name -> fnv1a64 hex

  int frame_count() const { return graph.frame_count(); }
  int init_dim() const { return node_init.dim(); }
  int lu_dim() const { return lu_vectors.dim(); }
  PairStats stats() const { return pair_stats(pairs); }
};

struct DatasetPaths {
  std::string frames, edges, lus, vectors, pairs;
};

Dataset load_dataset(const DatasetPaths& paths);

// In-memory assembly for tests and synthetic fixtures.
Dataset make_dataset(FrameGraph graph, NodeInitMatrix node_init, VectorStore lu_vectors,
                     std::vector<AnnotationPair> pairs);

}  // namespace fsp

#endif
