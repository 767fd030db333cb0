#ifndef FSP_TEST_FIXTURES_HPP
#define FSP_TEST_FIXTURES_HPP

#include <string>
#include <vector>

#include "fsp/dataset.hpp"
#include "fsp/rng.hpp"

namespace fsp::test {

// Deterministic synthetic dataset. Unless random_labels is set, the gold
// target frame is recoverable from the target LU (each gold frame has its
// own target lemmas), so models can fit the data.
struct ToySpec {
  int frames = 30;
  int edges = 60;
  int lus_per_frame = 2;
  int pairs = 100;
  int init_dim = 20;
  int lu_dim = 16;
  double shift_prob = 0.5;
  double en_de_fraction = 0.3;  // rest is en-pt
  bool random_labels = false;   // gold drawn uniformly, target LU carries no signal
  bool neighbor_shifts = false;     // shifted gold is a graph neighbor of the source
  bool opaque_tgt_lemma = false;    // target lemma is unique per pair (no lexical signal)
  uint64_t seed = 1234;
};

Dataset make_toy_dataset(const ToySpec& spec);

// Connected random graph (spanning tree + extra edges), no pairs/LUs needed.
FrameGraph make_random_graph(int nodes, int extra_edges, uint64_t seed);

// A fixture shaped like the real-world analysis target: 104 diverging pairs
// over a graph with one unreachable two-frame island, so exactly 2 of the
// diverging pairs have no connecting path.
struct BfnShapedFixture {
  Dataset dataset;
  int diverging_pairs = 0;
  int expected_disconnected = 0;
};
BfnShapedFixture make_bfn_shaped_fixture(uint64_t seed);

// Writes the dataset as the five TSV files under dir (created if needed).
DatasetPaths write_dataset_files(const Dataset& ds, const std::string& dir);

// Fresh unique directory under the system temp dir; removed by the caller
// or left for inspection (the OS temp cleaner owns it).
std::string make_temp_dir(const std::string& tag);

}  // namespace fsp::test

#endif
