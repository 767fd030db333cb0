#ifndef FSP_EMBEDDINGS_HPP
#define FSP_EMBEDDINGS_HPP

#include <atomic>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsp/graph.hpp"
#include "fsp/rng.hpp"
#include "fsp/tensor.hpp"

namespace fsp {

// One dimension-homogeneous section of a vector file. Lookup misses fall
// back to zeros and bump the miss counter (a miss is not an error).
class VectorStore {
 public:
  VectorStore() = default;
  explicit VectorStore(int dim) : dim_(dim) {}
  VectorStore(const VectorStore& o) : dim_(o.dim_), entries_(o.entries_), misses_(o.misses_.load()) {}
  VectorStore(VectorStore&& o) noexcept
      : dim_(o.dim_), entries_(std::move(o.entries_)), misses_(o.misses_.load()) {}
  VectorStore& operator=(const VectorStore& o) {
    dim_ = o.dim_;
    entries_ = o.entries_;
    misses_.store(o.misses_.load());
    return *this;
  }
  VectorStore& operator=(VectorStore&& o) noexcept {
    dim_ = o.dim_;
    entries_ = std::move(o.entries_);
    misses_.store(o.misses_.load());
    return *this;
  }

  int dim() const { return dim_; }
  size_t entry_count() const { return entries_.size(); }
  uint64_t miss_count() const { return misses_.load(); }

  void insert(const std::string& key, std::vector<double> values);
  bool contains(const std::string& key) const { return entries_.count(key) != 0; }
  const std::unordered_map<std::string, std::vector<double>>& entries() const { return entries_; }
  // Stored vector, or zeros on a miss (counted).
  std::vector<double> get_or_zero(const std::string& key) const;

  // LU lookup with key normalization: lu keys are "<lang>:<lemma>:<pos>"
  // with the lemma lowercased and the POS tag from the closed set.
  std::vector<double> lookup_lu(const std::string& lemma, const std::string& pos,
                                const std::string& lang) const;
  static std::string lu_store_key(const std::string& lemma, const std::string& pos, const std::string& lang);

 private:
  int dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> entries_;
  mutable std::atomic<uint64_t> misses_{0};
};

// Both sections of a vector file: frame rows ("frame:<name>") and LU rows
// ("lu:<lang>:<lemma>:<pos>"). The two sections may have different widths.
struct VectorBundle {
  VectorStore frames;
  VectorStore lus;
};

// Parses a TSV vector file `key<TAB>v1 v2 ... vD`. When an expected
// dimension is nonzero, rows of any other width are format errors; otherwise
// the first row of each section fixes the width.
VectorBundle load_vectors(const std::string& path, int expected_frame_dim = 0, int expected_lu_dim = 0);

void write_vector_file(const std::string& path, const std::vector<std::pair<std::string, std::vector<double>>>& rows);

struct NodeInitMatrix {
  Tensor matrix;                    // frame_count x dim
  std::vector<FrameId> missing;     // frames with no vector row (zero-filled)
  int dim() const { return matrix.cols(); }
};

// One row per frame from the "frame:" section; absent frames get zero rows
// and are flagged.
NodeInitMatrix build_node_init(const FrameGraph& graph, const VectorStore& frame_vectors);

// Trainable POS tag embedding table, |POS| x dim, entries from N(0, 0.02^2).
Tensor init_pos_table(int pos_vocab_size, int dim, Rng& rng);

}  // namespace fsp

#endif
