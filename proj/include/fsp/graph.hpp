#ifndef FSP_GRAPH_HPP
#define FSP_GRAPH_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace fsp {

using FrameId = int;

// CSR neighbor lists. Segment i holds the in-neighbors of node i (self
// always included). Built once from a FrameGraph and rebuilt per training
// step when edges are dropped.
struct NeighborLists {
  std::vector<int> offsets;  // size node_count + 1
  std::vector<int> targets;

  int node_count() const { return static_cast<int>(offsets.size()) - 1; }
  const int* begin_of(int node) const { return targets.data() + offsets[node]; }
  const int* end_of(int node) const { return targets.data() + offsets[node + 1]; }
  int degree(int node) const { return offsets[node + 1] - offsets[node]; }
};

struct FrameEdge {
  FrameId src;
  FrameId dst;
  std::string relation;  // metadata only; the model treats edges as untyped
};

struct LexiconEntry {
  std::string lemma;  // lowercased
  std::string pos;    // closed tag set
  FrameId frame;
};

// Frames, directed relation edges, the LU lexicon and the in-neighbor
// adjacency (self-loops included). Immutable after load.
class FrameGraph {
 public:
  static FrameGraph load(const std::string& frames_file, const std::string& edges_file,
                         const std::string& lu_file);
  static FrameGraph build(std::vector<std::string> frame_names, std::vector<std::string> definitions,
                          std::vector<FrameEdge> edges, std::vector<LexiconEntry> lexicon);

  int frame_count() const { return static_cast<int>(names_.size()); }
  const std::string& name(FrameId id) const;
  const std::string& definition(FrameId id) const;
  std::optional<FrameId> find(const std::string& name) const;
  FrameId require(const std::string& name) const;  // lookup error if unknown

  const std::vector<FrameEdge>& edges() const { return edges_; }
  int duplicate_edge_count() const { return duplicate_edges_; }
  bool has_edge(FrameId src, FrameId dst) const;

  const NeighborLists& adjacency() const { return adjacency_; }  // in-neighbors + self
  const std::vector<LexiconEntry>& lexicon() const { return lexicon_; }
  const std::vector<FrameId>& frames_of(const std::string& lemma, const std::string& pos) const;
  bool evokes(const std::string& lemma, const std::string& pos, FrameId frame) const;

  // BFS hop count between two frames, self-loops ignored. Undirected view by
  // default; returns nothing when disconnected.
  std::optional<int> shortest_path_length(FrameId a, FrameId b, bool directed = false) const;
  // One shortest path (inclusive of endpoints), or empty when disconnected.
  std::vector<FrameId> shortest_path(FrameId a, FrameId b, bool directed = false) const;

  // BFS hop counts from one frame (self = 0); -1 where unreachable. A
  // non-negative max_hops caps the search depth.
  std::vector<int> bfs_distances(FrameId from, bool directed = false, int max_hops = -1) const;

  struct PathHistogram {
    std::map<int, int> counts;  // hops -> number of pairs
    int disconnected = 0;
    int total = 0;
  };
  PathHistogram path_length_histogram(const std::vector<std::pair<FrameId, FrameId>>& pairs,
                                      bool directed = false) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> definitions_;
  std::unordered_map<std::string, FrameId> by_name_;
  std::vector<FrameEdge> edges_;
  std::unordered_set<long long> edge_keys_;  // untyped (src, dst)
  int duplicate_edges_ = 0;
  NeighborLists adjacency_;
  std::vector<LexiconEntry> lexicon_;
  std::unordered_map<std::string, std::vector<FrameId>> lu_index_;  // "lemma\tpos" -> frames
  std::vector<std::vector<int>> undirected_;  // neighbor sets without self, deduped
  std::vector<std::vector<int>> directed_out_;

  void finalize();
};

enum class LangPair { en_pt, en_de };
const char* lang_pair_name(LangPair p);        // "en-pt" / "en-de"
LangPair parse_lang_pair(const std::string&);  // format error otherwise
std::string target_language(LangPair p);       // "pt" / "de"

struct AnnotationPair {
  FrameId src_frame;
  std::string src_lemma, src_pos;
  std::string tgt_lemma, tgt_pos;
  FrameId tgt_frame;  // gold
  LangPair lang;
  bool shifted() const { return src_frame != tgt_frame; }
};

struct PairStats {
  int total = 0;
  std::map<std::string, int> per_language;
  std::map<std::string, double> shift_rate;  // per language, plus "all"
};

std::vector<AnnotationPair> load_pairs(const std::string& pairs_file, const FrameGraph& graph);
PairStats pair_stats(const std::vector<AnnotationPair>& pairs);

// Lowercase ASCII letters in place; non-ASCII bytes pass through (inputs are
// expected to be NFC-normalized UTF-8).
std::string normalize_lemma(const std::string& s);
// Closed POS tag set {n, v, a, adv, prep, other}; anything else maps to "other".
std::string normalize_pos(const std::string& s);
const std::vector<std::string>& pos_vocabulary();
int pos_id(const std::string& normalized_pos);

}  // namespace fsp

#endif
