#include "fsp/graph.hpp"

#include <algorithm>
#include <deque>

#include "fsp/error.hpp"
#include "fsp/io_util.hpp"

namespace fsp {

namespace {

long long edge_key(FrameId src, FrameId dst) { return static_cast<long long>(src) * 2000003LL + dst; }

std::string lu_key(const std::string& lemma, const std::string& pos) { return lemma + "\t" + pos; }

const std::vector<FrameId> kNoFrames;

}  // namespace

std::string normalize_lemma(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

const std::vector<std::string>& pos_vocabulary() {
  static const std::vector<std::string> vocab = {"n", "v", "a", "adv", "prep", "other"};
  return vocab;
}

std::string normalize_pos(const std::string& s) {
  std::string low = normalize_lemma(s);
  for (const std::string& tag : pos_vocabulary())
    if (low == tag) return low;
  return "other";
}

int pos_id(const std::string& normalized_pos) {
  const auto& vocab = pos_vocabulary();
  for (size_t i = 0; i < vocab.size(); ++i)
    if (vocab[i] == normalized_pos) return static_cast<int>(i);
  raise(ErrorCode::lookup, "unknown POS tag '" + normalized_pos + "'");
}

FrameGraph FrameGraph::load(const std::string& frames_file, const std::string& edges_file,
                            const std::string& lu_file) {
  std::vector<std::string> names, definitions;
  std::unordered_map<std::string, FrameId> by_name;
  for_each_tsv_row(frames_file, 1, [&](int lineno, const std::vector<std::string>& f) {
    if (f[0].empty()) raise(ErrorCode::format, frames_file + ":" + std::to_string(lineno) + ": empty frame name");
    if (by_name.count(f[0]))
      raise(ErrorCode::format, frames_file + ":" + std::to_string(lineno) + ": duplicate frame '" + f[0] + "'");
    by_name[f[0]] = static_cast<FrameId>(names.size());
    names.push_back(f[0]);
    definitions.push_back(f.size() > 1 ? f[1] : "");
  });
  auto resolve = [&](const std::string& file, int lineno, const std::string& name) -> FrameId {
    auto it = by_name.find(name);
    if (it == by_name.end())
      raise(ErrorCode::format, file + ":" + std::to_string(lineno) + ": unknown frame '" + name + "'");
    return it->second;
  };

  std::vector<FrameEdge> edges;
  for_each_tsv_row(edges_file, 3, [&](int lineno, const std::vector<std::string>& f) {
    edges.push_back(FrameEdge{resolve(edges_file, lineno, f[0]), resolve(edges_file, lineno, f[2]), f[1]});
  });

  std::vector<LexiconEntry> lexicon;
  for_each_tsv_row(lu_file, 3, [&](int lineno, const std::vector<std::string>& f) {
    lexicon.push_back(LexiconEntry{normalize_lemma(f[0]), normalize_pos(f[1]), resolve(lu_file, lineno, f[2])});
  });

  return build(std::move(names), std::move(definitions), std::move(edges), std::move(lexicon));
}

FrameGraph FrameGraph::build(std::vector<std::string> frame_names, std::vector<std::string> definitions,
                             std::vector<FrameEdge> edges, std::vector<LexiconEntry> lexicon) {
  FrameGraph g;
  g.names_ = std::move(frame_names);
  if (definitions.empty()) definitions.resize(g.names_.size());
  if (definitions.size() != g.names_.size())
    raise(ErrorCode::invalid_argument, "definitions do not match frame names");
  g.definitions_ = std::move(definitions);
  for (size_t i = 0; i < g.names_.size(); ++i) {
    if (g.by_name_.count(g.names_[i]))
      raise(ErrorCode::invalid_argument, "duplicate frame '" + g.names_[i] + "'");
    g.by_name_[g.names_[i]] = static_cast<FrameId>(i);
  }
  int n = g.frame_count();
  for (const FrameEdge& e : edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
      raise(ErrorCode::invalid_argument, "edge endpoint out of range");
    if (!g.edge_keys_.insert(edge_key(e.src, e.dst)).second) {
      ++g.duplicate_edges_;
      continue;
    }
    g.edges_.push_back(e);
  }
  for (const LexiconEntry& lu : lexicon) {
    if (lu.frame < 0 || lu.frame >= n) raise(ErrorCode::invalid_argument, "lexicon frame out of range");
    LexiconEntry norm{normalize_lemma(lu.lemma), normalize_pos(lu.pos), lu.frame};
    auto& frames = g.lu_index_[lu_key(norm.lemma, norm.pos)];
    if (std::find(frames.begin(), frames.end(), norm.frame) == frames.end()) {
      frames.push_back(norm.frame);
      g.lexicon_.push_back(std::move(norm));
    }
  }
  g.finalize();
  return g;
}

void FrameGraph::finalize() {
  int n = frame_count();
  std::vector<std::vector<int>> in_lists(n);
  undirected_.assign(n, {});
  directed_out_.assign(n, {});
  for (int i = 0; i < n; ++i) in_lists[i].push_back(i);  // self-loop first
  for (const FrameEdge& e : edges_) {
    if (e.src != e.dst) in_lists[e.dst].push_back(e.src);
    directed_out_[e.src].push_back(e.dst);
    undirected_[e.src].push_back(e.dst);
    undirected_[e.dst].push_back(e.src);
  }
  for (int i = 0; i < n; ++i) {
    auto dedup = [](std::vector<int>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(undirected_[i]);
    undirected_[i].erase(std::remove(undirected_[i].begin(), undirected_[i].end(), i), undirected_[i].end());
    dedup(directed_out_[i]);
    directed_out_[i].erase(std::remove(directed_out_[i].begin(), directed_out_[i].end(), i),
                           directed_out_[i].end());
  }
  adjacency_.offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) adjacency_.offsets[i + 1] = adjacency_.offsets[i] + static_cast<int>(in_lists[i].size());
  adjacency_.targets.clear();
  adjacency_.targets.reserve(adjacency_.offsets[n]);
  for (int i = 0; i < n; ++i)
    adjacency_.targets.insert(adjacency_.targets.end(), in_lists[i].begin(), in_lists[i].end());
}

const std::string& FrameGraph::name(FrameId id) const {
  if (id < 0 || id >= frame_count()) raise(ErrorCode::lookup, "frame id " + std::to_string(id) + " out of range");
  return names_[id];
}

const std::string& FrameGraph::definition(FrameId id) const {
  if (id < 0 || id >= frame_count()) raise(ErrorCode::lookup, "frame id " + std::to_string(id) + " out of range");
  return definitions_[id];
}

std::optional<FrameId> FrameGraph::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

FrameId FrameGraph::require(const std::string& name) const {
  auto id = find(name);
  if (!id) raise(ErrorCode::lookup, "unknown frame '" + name + "'");
  return *id;
}

bool FrameGraph::has_edge(FrameId src, FrameId dst) const { return edge_keys_.count(edge_key(src, dst)) != 0; }

const std::vector<FrameId>& FrameGraph::frames_of(const std::string& lemma, const std::string& pos) const {
  auto it = lu_index_.find(lu_key(normalize_lemma(lemma), normalize_pos(pos)));
  if (it == lu_index_.end()) return kNoFrames;
  return it->second;
}

bool FrameGraph::evokes(const std::string& lemma, const std::string& pos, FrameId frame) const {
  const auto& fs = frames_of(lemma, pos);
  return std::find(fs.begin(), fs.end(), frame) != fs.end();
}

std::optional<int> FrameGraph::shortest_path_length(FrameId a, FrameId b, bool directed) const {
  std::vector<FrameId> path = shortest_path(a, b, directed);
  if (path.empty()) return std::nullopt;
  return static_cast<int>(path.size()) - 1;
}

std::vector<FrameId> FrameGraph::shortest_path(FrameId a, FrameId b, bool directed) const {
  int n = frame_count();
  if (a < 0 || a >= n || b < 0 || b >= n) raise(ErrorCode::lookup, "frame id out of range in path query");
  if (a == b) return {a};
  const std::vector<std::vector<int>>& nbrs = directed ? directed_out_ : undirected_;
  std::vector<int> parent(n, -2);
  parent[a] = -1;
  std::deque<int> queue{a};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (int nxt : nbrs[cur]) {
      if (parent[nxt] != -2) continue;
      parent[nxt] = cur;
      if (nxt == b) {
        std::vector<FrameId> path;
        for (int node = b; node != -1; node = parent[node]) path.push_back(node);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(nxt);
    }
  }
  return {};
}

std::vector<int> FrameGraph::bfs_distances(FrameId from, bool directed, int max_hops) const {
  int n = frame_count();
  if (from < 0 || from >= n) raise(ErrorCode::lookup, "frame id out of range in bfs_distances");
  const std::vector<std::vector<int>>& nbrs = directed ? directed_out_ : undirected_;
  std::vector<int> dist(n, -1);
  dist[from] = 0;
  std::deque<int> queue{from};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (max_hops >= 0 && dist[cur] >= max_hops) continue;
    for (int nxt : nbrs[cur]) {
      if (dist[nxt] != -1) continue;
      dist[nxt] = dist[cur] + 1;
      queue.push_back(nxt);
    }
  }
  return dist;
}

FrameGraph::PathHistogram FrameGraph::path_length_histogram(
    const std::vector<std::pair<FrameId, FrameId>>& pairs, bool directed) const {
  PathHistogram h;
  for (const auto& [a, b] : pairs) {
    ++h.total;
    auto hops = shortest_path_length(a, b, directed);
    if (hops)
      ++h.counts[*hops];
    else
      ++h.disconnected;
  }
  return h;
}

const char* lang_pair_name(LangPair p) { return p == LangPair::en_pt ? "en-pt" : "en-de"; }

LangPair parse_lang_pair(const std::string& s) {
  if (s == "en-pt") return LangPair::en_pt;
  if (s == "en-de") return LangPair::en_de;
  raise(ErrorCode::format, "unknown language pair '" + s + "' (expected en-pt or en-de)");
}

std::string target_language(LangPair p) { return p == LangPair::en_pt ? "pt" : "de"; }

std::vector<AnnotationPair> load_pairs(const std::string& pairs_file, const FrameGraph& graph) {
  std::vector<AnnotationPair> pairs;
  for_each_tsv_row(pairs_file, 7, [&](int lineno, const std::vector<std::string>& f) {
    AnnotationPair p;
    try {
      p.lang = parse_lang_pair(f[0]);
      p.src_frame = graph.require(f[1]);
      p.tgt_frame = graph.require(f[6]);
    } catch (const Error& e) {
      raise(ErrorCode::format, pairs_file + ":" + std::to_string(lineno) + ": " + e.what());
    }
    p.src_lemma = normalize_lemma(f[2]);
    p.src_pos = normalize_pos(f[3]);
    p.tgt_lemma = normalize_lemma(f[4]);
    p.tgt_pos = normalize_pos(f[5]);
    pairs.push_back(std::move(p));
  });
  return pairs;
}

PairStats pair_stats(const std::vector<AnnotationPair>& pairs) {
  PairStats s;
  std::map<std::string, int> shifted;
  for (const AnnotationPair& p : pairs) {
    ++s.total;
    std::string lang = lang_pair_name(p.lang);
    ++s.per_language[lang];
    if (p.shifted()) ++shifted[lang];
  }
  int shifted_all = 0;
  for (auto& [lang, n] : s.per_language) {
    s.shift_rate[lang] = n > 0 ? static_cast<double>(shifted[lang]) / n : 0.0;
    shifted_all += shifted[lang];
  }
  s.shift_rate["all"] = s.total > 0 ? static_cast<double>(shifted_all) / s.total : 0.0;
  return s;
}

}  // namespace fsp
