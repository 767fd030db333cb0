#include "helpers/fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "fsp/error.hpp"
#include "fsp/io_util.hpp"

namespace fsp::test {

namespace {

std::vector<double> random_vec(int dim, Rng& rng) {
  std::vector<double> v(static_cast<size_t>(dim));
  for (double& x : v) x = rng.normal(0.0, 1.0);
  return v;
}

const char* kPosCycle[3] = {"n", "v", "a"};

}  // namespace

FrameGraph make_random_graph(int nodes, int extra_edges, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> names;
  for (int i = 0; i < nodes; ++i) names.push_back("f" + std::to_string(i));
  std::vector<FrameEdge> edges;
  std::set<std::pair<int, int>> used;
  for (int i = 1; i < nodes; ++i) {  // spanning tree keeps the graph connected
    int parent = rng.uniform_int(i);
    edges.push_back(FrameEdge{parent, i, "rel"});
    used.emplace(parent, i);
  }
  int added = 0, tries = 0;
  while (added < extra_edges && tries < 100 * (extra_edges + 1)) {
    ++tries;
    int a = rng.uniform_int(nodes), b = rng.uniform_int(nodes);
    if (a == b || used.count({a, b})) continue;
    used.emplace(a, b);
    edges.push_back(FrameEdge{a, b, "rel"});
    ++added;
  }
  return FrameGraph::build(std::move(names), {}, std::move(edges), {});
}

Dataset make_toy_dataset(const ToySpec& spec) {
  Rng rng(spec.seed);
  std::vector<std::string> names;
  for (int i = 0; i < spec.frames; ++i) names.push_back("f" + std::to_string(i));

  Rng edge_rng = rng.child(1);
  std::vector<FrameEdge> edges;
  std::set<std::pair<int, int>> used;
  for (int i = 1; i < spec.frames; ++i) {
    int parent = edge_rng.uniform_int(i);
    edges.push_back(FrameEdge{parent, i, "inherits"});
    used.emplace(parent, i);
  }
  // cap at the number of distinct ordered non-self pairs
  long long possible = static_cast<long long>(spec.frames) * (spec.frames - 1);
  int target = static_cast<int>(std::min<long long>(spec.edges, possible));
  while (static_cast<int>(edges.size()) < target) {
    int a = edge_rng.uniform_int(spec.frames), b = edge_rng.uniform_int(spec.frames);
    if (a == b || used.count({a, b})) continue;
    used.emplace(a, b);
    edges.push_back(FrameEdge{a, b, "uses"});
  }

  std::vector<LexiconEntry> lexicon;
  for (int f = 0; f < spec.frames; ++f)
    for (int k = 0; k < spec.lus_per_frame; ++k)
      lexicon.push_back(LexiconEntry{"lemma" + std::to_string(f) + "_" + std::to_string(k), kPosCycle[k % 3], f});

  FrameGraph graph = FrameGraph::build(std::move(names), {}, std::move(edges), std::move(lexicon));

  Rng vec_rng = rng.child(2);
  VectorStore frame_vectors(spec.init_dim);
  for (int f = 0; f < spec.frames; ++f)
    frame_vectors.insert(graph.name(f), random_vec(spec.init_dim, vec_rng));
  VectorStore lu_vectors(spec.lu_dim);
  for (const LexiconEntry& lu : graph.lexicon())
    lu_vectors.insert(VectorStore::lu_store_key(lu.lemma, lu.pos, "en"), random_vec(spec.lu_dim, vec_rng));

  Rng pair_rng = rng.child(3);
  std::vector<AnnotationPair> pairs;
  for (int p = 0; p < spec.pairs; ++p) {
    AnnotationPair ap;
    ap.lang = pair_rng.uniform() < spec.en_de_fraction ? LangPair::en_de : LangPair::en_pt;
    ap.src_frame = pair_rng.uniform_int(spec.frames);
    const LexiconEntry& src_lu =
        graph.lexicon()[static_cast<size_t>(ap.src_frame * spec.lus_per_frame +
                                            pair_rng.uniform_int(spec.lus_per_frame))];
    ap.src_lemma = src_lu.lemma;
    ap.src_pos = src_lu.pos;
    if (spec.random_labels) {
      ap.tgt_frame = pair_rng.uniform_int(spec.frames);
      ap.tgt_lemma = "r" + std::to_string(p);  // unique, carries no signal
    } else {
      bool shift = pair_rng.uniform() < spec.shift_prob && spec.frames > 1;
      if (shift && spec.neighbor_shifts) {
        std::vector<int> dist = graph.bfs_distances(ap.src_frame, false, 1);
        std::vector<int> neighbors;
        for (int v = 0; v < spec.frames; ++v)
          if (dist[v] == 1) neighbors.push_back(v);
        ap.tgt_frame = neighbors.empty()
                           ? ap.src_frame
                           : neighbors[static_cast<size_t>(pair_rng.uniform_int(static_cast<int>(neighbors.size())))];
      } else if (shift) {
        do {
          ap.tgt_frame = pair_rng.uniform_int(spec.frames);
        } while (ap.tgt_frame == ap.src_frame);
      } else {
        ap.tgt_frame = ap.src_frame;
      }
      // Target lemma is a deterministic function of the gold frame, so the
      // mapping is learnable from the target LU vector; the opaque variant
      // removes that signal.
      ap.tgt_lemma = spec.opaque_tgt_lemma
                         ? "q" + std::to_string(p)
                         : "t" + std::to_string(ap.tgt_frame) + "_" + std::to_string(pair_rng.uniform_int(2));
    }
    ap.tgt_pos = kPosCycle[pair_rng.uniform_int(3)];
    std::string lang = target_language(ap.lang);
    std::string key = VectorStore::lu_store_key(ap.tgt_lemma, ap.tgt_pos, lang);
    if (!lu_vectors.contains(key)) lu_vectors.insert(key, random_vec(spec.lu_dim, vec_rng));
    pairs.push_back(std::move(ap));
  }

  NodeInitMatrix init = build_node_init(graph, frame_vectors);
  return make_dataset(std::move(graph), std::move(init), std::move(lu_vectors), std::move(pairs));
}

BfnShapedFixture make_bfn_shaped_fixture(uint64_t seed) {
  // Main component f0..f59 (connected) plus an island {iso0, iso1} that only
  // connects to itself. 102 diverging pairs stay inside the main component;
  // 2 diverging pairs cross to the island and are therefore disconnected.
  Rng rng(seed);
  int main_nodes = 60;
  std::vector<std::string> names;
  for (int i = 0; i < main_nodes; ++i) names.push_back("f" + std::to_string(i));
  names.push_back("iso0");
  names.push_back("iso1");
  int iso0 = main_nodes, iso1 = main_nodes + 1;

  std::vector<FrameEdge> edges;
  std::set<std::pair<int, int>> used;
  for (int i = 1; i < main_nodes; ++i) {
    int parent = rng.uniform_int(i);
    edges.push_back(FrameEdge{parent, i, "rel"});
    used.emplace(parent, i);
  }
  for (int extra = 0; extra < 30;) {
    int a = rng.uniform_int(main_nodes), b = rng.uniform_int(main_nodes);
    if (a == b || used.count({a, b})) continue;
    used.emplace(a, b);
    edges.push_back(FrameEdge{a, b, "rel"});
    ++extra;
  }
  edges.push_back(FrameEdge{iso0, iso1, "rel"});

  std::vector<LexiconEntry> lexicon;
  for (size_t f = 0; f < names.size(); ++f)
    lexicon.push_back(LexiconEntry{"lemma" + std::to_string(f), "n", static_cast<FrameId>(f)});
  FrameGraph graph = FrameGraph::build(std::move(names), {}, std::move(edges), std::move(lexicon));

  int init_dim = 8, lu_dim = 6;
  VectorStore frame_vectors(init_dim);
  for (int f = 0; f < graph.frame_count(); ++f) frame_vectors.insert(graph.name(f), random_vec(init_dim, rng));
  VectorStore lu_vectors(lu_dim);
  for (const LexiconEntry& lu : graph.lexicon())
    lu_vectors.insert(VectorStore::lu_store_key(lu.lemma, lu.pos, "en"), random_vec(lu_dim, rng));

  std::vector<AnnotationPair> pairs;
  auto add_pair = [&](int src, int tgt) {
    AnnotationPair ap;
    ap.lang = pairs.size() % 4 == 0 ? LangPair::en_de : LangPair::en_pt;
    ap.src_frame = src;
    ap.tgt_frame = tgt;
    ap.src_lemma = "lemma" + std::to_string(src);
    ap.src_pos = "n";
    ap.tgt_lemma = "t" + std::to_string(tgt);
    ap.tgt_pos = "n";
    std::string key = VectorStore::lu_store_key(ap.tgt_lemma, ap.tgt_pos, target_language(ap.lang));
    if (!lu_vectors.contains(key)) lu_vectors.insert(key, random_vec(lu_dim, rng));
    pairs.push_back(std::move(ap));
  };
  for (int k = 0; k < 102; ++k) {
    int src = rng.uniform_int(main_nodes);
    int tgt;
    do {
      tgt = rng.uniform_int(main_nodes);
    } while (tgt == src);
    add_pair(src, tgt);
  }
  add_pair(rng.uniform_int(main_nodes), iso0);
  add_pair(rng.uniform_int(main_nodes), iso1);
  for (int k = 0; k < 20; ++k) {  // some non-diverging pairs for realism
    int f = rng.uniform_int(main_nodes);
    add_pair(f, f);
  }

  BfnShapedFixture fixture;
  NodeInitMatrix init = build_node_init(graph, frame_vectors);
  fixture.dataset = make_dataset(std::move(graph), std::move(init), std::move(lu_vectors), std::move(pairs));
  fixture.diverging_pairs = 104;
  fixture.expected_disconnected = 2;
  return fixture;
}

DatasetPaths write_dataset_files(const Dataset& ds, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  DatasetPaths paths;
  paths.frames = (fs::path(dir) / "frames.tsv").string();
  paths.edges = (fs::path(dir) / "edges.tsv").string();
  paths.lus = (fs::path(dir) / "lus.tsv").string();
  paths.vectors = (fs::path(dir) / "vectors.tsv").string();
  paths.pairs = (fs::path(dir) / "pairs.tsv").string();

  std::ostringstream frames;
  for (int f = 0; f < ds.frame_count(); ++f)
    frames << ds.graph.name(f) << '\t' << (ds.graph.definition(f).empty() ? "definition of " + ds.graph.name(f)
                                                                          : ds.graph.definition(f))
           << '\n';
  atomic_write_file(paths.frames, frames.str());

  std::ostringstream edges;
  for (const FrameEdge& e : ds.graph.edges())
    edges << ds.graph.name(e.src) << '\t' << e.relation << '\t' << ds.graph.name(e.dst) << '\n';
  atomic_write_file(paths.edges, edges.str());

  std::ostringstream lus;
  for (const LexiconEntry& lu : ds.graph.lexicon())
    lus << lu.lemma << '\t' << lu.pos << '\t' << ds.graph.name(lu.frame) << '\n';
  atomic_write_file(paths.lus, lus.str());

  std::ostringstream vectors;
  vectors.precision(17);
  for (int f = 0; f < ds.frame_count(); ++f) {
    vectors << "frame:" << ds.graph.name(f) << '\t';
    for (int j = 0; j < ds.init_dim(); ++j) vectors << (j ? " " : "") << ds.node_init.matrix.at(f, j);
    vectors << '\n';
  }
  for (const auto& [key, values] : std::map<std::string, std::vector<double>>(ds.lu_vectors.entries().begin(),
                                                                              ds.lu_vectors.entries().end())) {
    vectors << "lu:" << key << '\t';
    for (size_t j = 0; j < values.size(); ++j) vectors << (j ? " " : "") << values[j];
    vectors << '\n';
  }
  atomic_write_file(paths.vectors, vectors.str());

  std::ostringstream pairs;
  for (const AnnotationPair& p : ds.pairs)
    pairs << lang_pair_name(p.lang) << '\t' << ds.graph.name(p.src_frame) << '\t' << p.src_lemma << '\t'
          << p.src_pos << '\t' << p.tgt_lemma << '\t' << p.tgt_pos << '\t' << ds.graph.name(p.tgt_frame)
          << '\n';
  atomic_write_file(paths.pairs, pairs.str());
  return paths;
}

std::string make_temp_dir(const std::string& tag) {
  namespace fs = std::filesystem;
  static std::atomic<int> counter{0};
  fs::path dir = fs::temp_directory_path() /
                 ("fsp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace fsp::test
