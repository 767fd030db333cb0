#include "fsp/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "fsp/error.hpp"
#include "fsp/io_util.hpp"

namespace fsp {

void VectorStore::insert(const std::string& key, std::vector<double> values) {
  if (dim_ == 0) dim_ = static_cast<int>(values.size());
  if (static_cast<int>(values.size()) != dim_)
    raise(ErrorCode::dimension, "vector for '" + key + "' has " + std::to_string(values.size()) +
                                    " values, store dimension is " + std::to_string(dim_));
  entries_[key] = std::move(values);
}

std::vector<double> VectorStore::get_or_zero(const std::string& key) const {
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  misses_.fetch_add(1);
  return std::vector<double>(static_cast<size_t>(dim_), 0.0);
}

std::string VectorStore::lu_store_key(const std::string& lemma, const std::string& pos,
                                      const std::string& lang) {
  return normalize_lemma(lang) + ":" + normalize_lemma(lemma) + ":" + normalize_pos(pos);
}

std::vector<double> VectorStore::lookup_lu(const std::string& lemma, const std::string& pos,
                                           const std::string& lang) const {
  return get_or_zero(lu_store_key(lemma, pos, lang));
}

namespace {

std::vector<double> parse_floats(const std::string& path, int lineno, const std::string& field) {
  std::vector<double> out;
  const char* p = field.data();
  const char* end = p + field.size();
  while (p < end) {
    while (p < end && *p == ' ') ++p;
    if (p >= end) break;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc())
      raise(ErrorCode::format, path + ":" + std::to_string(lineno) + ": bad float near '" +
                                   std::string(p, std::min<size_t>(8, end - p)) + "'");
    out.push_back(v);
    p = next;
  }
  return out;
}

}  // namespace

VectorBundle load_vectors(const std::string& path, int expected_frame_dim, int expected_lu_dim) {
  VectorBundle bundle;
  bundle.frames = VectorStore(expected_frame_dim);
  bundle.lus = VectorStore(expected_lu_dim);
  for_each_tsv_row(path, 2, [&](int lineno, const std::vector<std::string>& f) {
    const std::string& key = f[0];
    std::vector<double> values = parse_floats(path, lineno, f[1]);
    if (values.empty()) raise(ErrorCode::format, path + ":" + std::to_string(lineno) + ": empty vector");
    try {
      if (key.rfind("frame:", 0) == 0) {
        bundle.frames.insert(key.substr(6), std::move(values));
      } else if (key.rfind("lu:", 0) == 0) {
        std::vector<std::string> parts = split(key.substr(3), ':');
        if (parts.size() != 3)
          raise(ErrorCode::format, "lu key must be lu:<lang>:<lemma>:<pos>, got '" + key + "'");
        bundle.lus.insert(VectorStore::lu_store_key(parts[1], parts[2], parts[0]), std::move(values));
      } else {
        raise(ErrorCode::format, "key must start with 'frame:' or 'lu:', got '" + key + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::dimension)
        raise(ErrorCode::format, path + ":" + std::to_string(lineno) + ": " + e.what());
      raise(e.code(), path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  });
  return bundle;
}

void write_vector_file(const std::string& path,
                       const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [key, values] : rows) {
    os << key << '\t';
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) os << ' ';
      os << values[i];
    }
    os << '\n';
  }
  atomic_write_file(path, os.str());
}

NodeInitMatrix build_node_init(const FrameGraph& graph, const VectorStore& frame_vectors) {
  if (frame_vectors.dim() == 0) raise(ErrorCode::dimension, "frame vector store is empty");
  NodeInitMatrix init;
  init.matrix = Tensor::matrix(graph.frame_count(), frame_vectors.dim());
  for (FrameId f = 0; f < graph.frame_count(); ++f) {
    if (!frame_vectors.contains(graph.name(f))) {
      init.missing.push_back(f);
      continue;  // row stays zero
    }
    std::vector<double> row = frame_vectors.get_or_zero(graph.name(f));
    for (int j = 0; j < init.dim(); ++j) init.matrix.at(f, j) = row[j];
  }
  return init;
}

Tensor init_pos_table(int pos_vocab_size, int dim, Rng& rng) {
  if (pos_vocab_size <= 0) raise(ErrorCode::invalid_argument, "POS vocabulary must be non-empty");
  Tensor table = Tensor::matrix(pos_vocab_size, dim);
  for (size_t i = 0; i < table.size(); ++i) table[i] = rng.normal(0.0, 0.02);
  return table;
}

}  // namespace fsp
