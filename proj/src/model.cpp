#include "fsp/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "fsp/error.hpp"
#include "fsp/io_util.hpp"
#include "json.hpp"

namespace fsp {

using nlohmann::json;

const char* repr_kind_name(ReprKind k) {
  switch (k) {
    case ReprKind::gat: return "gat";
    case ReprKind::random_table: return "random";
    case ReprKind::fixed: return "centroid";
  }
  return "gat";
}

ReprKind parse_repr_kind(const std::string& s) {
  if (s == "gat") return ReprKind::gat;
  if (s == "random") return ReprKind::random_table;
  if (s == "centroid") return ReprKind::fixed;
  raise(ErrorCode::config, "unknown representation '" + s + "' (expected gat, random or centroid)");
}

int ModelConfig::frame_dim() const {
  switch (representation) {
    case ReprKind::gat: return layer2.output_dim();
    case ReprKind::random_table: return table_dim;
    case ReprKind::fixed: return table_dim;
  }
  return layer2.output_dim();
}

void ModelConfig::validate() const {
  if (frame_count <= 0) raise(ErrorCode::config, "model: frame_count must be positive");
  if (lu_dim <= 0) raise(ErrorCode::config, "model: lu_dim must be positive");
  if (pos_dim <= 0) raise(ErrorCode::config, "model: pos_dim must be positive");
  if (!(drop_edge >= 0.0 && drop_edge < 1.0)) raise(ErrorCode::config, "model: drop_edge must be in [0, 1)");
  if (!(perturb_p >= 0.0 && perturb_p <= 1.0)) raise(ErrorCode::config, "model: perturb_p must be in [0, 1]");
  if (representation == ReprKind::gat) {
    if (init_dim <= 0) raise(ErrorCode::config, "model: init_dim must be positive");
    if (layer1.input_dim != init_dim) raise(ErrorCode::config, "model: layer1 input dim must equal init_dim");
    if (layer2.input_dim != layer1.output_dim())
      raise(ErrorCode::config, "model: layer2 input dim must equal layer1 output dim");
  }
  if (!tasks.count("fsp")) raise(ErrorCode::config, "model: fsp task is mandatory");
  for (const std::string& t : tasks)
    if (!is_task_name(t)) raise(ErrorCode::config, "model: unknown task '" + t + "'");
}

ModelConfig paper_model_config(int init_dim, int lu_dim, int frame_count) {
  ModelConfig cfg;
  cfg.init_dim = init_dim;
  cfg.lu_dim = lu_dim;
  cfg.frame_count = frame_count;
  cfg.layer1.input_dim = init_dim;
  cfg.layer2.input_dim = cfg.layer1.output_dim();
  return cfg;
}

namespace {

Tensor glorot(int rows, int cols, Rng& rng) {
  double limit = std::sqrt(6.0 / (rows + cols));
  Tensor t = Tensor::matrix(rows, cols);
  for (size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-limit, limit);
  return t;
}

uint64_t name_stream(const std::string& name) { return fnv1a64(name.data(), name.size()); }

}  // namespace

Model::Model(ModelConfig cfg, uint64_t seed) : cfg_(std::move(cfg)) {
  cfg_.validate();
  register_params(seed);
}

void Model::register_params(uint64_t seed) {
  Rng root(seed);
  auto group_rng = [&](const std::string& group) { return root.child(name_stream(group)); };

  if (cfg_.representation == ReprKind::gat) {
    Rng r1 = group_rng("gat.l1");
    register_gat_layer_params(params_, "gat.l1", cfg_.layer1, r1);
    Rng r2 = group_rng("gat.l2");
    register_gat_layer_params(params_, "gat.l2", cfg_.layer2, r2);
  } else if (cfg_.representation == ReprKind::random_table) {
    Rng rt = group_rng("repr.table");
    params_.add("repr.table", glorot(cfg_.frame_count, cfg_.table_dim, rt));
  }

  {
    Rng rp = group_rng("pos.table");
    Tensor table = Tensor::matrix(static_cast<int>(pos_vocabulary().size()), cfg_.pos_dim);
    for (size_t i = 0; i < table.size(); ++i) table[i] = rp.normal(0.0, 0.02);
    params_.add("pos.table", std::move(table));
  }

  int df = cfg_.frame_dim();
  auto add_linear = [&](const std::string& name, int in, int out) {
    Rng r = group_rng("head." + name);
    params_.add("head." + name + ".weight", glorot(in, out, r));
    params_.add("head." + name + ".bias", Tensor(Shape{out}));
  };
  add_linear("fsp", cfg_.fsp_input_dim(), cfg_.frame_count);
  if (cfg_.tasks.count("link")) add_linear("link", 2 * df, 2);
  if (cfg_.tasks.count("pathlen")) {
    Rng r = group_rng("head.pathlen");
    params_.add("head.pathlen.weight1", glorot(2 * df, cfg_.pathlen_hidden, r));
    params_.add("head.pathlen.bias1", Tensor(Shape{cfg_.pathlen_hidden}));
    params_.add("head.pathlen.weight2", glorot(cfg_.pathlen_hidden, 1, r));
    params_.add("head.pathlen.bias2", Tensor(Shape{1}));
  }
  if (cfg_.tasks.count("binframe")) add_linear("binframe", df + cfg_.lu_dim + cfg_.pos_dim, 2);
  if (cfg_.tasks.count("reconstruct")) add_linear("recon", cfg_.fsp_input_dim(), cfg_.frame_count);
  for (const std::string& task : kAllTasks)
    if (cfg_.tasks.count(task)) params_.add("uncert." + task, Tensor::scalar(0.0));
}

void Model::set_fixed_table(Tensor table) {
  if (cfg_.representation != ReprKind::fixed)
    raise(ErrorCode::invalid_argument, "fixed table only applies to the centroid representation");
  if (table.rank() != 2 || table.rows() != cfg_.frame_count || table.cols() != cfg_.table_dim)
    raise(ErrorCode::dimension, "fixed table shape " + shape_str(table.shape()) + " does not match config");
  fixed_table_ = std::move(table);
}

ModelVars Model::leaves(Tape& tape) const {
  ModelVars vars;
  for (size_t i = 0; i < params_.count(); ++i)
    vars.by_name.emplace(params_.name_at(i), tape.leaf(params_.tensor_at(i)));
  return vars;
}

namespace {

GatLayerVars layer_vars(const ModelVars& vars, const std::string& prefix, int heads) {
  GatLayerVars lv;
  for (int m = 0; m < heads; ++m) {
    std::string head = prefix + ".h" + std::to_string(m);
    lv.heads.push_back({vars.at(head + ".weight"), vars.at(head + ".attn_self"), vars.at(head + ".attn_neigh")});
  }
  return lv;
}

}  // namespace

Var Model::frame_representations(Tape& tape, const ModelVars& vars, const Tensor& node_init,
                                 const NeighborLists& nbrs) const {
  switch (cfg_.representation) {
    case ReprKind::gat: {
      if (node_init.cols() != cfg_.layer1.input_dim)
        raise(ErrorCode::dimension, "node init width " + std::to_string(node_init.cols()) +
                                        " does not match layer1 input dim " + std::to_string(cfg_.layer1.input_dim));
      Var h0 = tape.constant(node_init);
      Var h1 = gat_layer_forward(tape, layer_vars(vars, "gat.l1", cfg_.layer1.heads), cfg_.layer1, h0, nbrs,
                                 cfg_.node_norm);
      return gat_layer_forward(tape, layer_vars(vars, "gat.l2", cfg_.layer2.heads), cfg_.layer2, h1, nbrs,
                               cfg_.node_norm);
    }
    case ReprKind::random_table:
      return vars.at("repr.table");
    case ReprKind::fixed:
      if (fixed_table_.size() == 0) raise(ErrorCode::invalid_argument, "centroid representation table not set");
      return tape.constant(fixed_table_);
  }
  raise(ErrorCode::internal, "unhandled representation kind");
}

Model Model::clone() const {
  Model copy;
  copy.cfg_ = cfg_;
  copy.params_ = params_;
  copy.fixed_table_ = fixed_table_;
  return copy;
}

// ---- checkpoint io ----

namespace {

json layer_to_json(const GatLayerConfig& l) {
  return json{{"heads", l.heads},
              {"features_per_head", l.features_per_head},
              {"input_dim", l.input_dim},
              {"combine", l.combine == HeadCombine::concat ? "concat" : "mean"},
              {"leaky_slope", l.leaky_slope},
              {"activation", l.activation == Activation::elu ? "elu" : "identity"}};
}

GatLayerConfig layer_from_json(const json& j) {
  GatLayerConfig l;
  l.heads = j.at("heads").get<int>();
  l.features_per_head = j.at("features_per_head").get<int>();
  l.input_dim = j.at("input_dim").get<int>();
  l.combine = j.at("combine").get<std::string>() == "concat" ? HeadCombine::concat : HeadCombine::mean;
  l.leaky_slope = j.at("leaky_slope").get<double>();
  l.activation = j.at("activation").get<std::string>() == "elu" ? Activation::elu : Activation::identity;
  return l;
}

constexpr char kMagic[8] = {'F', 'S', 'P', 'C', 'K', 'P', 'T', '1'};

void write_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t read_u64(const std::string& in, size_t& off) {
  if (off + 8 > in.size()) raise(ErrorCode::format, "checkpoint truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
  off += 8;
  return v;
}

}  // namespace

void Model::save(const std::string& path) const {
  json header;
  header["format"] = "fsp-checkpoint";
  header["version"] = 1;
  json cfg;
  cfg["layer1"] = layer_to_json(cfg_.layer1);
  cfg["layer2"] = layer_to_json(cfg_.layer2);
  cfg["node_norm"] = cfg_.node_norm;
  cfg["drop_edge"] = cfg_.drop_edge;
  cfg["pos_dim"] = cfg_.pos_dim;
  cfg["lu_dim"] = cfg_.lu_dim;
  cfg["init_dim"] = cfg_.init_dim;
  cfg["frame_count"] = cfg_.frame_count;
  cfg["pathlen_hidden"] = cfg_.pathlen_hidden;
  cfg["perturb_p"] = cfg_.perturb_p;
  cfg["representation"] = repr_kind_name(cfg_.representation);
  cfg["table_dim"] = cfg_.table_dim;
  cfg["tasks"] = cfg_.tasks;
  header["config"] = cfg;
  json dir = json::array();
  for (size_t i = 0; i < params_.count(); ++i) {
    dir.push_back(json{{"name", params_.name_at(i)}, {"shape", params_.tensor_at(i).shape()}});
  }
  if (cfg_.representation == ReprKind::fixed && fixed_table_.size() > 0)
    dir.push_back(json{{"name", "repr.fixed_table"}, {"shape", fixed_table_.shape()}});
  header["tensors"] = dir;

  std::string out;
  out.append(kMagic, sizeof(kMagic));
  std::string header_str = header.dump();
  write_u64(out, header_str.size());
  out += header_str;
  auto append_tensor = [&](const std::string& name, const Tensor& t) {
    write_u64(out, name.size());
    out += name;
    write_u64(out, t.size());
    size_t bytes = t.size() * sizeof(double);
    size_t pos = out.size();
    out.resize(pos + bytes);
    std::memcpy(out.data() + pos, t.data(), bytes);
  };
  for (size_t i = 0; i < params_.count(); ++i) append_tensor(params_.name_at(i), params_.tensor_at(i));
  if (cfg_.representation == ReprKind::fixed && fixed_table_.size() > 0)
    append_tensor("repr.fixed_table", fixed_table_);
  atomic_write_file(path, out);
}

Model Model::load(const std::string& path) {
  std::string in = read_file(path);
  if (in.size() < sizeof(kMagic) || std::memcmp(in.data(), kMagic, sizeof(kMagic)) != 0)
    raise(ErrorCode::format, "'" + path + "' is not a checkpoint file");
  size_t off = sizeof(kMagic);
  uint64_t header_len = read_u64(in, off);
  if (off + header_len > in.size()) raise(ErrorCode::format, "checkpoint header truncated");
  json header = json::parse(in.substr(off, header_len), nullptr, false);
  if (header.is_discarded()) raise(ErrorCode::format, "checkpoint header is not valid JSON");
  off += header_len;

  Model model;
  const json& cfg = header.at("config");
  model.cfg_.layer1 = layer_from_json(cfg.at("layer1"));
  model.cfg_.layer2 = layer_from_json(cfg.at("layer2"));
  model.cfg_.node_norm = cfg.at("node_norm").get<bool>();
  model.cfg_.drop_edge = cfg.at("drop_edge").get<double>();
  model.cfg_.pos_dim = cfg.at("pos_dim").get<int>();
  model.cfg_.lu_dim = cfg.at("lu_dim").get<int>();
  model.cfg_.init_dim = cfg.at("init_dim").get<int>();
  model.cfg_.frame_count = cfg.at("frame_count").get<int>();
  model.cfg_.pathlen_hidden = cfg.at("pathlen_hidden").get<int>();
  model.cfg_.perturb_p = cfg.at("perturb_p").get<double>();
  model.cfg_.representation = parse_repr_kind(cfg.at("representation").get<std::string>());
  model.cfg_.table_dim = cfg.at("table_dim").get<int>();
  model.cfg_.tasks = cfg.at("tasks").get<std::set<std::string>>();

  for (const json& entry : header.at("tensors")) {
    std::string name = entry.at("name").get<std::string>();
    Shape shape = entry.at("shape").get<Shape>();
    uint64_t name_len = read_u64(in, off);
    if (off + name_len > in.size()) raise(ErrorCode::format, "checkpoint truncated in tensor name");
    std::string stored_name = in.substr(off, name_len);
    off += name_len;
    if (stored_name != name)
      raise(ErrorCode::format, "checkpoint tensor order mismatch: header says '" + name + "', data has '" +
                                   stored_name + "'");
    uint64_t count = read_u64(in, off);
    if (count != shape_size(shape)) raise(ErrorCode::format, "checkpoint tensor '" + name + "' size mismatch");
    if (off + count * sizeof(double) > in.size())
      raise(ErrorCode::format, "checkpoint truncated in tensor data");
    std::vector<double> data(count);
    std::memcpy(data.data(), in.data() + off, count * sizeof(double));
    off += count * sizeof(double);
    Tensor t(shape, std::move(data));
    if (name == "repr.fixed_table")
      model.fixed_table_ = std::move(t);
    else
      model.params_.add(name, std::move(t));
  }
  model.cfg_.validate();
  return model;
}

}  // namespace fsp
