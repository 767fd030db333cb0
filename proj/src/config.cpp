#include "fsp/config.hpp"

#include <set>

#include "fsp/error.hpp"
#include "json.hpp"

namespace fsp {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      raise(ErrorCode::config, "unknown config key '" + (where.empty() ? it.key() : where + "." + it.key()) + "'");
}

template <class T>
void read(const json& obj, const char* key, T& into) {
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception&) {
    raise(ErrorCode::config, std::string("config key '") + key + "' has the wrong type");
  }
}

HeadCombine parse_combine(const std::string& s) {
  if (s == "mean") return HeadCombine::mean;
  if (s == "concat") return HeadCombine::concat;
  raise(ErrorCode::config, "head_combine must be 'mean' or 'concat', got '" + s + "'");
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) raise(ErrorCode::config, "config is not valid JSON");
  if (!root.is_object()) raise(ErrorCode::config, "config must be a JSON object");
  check_keys(root, "", {"seed", "jobs", "top_k", "model", "train", "cv", "baselines"});

  RunConfig rc;
  read(root, "seed", rc.seed);
  read(root, "jobs", rc.jobs);
  read(root, "top_k", rc.top_k);

  if (root.contains("model")) {
    const json& m = root.at("model");
    check_keys(m, "model",
               {"representation", "layer1_heads", "layer1_features", "layer2_heads", "layer2_features",
                "head_combine", "node_norm", "drop_edge", "leaky_slope", "pos_dim", "table_dim",
                "pathlen_hidden", "perturb_p", "init_dim", "lu_dim", "frame_count"});
    std::string repr = repr_kind_name(rc.model.representation);
    read(m, "representation", repr);
    rc.model.representation = parse_repr_kind(repr);
    read(m, "layer1_heads", rc.model.layer1.heads);
    read(m, "layer1_features", rc.model.layer1.features_per_head);
    read(m, "layer2_heads", rc.model.layer2.heads);
    read(m, "layer2_features", rc.model.layer2.features_per_head);
    std::string combine = rc.model.layer2.combine == HeadCombine::mean ? "mean" : "concat";
    read(m, "head_combine", combine);
    rc.model.layer2.combine = parse_combine(combine);
    read(m, "node_norm", rc.model.node_norm);
    read(m, "drop_edge", rc.model.drop_edge);
    double slope = rc.model.layer1.leaky_slope;
    read(m, "leaky_slope", slope);
    rc.model.layer1.leaky_slope = slope;
    rc.model.layer2.leaky_slope = slope;
    read(m, "pos_dim", rc.model.pos_dim);
    read(m, "table_dim", rc.model.table_dim);
    read(m, "pathlen_hidden", rc.model.pathlen_hidden);
    read(m, "perturb_p", rc.model.perturb_p);
    read(m, "init_dim", rc.model.init_dim);
    read(m, "lu_dim", rc.model.lu_dim);
    read(m, "frame_count", rc.model.frame_count);
  }

  if (root.contains("train")) {
    const json& t = root.at("train");
    check_keys(t, "train",
               {"learning_rate", "weight_decay", "batch_size", "aux_batch_size", "max_epochs", "tasks",
                "pathlen_max_hops", "holdout_fraction"});
    read(t, "learning_rate", rc.learning_rate);
    read(t, "weight_decay", rc.weight_decay);
    read(t, "batch_size", rc.batch_size);
    read(t, "aux_batch_size", rc.aux_batch_size);
    read(t, "max_epochs", rc.max_epochs);
    read(t, "pathlen_max_hops", rc.pathlen_max_hops);
    read(t, "holdout_fraction", rc.holdout_fraction);
    if (t.contains("tasks")) {
      std::vector<std::string> tasks;
      read(t, "tasks", tasks);
      rc.model.tasks = std::set<std::string>(tasks.begin(), tasks.end());
      rc.model.tasks.insert("fsp");
      for (const std::string& task : rc.model.tasks)
        if (!is_task_name(task)) raise(ErrorCode::config, "unknown task '" + task + "'");
    }
  }

  if (root.contains("cv")) {
    const json& c = root.at("cv");
    check_keys(c, "cv", {"outer_folds", "inner_folds", "repetitions"});
    read(c, "outer_folds", rc.cv_outer_folds);
    read(c, "inner_folds", rc.cv_inner_folds);
    read(c, "repetitions", rc.cv_repetitions);
  }

  read(root, "baselines", rc.baselines);
  rc.validate();
  return rc;
}

std::string run_config_to_json(const RunConfig& rc) {
  json m;
  m["representation"] = repr_kind_name(rc.model.representation);
  m["layer1_heads"] = rc.model.layer1.heads;
  m["layer1_features"] = rc.model.layer1.features_per_head;
  m["layer2_heads"] = rc.model.layer2.heads;
  m["layer2_features"] = rc.model.layer2.features_per_head;
  m["head_combine"] = rc.model.layer2.combine == HeadCombine::mean ? "mean" : "concat";
  m["node_norm"] = rc.model.node_norm;
  m["drop_edge"] = rc.model.drop_edge;
  m["leaky_slope"] = rc.model.layer1.leaky_slope;
  m["pos_dim"] = rc.model.pos_dim;
  m["table_dim"] = rc.model.table_dim;
  m["pathlen_hidden"] = rc.model.pathlen_hidden;
  m["perturb_p"] = rc.model.perturb_p;
  m["init_dim"] = rc.model.init_dim;
  m["lu_dim"] = rc.model.lu_dim;
  m["frame_count"] = rc.model.frame_count;

  json t;
  t["learning_rate"] = rc.learning_rate;
  t["weight_decay"] = rc.weight_decay;
  t["batch_size"] = rc.batch_size;
  t["aux_batch_size"] = rc.aux_batch_size;
  t["max_epochs"] = rc.max_epochs;
  t["tasks"] = rc.model.tasks;
  t["pathlen_max_hops"] = rc.pathlen_max_hops;
  t["holdout_fraction"] = rc.holdout_fraction;

  json c;
  c["outer_folds"] = rc.cv_outer_folds;
  c["inner_folds"] = rc.cv_inner_folds;
  c["repetitions"] = rc.cv_repetitions;

  json root;
  root["seed"] = rc.seed;
  root["jobs"] = rc.jobs;
  root["top_k"] = rc.top_k;
  root["model"] = m;
  root["train"] = t;
  root["cv"] = c;
  root["baselines"] = rc.baselines;
  return root.dump(2);
}

}  // namespace fsp
