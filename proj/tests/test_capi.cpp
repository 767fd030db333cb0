#include <filesystem>
#include <string>

#include "doctest.h"
#include "frameshift.h"
#include "helpers/fixtures.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Str {
  char* p = nullptr;
  ~Str() { fsp_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Ds {
  fsp_dataset* p = nullptr;
  ~Ds() { fsp_dataset_close(p); }
};

struct Mdl {
  fsp_model* p = nullptr;
  ~Mdl() { fsp_model_close(p); }
};

fsp::DatasetPaths write_tiny(const std::string& tag, int pairs = 24, uint64_t seed = 5) {
  fsp::test::ToySpec spec;
  spec.frames = 10;
  spec.edges = 16;
  spec.pairs = pairs;
  spec.init_dim = 6;
  spec.lu_dim = 5;
  spec.seed = seed;
  fsp::Dataset ds = fsp::test::make_toy_dataset(spec);
  return fsp::test::write_dataset_files(ds, fsp::test::make_temp_dir(tag));
}

fsp_status open_ds(const fsp::DatasetPaths& paths, Ds& ds) {
  return fsp_dataset_open(paths.frames.c_str(), paths.edges.c_str(), paths.lus.c_str(),
                          paths.vectors.c_str(), paths.pairs.c_str(), &ds.p);
}

const char* kTinyConfig = R"({
  "seed": 7,
  "model": {"layer1_heads": 2, "layer1_features": 4, "layer2_heads": 2, "layer2_features": 5,
            "pos_dim": 2, "pathlen_hidden": 8, "drop_edge": 0.1},
  "train": {"max_epochs": 3, "batch_size": 32, "aux_batch_size": 16},
  "cv": {"outer_folds": 2, "inner_folds": 2, "repetitions": 2}
})";

}  // namespace

TEST_CASE("status names are machine-parsable") {
  CHECK(std::string(fsp_status_name(FSP_OK)) == "ok");
  CHECK(std::string(fsp_status_name(FSP_ERROR_FORMAT)) == "format_error");
  CHECK(std::string(fsp_status_name(FSP_ERROR_TRAINING)) == "training_error");
}

TEST_CASE("dataset open, stats and error reporting") {
  fsp::DatasetPaths paths = write_tiny("capi_open");
  Ds ds;
  REQUIRE(open_ds(paths, ds) == FSP_OK);
  REQUIRE(ds.p != nullptr);

  Str stats;
  REQUIRE(fsp_dataset_stats(ds.p, &stats.p) == FSP_OK);
  json j = json::parse(stats.str());
  CHECK(j.at("stats").at("frames").get<int>() == 10);
  CHECK(j.at("stats").at("pairs").get<int>() == 24);
  CHECK(j.at("stats").at("digests").size() == 5);

  Ds missing;
  fsp_status s = fsp_dataset_open("/nonexistent/frames.tsv", paths.edges.c_str(), paths.lus.c_str(),
                                  paths.vectors.c_str(), paths.pairs.c_str(), &missing.p);
  CHECK(s == FSP_ERROR_IO);
  CHECK(std::string(fsp_last_error()).find("frames.tsv") != std::string::npos);
  CHECK(missing.p == nullptr);

  CHECK(fsp_dataset_stats(nullptr, &stats.p) == FSP_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("invalid config json is a config error") {
  fsp::DatasetPaths paths = write_tiny("capi_cfg");
  Ds ds;
  REQUIRE(open_ds(paths, ds) == FSP_OK);
  Str manifest;
  std::string ckpt = fsp::test::make_temp_dir("capi_cfg_out") + "/m.ckpt";
  CHECK(fsp_train(ds.p, "{\"bogus\": 1}", ckpt.c_str(), &manifest.p) == FSP_ERROR_CONFIG);
  CHECK(std::string(fsp_last_error()).find("bogus") != std::string::npos);
}

TEST_CASE("train, reload, eval and predict through the C API") {
  fsp::DatasetPaths paths = write_tiny("capi_train");
  Ds ds;
  REQUIRE(open_ds(paths, ds) == FSP_OK);

  std::string dir = fsp::test::make_temp_dir("capi_train_out");
  std::string ckpt = dir + "/model.ckpt";
  Str manifest;
  REQUIRE(fsp_train(ds.p, kTinyConfig, ckpt.c_str(), &manifest.p) == FSP_OK);
  CHECK(std::filesystem::exists(ckpt));
  json m = json::parse(manifest.str());
  CHECK(m.at("kind") == "train_manifest");
  CHECK(m.at("epochs").size() == 3);

  // byte-identical manifest on a rerun with the same seed/config/dataset
  Str manifest2;
  REQUIRE(fsp_train(ds.p, kTinyConfig, ckpt.c_str(), &manifest2.p) == FSP_OK);
  CHECK(manifest.str() == manifest2.str());

  Mdl model;
  REQUIRE(fsp_model_open(ckpt.c_str(), &model.p) == FSP_OK);
  Str eval;
  REQUIRE(fsp_model_eval(model.p, ds.p, 5, &eval.p) == FSP_OK);
  json e = json::parse(eval.str());
  CHECK(e.at("metrics").at("combined").at("support").get<int>() == 24);
  CHECK(e.at("metrics").at("combined").at("f1").get<double>() >= 0.0);

  Str tsv;
  REQUIRE(fsp_model_predict(model.p, ds.p, 3, &tsv.p) == FSP_OK);
  // 24 pairs x 3 ranks
  int lines = 0;
  for (char c : tsv.str()) lines += c == '\n';
  CHECK(lines == 72);

  Mdl bad;
  CHECK(fsp_model_open("/nonexistent.ckpt", &bad.p) == FSP_ERROR_IO);
}

TEST_CASE("nested-cv evaluation report through the C API") {
  fsp::DatasetPaths paths = write_tiny("capi_eval");
  Ds ds;
  REQUIRE(open_ds(paths, ds) == FSP_OK);
  Str report;
  REQUIRE(fsp_evaluate(ds.p, kTinyConfig, 0, &report.p) == FSP_OK);
  json r = json::parse(report.str());
  CHECK(r.at("kind") == "evaluation_report");
  REQUIRE(r.at("rows").size() == 2);  // direct transfer + model
  CHECK(r.at("rows")[0].at("model") == "direct_transfer");
  CHECK(r.at("rows")[1].at("metrics").at("repetitions").size() == 2);

  Str text;
  REQUIRE(fsp_render_report(report.str().c_str(), &text.p) == FSP_OK);
  CHECK(text.str().find("direct_transfer") != std::string::npos);
  CHECK(text.str().find("en->pt") != std::string::npos);
}

TEST_CASE("graph analytics through the C API") {
  fsp::test::BfnShapedFixture fixture = fsp::test::make_bfn_shaped_fixture(17);
  fsp::DatasetPaths paths =
      fsp::test::write_dataset_files(fixture.dataset, fsp::test::make_temp_dir("capi_analyze"));
  Ds ds;
  REQUIRE(open_ds(paths, ds) == FSP_OK);
  Str out;
  REQUIRE(fsp_analyze_graph(ds.p, 0, &out.p) == FSP_OK);
  json a = json::parse(out.str());
  CHECK(a.at("diverging_pairs").get<int>() == fixture.diverging_pairs);
  CHECK(a.at("disconnected").get<int>() == fixture.expected_disconnected);
}

TEST_CASE("embedding export averages checkpoints") {
  fsp::DatasetPaths paths = write_tiny("capi_export");
  Ds ds;
  REQUIRE(open_ds(paths, ds) == FSP_OK);
  std::string dir = fsp::test::make_temp_dir("capi_export_out");
  std::string ckpt = dir + "/m.ckpt";
  Str manifest;
  REQUIRE(fsp_train(ds.p, kTinyConfig, ckpt.c_str(), &manifest.p) == FSP_OK);

  std::string single = dir + "/single.tsv";
  std::string doubled = dir + "/doubled.tsv";
  const char* one[] = {ckpt.c_str()};
  const char* two[] = {ckpt.c_str(), ckpt.c_str()};
  REQUIRE(fsp_export_embeddings(ds.p, one, 1, single.c_str()) == FSP_OK);
  REQUIRE(fsp_export_embeddings(ds.p, two, 2, doubled.c_str()) == FSP_OK);

  // averaging identical checkpoints equals the single export
  fsp::VectorBundle a = fsp::load_vectors(single);
  fsp::VectorBundle b = fsp::load_vectors(doubled);
  REQUIRE(a.frames.entry_count() == 10);
  REQUIRE(b.frames.entry_count() == 10);
  for (const auto& [key, values] : a.frames.entries()) {
    std::vector<double> other = b.frames.get_or_zero(key);
    REQUIRE(other.size() == values.size());
    for (size_t i = 0; i < values.size(); ++i) CHECK(other[i] == doctest::Approx(values[i]).epsilon(1e-12));
  }
}
