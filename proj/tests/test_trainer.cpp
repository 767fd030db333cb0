#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "fsp/config.hpp"
#include "fsp/error.hpp"
#include "fsp/trainer.hpp"
#include "helpers/fixtures.hpp"

using namespace fsp;

namespace {

// Small, fast configuration for trainer tests.
RunConfig tiny_run_config(const Dataset& ds, int epochs, uint64_t seed) {
  RunConfig rc;
  rc.model.layer1 = GatLayerConfig{2, 4, 0, HeadCombine::concat, 0.2, Activation::elu};
  rc.model.layer2 = GatLayerConfig{2, 6, 0, HeadCombine::mean, 0.2, Activation::identity};
  rc.model.pos_dim = 2;
  rc.model.pathlen_hidden = 8;
  rc.model.drop_edge = 0.2;
  rc.learning_rate = 0.01;
  rc.batch_size = 64;
  rc.aux_batch_size = 32;
  rc.max_epochs = epochs;
  rc.seed = seed;
  rc.cv_outer_folds = 2;
  rc.cv_inner_folds = 2;
  rc.cv_repetitions = 2;
  rc.bind_dataset(ds);
  return rc;
}

std::vector<int> range_indices(size_t n) {
  std::vector<int> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  return v;
}

}  // namespace

TEST_CASE("stratified folds partition the data and balance languages") {
  test::ToySpec spec;
  spec.pairs = 40;
  spec.en_de_fraction = 0.3;
  Dataset ds = test::make_toy_dataset(spec);
  Rng rng(5);
  auto folds = stratified_folds(ds.pairs, range_indices(ds.pairs.size()), 5, rng);
  REQUIRE(folds.size() == 5);
  std::set<int> seen;
  for (const auto& fold : folds) {
    for (int idx : fold) CHECK(seen.insert(idx).second);  // disjoint
    CHECK(fold.size() == 8);                              // covering, balanced
  }
  CHECK(seen.size() == 40);
  // both languages appear in every fold (groups are larger than the fold count)
  for (const auto& fold : folds) {
    int de = 0;
    for (int idx : fold) de += ds.pairs[idx].lang == LangPair::en_de;
    CHECK(de >= 1);
    CHECK(de <= 7);
  }
}

TEST_CASE("train_run rejects overlapping train and validation splits") {
  test::ToySpec spec;
  spec.pairs = 20;
  Dataset ds = test::make_toy_dataset(spec);
  RunConfig rc = tiny_run_config(ds, 1, 5);
  CHECK_THROWS_AS(train_run(rc, ds, {0, 1, 2}, {2, 3}, 1), Error);
}

TEST_CASE("max_epochs zero returns the initialized model with best epoch 0") {
  test::ToySpec spec;
  spec.pairs = 20;
  Dataset ds = test::make_toy_dataset(spec);
  RunConfig rc = tiny_run_config(ds, 0, 6);
  TrainRunResult run = train_run(rc, ds, {0, 1, 2, 3}, {4, 5}, 42);
  CHECK(run.best_epoch == 0);
  CHECK(run.log.empty());
  Model fresh(rc.model, Rng(42).child(1).seed());
  const Tensor& a = run.model.params().get("head.fsp.weight");
  const Tensor& b = fresh.params().get("head.fsp.weight");
  for (size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
}

TEST_CASE("identical seeds give identical validation trajectories") {
  test::ToySpec spec;
  spec.pairs = 30;
  spec.frames = 10;
  spec.edges = 16;
  Dataset ds = test::make_toy_dataset(spec);
  RunConfig rc = tiny_run_config(ds, 4, 7);
  std::vector<int> train = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
  std::vector<int> val = {20, 21, 22, 23, 24, 25, 26, 27, 28, 29};
  TrainRunResult r1 = train_run(rc, ds, train, val, 99);
  TrainRunResult r2 = train_run(rc, ds, train, val, 99);
  REQUIRE(r1.log.size() == r2.log.size());
  for (size_t e = 0; e < r1.log.size(); ++e) {
    CHECK(r1.log[e].loss == r2.log[e].loss);
    CHECK(r1.log[e].val_f1 == r2.log[e].val_f1);
  }
  CHECK(r1.best_epoch == r2.best_epoch);

  TrainRunResult r3 = train_run(rc, ds, train, val, 100);  // different seed diverges
  bool same = r1.log.back().loss == r3.log.back().loss;
  CHECK_FALSE(same);
}

TEST_CASE("training fits a small dataset to high train accuracy") {
  test::ToySpec spec;
  spec.frames = 12;
  spec.edges = 20;
  spec.pairs = 40;
  spec.init_dim = 8;
  spec.lu_dim = 8;
  spec.seed = 31;
  Dataset ds = test::make_toy_dataset(spec);
  RunConfig rc = tiny_run_config(ds, 120, 8);
  rc.model.drop_edge = 0.1;
  std::vector<int> all = range_indices(ds.pairs.size());
  TrainRunResult run = train_run(rc, ds, all, {}, 123);
  std::map<int, FrameId> gold;
  for (int idx : all) gold[idx] = ds.pairs[idx].tgt_frame;
  double top1 = top_k_f1(predict_pairs(run.model, ds, all, 1), gold, 1);
  CHECK(top1 >= 95.0);
}

TEST_CASE("nested_cv requires enough data and repetitions") {
  test::ToySpec spec;
  spec.pairs = 6;
  Dataset ds = test::make_toy_dataset(spec);
  RunConfig rc = tiny_run_config(ds, 1, 9);
  CHECK_THROWS_AS(nested_cv(rc, ds), Error);  // < 10 pairs

  test::ToySpec spec2;
  spec2.pairs = 24;
  Dataset ds2 = test::make_toy_dataset(spec2);
  RunConfig rc2 = tiny_run_config(ds2, 1, 9);
  rc2.cv_repetitions = 1;
  CHECK_THROWS_AS(nested_cv(rc2, ds2), Error);
}

TEST_CASE("nested_cv is deterministic and independent of the job count") {
  test::ToySpec spec;
  spec.pairs = 24;
  spec.frames = 10;
  spec.edges = 16;
  Dataset ds = test::make_toy_dataset(spec);
  RunConfig rc = tiny_run_config(ds, 2, 11);
  NestedCvResult r1 = nested_cv(rc, ds);
  RunConfig rc_jobs = rc;
  rc_jobs.jobs = 3;
  NestedCvResult r2 = nested_cv(rc_jobs, ds);
  CHECK(r1.mean_f1 == r2.mean_f1);
  CHECK(r1.std_f1 == r2.std_f1);
  REQUIRE(r1.repetitions.size() == r2.repetitions.size());
  for (size_t r = 0; r < r1.repetitions.size(); ++r) {
    CHECK(r1.repetitions[r].metrics.combined.f1 == r2.repetitions[r].metrics.combined.f1);
    CHECK(r1.repetitions[r].fold_f1 == r2.repetitions[r].fold_f1);
    CHECK(r1.repetitions[r].chosen_epochs == r2.repetitions[r].chosen_epochs);
  }
  // every pair is scored exactly once per repetition
  for (const RepetitionResult& rep : r1.repetitions) {
    std::set<int> scored;
    for (const RankedPrediction& p : rep.predictions) CHECK(scored.insert(p.pair_index).second);
    CHECK(scored.size() == ds.pairs.size());
  }
}

TEST_CASE("ablation produces the six-row table with zero self-delta") {
  test::ToySpec spec;
  spec.pairs = 20;
  spec.frames = 8;
  spec.edges = 12;
  Dataset ds = test::make_toy_dataset(spec);
  RunConfig rc = tiny_run_config(ds, 2, 13);
  std::vector<AblationRow> rows = ablation_suite(rc, ds);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].removed == "none");
  CHECK(rows[0].delta_vs_full == 0.0);
  CHECK(rows[1].removed == "link");
  CHECK(rows[2].removed == "pathlen");
  CHECK(rows[3].removed == "binframe");
  CHECK(rows[4].removed == "reconstruct");
  CHECK(rows[5].removed == "all");
  for (const AblationRow& row : rows)
    CHECK(row.delta_vs_full == doctest::Approx(row.mean_f1 - rows[0].mean_f1));

  RunConfig missing = rc;
  missing.model.tasks = {"fsp", "link"};
  CHECK_THROWS_AS(ablation_suite(missing, ds), Error);
}

TEST_CASE("config json round-trips and rejects unknown keys") {
  RunConfig rc = parse_run_config("{}");
  CHECK(rc.learning_rate == doctest::Approx(0.005));
  CHECK(rc.weight_decay == doctest::Approx(0.0005));
  CHECK(rc.batch_size == 512);
  CHECK(rc.model.layer1.heads == 9);
  CHECK(rc.model.layer1.features_per_head == 109);
  CHECK(rc.model.layer2.heads == 10);
  CHECK(rc.model.layer2.features_per_head == 256);
  CHECK(rc.model.layer2.combine == HeadCombine::mean);
  CHECK(rc.model.pos_dim == 16);
  CHECK(rc.model.pathlen_hidden == 1024);
  CHECK(rc.model.tasks.size() == 5);
  CHECK(rc.cv_repetitions == 5);

  RunConfig parsed = parse_run_config(run_config_to_json(rc));
  CHECK(run_config_to_json(parsed) == run_config_to_json(rc));

  CHECK_THROWS_AS(parse_run_config("{\"bogus\": 1}"), Error);
  CHECK_THROWS_AS(parse_run_config("{\"model\": {\"bogus\": 1}}"), Error);
  CHECK_THROWS_AS(parse_run_config("{\"train\": {\"tasks\": [\"nope\"]}}"), Error);
  CHECK_THROWS_AS(parse_run_config("not json"), Error);
  CHECK_THROWS_AS(parse_run_config("{\"model\": {\"head_combine\": \"sum\"}}"), Error);

  RunConfig concat = parse_run_config("{\"model\": {\"head_combine\": \"concat\"}}");
  CHECK(concat.model.layer2.combine == HeadCombine::concat);
  RunConfig tasks = parse_run_config("{\"train\": {\"tasks\": [\"link\"]}}");
  CHECK(tasks.model.tasks == std::set<std::string>{"fsp", "link"});
}

TEST_CASE("checkpoints round-trip through save and load") {
  test::ToySpec spec;
  spec.pairs = 16;
  spec.frames = 9;
  spec.edges = 14;
  Dataset ds = test::make_toy_dataset(spec);
  RunConfig rc = tiny_run_config(ds, 2, 15);
  TrainRunResult run = train_run(rc, ds, range_indices(ds.pairs.size()), {}, 7);

  std::string path = test::make_temp_dir("ckpt") + "/model.ckpt";
  run.model.save(path);
  Model loaded = Model::load(path);
  CHECK(loaded.config().frame_count == rc.model.frame_count);
  CHECK(loaded.config().tasks == rc.model.tasks);
  REQUIRE(loaded.params().count() == run.model.params().count());
  for (size_t i = 0; i < loaded.params().count(); ++i) {
    CHECK(loaded.params().name_at(i) == run.model.params().name_at(i));
    const Tensor& a = loaded.params().tensor_at(i);
    const Tensor& b = run.model.params().tensor_at(i);
    REQUIRE(a.same_shape(b));
    for (size_t j = 0; j < a.size(); ++j) REQUIRE(a[j] == b[j]);
  }
  // identical predictions after reload
  std::vector<int> all = range_indices(ds.pairs.size());
  auto p1 = predict_pairs(run.model, ds, all, 3);
  auto p2 = predict_pairs(loaded, ds, all, 3);
  for (size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].frames == p2[i].frames);
    CHECK(p1[i].scores == p2[i].scores);
  }
  CHECK_THROWS_AS(Model::load(path + ".missing"), Error);
}
