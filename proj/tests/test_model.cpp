#include <doctest.h>

#include <cstring>
#include <sstream>

#include "support.hpp"
#include "vaep/errors.hpp"
#include "vaep/model.hpp"
#include "vaep/synth.hpp"

using namespace vaep;

namespace {

FeatureMatrix random_rows(Rng& rng, std::size_t n, int w) {
  FeatureMatrix x;
  x.schema = FeatureSchema::for_window(w);
  x.rows = n;
  x.values.resize(n * x.cols());
  for (auto& v : x.values) v = rng.bernoulli(0.3) ? double(rng.below(2)) : rng.uniform(-5, 110);
  return x;
}

std::vector<std::uint8_t> noisy_labels(Rng& rng, const FeatureMatrix& x) {
  std::vector<std::uint8_t> y(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) y[r] = rng.bernoulli(x.at(r, 0) > 50 ? 0.7 : 0.2);
  return y;
}

std::string bytes_of(const Model& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

std::string load_error(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    load_model(in);
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

Model trained(Rng& rng, LearnerKind kind) {
  const auto x = random_rows(rng, 400, 2);
  const auto y = noisy_labels(rng, x);
  if (kind == LearnerKind::forest) {
    ForestParams p;
    p.n_trees = 8;
    p.min_leaf = 4;
    p.seed = 5;
    return {Target::concedes, train_forest(x, y, p)};
  }
  return {Target::scores, train_logistic(x, y, {.max_epochs = 50})};
}

}  // namespace

TEST_CASE("save/load round trip predicts bit-identically") {
  Rng rng(61);
  for (auto kind : {LearnerKind::forest, LearnerKind::logistic}) {
    const Model m = trained(rng, kind);
    const std::string bytes = bytes_of(m);
    std::istringstream in(bytes);
    const Model back = load_model(in);
    CHECK(back.kind() == kind);
    CHECK(back.target == m.target);
    CHECK(back.schema() == m.schema());
    const auto probe = random_rows(rng, 1000, 2);
    CHECK(predict_proba(back, probe) == predict_proba(m, probe));
    CHECK(bytes_of(back) == bytes);
  }
}

TEST_CASE("load_model: truncated, tampered and future files") {
  Rng rng(62);
  const std::string bytes = bytes_of(trained(rng, LearnerKind::forest));
  CHECK(load_error(bytes.substr(0, bytes.size() / 2)) == "CorruptFile");
  CHECK(load_error(bytes.substr(0, 10)) == "CorruptFile");
  CHECK(load_error("") == "CorruptFile");

  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  CHECK(load_error(flipped) == "CorruptFile");

  std::string future = bytes;
  const std::uint32_t v = kModelFormatVersion + 1;
  std::memcpy(future.data() + 8, &v, 4);
  CHECK(load_error(future) == "VersionMismatch");

  CHECK(load_error("definitely not a model file, but long enough to parse") == "CorruptFile");
}

TEST_CASE("load_model: missing path") {
  try {
    load_model(std::filesystem::path("/nonexistent/model.bin"));
    FAIL("expected MissingFile");
  } catch (const Error& e) {
    CHECK(e.code() == "MissingFile");
  }
}

TEST_CASE("save_model to a path is atomic and leaves no temp files") {
  Rng rng(63);
  testsupport::TempDir dir("model");
  const Model m = trained(rng, LearnerKind::logistic);
  save_model(m, dir / "m.bin");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
  CHECK(files == 1);
  CHECK(bytes_of(load_model(dir / "m.bin")) == bytes_of(m));
}

TEST_CASE("target and learner names") {
  CHECK(parse_target("scores") == Target::scores);
  CHECK(parse_target("concedes") == Target::concedes);
  CHECK(parse_learner("forest") == LearnerKind::forest);
  CHECK_THROWS_AS(parse_learner("mlp"), Error);
}

TEST_CASE("split_by_game") {
  const auto games = synth::generate_corpus({.seed = 2, .n_games = 10, .n_actions = 200});
  const auto s = split_by_game(games, 0.3);
  CHECK(s.train.size() == 7);
  CHECK(s.test.size() == 3);
  CHECK(s.test.front().game_id() == "g0008");
  const auto two = split_by_game(std::span(games).first(2), 0.9);
  CHECK(two.train.size() == 1);
  CHECK(two.test.size() == 1);
}

TEST_CASE("window_sweep: shape, determinism and the goalless corner") {
  const auto games = synth::generate_corpus({.seed = 3, .n_games = 6, .n_actions = 600});
  ForestParams p;
  p.n_trees = 4;
  p.min_leaf = 20;
  const std::vector<int> ws{1, 2, 3, 4, 5};
  const auto a = window_sweep(games, ws, 10, p, 0.3);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(a[i].w == ws[i]);
  const auto b = window_sweep(games, ws, 10, p, 0.3);
  std::ostringstream ca, cb;
  write_sweep_csv(ca, a);
  write_sweep_csv(cb, b);
  CHECK(ca.str() == cb.str());
  CHECK(ca.str().rfind("actions,log_loss,roc_auc,brier", 0) == 0);

  const auto dry = synth::generate_corpus({.seed = 3, .n_games = 4, .n_actions = 300, .shot_rate = 0.0});
  const std::vector<int> w3{3};
  const auto d = window_sweep(dry, w3, 10, p, 0.5);
  REQUIRE(d.size() == 1);
  CHECK_FALSE(d[0].auc_defined);
  CHECK(d[0].roc_auc == 0.5);
  CHECK(d[0].log_loss < 0.05);
}
