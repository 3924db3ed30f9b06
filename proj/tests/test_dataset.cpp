#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "vaep/dataset.hpp"
#include "vaep/errors.hpp"
#include "vaep/synth.hpp"

using namespace vaep;
using testsupport::act;
using testsupport::meta;

namespace {

double feature(const Game& g, const GameState& s, const FeatureSchema& schema, const std::string& name) {
  const auto f = encode_features(g, s, schema);
  return f[*schema.index_of(name)];
}

// Game with one goal by H at index 15; everything else a completed H pass.
Game goal_at_15() {
  std::vector<std::pair<std::string, ActionType>> steps(20, {"H", ActionType::pass});
  steps[15] = {"H", ActionType::shot};
  return testsupport::sequence(steps);
}

// Reflect every coordinate and swap both kickoff directions.
Game reflected(const Game& g) {
  std::vector<Action> acts = g.actions();
  for (auto& a : acts) {
    a.start_x = kPitchLength - a.start_x;
    a.end_x = kPitchLength - a.end_x;
    a.start_y = kPitchWidth - a.start_y;
    a.end_y = kPitchWidth - a.end_y;
  }
  auto m = g.metadata();
  m.home_attacks_right = {!m.home_attacks_right[0], !m.home_attacks_right[1]};
  return build_game(std::move(acts), std::move(m));
}

}  // namespace

TEST_CASE("schema size") {
  CHECK(feature_count(3) == 3 * 42 + 2 * 3 + 3);
  CHECK(FeatureSchema::for_window(3).size() == 135);
  CHECK(FeatureSchema::for_window(1).size() == 45);
  const auto s = FeatureSchema::for_window(4);
  CHECK(FeatureSchema::from_names(s.names()) == s);
  CHECK(FeatureSchema::for_window(2).hash() != s.hash());
  CHECK_THROWS_AS(FeatureSchema::from_names({"a", "b"}), Error);
}

TEST_CASE("gamestates: padding and windows") {
  const Game g = testsupport::sequence(std::vector<std::pair<std::string, ActionType>>(5, {"H", ActionType::pass}));
  const auto s = gamestates(g, 3);
  REQUIRE(s.size() == 5);
  CHECK(s[0].window == std::vector<std::size_t>{0, 0, 0});
  CHECK(s[1].window == std::vector<std::size_t>{0, 0, 1});
  for (std::size_t i = 2; i < 5; ++i) CHECK(s[i].window == std::vector<std::size_t>{i - 2, i - 1, i});
  for (const auto& st : gamestates(g, 1)) CHECK(st.window == std::vector<std::size_t>{st.index});
}

TEST_CASE("gamestates skip off-ball actions") {
  const Game g = testsupport::sequence(
      {{"H", ActionType::pass}, {"H", ActionType::run_without_ball}, {"H", ActionType::dribble}});
  const auto s = gamestates(g, 2);
  REQUIRE(s.size() == 2);
  CHECK(s[1].window == std::vector<std::size_t>{0, 2});
}

TEST_CASE("possession after an action") {
  const Game g = testsupport::sequence(
      {{"H", ActionType::pass}, {"H", ActionType::pass}, {"H", ActionType::pass}, {"H", ActionType::foul},
       {"V", ActionType::tackle}},
      {ActionResult::success, ActionResult::fail, ActionResult::offside, ActionResult::yellow_card,
       ActionResult::success});
  const auto s = gamestates(g, 1);
  CHECK(s[0].possessing_team == "H");
  CHECK(s[1].possessing_team == "V");
  CHECK(s[2].possessing_team == "V");
  CHECK(s[3].possessing_team == "V");
  CHECK(s[4].possessing_team == "V");
}

TEST_CASE("geometric features") {
  auto a = act(0, "H", ActionType::pass);
  a.start_x = 50;
  a.start_y = 30;
  a.end_x = 60;
  a.end_y = 40;
  auto b = act(1, "H", ActionType::pass, ActionResult::success, 1.0);
  b.end_x = 105;
  b.end_y = 34;
  auto c = act(2, "H", ActionType::pass, ActionResult::success, 2.0);
  c.end_x = 105;
  c.end_y = 68;
  const Game g = build_game({a, b, c}, meta());
  const auto schema = FeatureSchema::for_window(1);
  const auto s = gamestates(g, 1);
  CHECK(feature(g, s[0], schema, "a0_dx") == 10.0);
  CHECK(feature(g, s[0], schema, "a0_dy") == 10.0);
  CHECK(feature(g, s[1], schema, "a0_end_dist_to_goal") == 0.0);
  CHECK(feature(g, s[1], schema, "a0_end_angle_to_goal") == 0.0);
  CHECK(feature(g, s[2], schema, "a0_end_dist_to_goal") == 34.0);
  CHECK(feature(g, s[2], schema, "a0_end_angle_to_goal") == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
}

TEST_CASE("coordinates are normalized to the possessor's attack direction") {
  auto a = act(0, "V", ActionType::pass);
  a.start_x = 10;
  a.start_y = 20;
  const Game g = build_game({a}, meta());  // V attacks toward x = 0 in period 1
  const auto schema = FeatureSchema::for_window(1);
  const auto s = gamestates(g, 1);
  CHECK(feature(g, s[0], schema, "a0_start_x") == 95.0);
  CHECK(feature(g, s[0], schema, "a0_start_y") == 48.0);
}

TEST_CASE("pair and context features") {
  auto a = act(0, "H", ActionType::pass, ActionResult::success, 0.0);
  auto b = act(1, "V", ActionType::interception, ActionResult::success, 2.0);
  auto c = act(2, "V", ActionType::shot, ActionResult::success, 5.0);
  const Game g = build_game({a, b, c}, meta());
  const auto schema = FeatureSchema::for_window(3);
  const auto s = gamestates(g, 3);
  CHECK(feature(g, s[1], schema, "a0_a1_possession_change") == 1.0);
  CHECK(feature(g, s[2], schema, "a0_a1_possession_change") == 0.0);
  CHECK(feature(g, s[2], schema, "a0_a1_time_delta") == 4.0);  // c.end (6) - b.start (2)
  CHECK(feature(g, s[2], schema, "goals_scored_possessing") == 1.0);
  CHECK(feature(g, s[2], schema, "goals_scored_defending") == 0.0);
  CHECK(feature(g, s[1], schema, "goal_difference") == 0.0);
}

TEST_CASE("encode_features rejects a schema of another window") {
  const Game g = goal_at_15();
  const auto s = gamestates(g, 2);
  try {
    encode_features(g, s[0], FeatureSchema::for_window(3));
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == "SchemaMismatch");
  }
}

TEST_CASE("label_states: window boundaries") {
  const Game g = goal_at_15();
  const auto labels = label_states(g, 10);
  CHECK(labels[5].scores);
  CHECK_FALSE(labels[4].scores);
  CHECK_FALSE(labels[15].scores);  // a goal is outside its own window
  CHECK_FALSE(labels[5].concedes);
}

TEST_CASE("label_states: own goal by the opponent") {
  const Game g = testsupport::sequence({{"H", ActionType::pass}, {"V", ActionType::clearance}},
                                       {ActionResult::success, ActionResult::own_goal});
  const auto labels = label_states(g, 10);
  CHECK(labels[0].scores);
  CHECK_FALSE(labels[0].concedes);
}

TEST_CASE("label_states: windows stop at the end of a period") {
  std::vector<Action> acts{act(0, "H", ActionType::pass, ActionResult::success, 10.0, 1),
                           act(1, "H", ActionType::shot, ActionResult::success, 1.0, 2)};
  const Game g = build_game(acts, meta());
  CHECK_FALSE(label_states(g, 10)[0].scores);
}

TEST_CASE("label_states matches the brute-force oracle (property)") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + int(rng.below(15));
    const Game g = testsupport::random_game(rng, "g", {.n_actions = 150, .goal_rate = 0.4, .own_goal_rate = 0.2});
    const auto got = label_states(g, k);
    const auto want = testsupport::oracle_labels(g, k);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
  }
}

TEST_CASE("padding invariance: states past the first w-1 do not see the padding (property)") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Game g = testsupport::random_game(rng, "g", {.off_ball_rate = 0.0});
    const int w = 1 + int(rng.below(5));
    const auto states = gamestates(g, w);
    const auto schema = FeatureSchema::for_window(w);
    // Same game with a moved opening action: windows without it must not change.
    std::vector<Action> acts = g.actions();
    acts[0].start_x = 1.0;
    acts[0].end_y = 2.0;
    const Game h = build_game(acts, g.metadata());
    const auto hs = gamestates(h, w);
    for (std::size_t i = std::size_t(w); i < states.size(); ++i) {
      CHECK(encode_features(g, states[i], schema) == encode_features(h, hs[i], schema));
    }
  }
}

TEST_CASE("reflection with swapped directions leaves features unchanged (property)") {
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Game g = testsupport::random_game(rng, "g");
    const Game r = reflected(g);
    const auto schema = FeatureSchema::for_window(3);
    const auto gs = gamestates(g, 3);
    const auto rs = gamestates(r, 3);
    const auto fg = encode_game(g, gs, schema);
    const auto fr = encode_game(r, rs, schema);
    REQUIRE(fg.values.size() == fr.values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < fg.values.size(); ++i) worst = std::max(worst, std::abs(fg.values[i] - fr.values[i]));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("one-hot groups sum to one and values are finite (property)") {
  Rng rng(34);
  std::vector<Game> games;
  for (int i = 0; i < 8; ++i) games.push_back(testsupport::random_game(rng, "g" + std::to_string(i)));
  for (int w : {1, 3, 5}) {
    const Dataset d = build_dataset(games, w, 10);
    const auto& names = d.features.schema.names();
    for (std::size_t r = 0; r < d.features.rows; ++r) {
      for (int j = 0; j < w; ++j) {
        const std::string p = "a" + std::to_string(j) + "_";
        double type = 0, result = 0, body = 0;
        for (std::size_t c = 0; c < names.size(); ++c) {
          if (names[c].rfind(p + "type_", 0) == 0) type += d.features.at(r, c);
          if (names[c].rfind(p + "result_", 0) == 0) result += d.features.at(r, c);
          if (names[c].rfind(p + "bodypart_", 0) == 0) body += d.features.at(r, c);
        }
        CHECK(type == 1.0);
        CHECK(result == 1.0);
        CHECK(body == 1.0);
      }
    }
    for (double v : d.features.values) CHECK(std::isfinite(v));
  }
}

TEST_CASE("build_dataset shape, row order and errors") {
  Rng rng(35);
  std::vector<Game> games{testsupport::random_game(rng, "g1", {.n_actions = 100, .off_ball_rate = 0.0}),
                          testsupport::random_game(rng, "g2", {.n_actions = 100, .off_ball_rate = 0.0})};
  const Dataset d = build_dataset(games, 3, 10);
  CHECK(d.features.rows == 200);
  CHECK(d.features.cols() == 135);
  CHECK(d.index[0] == StateRef{"g1", 0});
  CHECK(d.index[100] == StateRef{"g2", 0});
  CHECK(d.index[199] == StateRef{"g2", 99});

  // First row of g2 is padded from g2's own first action, not g1's last.
  const auto s = gamestates(games[1], 3);
  CHECK(std::vector<double>(d.features.row(100).begin(), d.features.row(100).end()) ==
        encode_features(games[1], s[0], d.features.schema));

  try {
    build_dataset({}, 3, 10);
    FAIL("expected EmptyInput");
  } catch (const Error& e) {
    CHECK(e.code() == "EmptyInput");
  }
}

TEST_CASE("goalless corpus has no positive labels") {
  const auto games = synth::generate_corpus({.seed = 1, .n_games = 3, .n_actions = 400, .shot_rate = 0.0});
  const Dataset d = build_dataset(games, 3, 10);
  for (auto v : d.scores) CHECK(v == 0);
  for (auto v : d.concedes) CHECK(v == 0);
}

TEST_CASE("dataset CSV round trip") {
  Rng rng(36);
  std::vector<Game> games{testsupport::random_game(rng, "g1", {.n_actions = 60})};
  const Dataset d = build_dataset(games, 2, 10);
  testsupport::TempDir dir("dataset");
  {
    std::ofstream out(dir / "f.csv");
    write_dataset_csv(out, d);
  }
  const Dataset r = read_dataset_csv(dir / "f.csv");
  CHECK(r.features.schema == d.features.schema);
  CHECK(r.features.values == d.features.values);
  CHECK(r.scores == d.scores);
  CHECK(r.concedes == d.concedes);
  CHECK(r.index == d.index);
}
