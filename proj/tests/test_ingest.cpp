#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "vaep/errors.hpp"
#include "vaep/ingest.hpp"
#include "vaep/synth.hpp"

using namespace vaep;
using namespace vaep::ingest;

namespace {

RawEvent raw(const std::string& type, const std::string& outcome, double x = 50, double y = 50) {
  RawEvent e;
  e.game_id = "g";
  e.type_name = type;
  e.outcome = outcome;
  e.team = "H";
  e.player = "h1";
  e.x = x;
  e.y = y;
  return e;
}

std::string code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("convert_event: linear rescale and mapped type") {
  const Mapping m = default_mapping();
  const auto c = convert_event(raw("pass", "complete"), m);
  REQUIRE(c.action);
  CHECK(c.action->type == ActionType::pass);
  CHECK(c.action->result == ActionResult::success);
  CHECK(c.action->start_x == doctest::Approx(52.5).epsilon(1e-15));
  CHECK(c.action->start_y == doctest::Approx(34.0).epsilon(1e-15));

  const auto goal = convert_event(raw("shot", "goal"), m);
  REQUIRE(goal.action);
  CHECK(goal.action->type == ActionType::shot);
  CHECK(goal.action->result == ActionResult::success);
}

TEST_CASE("convert_event: unmapped types") {
  const Mapping m = default_mapping();
  const auto skipped = convert_event(raw("ball_recovery", ""), m);
  CHECK_FALSE(skipped.action);
  CHECK(skipped.skip_reason.find("ball_recovery") != std::string::npos);
  CHECK(code_of([&] { convert_event(raw("ball_recovery", ""), m, true); }) == "UnmappedType");
  CHECK_FALSE(convert_event(raw("substitution", ""), m, true).action);
}

TEST_CASE("convert_event: qualifiers refine type and body part") {
  const Mapping m = default_mapping();
  auto e = raw("shot", "goal");
  e.qualifiers = {"penalty", "head"};
  const auto c = convert_event(e, m);
  REQUIRE(c.action);
  CHECK(c.action->type == ActionType::shot_penalty);
  CHECK(c.action->body_part == BodyPart::head);

  auto keeper = raw("save", "");
  const auto k = convert_event(keeper, m);
  REQUIRE(k.action);
  CHECK(k.action->body_part == BodyPart::none);
  CHECK(k.action->result == ActionResult::success);
}

TEST_CASE("convert_event: illegal results are skipped or rejected") {
  const Mapping m = default_mapping();
  CHECK_FALSE(convert_event(raw("interception", "failed"), m).action);
  CHECK(code_of([&] { convert_event(raw("interception", "failed"), m, true); }) == "IllegalAction");
  CHECK_FALSE(convert_event(raw("pass", "complete", 101, 50), m).action);
}

TEST_CASE("coordinate rescaling is affine and invertible (property)") {
  Rng rng(21);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(0, 100), y = rng.uniform(0, 100);
    CHECK(std::abs(to_provider_x(to_pitch_x(x)) - x) <= 1e-9);
    CHECK(std::abs(to_provider_y(to_pitch_y(y)) - y) <= 1e-9);
  }
  CHECK(to_pitch_x(100) == kPitchLength);
  CHECK(to_pitch_y(100) == kPitchWidth);
  CHECK(to_pitch_x(0) == 0.0);
}

TEST_CASE("load_mapping parses TOML tables and rejects unknown SPADL names") {
  std::istringstream good(
      "[types]\nkick = \"pass\"\nnoise = \"ignore\"\n[results]\nok = \"success\"\n"
      "[body_parts]\nnoggin = \"head\"\n[defaults]\nbody_part = \"other\"\n");
  const Mapping m = load_mapping(good);
  CHECK(m.types.at("kick") == ActionType::pass);
  CHECK_FALSE(m.types.at("noise").has_value());
  CHECK(m.results.at("ok") == ActionResult::success);
  CHECK(m.body_parts.at("noggin") == BodyPart::head);
  CHECK(m.default_body_part == BodyPart::other);

  std::istringstream bad("[types]\nkick = \"volley\"\n");
  CHECK(code_of([&] { load_mapping(bad); }) == "BadMapping");
}

TEST_CASE("parse_events") {
  const Mapping m = default_mapping();
  SUBCASE("well-formed lines") {
    std::ostringstream s;
    for (int i = 0; i < 10; ++i) {
      s << R"({"game_id":"g1","ts":)" << i << R"(,"type":")" << (i == 4 ? "substitution" : "pass")
        << R"(","team":")" << (i % 2 ? "A" : "B") << R"(","player":"p","x":10,"y":20,"outcome":"complete"})"
        << '\n';
    }
    std::istringstream in(s.str());
    const auto r = parse_events(in, m);
    CHECK(r.game.size() == 9);
    CHECK(r.game.size() <= 10);
    REQUIRE(r.skipped.size() == 1);
    CHECK(r.skipped[0].line_no == 5);
  }
  SUBCASE("truncated line") {
    std::istringstream in(
        "{\"game_id\":\"g1\",\"ts\":0,\"type\":\"pass\",\"team\":\"A\",\"x\":1,\"y\":1}\n"
        "{\"game_id\":\"g1\",\"ts\":1,\"type\":\"pass\",\"team\":\"B\",\"x\":1,\"y\":1}\n"
        "{\"game_id\":\"g1\",\"ts\":2,\"type\":\"pa\n");
    try {
      parse_events(in, m);
      FAIL("expected MalformedLine");
    } catch (const Error& e) {
      CHECK(e.code() == "MalformedLine");
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("two game ids") {
    std::istringstream in(
        "{\"game_id\":\"g1\",\"ts\":0,\"type\":\"pass\",\"team\":\"A\",\"x\":1,\"y\":1}\n"
        "{\"game_id\":\"g2\",\"ts\":1,\"type\":\"pass\",\"team\":\"B\",\"x\":1,\"y\":1}\n");
    CHECK(code_of([&] { parse_events(in, m); }) == "MixedGames");
  }
}

TEST_CASE("synthetic games are deterministic and legal") {
  synth::SynthConfig cfg;
  cfg.seed = 1;
  const Game a = synth::generate_synthetic_game(cfg);
  const Game b = synth::generate_synthetic_game(cfg);
  CHECK(a == b);
  CHECK(a.size() == cfg.n_actions);
  for (const auto& x : a.actions()) CHECK(validate_action(x).empty());
  cfg.seed = 2;
  CHECK_FALSE(synth::generate_synthetic_game(cfg) == a);
}

TEST_CASE("synthetic game mix") {
  synth::SynthConfig cfg;
  cfg.seed = 1;
  const Game g = synth::generate_synthetic_game(cfg);
  std::size_t passes = 0, shots = 0;
  for (const auto& a : g.actions()) {
    passes += a.type == ActionType::pass;
    shots += is_shot(a.type);
  }
  const double n = double(g.size());
  CHECK(passes / n >= 0.45);
  CHECK(passes / n <= 0.60);
  CHECK(shots / n >= 0.005);
  CHECK(shots / n <= 0.03);
}

TEST_CASE("shot_rate 0 gives goalless games") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    synth::SynthConfig cfg;
    cfg.seed = seed;
    cfg.shot_rate = 0.0;
    CHECK(goal_events(synth::generate_synthetic_game(cfg)).empty());
  }
}

TEST_CASE("synthetic goal probability is strictly decreasing") {
  double prev = synth::goal_probability(0.0);
  for (double d = 0.5; d < 60; d += 0.5) {
    const double p = synth::goal_probability(d);
    CHECK(p < prev);
    CHECK(p > 0.0);
    prev = p;
  }
}

TEST_CASE("synth config validation") {
  synth::SynthConfig cfg;
  cfg.pass_success_base = 1.5;
  CHECK(code_of([&] { synth::generate_synthetic_game(cfg); }) == "InvalidArgument");
}

TEST_CASE("corpus conversion rate over 100 games") {
  const auto games = synth::generate_corpus({.seed = 4, .n_games = 100});
  std::size_t shots = 0, goals = 0;
  for (const auto& g : games) {
    for (const auto& a : g.actions()) {
      if (!is_shot(a.type)) continue;
      ++shots;
      goals += a.result == ActionResult::success;
    }
  }
  const double rate = double(goals) / double(shots);
  MESSAGE("conversion " << rate);
  CHECK(rate >= 0.05);
  CHECK(rate <= 0.17);
}
