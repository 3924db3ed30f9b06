#pragma once

// Shared fixtures for the unit suites: action builders, a hand-rolled random
// game generator for property tests and independent brute-force oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "vaep/dataset.hpp"
#include "vaep/rng.hpp"
#include "vaep/spadl.hpp"

namespace testsupport {

using vaep::Action;
using vaep::ActionResult;
using vaep::ActionType;
using vaep::BodyPart;

inline Action act(std::int64_t id, const std::string& team, ActionType type,
                  ActionResult result = ActionResult::success, double t = 0.0, int period = 1) {
  Action a;
  a.game_id = "g";
  a.action_id = id;
  a.period = period;
  a.start_time = t;
  a.end_time = t + 1.0;
  a.start_x = 50;
  a.start_y = 34;
  a.end_x = 60;
  a.end_y = 30;
  a.player_id = team + "_p" + std::to_string(id % 5);
  a.team_id = team;
  a.type = type;
  a.body_part = vaep::body_part_allowed(type, BodyPart::foot) ? BodyPart::foot : BodyPart::none;
  a.result = result;
  return a;
}

inline vaep::GameMetadata meta(const std::string& id = "g", const std::string& home = "H",
                               const std::string& away = "V") {
  vaep::GameMetadata m;
  m.game_id = id;
  m.home_team_id = home;
  m.away_team_id = away;
  return m;
}

// Sequence of actions at one-second spacing, ids 0..n-1, all in period 1.
inline vaep::Game sequence(const std::vector<std::pair<std::string, ActionType>>& steps,
                           const std::vector<ActionResult>& results = {}) {
  std::vector<Action> acts;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto r = i < results.size() ? results[i] : ActionResult::success;
    acts.push_back(act(std::int64_t(i), steps[i].first, steps[i].second, r, double(i)));
  }
  return vaep::build_game(std::move(acts), meta());
}

struct RandomGameOptions {
  std::size_t n_actions = 120;
  double goal_rate = 0.08;      // share of shots that go in
  double own_goal_rate = 0.01;  // per clearance
  double off_ball_rate = 0.03;
  bool two_periods = true;
};

// Legal random games with goals, own goals, cards and off-ball runs sprinkled in.
inline vaep::Game random_game(vaep::Rng& rng, const std::string& id, const RandomGameOptions& o = {}) {
  auto m = meta(id);
  m.home_attacks_right = {rng.bernoulli(0.5), false};
  m.home_attacks_right[1] = !m.home_attacks_right[0];
  for (int p = 0; p < 11; ++p) {
    m.players["H" + std::to_string(p)] = {"H", 90.0, p == 0 ? "GK" : (p < 5 ? "CB" : (p < 9 ? "CM" : "ST")), ""};
    m.players["V" + std::to_string(p)] = {"V", 90.0, p == 0 ? "GK" : (p < 5 ? "CB" : (p < 9 ? "CM" : "ST")), ""};
  }
  std::vector<Action> acts;
  double t = 0.0;
  for (std::size_t i = 0; i < o.n_actions; ++i) {
    Action a;
    a.game_id = id;
    a.action_id = std::int64_t(i);
    a.period = (o.two_periods && i >= o.n_actions / 2) ? 2 : 1;
    if (a.period == 2 && t < 2700.0) t = 2700.0;
    t += rng.uniform(0.0, 6.0);
    a.start_time = t;
    a.end_time = t + rng.uniform(0.0, 2.0);
    a.start_x = rng.uniform(0.0, vaep::kPitchLength);
    a.start_y = rng.uniform(0.0, vaep::kPitchWidth);
    a.end_x = rng.uniform(0.0, vaep::kPitchLength);
    a.end_y = rng.uniform(0.0, vaep::kPitchWidth);
    const bool home = rng.bernoulli(0.5);
    a.team_id = home ? "H" : "V";
    a.player_id = a.team_id + std::to_string(rng.below(11));
    if (rng.bernoulli(o.off_ball_rate)) {
      a.type = ActionType::run_without_ball;
    } else {
      a.type = ActionType(rng.below(vaep::kOnBallTypeCount));
    }
    std::vector<ActionResult> legal;
    for (std::size_t r = 0; r < vaep::kResultCount; ++r) {
      if (vaep::result_allowed(a.type, ActionResult(r))) legal.push_back(ActionResult(r));
    }
    a.result = legal[rng.below(legal.size())];
    if (vaep::is_shot(a.type)) {
      a.result = rng.bernoulli(o.goal_rate) ? ActionResult::success : ActionResult::fail;
    } else if (a.type == ActionType::clearance) {
      a.result = rng.bernoulli(o.own_goal_rate) ? ActionResult::own_goal : ActionResult::success;
    }
    std::vector<BodyPart> bodies;
    for (std::size_t b = 0; b < vaep::kBodyPartCount; ++b) {
      if (vaep::body_part_allowed(a.type, BodyPart(b))) bodies.push_back(BodyPart(b));
    }
    a.body_part = bodies[rng.below(bodies.size())];
    acts.push_back(std::move(a));
  }
  return vaep::build_game(std::move(acts), std::move(m));
}

// ---- independent oracles ---------------------------------------------------

inline bool oracle_is_goal_for_actor(const Action& a) {
  return (a.type == ActionType::shot || a.type == ActionType::shot_penalty ||
          a.type == ActionType::shot_free_kick) &&
         a.result == ActionResult::success;
}

inline std::string oracle_other(const vaep::Game& g, const std::string& team) {
  return team == g.home_team_id() ? g.away_team_id() : g.home_team_id();
}

inline std::string oracle_possessor(const vaep::Game& g, const Action& a) {
  const bool lost = a.result == ActionResult::fail || a.result == ActionResult::offside ||
                    a.result == ActionResult::yellow_card || a.result == ActionResult::red_card;
  return lost ? oracle_other(g, a.team_id) : a.team_id;
}

// Every (i, j) pair of on-ball positions checked directly.
inline std::vector<vaep::LabelPair> oracle_labels(const vaep::Game& g, int k) {
  std::vector<std::size_t> on;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].type != ActionType::run_without_ball) on.push_back(i);
  }
  std::vector<vaep::LabelPair> out(on.size());
  for (std::size_t i = 0; i < on.size(); ++i) {
    const std::string team = oracle_possessor(g, g[on[i]]);
    for (std::size_t j = 0; j < on.size(); ++j) {
      if (!(j > i && j <= i + std::size_t(k))) continue;
      const Action& b = g[on[j]];
      bool crossed_period = false;
      for (std::size_t q = i; q <= j; ++q) crossed_period |= g[on[q]].period != g[on[i]].period;
      if (crossed_period) continue;
      std::string scorer;
      if (oracle_is_goal_for_actor(b)) scorer = b.team_id;
      if (b.result == ActionResult::own_goal) scorer = oracle_other(g, b.team_id);
      if (scorer.empty()) continue;
      (scorer == team ? out[i].scores : out[i].concedes) = true;
    }
  }
  return out;
}

// Mann-Whitney over all positive/negative pairs, ties worth one half.
inline double oracle_auc(const std::vector<double>& p, const std::vector<std::uint8_t>& y) {
  std::uint64_t twice_wins = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < p.size(); ++i) (y[i] ? pos : neg) += 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (y[j]) continue;
      twice_wins += p[i] > p[j] ? 2 : (p[i] == p[j] ? 1 : 0);
    }
  }
  return double(twice_wins) / double(2 * pos * neg);
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("vaep_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
