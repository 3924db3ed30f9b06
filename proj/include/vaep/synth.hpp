#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vaep/spadl.hpp"

namespace vaep::synth {

// Parameters of the possession-chain simulator. Probabilities live in [0, 1];
// shot_rate scales every shooting hazard (0 disables shots and own goals).
struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n_actions = 1750;
  std::array<double, 2> team_skill{0.5, 0.5};  // home, away
  double shot_rate = 1.0;
  double pass_success_base = 0.74;
  double drift_mean = 1.0;  // forward metres gained by an open-play pass
  double drift_sd = 11.0;
  std::string game_id = "g0001";
  std::string home_team_id = "home";
  std::string away_team_id = "away";
};

// Throws InvalidArgument for out-of-range probabilities.
void validate(const SynthConfig& cfg);

// Chance that an open-play shot from `distance` metres is scored. Strictly
// decreasing; this is the ground-truth scoring process of the simulator.
double goal_probability(double distance);

// Deterministic for a fixed config. Home attacks toward x = 105 in one period
// and toward x = 0 in the other; the coin toss is part of the seeded stream.
Game generate_synthetic_game(const SynthConfig& cfg);

struct CorpusConfig {
  std::uint64_t seed = 0;
  std::size_t n_games = 10;
  std::size_t n_teams = 10;
  std::size_t n_actions = 1750;
  double shot_rate = 1.0;
};

// A round-robin league: team ids T01.., game ids g0001.., per-team skills
// and per-game seeds all derived from cfg.seed. Player ids are stable across
// games so that season ratings can be aggregated.
std::vector<Game> generate_corpus(const CorpusConfig& cfg);

}  // namespace vaep::synth
