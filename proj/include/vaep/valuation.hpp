#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vaep/dataset.hpp"
#include "vaep/model.hpp"
#include "vaep/spadl.hpp"

namespace vaep {

// P_hg / P_vg: probabilities that the home / visiting team scores soon.
struct HomeFrame {
  double home = 0.0;
  double away = 0.0;
};

// Maps possessing-team outputs (scores, concedes) to the home/visitor frame.
HomeFrame to_home_frame(bool home_possesses, double p_scores, double p_concedes);

struct StateProbabilities {
  std::string game_id;
  std::vector<std::size_t> indices;  // game index of each state's last action, on-ball order
  std::vector<int> periods;
  std::vector<bool> home_possesses;
  std::vector<double> p_scores;      // possessing-team frame, as predicted
  std::vector<double> p_concedes;
  std::vector<HomeFrame> frame;      // home/visitor frame
  std::map<int, HomeFrame> baseline; // S_0 of each period

  // Skeleton for `g` with every probability set to zero and no baselines.
  static StateProbabilities for_game(const Game& g);
  // Fills every state and every period baseline with the same home-frame pair.
  static StateProbabilities constant(const Game& g, HomeFrame value);

  // Probability pair of the state preceding state `pos` (the period baseline
  // for the first state of a period). Throws MissingState.
  const HomeFrame& before(std::size_t pos) const;
};

// Runs both models over every state of `g` plus the period baselines. The
// window size comes from the models' schema. Throws SchemaMismatch when the
// two models disagree on the schema.
StateProbabilities state_probabilities(const Game& g, const Model& scores, const Model& concedes);

// Same, from predictions already made on gamestates(g, w) and on the
// baselines (one pair per period present in the game, in period order).
StateProbabilities state_probabilities(const Game& g, std::span<const double> p_scores,
                                       std::span<const double> p_concedes,
                                       const std::map<int, std::pair<double, double>>& baseline);

struct ActionValue {
  std::string game_id;
  std::int64_t action_id = 0;
  std::size_t index = 0;  // game index
  std::string player_id;
  std::string team_id;
  ActionType type = ActionType::pass;
  std::string possessing_team;  // after the action
  double offensive = 0.0;
  double defensive = 0.0;
  double total = 0.0;
};

// V(a_i) = dP_hg - dP_vg when home has the ball after a_i, dP_vg - dP_hg
// otherwise; offensive and defensive are the two terms in that order.
// Throws MissingState when probs does not cover the game's states.
std::vector<ActionValue> value_actions(const Game& g, const StateProbabilities& probs);

// Values for several games, parallel over games.
std::vector<std::vector<ActionValue>> value_games(std::span<const Game> games, const Model& scores,
                                                  const Model& concedes);
namespace serial {
std::vector<std::vector<ActionValue>> value_games(std::span<const Game> games, const Model& scores,
                                                  const Model& concedes);
}

// Maximal run of consecutive valued actions after which the same team has
// the ball, within one period.
struct PossessionChain {
  std::string team;
  bool home = false;
  int period = 1;
  std::size_t first = 0;  // positions into the value list
  std::size_t last = 0;
  double total = 0.0;     // sum of V over the chain
};

struct GameDecomposition {
  std::vector<PossessionChain> chains;
  std::size_t argmax = 0;  // positions of the highest and lowest valued actions
  std::size_t argmin = 0;
};

GameDecomposition attack_decomposition(const Game& g, const std::vector<ActionValue>& values);

// (P_own(end) - P_own(before first)) - (P_opp(end) - P_opp(before first)),
// which the chain's summed values telescope to.
double chain_endpoint_delta(const StateProbabilities& probs, const PossessionChain& chain);

// game_id, action_id, player_id, team_id, action_type, offensive, defensive, total
void write_values_csv(std::ostream& out, const std::vector<ActionValue>& values);
std::vector<ActionValue> read_values_csv(const std::filesystem::path& path);

}  // namespace vaep
