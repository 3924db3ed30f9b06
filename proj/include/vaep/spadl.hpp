#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vaep {

inline constexpr double kPitchLength = 105.0;
inline constexpr double kPitchWidth = 68.0;
inline constexpr double kGoalX = kPitchLength;
inline constexpr double kGoalY = kPitchWidth / 2.0;

// The 21 on-the-ball action types followed by the one off-the-ball type.
// Enumerator order is the one-hot column order of the feature encoder.
enum class ActionType : std::uint8_t {
  pass,
  cross,
  throw_in,
  crossed_corner,
  short_corner,
  crossed_free_kick,
  short_free_kick,
  take_on,
  foul,
  tackle,
  interception,
  shot,
  shot_penalty,
  shot_free_kick,
  keeper_save,
  keeper_claim,
  keeper_punch,
  keeper_pick_up,
  clearance,
  bad_touch,
  dribble,
  run_without_ball,
};
inline constexpr std::size_t kActionTypeCount = 22;
inline constexpr std::size_t kOnBallTypeCount = 21;

enum class BodyPart : std::uint8_t { foot, head, other, none };
inline constexpr std::size_t kBodyPartCount = 4;

enum class ActionResult : std::uint8_t { success, fail, offside, own_goal, yellow_card, red_card };
inline constexpr std::size_t kResultCount = 6;

std::string_view to_string(ActionType t);
std::string_view to_string(BodyPart b);
std::string_view to_string(ActionResult r);
std::optional<ActionType> parse_action_type(std::string_view name);
std::optional<BodyPart> parse_body_part(std::string_view name);
std::optional<ActionResult> parse_result(std::string_view name);

std::array<ActionType, kActionTypeCount> all_action_types();

// What a type must achieve to count as a success (catalog "Successful?" column).
enum class SuccessRule { reaches_teammate, keeps_possession, regains_possession, goal,
                         holds_ball, always_success, always_fail };

struct ActionTypeInfo {
  ActionType type;
  std::string_view description;
  SuccessRule success_rule;
  std::uint8_t legal_results;     // bitmask over ActionResult
  std::uint8_t legal_body_parts;  // bitmask over BodyPart
};

const ActionTypeInfo& catalog_entry(ActionType t);
bool result_allowed(ActionType t, ActionResult r);
bool body_part_allowed(ActionType t, BodyPart b);

constexpr bool is_on_ball(ActionType t) { return t != ActionType::run_without_ball; }
constexpr bool is_shot(ActionType t) {
  return t == ActionType::shot || t == ActionType::shot_penalty || t == ActionType::shot_free_kick;
}
constexpr bool is_pass_like(ActionType t) {
  switch (t) {
    case ActionType::pass:
    case ActionType::cross:
    case ActionType::throw_in:
    case ActionType::crossed_corner:
    case ActionType::short_corner:
    case ActionType::crossed_free_kick:
    case ActionType::short_free_kick:
      return true;
    default:
      return false;
  }
}

struct Action {
  std::string game_id;
  std::int64_t action_id = 0;
  int period = 1;
  double start_time = 0.0;  // seconds from game start
  double end_time = 0.0;
  double start_x = 0.0;  // meters, [0, 105]
  double start_y = 0.0;  // meters, [0, 68]
  double end_x = 0.0;
  double end_y = 0.0;
  std::string player_id;
  std::string team_id;
  ActionType type = ActionType::pass;
  BodyPart body_part = BodyPart::foot;
  ActionResult result = ActionResult::success;

  bool operator==(const Action&) const = default;
};

// Every broken invariant of a single action, as readable messages.
std::vector<std::string> validate_action(const Action& a);

struct PlayerInfo {
  std::string team_id;
  double minutes = 0.0;
  std::string position;
  std::string birth_date;  // ISO yyyy-mm-dd, optional

  bool operator==(const PlayerInfo&) const = default;
};

struct GameMetadata {
  std::string game_id;
  std::string home_team_id;
  std::string away_team_id;
  std::map<std::string, PlayerInfo> players;
  // Whether the home team attacks toward x = 105 in period 1 and 2. The away
  // team always attacks the other way.
  std::array<bool, 2> home_attacks_right{true, false};
  std::optional<std::pair<int, int>> score;  // (home, away)

  bool operator==(const GameMetadata&) const = default;
};

// An ordered, validated action sequence plus per-game metadata. Immutable once
// built; obtain one through build_game.
class Game {
 public:
  Game() = default;

  const std::string& game_id() const { return meta_.game_id; }
  const std::string& home_team_id() const { return meta_.home_team_id; }
  const std::string& away_team_id() const { return meta_.away_team_id; }
  const std::vector<Action>& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }
  const Action& operator[](std::size_t i) const { return actions_[i]; }
  const GameMetadata& metadata() const { return meta_; }
  const std::map<std::string, PlayerInfo>& players() const { return meta_.players; }

  bool is_home(std::string_view team) const { return team == meta_.home_team_id; }
  const std::string& opponent(std::string_view team) const;
  // +1 when `team` attacks toward x = 105 in `period`, -1 otherwise.
  int attack_direction(std::string_view team, int period) const;

  bool operator==(const Game&) const = default;

 private:
  friend Game build_game(std::vector<Action> actions, GameMetadata metadata);
  std::vector<Action> actions_;
  GameMetadata meta_;
};

// Sorts by (period, start_time, action_id), renumbers ordinals 0..m-1 and
// checks game-level invariants. Throws DuplicateOrdinal, UnknownTeam,
// UnsortableTimestamps, MixedGames or ScoreMismatch.
Game build_game(std::vector<Action> actions, GameMetadata metadata);

struct GoalEvent {
  std::size_t action_index;
  std::string scoring_team;

  bool operator==(const GoalEvent&) const = default;
};

std::vector<GoalEvent> goal_events(const Game& g);

// (home goals, away goals) reconstructed from goal_events.
std::pair<int, int> reconstructed_score(const Game& g);

// Same game with home and away exchanged and kickoff directions transposed;
// every action keeps its team.
Game swap_sides(const Game& g);

}  // namespace vaep
