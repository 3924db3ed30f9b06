#include "vaep/spadl.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vaep/errors.hpp"

namespace vaep {
namespace {

constexpr std::array<std::string_view, kActionTypeCount> kTypeNames{
    "pass",          "cross",         "throw_in",     "crossed_corner", "short_corner",
    "crossed_free_kick", "short_free_kick", "take_on", "foul",          "tackle",
    "interception",  "shot",          "shot_penalty", "shot_free_kick", "keeper_save",
    "keeper_claim",  "keeper_punch",  "keeper_pick_up", "clearance",    "bad_touch",
    "dribble",       "run_without_ball"};
constexpr std::array<std::string_view, kBodyPartCount> kBodyPartNames{"foot", "head", "other",
                                                                      "none"};
constexpr std::array<std::string_view, kResultCount> kResultNames{
    "success", "fail", "offside", "own_goal", "yellow_card", "red_card"};

constexpr std::uint8_t bit(ActionResult r) { return std::uint8_t(1u << unsigned(r)); }
constexpr std::uint8_t bit(BodyPart b) { return std::uint8_t(1u << unsigned(b)); }

using R = ActionResult;
using B = BodyPart;
using T = ActionType;
using S = SuccessRule;

constexpr std::uint8_t kPassResults = bit(R::success) | bit(R::fail) | bit(R::offside);
constexpr std::uint8_t kWinLose = bit(R::success) | bit(R::fail);
constexpr std::uint8_t kCards = bit(R::yellow_card) | bit(R::red_card);
constexpr std::uint8_t kShotResults = bit(R::success) | bit(R::fail) | bit(R::own_goal);
constexpr std::uint8_t kOnlySuccess = bit(R::success);
constexpr std::uint8_t kAnyBody = bit(B::foot) | bit(B::head) | bit(B::other) | bit(B::none);
constexpr std::uint8_t kFootOrNone = bit(B::foot) | bit(B::none);
constexpr std::uint8_t kNoHead = bit(B::foot) | bit(B::other) | bit(B::none);

// Legality table. Clearances additionally admit own_goal so that a defender
// putting the ball into their own net can be represented.
constexpr std::array<ActionTypeInfo, kActionTypeCount> kCatalog{{
    {T::pass, "Normal pass in open play", S::reaches_teammate, kPassResults, kAnyBody},
    {T::cross, "Cross into the box", S::reaches_teammate, kPassResults, kAnyBody},
    {T::throw_in, "Throw-in", S::reaches_teammate, kWinLose, kNoHead},
    {T::crossed_corner, "Corner crossed into the box", S::reaches_teammate, kPassResults, kAnyBody},
    {T::short_corner, "Short corner", S::reaches_teammate, kPassResults, kAnyBody},
    {T::crossed_free_kick, "Free kick crossed into the box", S::reaches_teammate, kPassResults,
     kAnyBody},
    {T::short_free_kick, "Short free-kick", S::reaches_teammate, kPassResults, kAnyBody},
    {T::take_on, "Dribble past opponent", S::keeps_possession, kWinLose, kAnyBody},
    {T::foul, "Foul", S::always_fail, std::uint8_t(bit(R::fail) | kCards), kAnyBody},
    {T::tackle, "Tackle on the ball", S::regains_possession, std::uint8_t(kWinLose | kCards),
     kAnyBody},
    {T::interception, "Interception of the ball", S::always_success, kOnlySuccess, kAnyBody},
    {T::shot, "Shot attempt not from penalty or free-kick", S::goal, kShotResults, kAnyBody},
    {T::shot_penalty, "Penalty shot", S::goal, kShotResults, kAnyBody},
    {T::shot_free_kick, "Direct free-kick on goal", S::goal, kShotResults, kAnyBody},
    {T::keeper_save, "Keeper saves a shot on goal", S::always_success, kOnlySuccess, kFootOrNone},
    {T::keeper_claim, "Keeper catches a cross", S::holds_ball, kWinLose, kFootOrNone},
    {T::keeper_punch, "Keeper punches the ball clear", S::always_success, kOnlySuccess,
     kFootOrNone},
    {T::keeper_pick_up, "Keeper picks up the ball", S::always_success, kOnlySuccess, kFootOrNone},
    {T::clearance, "Player clearance", S::always_success,
     std::uint8_t(bit(R::success) | bit(R::own_goal)), kAnyBody},
    {T::bad_touch, "Player makes a bad touch and loses the ball", S::always_fail, bit(R::fail),
     kAnyBody},
    {T::dribble, "Player dribbles at least 3 meters with the ball", S::always_success,
     kOnlySuccess, kFootOrNone},
    {T::run_without_ball, "Player runs without the ball", S::always_success, kOnlySuccess,
     kAnyBody},
}};

template <std::size_t N, class E>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<E>(i);
  }
  return std::nullopt;
}

bool in_range(double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; }

}  // namespace

std::string_view to_string(ActionType t) { return kTypeNames[std::size_t(t)]; }
std::string_view to_string(BodyPart b) { return kBodyPartNames[std::size_t(b)]; }
std::string_view to_string(ActionResult r) { return kResultNames[std::size_t(r)]; }

std::optional<ActionType> parse_action_type(std::string_view name) {
  return lookup<kActionTypeCount, ActionType>(kTypeNames, name);
}
std::optional<BodyPart> parse_body_part(std::string_view name) {
  return lookup<kBodyPartCount, BodyPart>(kBodyPartNames, name);
}
std::optional<ActionResult> parse_result(std::string_view name) {
  return lookup<kResultCount, ActionResult>(kResultNames, name);
}

std::array<ActionType, kActionTypeCount> all_action_types() {
  std::array<ActionType, kActionTypeCount> out{};
  for (std::size_t i = 0; i < kActionTypeCount; ++i) out[i] = static_cast<ActionType>(i);
  return out;
}

const ActionTypeInfo& catalog_entry(ActionType t) { return kCatalog[std::size_t(t)]; }

bool result_allowed(ActionType t, ActionResult r) {
  return (catalog_entry(t).legal_results & bit(r)) != 0;
}

bool body_part_allowed(ActionType t, BodyPart b) {
  return (catalog_entry(t).legal_body_parts & bit(b)) != 0;
}

std::vector<std::string> validate_action(const Action& a) {
  std::vector<std::string> out;
  const std::string type{to_string(a.type)};

  if (std::size_t(a.type) >= kActionTypeCount) out.push_back("unknown action type");
  if (a.period != 1 && a.period != 2) out.push_back("period must be 1 or 2");
  if (!std::isfinite(a.start_time) || a.start_time < 0) out.push_back("start_time must be non-negative");
  if (!std::isfinite(a.end_time) || a.end_time < 0) out.push_back("end_time must be non-negative");
  if (a.end_time < a.start_time) out.push_back("end_time before start_time");
  if (!in_range(a.start_x, 0, kPitchLength)) out.push_back("start_x out of pitch bounds");
  if (!in_range(a.start_y, 0, kPitchWidth)) out.push_back("start_y out of pitch bounds");
  if (!in_range(a.end_x, 0, kPitchLength)) out.push_back("end_x out of pitch bounds");
  if (!in_range(a.end_y, 0, kPitchWidth)) out.push_back("end_y out of pitch bounds");
  if (a.player_id.empty()) out.push_back("player_id is empty");
  if (a.team_id.empty()) out.push_back("team_id is empty");
  if (!out.empty() && out.front() == "unknown action type") return out;

  if (!result_allowed(a.type, a.result)) {
    switch (catalog_entry(a.type).success_rule) {
      case SuccessRule::always_success:
        if (a.result == ActionResult::fail) {
          out.push_back(type + " is always success");
          break;
        }
        [[fallthrough]];
      case SuccessRule::always_fail:
        if (a.result == ActionResult::success) {
          out.push_back(type + " is always fail");
          break;
        }
        [[fallthrough]];
      default:
        out.push_back("result " + std::string(to_string(a.result)) + " is not legal for " + type);
    }
  }
  if (!body_part_allowed(a.type, a.body_part)) {
    out.push_back("body part " + std::string(to_string(a.body_part)) + " is not legal for " + type);
  }
  return out;
}

const std::string& Game::opponent(std::string_view team) const {
  return team == meta_.home_team_id ? meta_.away_team_id : meta_.home_team_id;
}

int Game::attack_direction(std::string_view team, int period) const {
  const bool home_right = meta_.home_attacks_right[period == 2 ? 1 : 0];
  const bool right = is_home(team) ? home_right : !home_right;
  return right ? 1 : -1;
}

Game build_game(std::vector<Action> actions, GameMetadata metadata) {
  if (metadata.home_team_id.empty() || metadata.away_team_id.empty() ||
      metadata.home_team_id == metadata.away_team_id) {
    throw errors::invalid_argument("spadl", "game needs two distinct team ids");
  }
  std::set<std::int64_t> ordinals;
  for (const auto& a : actions) {
    if (metadata.game_id.empty()) metadata.game_id = a.game_id;
    if (a.game_id != metadata.game_id) throw errors::mixed_games(metadata.game_id, a.game_id);
    if (a.team_id != metadata.home_team_id && a.team_id != metadata.away_team_id) {
      throw errors::unknown_team(a.team_id);
    }
    if (!ordinals.insert(a.action_id).second) throw errors::duplicate_ordinal(a.action_id);
    if (!std::isfinite(a.start_time) || !std::isfinite(a.end_time)) {
      throw errors::unsortable_timestamps("action " + std::to_string(a.action_id) +
                                          " has a non-finite timestamp");
    }
    if (a.period != 1 && a.period != 2) {
      throw errors::unsortable_timestamps("action " + std::to_string(a.action_id) +
                                          " has period " + std::to_string(a.period));
    }
  }
  std::sort(actions.begin(), actions.end(), [](const Action& l, const Action& r) {
    if (l.period != r.period) return l.period < r.period;
    if (l.start_time != r.start_time) return l.start_time < r.start_time;
    return l.action_id < r.action_id;
  });
  for (std::size_t i = 0; i < actions.size(); ++i) actions[i].action_id = std::int64_t(i);

  Game g;
  g.actions_ = std::move(actions);
  g.meta_ = std::move(metadata);
  if (g.meta_.score) {
    const auto rebuilt = reconstructed_score(g);
    if (rebuilt != *g.meta_.score) {
      throw errors::score_mismatch(
          "stored score " + std::to_string(g.meta_.score->first) + "-" +
          std::to_string(g.meta_.score->second) + " but goal actions give " +
          std::to_string(rebuilt.first) + "-" + std::to_string(rebuilt.second));
    }
  }
  return g;
}

std::vector<GoalEvent> goal_events(const Game& g) {
  std::vector<GoalEvent> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Action& a = g[i];
    if (a.result == ActionResult::own_goal) {
      out.push_back({i, g.opponent(a.team_id)});
    } else if (is_shot(a.type) && a.result == ActionResult::success) {
      out.push_back({i, a.team_id});
    }
  }
  return out;
}

std::pair<int, int> reconstructed_score(const Game& g) {
  std::pair<int, int> score{0, 0};
  for (const auto& e : goal_events(g)) {
    (g.is_home(e.scoring_team) ? score.first : score.second) += 1;
  }
  return score;
}

Game swap_sides(const Game& g) {
  GameMetadata meta = g.metadata();
  std::swap(meta.home_team_id, meta.away_team_id);
  meta.home_attacks_right = {!meta.home_attacks_right[0], !meta.home_attacks_right[1]};
  if (meta.score) meta.score = std::pair{meta.score->second, meta.score->first};
  return build_game(g.actions(), std::move(meta));
}

}  // namespace vaep
