#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vaep/spadl.hpp"
#include "vaep/spadl_io.hpp"
#include "vaep/valuation.hpp"

namespace vaep {

// Action values are summed as integers in units of 2^-40 so that totals do
// not depend on grouping or summation order. Any total below 2^12 in
// magnitude converts back to a double exactly, which keeps sums of
// dequantized parts equal to the dequantized whole.
inline constexpr double kValueUnit = 0x1.0p-40;
std::int64_t quantize(double v);
double dequantize(std::int64_t q);

struct PlayerRating {
  std::string player_id;
  std::string team_id;     // modal team over the window
  std::string position;    // modal position over the window
  std::string birth_date;  // YYYY-MM-DD or empty
  std::string window;
  double minutes = 0.0;
  std::size_t games = 0;
  std::size_t actions = 0;
  double total_value = 0.0;
  double rating_per90 = 0.0;
  double actions_per90 = 0.0;
  double mean_value_per_action = 0.0;
  std::map<ActionType, double> per_type;  // summed values; every on-ball type present
};

// Rating for `player_id` from the values of their actions in `values`.
// Throws ZeroMinutes when minutes <= 0.
PlayerRating player_rating(const std::string& player_id, std::span<const ActionValue> values, double minutes,
                           const std::string& window = "");

// Ratings of every player with positive minutes in `appearances`. A player
// with valued actions but no minutes raises ZeroMinutes. Sorted by player id.
std::vector<PlayerRating> rate_players(std::span<const ActionValue> values,
                                       std::span<const io::Appearance> appearances, const std::string& window = "");
namespace serial {
std::vector<PlayerRating> rate_players(std::span<const ActionValue> values,
                                       std::span<const io::Appearance> appearances, const std::string& window = "");
}

struct LeaderboardFilter {
  double min_minutes = 0.0;
  std::optional<std::string> position;    // exact position label, or a line name GK/DEF/MID/FWD
  std::optional<std::string> born_after;  // YYYY-MM-DD; players born on or after the date
  std::set<std::string> excluded_teams;
  std::size_t limit = 0;                  // 0: no limit
};

// Descending rating_per90, ties by player id ascending.
std::vector<PlayerRating> leaderboard(std::vector<PlayerRating> ratings, const LeaderboardFilter& filter = {});

// Per-90 value of each requested type; an empty list means all on-ball types.
std::vector<std::pair<ActionType, double>> action_type_profile(std::span<const ActionValue> values, double minutes,
                                                               std::span<const ActionType> types = {});

// Trailing mean over the last min(window, t + 1) points.
std::vector<double> moving_average(std::span<const double> series, int window = 15);

struct TeamGameRating {
  std::string game_id;
  std::string team_id;
  double rating = 0.0;
};

// One entry per (game, team) seen in `values`, in order of first appearance
// of the game, home/away order within a game following first appearance.
std::vector<TeamGameRating> team_ratings(std::span<const ActionValue> values);

// Sum of each player's values per game: (game_id, player_id) -> total.
std::map<std::pair<std::string, std::string>, double> player_game_totals(std::span<const ActionValue> values);

enum class Line { goalkeeper, defender, midfielder, forward, unclassified };
inline constexpr std::size_t kLineCount = 5;
std::string_view to_string(Line l);
Line line_of(std::string_view position);

struct LineContribution {
  std::string team_id;
  std::size_t games = 0;
  std::array<double, kLineCount> totals{};  // exact partition of team_total
  std::array<double, kLineCount> per_game{};
  double team_total = 0.0;
  double team_per_game = 0.0;
};

// Per team, values split by the line of the acting player's position in that
// game; players without a known position land in `unclassified`.
std::vector<LineContribution> line_contributions(std::span<const ActionValue> values,
                                                 std::span<const io::Appearance> appearances);

// Per-game value series of one player or team, in order of game appearance.
std::vector<std::pair<std::string, double>> player_series(std::span<const ActionValue> values,
                                                          const std::string& player_id);
std::vector<std::pair<std::string, double>> team_series(std::span<const ActionValue> values,
                                                        const std::string& team_id);

void write_leaderboard_csv(std::ostream& out, const std::vector<PlayerRating>& rows);
std::string profiles_to_json(const std::vector<PlayerRating>& ratings);

}  // namespace vaep
