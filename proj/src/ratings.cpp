#include "vaep/ratings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <ostream>
#include <set>

#include <json.hpp>

#include "vaep/csv.hpp"
#include "vaep/errors.hpp"

namespace vaep {

std::int64_t quantize(double v) { return std::llround(v / kValueUnit); }
double dequantize(std::int64_t q) { return double(q) * kValueUnit; }

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = char(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Most frequent label; ties go to the lexicographically smallest.
std::string modal(const std::map<std::string, double>& counts) {
  std::string best;
  double best_n = -1.0;
  for (const auto& [label, n] : counts) {
    if (n > best_n) {
      best = label;
      best_n = n;
    }
  }
  return best;
}

struct PlayerMeta {
  double minutes = 0.0;
  std::size_t games = 0;
  std::map<std::string, double> positions;  // weighted by minutes
  std::map<std::string, double> teams;
  std::string birth_date;
};

std::map<std::string, PlayerMeta> collect_meta(std::span<const io::Appearance> appearances) {
  std::map<std::string, PlayerMeta> meta;
  for (const auto& a : appearances) {
    auto& m = meta[a.player_id];
    m.minutes += a.minutes;
    if (a.minutes > 0) m.games += 1;
    if (!a.position.empty()) m.positions[a.position] += a.minutes;
    m.teams[a.team_id] += a.minutes;
    if (m.birth_date.empty()) m.birth_date = a.birth_date;
  }
  return meta;
}

template <class Key>
struct OrderedSums {
  std::vector<Key> order;
  std::map<Key, std::int64_t> sums;
  void add(const Key& k, double v) {
    auto [it, inserted] = sums.try_emplace(k, 0);
    if (inserted) order.push_back(k);
    it->second += quantize(v);
  }
};

std::vector<PlayerRating> rate_players_impl(std::span<const ActionValue> values,
                                            std::span<const io::Appearance> appearances, const std::string& window,
                                            bool parallel) {
  const auto meta = collect_meta(appearances);
  std::map<std::string, std::vector<ActionValue>> by_player;
  for (const auto& v : values) by_player[v.player_id].push_back(v);
  for (const auto& [player, vs] : by_player) {
    const auto it = meta.find(player);
    if (it == meta.end() || it->second.minutes <= 0.0) throw errors::zero_minutes(player);
  }

  std::vector<const std::string*> players;
  for (const auto& [player, m] : meta)
    if (m.minutes > 0.0) players.push_back(&player);
  std::vector<PlayerRating> out(players.size());
  static const std::vector<ActionValue> kNone;
  const auto rate_one = [&](std::size_t i) {
    const std::string& id = *players[i];
    const auto& m = meta.at(id);
    const auto vs = by_player.find(id);
    const auto& mine = vs == by_player.end() ? kNone : vs->second;
    PlayerRating r = player_rating(id, mine, m.minutes, window);
    r.games = m.games;
    r.position = modal(m.positions);
    r.team_id = modal(m.teams);
    r.birth_date = m.birth_date;
    out[i] = std::move(r);
  };
  const auto n = static_cast<std::ptrdiff_t>(players.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) rate_one(std::size_t(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) rate_one(std::size_t(i));
  }
  return out;
}

}  // namespace

PlayerRating player_rating(const std::string& player_id, std::span<const ActionValue> values, double minutes,
                           const std::string& window) {
  if (!(minutes > 0.0)) throw errors::zero_minutes(player_id);
  PlayerRating r;
  r.player_id = player_id;
  r.window = window;
  r.minutes = minutes;
  std::map<ActionType, std::int64_t> per_type;
  for (const auto t : all_action_types())
    if (is_on_ball(t)) per_type[t] = 0;
  std::int64_t total = 0;
  for (const auto& v : values) {
    if (v.player_id != player_id) continue;
    const auto q = quantize(v.total);
    per_type[v.type] += q;
    total += q;
    r.actions += 1;
    if (r.team_id.empty()) r.team_id = v.team_id;
  }
  for (const auto& [t, q] : per_type) r.per_type[t] = dequantize(q);
  r.total_value = dequantize(total);
  r.rating_per90 = r.total_value * 90.0 / minutes;
  r.actions_per90 = double(r.actions) * 90.0 / minutes;
  r.mean_value_per_action = r.actions ? r.total_value / double(r.actions) : 0.0;
  return r;
}

std::vector<PlayerRating> rate_players(std::span<const ActionValue> values,
                                       std::span<const io::Appearance> appearances, const std::string& window) {
  return rate_players_impl(values, appearances, window, true);
}

namespace serial {
std::vector<PlayerRating> rate_players(std::span<const ActionValue> values,
                                       std::span<const io::Appearance> appearances, const std::string& window) {
  return rate_players_impl(values, appearances, window, false);
}
}  // namespace serial

std::vector<PlayerRating> leaderboard(std::vector<PlayerRating> ratings, const LeaderboardFilter& filter) {
  std::optional<Line> line;
  if (filter.position) {
    const auto p = upper(*filter.position);
    if (p == "DEF") line = Line::defender;
    if (p == "MID") line = Line::midfielder;
    if (p == "FWD") line = Line::forward;
  }
  std::vector<PlayerRating> kept;
  for (auto& r : ratings) {
    if (r.minutes < filter.min_minutes) continue;
    if (filter.position) {
      const bool match = line ? line_of(r.position) == *line : upper(r.position) == upper(*filter.position);
      if (!match) continue;
    }
    if (filter.born_after && (r.birth_date.empty() || r.birth_date < *filter.born_after)) continue;
    if (filter.excluded_teams.count(r.team_id)) continue;
    kept.push_back(std::move(r));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const PlayerRating& a, const PlayerRating& b) {
    if (a.rating_per90 != b.rating_per90) return a.rating_per90 > b.rating_per90;
    return a.player_id < b.player_id;
  });
  if (filter.limit && kept.size() > filter.limit) kept.resize(filter.limit);
  return kept;
}

std::vector<std::pair<ActionType, double>> action_type_profile(std::span<const ActionValue> values, double minutes,
                                                               std::span<const ActionType> types) {
  if (!(minutes > 0.0)) throw errors::zero_minutes(values.empty() ? std::string("<unknown>") : values[0].player_id);
  std::map<ActionType, std::int64_t> sums;
  for (const auto& v : values) sums[v.type] += quantize(v.total);
  std::vector<ActionType> wanted(types.begin(), types.end());
  if (wanted.empty())
    for (const auto t : all_action_types())
      if (is_on_ball(t)) wanted.push_back(t);
  std::vector<std::pair<ActionType, double>> out;
  for (const auto t : wanted) {
    const auto it = sums.find(t);
    const double total = it == sums.end() ? 0.0 : dequantize(it->second);
    out.emplace_back(t, total * 90.0 / minutes);
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> series, int window) {
  if (window < 1) throw errors::invalid_argument("ratings", "moving average window must be >= 1");
  std::vector<double> out;
  out.reserve(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    const std::size_t lo = t + 1 >= std::size_t(window) ? t + 1 - std::size_t(window) : 0;
    double s = 0.0;
    for (std::size_t j = lo; j <= t; ++j) s += series[j];
    out.push_back(s / double(t + 1 - lo));
  }
  return out;
}

std::vector<TeamGameRating> team_ratings(std::span<const ActionValue> values) {
  OrderedSums<std::pair<std::string, std::string>> sums;
  for (const auto& v : values) sums.add({v.game_id, v.team_id}, v.total);
  // Group by game while keeping the first-appearance order of games.
  std::vector<std::string> games;
  for (const auto& [g, t] : sums.order)
    if (std::find(games.begin(), games.end(), g) == games.end()) games.push_back(g);
  std::vector<TeamGameRating> out;
  for (const auto& g : games)
    for (const auto& key : sums.order)
      if (key.first == g) out.push_back({key.first, key.second, dequantize(sums.sums.at(key))});
  return out;
}

std::map<std::pair<std::string, std::string>, double> player_game_totals(std::span<const ActionValue> values) {
  std::map<std::pair<std::string, std::string>, std::int64_t> q;
  for (const auto& v : values) q[{v.game_id, v.player_id}] += quantize(v.total);
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& [k, s] : q) out[k] = dequantize(s);
  return out;
}

std::string_view to_string(Line l) {
  switch (l) {
    case Line::goalkeeper: return "GK";
    case Line::defender: return "DEF";
    case Line::midfielder: return "MID";
    case Line::forward: return "FWD";
    case Line::unclassified: break;
  }
  return "unclassified";
}

Line line_of(std::string_view position) {
  static const std::map<std::string, Line> kLines{
      {"GK", Line::goalkeeper},  {"CB", Line::defender},   {"LB", Line::defender},   {"RB", Line::defender},
      {"LWB", Line::defender},   {"RWB", Line::defender},  {"SW", Line::defender},   {"DF", Line::defender},
      {"DEF", Line::defender},   {"DM", Line::midfielder}, {"CDM", Line::midfielder}, {"CM", Line::midfielder},
      {"LM", Line::midfielder},  {"RM", Line::midfielder}, {"AM", Line::midfielder}, {"CAM", Line::midfielder},
      {"MF", Line::midfielder},  {"MID", Line::midfielder}, {"LW", Line::forward},   {"RW", Line::forward},
      {"ST", Line::forward},     {"CF", Line::forward},    {"SS", Line::forward},    {"FW", Line::forward},
      {"FWD", Line::forward},
  };
  const auto it = kLines.find(upper(position));
  return it == kLines.end() ? Line::unclassified : it->second;
}

std::vector<LineContribution> line_contributions(std::span<const ActionValue> values,
                                                 std::span<const io::Appearance> appearances) {
  std::map<std::pair<std::string, std::string>, std::string> position;  // (game, player)
  std::map<std::string, std::set<std::string>> team_games;
  for (const auto& a : appearances) {
    position[{a.game_id, a.player_id}] = a.position;
    if (a.minutes > 0) team_games[a.team_id].insert(a.game_id);
  }
  std::map<std::string, std::array<std::int64_t, kLineCount>> sums;
  for (const auto& v : values) {
    team_games[v.team_id].insert(v.game_id);
    const auto it = position.find({v.game_id, v.player_id});
    const Line l = it == position.end() ? Line::unclassified : line_of(it->second);
    auto [s, inserted] = sums.try_emplace(v.team_id);
    if (inserted) s->second.fill(0);
    s->second[std::size_t(l)] += quantize(v.total);
  }
  std::vector<LineContribution> out;
  for (const auto& [team, games] : team_games) {
    LineContribution c;
    c.team_id = team;
    c.games = games.size();
    std::int64_t total = 0;
    const auto s = sums.find(team);
    for (std::size_t l = 0; l < kLineCount; ++l) {
      const std::int64_t q = s == sums.end() ? 0 : s->second[l];
      total += q;
      c.totals[l] = dequantize(q);
      c.per_game[l] = c.games ? c.totals[l] / double(c.games) : 0.0;
    }
    c.team_total = dequantize(total);
    c.team_per_game = c.games ? c.team_total / double(c.games) : 0.0;
    out.push_back(c);
  }
  return out;
}

namespace {
std::vector<std::pair<std::string, double>> series_where(std::span<const ActionValue> values,
                                                         const std::function<bool(const ActionValue&)>& keep) {
  OrderedSums<std::string> sums;
  for (const auto& v : values)
    if (keep(v)) sums.add(v.game_id, v.total);
  std::vector<std::pair<std::string, double>> out;
  for (const auto& g : sums.order) out.emplace_back(g, dequantize(sums.sums.at(g)));
  return out;
}
}  // namespace

std::vector<std::pair<std::string, double>> player_series(std::span<const ActionValue> values,
                                                          const std::string& player_id) {
  return series_where(values, [&](const ActionValue& v) { return v.player_id == player_id; });
}

std::vector<std::pair<std::string, double>> team_series(std::span<const ActionValue> values,
                                                        const std::string& team_id) {
  return series_where(values, [&](const ActionValue& v) { return v.team_id == team_id; });
}

void write_leaderboard_csv(std::ostream& out, const std::vector<PlayerRating>& rows) {
  out << "rank,player_id,team_id,position,minutes,games,actions,total_value,rating_per90,actions_per90,"
         "mean_value_per_action\n";
  std::size_t rank = 0;
  for (const auto& r : rows) {
    out << ++rank << ',' << io::csv_escape(r.player_id) << ',' << io::csv_escape(r.team_id) << ','
        << io::csv_escape(r.position) << ',' << io::format_double(r.minutes) << ',' << r.games << ',' << r.actions
        << ',' << io::format_double(r.total_value) << ',' << io::format_double(r.rating_per90) << ','
        << io::format_double(r.actions_per90) << ',' << io::format_double(r.mean_value_per_action) << '\n';
  }
}

std::string profiles_to_json(const std::vector<PlayerRating>& ratings) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : ratings) {
    nlohmann::ordered_json j;
    j["player_id"] = r.player_id;
    j["team_id"] = r.team_id;
    j["position"] = r.position;
    j["minutes"] = r.minutes;
    j["total_value"] = r.total_value;
    j["rating_per90"] = r.rating_per90;
    nlohmann::ordered_json types = nlohmann::ordered_json::object();
    for (const auto& [t, v] : r.per_type) types[std::string(to_string(t))] = v * 90.0 / r.minutes;
    j["per90_by_type"] = std::move(types);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace vaep
