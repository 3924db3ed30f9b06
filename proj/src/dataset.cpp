#include "vaep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "vaep/csv.hpp"
#include "vaep/errors.hpp"

namespace vaep {
namespace {

struct Point {
  double x, y;
};

// Coordinates of `a` in the frame where `team` attacks toward x = 105.
struct Normalized {
  Point start, end;
};

Normalized normalize(const Game& g, const Action& a, const std::string& team) {
  if (g.attack_direction(team, a.period) > 0) {
    return {{a.start_x, a.start_y}, {a.end_x, a.end_y}};
  }
  return {{kPitchLength - a.start_x, kPitchWidth - a.start_y},
          {kPitchLength - a.end_x, kPitchWidth - a.end_y}};
}

double dist_to_goal(Point p) { return std::hypot(kGoalX - p.x, kGoalY - p.y); }
double angle_to_goal(Point p) { return std::atan2(std::abs(kGoalY - p.y), std::abs(kGoalX - p.x)); }

void check_window(int w) {
  if (w < 1) throw errors::invalid_argument("dataset", "window size must be >= 1");
}

std::vector<std::string> names_for_window(int w) {
  std::vector<std::string> names;
  names.reserve(feature_count(w));
  for (int j = 0; j < w; ++j) {
    const std::string p = "a" + std::to_string(j) + "_";
    for (std::size_t t = 0; t < kOnBallTypeCount; ++t) {
      names.push_back(p + "type_" + std::string(to_string(static_cast<ActionType>(t))));
    }
    for (std::size_t r = 0; r < kResultCount; ++r) {
      names.push_back(p + "result_" + std::string(to_string(static_cast<ActionResult>(r))));
    }
    for (std::size_t b = 0; b < kBodyPartCount; ++b) {
      names.push_back(p + "bodypart_" + std::string(to_string(static_cast<BodyPart>(b))));
    }
    for (const char* n : {"start_x", "start_y", "end_x", "end_y", "time_elapsed",
                          "start_dist_to_goal", "start_angle_to_goal", "end_dist_to_goal",
                          "end_angle_to_goal", "dx", "dy"}) {
      names.push_back(p + n);
    }
  }
  for (int j = 0; j + 1 < w; ++j) {
    const std::string p = "a" + std::to_string(j) + "_a" + std::to_string(j + 1) + "_";
    for (const char* n : {"space_delta", "time_delta", "possession_change"}) names.push_back(p + n);
  }
  for (const char* n : {"goals_scored_possessing", "goals_scored_defending", "goal_difference"}) {
    names.emplace_back(n);
  }
  return names;
}

}  // namespace

std::vector<std::size_t> on_ball_indices(const Game& g) {
  std::vector<std::size_t> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (is_on_ball(g[i].type)) out.push_back(i);
  }
  return out;
}

bool keeps_possession(const Action& a) {
  switch (a.result) {
    case ActionResult::fail:
    case ActionResult::offside:
    case ActionResult::yellow_card:
    case ActionResult::red_card:
      return false;
    default:
      return true;
  }
}

const std::string& possessing_team_after(const Game& g, std::size_t index) {
  const Action& a = g[index];
  return keeps_possession(a) ? a.team_id : g.opponent(a.team_id);
}

std::vector<GameState> gamestates(const Game& g, int w) {
  check_window(w);
  const auto idx = on_ball_indices(g);
  std::vector<GameState> states;
  states.reserve(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    GameState s;
    s.game_id = g.game_id();
    s.index = idx[p];
    s.period = g[idx[p]].period;
    s.possessing_team = possessing_team_after(g, idx[p]);
    s.window.resize(std::size_t(w));
    for (int j = 0; j < w; ++j) {
      // window[w-1] is a_i, window[w-1-back] is a_{i-back}, clamped at the start.
      const std::size_t back = std::size_t(w - 1 - j);
      s.window[std::size_t(j)] = idx[p >= back ? p - back : 0];
    }
    states.push_back(std::move(s));
  }
  return states;
}

GameState baseline_state(const Game& g, int period, int w) {
  check_window(w);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].period == period && is_on_ball(g[i].type)) {
      GameState s;
      s.game_id = g.game_id();
      s.index = i;
      s.period = period;
      s.possessing_team = possessing_team_after(g, i);
      s.window.assign(std::size_t(w), i);
      return s;
    }
  }
  throw errors::missing_state("period " + std::to_string(period) + " has no on-ball actions");
}

std::uint64_t schema_hash(const std::vector<std::string>& names) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& n : names) {
    for (unsigned char c : n) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= '\n';
    h *= 0x100000001b3ULL;
  }
  return h;
}

FeatureSchema FeatureSchema::for_window(int w) {
  check_window(w);
  FeatureSchema s;
  s.window_ = w;
  s.names_ = names_for_window(w);
  s.hash_ = schema_hash(s.names_);
  return s;
}

FeatureSchema FeatureSchema::from_names(const std::vector<std::string>& names) {
  const std::size_t per = kPerActionFeatures + kPairFeatures;
  const std::size_t n = names.size();
  if (n >= kPerActionFeatures + kContextFeatures && (n + kPairFeatures - kContextFeatures) % per == 0) {
    const int w = int((n + kPairFeatures - kContextFeatures) / per);
    FeatureSchema s = for_window(w);
    if (s.names_ == names) return s;
  }
  throw errors::schema_mismatch("column names do not form a feature schema");
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

namespace {

void encode_with_goals(const Game& g, const GameState& s, const FeatureSchema& schema,
                       const std::vector<GoalEvent>& goals, std::span<double> out) {
  const int w = schema.window();
  if (int(s.window.size()) != w) {
    throw errors::schema_mismatch("state window " + std::to_string(s.window.size()) +
                                  " but schema window " + std::to_string(w));
  }
  if (out.size() != schema.size()) throw errors::length_mismatch("dataset", out.size(), schema.size());
  std::fill(out.begin(), out.end(), 0.0);
  const std::string& team = s.possessing_team;

  std::size_t c = 0;
  for (int j = 0; j < w; ++j) {
    // a0 is the most recent action.
    const Action& a = g[s.window[std::size_t(w - 1 - j)]];
    out[c + std::size_t(a.type)] = 1.0;
    c += kOnBallTypeCount;
    out[c + std::size_t(a.result)] = 1.0;
    c += kResultCount;
    out[c + std::size_t(a.body_part)] = 1.0;
    c += kBodyPartCount;
    const Normalized n = normalize(g, a, team);
    out[c++] = n.start.x;
    out[c++] = n.start.y;
    out[c++] = n.end.x;
    out[c++] = n.end.y;
    out[c++] = std::max(a.start_time, 0.0);
    out[c++] = dist_to_goal(n.start);
    out[c++] = angle_to_goal(n.start);
    out[c++] = dist_to_goal(n.end);
    out[c++] = angle_to_goal(n.end);
    out[c++] = n.end.x - n.start.x;
    out[c++] = n.end.y - n.start.y;
  }
  for (int j = 0; j + 1 < w; ++j) {
    const Action& later = g[s.window[std::size_t(w - 1 - j)]];
    const Action& earlier = g[s.window[std::size_t(w - 2 - j)]];
    const Normalized ln = normalize(g, later, team);
    const Normalized en = normalize(g, earlier, team);
    out[c++] = std::hypot(ln.end.x - en.start.x, ln.end.y - en.start.y);
    out[c++] = std::max(later.end_time - earlier.start_time, 0.0);
    out[c++] = later.team_id != earlier.team_id ? 1.0 : 0.0;
  }
  int own = 0, other = 0;
  for (const auto& e : goals) {
    if (e.action_index > s.index) break;
    (e.scoring_team == team ? own : other) += 1;
  }
  out[c++] = own;
  out[c++] = other;
  out[c++] = own - other;
}

}  // namespace

void encode_features_into(const Game& g, const GameState& s, const FeatureSchema& schema,
                          std::span<double> out) {
  encode_with_goals(g, s, schema, goal_events(g), out);
}

std::vector<double> encode_features(const Game& g, const GameState& s, const FeatureSchema& schema) {
  std::vector<double> out(schema.size());
  encode_features_into(g, s, schema, out);
  return out;
}

FeatureMatrix encode_game(const Game& g, const std::vector<GameState>& states,
                          const FeatureSchema& schema) {
  FeatureMatrix m;
  m.schema = schema;
  m.rows = states.size();
  m.values.resize(m.rows * schema.size());
  const auto goals = goal_events(g);
  for (std::size_t r = 0; r < states.size(); ++r) encode_with_goals(g, states[r], schema, goals, m.row(r));
  return m;
}

std::vector<LabelPair> label_states(const Game& g, int k) {
  if (k < 1) throw errors::invalid_argument("dataset", "label horizon k must be >= 1");
  const auto idx = on_ball_indices(g);
  // Scoring team per on-ball position, or nullptr.
  const auto goals = goal_events(g);
  std::vector<const std::string*> scorer(idx.size(), nullptr);
  {
    std::size_t p = 0;
    for (const auto& e : goals) {
      while (p < idx.size() && idx[p] < e.action_index) ++p;
      if (p < idx.size() && idx[p] == e.action_index) scorer[p] = &e.scoring_team;
    }
  }
  std::vector<LabelPair> labels(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const std::string& team = possessing_team_after(g, idx[p]);
    const int period = g[idx[p]].period;
    const std::size_t last = std::min(idx.size() - 1, p + std::size_t(k));
    for (std::size_t q = p + 1; q <= last; ++q) {
      if (g[idx[q]].period != period) break;
      if (scorer[q] == nullptr) continue;
      if (*scorer[q] == team) {
        labels[p].scores = true;
      } else {
        labels[p].concedes = true;
      }
    }
  }
  return labels;
}

namespace {

std::size_t encode_one_game(const Game& g, int w, int k, const FeatureSchema& schema, Dataset& d,
                            std::size_t offset) {
  const auto states = gamestates(g, w);
  const auto labels = label_states(g, k);
  const auto goals = goal_events(g);
  for (std::size_t r = 0; r < states.size(); ++r) {
    encode_with_goals(g, states[r], schema, goals, d.features.row(offset + r));
    d.scores[offset + r] = labels[r].scores;
    d.concedes[offset + r] = labels[r].concedes;
    d.index[offset + r] = {g.game_id(), g[states[r].index].action_id};
  }
  return states.size();
}

Dataset allocate(std::span<const Game> games, int w, int k, std::vector<std::size_t>& offsets) {
  if (games.empty()) throw errors::empty_input("dataset", "no games to build a dataset from");
  check_window(w);
  if (k < 1) throw errors::invalid_argument("dataset", "label horizon k must be >= 1");
  offsets.assign(games.size() + 1, 0);
  for (std::size_t i = 0; i < games.size(); ++i) {
    offsets[i + 1] = offsets[i] + on_ball_indices(games[i]).size();
  }
  Dataset d;
  d.features.schema = FeatureSchema::for_window(w);
  d.features.rows = offsets.back();
  d.features.values.resize(d.features.rows * d.features.schema.size());
  d.scores.resize(d.features.rows);
  d.concedes.resize(d.features.rows);
  d.index.resize(d.features.rows);
  return d;
}

}  // namespace

Dataset build_dataset(std::span<const Game> games, int w, int k) {
  std::vector<std::size_t> offsets;
  Dataset d = allocate(games, w, k, offsets);
  const FeatureSchema& schema = d.features.schema;
  const long n = long(games.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    encode_one_game(games[std::size_t(i)], w, k, schema, d, offsets[std::size_t(i)]);
  }
  return d;
}

namespace serial {
Dataset build_dataset(std::span<const Game> games, int w, int k) {
  std::vector<std::size_t> offsets;
  Dataset d = allocate(games, w, k, offsets);
  for (std::size_t i = 0; i < games.size(); ++i) {
    encode_one_game(games[i], w, k, d.features.schema, d, offsets[i]);
  }
  return d;
}
}  // namespace serial

void write_dataset_csv(std::ostream& out, const Dataset& d) {
  std::vector<std::string> header{"game_id", "action_id"};
  for (const auto& n : d.features.schema.names()) header.push_back(n);
  header.emplace_back("scores");
  header.emplace_back("concedes");
  out << io::join_csv(header) << '\n';
  std::string line;
  for (std::size_t r = 0; r < d.features.rows; ++r) {
    line = io::csv_escape(d.index[r].game_id);
    line += ',';
    line += std::to_string(d.index[r].action_id);
    for (double v : d.features.row(r)) {
      line += ',';
      line += io::format_double(v);
    }
    line += d.scores[r] ? ",1" : ",0";
    line += d.concedes[r] ? ",1\n" : ",0\n";
    out << line;
  }
}

namespace {
bool parse_flag(std::string_view s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw errors::invalid_argument("dataset", "not a boolean: '" + std::string(s) + "'");
}
}  // namespace

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw errors::missing_file(path.string());
  std::string line;
  if (!std::getline(in, line)) throw errors::malformed_file("dataset", path.string(), "empty file");
  auto header = io::split_csv_line(line);
  if (header.size() < 5 || header[0] != "game_id" || header[1] != "action_id" ||
      header[header.size() - 2] != "scores" || header.back() != "concedes") {
    throw errors::malformed_file("dataset", path.string(),
                                 "expected game_id, action_id, <features>, scores, concedes");
  }
  Dataset d;
  d.features.schema = FeatureSchema::from_names({header.begin() + 2, header.end() - 2});
  const std::size_t cols = d.features.schema.size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = io::split_csv_line(line);
    if (f.size() != header.size()) {
      throw errors::malformed_file("dataset", path.string(),
                                   "line " + std::to_string(line_no) + " has wrong field count");
    }
    try {
      d.index.push_back({f[0], io::parse_int(f[1])});
      for (std::size_t c = 0; c < cols; ++c) d.features.values.push_back(io::parse_double(f[2 + c]));
      d.scores.push_back(parse_flag(f[f.size() - 2]));
      d.concedes.push_back(parse_flag(f.back()));
    } catch (const Error& e) {
      throw errors::malformed_file("dataset", path.string(),
                                   "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  d.features.rows = d.index.size();
  return d;
}

}  // namespace vaep
