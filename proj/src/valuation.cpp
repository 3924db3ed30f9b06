#include "vaep/valuation.hpp"

#include <algorithm>
#include <ostream>

#include "vaep/csv.hpp"
#include "vaep/errors.hpp"

namespace vaep {

HomeFrame to_home_frame(bool home_possesses, double p_scores, double p_concedes) {
  return home_possesses ? HomeFrame{p_scores, p_concedes} : HomeFrame{p_concedes, p_scores};
}

StateProbabilities StateProbabilities::for_game(const Game& g) {
  StateProbabilities p;
  p.game_id = g.game_id();
  p.indices = on_ball_indices(g);
  const std::size_t n = p.indices.size();
  p.periods.resize(n);
  p.home_possesses.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.periods[i] = g[p.indices[i]].period;
    p.home_possesses[i] = g.is_home(possessing_team_after(g, p.indices[i]));
  }
  p.p_scores.assign(n, 0.0);
  p.p_concedes.assign(n, 0.0);
  p.frame.assign(n, HomeFrame{});
  return p;
}

StateProbabilities StateProbabilities::constant(const Game& g, HomeFrame value) {
  auto p = for_game(g);
  for (std::size_t i = 0; i < p.indices.size(); ++i) {
    p.frame[i] = value;
    p.p_scores[i] = p.home_possesses[i] ? value.home : value.away;
    p.p_concedes[i] = p.home_possesses[i] ? value.away : value.home;
    p.baseline[p.periods[i]] = value;
  }
  return p;
}

const HomeFrame& StateProbabilities::before(std::size_t pos) const {
  if (pos > 0 && periods[pos - 1] == periods[pos]) return frame[pos - 1];
  const auto it = baseline.find(periods[pos]);
  if (it == baseline.end())
    throw errors::missing_state("no baseline state for period " + std::to_string(periods[pos]) + " of game " +
                                game_id);
  return it->second;
}

namespace {

std::vector<int> periods_present(const Game& g) {
  std::vector<int> out;
  for (const auto i : on_ball_indices(g))
    if (out.empty() || out.back() != g[i].period) out.push_back(g[i].period);
  return out;
}

}  // namespace

StateProbabilities state_probabilities(const Game& g, std::span<const double> p_scores,
                                       std::span<const double> p_concedes,
                                       const std::map<int, std::pair<double, double>>& baseline) {
  auto p = StateProbabilities::for_game(g);
  const std::size_t n = p.indices.size();
  if (p_scores.size() != n) throw errors::length_mismatch("valuation", p_scores.size(), n);
  if (p_concedes.size() != n) throw errors::length_mismatch("valuation", p_concedes.size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    p.p_scores[i] = p_scores[i];
    p.p_concedes[i] = p_concedes[i];
    p.frame[i] = to_home_frame(p.home_possesses[i], p_scores[i], p_concedes[i]);
  }
  for (const auto& [period, pair] : baseline) {
    const auto s = baseline_state(g, period, 1);
    p.baseline[period] = to_home_frame(g.is_home(s.possessing_team), pair.first, pair.second);
  }
  return p;
}

StateProbabilities state_probabilities(const Game& g, const Model& scores, const Model& concedes) {
  if (!(scores.schema() == concedes.schema()))
    throw errors::schema_mismatch("the scores and concedes models were trained on different feature schemas");
  const FeatureSchema& schema = scores.schema();
  const int w = schema.window();
  const auto states = gamestates(g, w);
  const auto ps = predict_proba(scores, encode_game(g, states, schema));
  const auto pc = predict_proba(concedes, encode_game(g, states, schema));

  std::vector<GameState> base;
  const auto periods = periods_present(g);
  for (const int period : periods) base.push_back(baseline_state(g, period, w));
  const FeatureMatrix bx = encode_game(g, base, schema);
  const auto bs = predict_proba(scores, bx);
  const auto bc = predict_proba(concedes, bx);
  std::map<int, std::pair<double, double>> baseline;
  for (std::size_t i = 0; i < periods.size(); ++i) baseline[periods[i]] = {bs[i], bc[i]};
  return state_probabilities(g, ps, pc, baseline);
}

std::vector<ActionValue> value_actions(const Game& g, const StateProbabilities& probs) {
  const auto idx = on_ball_indices(g);
  if (probs.indices != idx || probs.frame.size() != idx.size() || probs.periods.size() != idx.size())
    throw errors::missing_state("probabilities do not cover the states of game " + g.game_id());
  std::vector<ActionValue> out;
  out.reserve(idx.size());
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    const Action& a = g[idx[pos]];
    const HomeFrame& prev = probs.before(pos);
    const HomeFrame& cur = probs.frame[pos];
    const double d_home = cur.home - prev.home;
    const double d_away = cur.away - prev.away;
    ActionValue v;
    v.game_id = g.game_id();
    v.action_id = a.action_id;
    v.index = idx[pos];
    v.player_id = a.player_id;
    v.team_id = a.team_id;
    v.type = a.type;
    v.possessing_team = possessing_team_after(g, idx[pos]);
    if (g.is_home(v.possessing_team)) {
      v.offensive = d_home;
      v.defensive = -d_away;
    } else {
      v.offensive = d_away;
      v.defensive = -d_home;
    }
    v.total = v.offensive + v.defensive;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<ActionValue>> value_games(std::span<const Game> games, const Model& scores,
                                                  const Model& concedes) {
  std::vector<std::vector<ActionValue>> out(games.size());
  const auto n = static_cast<std::ptrdiff_t>(games.size());
  // Exceptions may not cross the parallel region; keep the first by game order.
  std::vector<std::exception_ptr> failures(games.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const Game& g = games[std::size_t(i)];
      out[std::size_t(i)] = value_actions(g, state_probabilities(g, scores, concedes));
    } catch (...) {
      failures[std::size_t(i)] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

namespace serial {
std::vector<std::vector<ActionValue>> value_games(std::span<const Game> games, const Model& scores,
                                                  const Model& concedes) {
  std::vector<std::vector<ActionValue>> out;
  for (const Game& g : games) out.push_back(value_actions(g, state_probabilities(g, scores, concedes)));
  return out;
}
}  // namespace serial

GameDecomposition attack_decomposition(const Game& g, const std::vector<ActionValue>& values) {
  GameDecomposition d;
  for (std::size_t pos = 0; pos < values.size(); ++pos) {
    const auto& v = values[pos];
    const int period = g[v.index].period;
    if (d.chains.empty() || d.chains.back().team != v.possessing_team || d.chains.back().period != period) {
      PossessionChain c;
      c.team = v.possessing_team;
      c.home = g.is_home(v.possessing_team);
      c.period = period;
      c.first = pos;
      d.chains.push_back(c);
    }
    auto& c = d.chains.back();
    c.last = pos;
    c.total += v.total;
    if (v.total > values[d.argmax].total) d.argmax = pos;
    if (v.total < values[d.argmin].total) d.argmin = pos;
  }
  return d;
}

double chain_endpoint_delta(const StateProbabilities& probs, const PossessionChain& chain) {
  const HomeFrame& start = probs.before(chain.first);
  const HomeFrame& end = probs.frame[chain.last];
  const double d_home = end.home - start.home;
  const double d_away = end.away - start.away;
  return chain.home ? d_home - d_away : d_away - d_home;
}

void write_values_csv(std::ostream& out, const std::vector<ActionValue>& values) {
  out << "game_id,action_id,player_id,team_id,action_type,offensive,defensive,total\n";
  for (const auto& v : values) {
    out << io::csv_escape(v.game_id) << ',' << v.action_id << ',' << io::csv_escape(v.player_id) << ','
        << io::csv_escape(v.team_id) << ',' << to_string(v.type) << ',' << io::format_double(v.offensive) << ','
        << io::format_double(v.defensive) << ',' << io::format_double(v.total) << '\n';
  }
}

std::vector<ActionValue> read_values_csv(const std::filesystem::path& path) {
  const auto t = io::read_csv(path);
  const auto c_game = t.column("game_id"), c_id = t.column("action_id"), c_player = t.column("player_id"),
             c_team = t.column("team_id"), c_type = t.column("action_type"), c_off = t.column("offensive"),
             c_def = t.column("defensive"), c_total = t.column("total");
  std::vector<ActionValue> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto line = std::to_string(r + 2);
    if (row.size() != t.header.size())
      throw errors::malformed_file("valuation", path.string(), "line " + line + ": wrong number of fields");
    ActionValue v;
    v.game_id = row[c_game];
    v.player_id = row[c_player];
    v.team_id = row[c_team];
    const auto type = parse_action_type(row[c_type]);
    if (!type) throw errors::malformed_file("valuation", path.string(), "line " + line + ": unknown action type");
    v.type = *type;
    try {
      v.action_id = io::parse_int(row[c_id]);
      v.offensive = io::parse_double(row[c_off]);
      v.defensive = io::parse_double(row[c_def]);
      v.total = io::parse_double(row[c_total]);
    } catch (const Error& e) {
      throw errors::malformed_file("valuation", path.string(), "line " + line + ": " + e.what());
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace vaep
