#include "vaep/spadl_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "vaep/csv.hpp"
#include "vaep/errors.hpp"

namespace vaep::io {
namespace {

using nlohmann::json;

ActionType type_or_throw(const std::string& s, const std::string& where) {
  auto t = parse_action_type(s);
  if (!t) throw errors::malformed_file("spadl", where, "unknown action_type '" + s + "'");
  return *t;
}
BodyPart body_or_throw(const std::string& s, const std::string& where) {
  auto b = parse_body_part(s);
  if (!b) throw errors::malformed_file("spadl", where, "unknown body_part '" + s + "'");
  return *b;
}
ActionResult result_or_throw(const std::string& s, const std::string& where) {
  auto r = parse_result(s);
  if (!r) throw errors::malformed_file("spadl", where, "unknown result '" + s + "'");
  return *r;
}

std::vector<std::string> action_fields(const Action& a) {
  return {a.game_id,
          std::to_string(a.action_id),
          std::to_string(a.period),
          format_double(a.start_time),
          format_double(a.end_time),
          format_double(a.start_x),
          format_double(a.start_y),
          format_double(a.end_x),
          format_double(a.end_y),
          a.player_id,
          a.team_id,
          std::string(to_string(a.type)),
          std::string(to_string(a.body_part)),
          std::string(to_string(a.result))};
}

Action action_from_fields(const std::vector<std::string>& f, const std::string& where) {
  try {
    Action a;
    a.game_id = f[0];
    a.action_id = parse_int(f[1]);
    a.period = int(parse_int(f[2]));
    a.start_time = parse_double(f[3]);
    a.end_time = parse_double(f[4]);
    a.start_x = parse_double(f[5]);
    a.start_y = parse_double(f[6]);
    a.end_x = parse_double(f[7]);
    a.end_y = parse_double(f[8]);
    a.player_id = f[9];
    a.team_id = f[10];
    a.type = type_or_throw(f[11], where);
    a.body_part = body_or_throw(f[12], where);
    a.result = result_or_throw(f[13], where);
    return a;
  } catch (const Error& e) {
    if (e.code() == "MalformedFile") throw;
    throw errors::malformed_file("spadl", where, e.what());
  }
}

}  // namespace

const std::vector<std::string>& spadl_columns() {
  static const std::vector<std::string> cols{
      "game_id", "action_id", "period",    "start_time", "end_time",    "start_x",   "start_y",
      "end_x",   "end_y",     "player_id", "team_id",    "action_type", "body_part", "result"};
  return cols;
}

void write_spadl_csv(std::ostream& out, const Game& g) {
  out << join_csv(spadl_columns()) << '\n';
  for (const auto& a : g.actions()) out << join_csv(action_fields(a)) << '\n';
}

std::vector<Action> read_spadl_csv(std::istream& in, const std::string& source) {
  std::vector<Action> actions;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields != spadl_columns()) {
        throw errors::malformed_file("spadl", source, "header does not match the SPADL column order");
      }
      header_seen = true;
      continue;
    }
    const std::string where = source + ":" + std::to_string(line_no);
    if (fields.size() != spadl_columns().size()) {
      throw errors::malformed_file("spadl", where, "expected 14 fields");
    }
    actions.push_back(action_from_fields(fields, where));
  }
  if (!header_seen) throw errors::malformed_file("spadl", source, "missing header");
  return actions;
}

void write_spadl_jsonl(std::ostream& out, const Game& g) {
  const auto& cols = spadl_columns();
  for (const auto& a : g.actions()) {
    auto f = action_fields(a);
    json j = json::object();
    for (std::size_t c = 0; c < cols.size(); ++c) j[cols[c]] = f[c];
    j["action_id"] = a.action_id;
    j["period"] = a.period;
    j["start_time"] = a.start_time;
    j["end_time"] = a.end_time;
    j["start_x"] = a.start_x;
    j["start_y"] = a.start_y;
    j["end_x"] = a.end_x;
    j["end_y"] = a.end_y;
    out << j.dump() << '\n';
  }
}

std::vector<Action> read_spadl_jsonl(std::istream& in, const std::string& source) {
  std::vector<Action> actions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = source + ":" + std::to_string(line_no);
    try {
      json j = json::parse(line);
      Action a;
      a.game_id = j.at("game_id").get<std::string>();
      a.action_id = j.at("action_id").get<std::int64_t>();
      a.period = j.at("period").get<int>();
      a.start_time = j.at("start_time").get<double>();
      a.end_time = j.at("end_time").get<double>();
      a.start_x = j.at("start_x").get<double>();
      a.start_y = j.at("start_y").get<double>();
      a.end_x = j.at("end_x").get<double>();
      a.end_y = j.at("end_y").get<double>();
      a.player_id = j.at("player_id").get<std::string>();
      a.team_id = j.at("team_id").get<std::string>();
      a.type = type_or_throw(j.at("action_type").get<std::string>(), where);
      a.body_part = body_or_throw(j.at("body_part").get<std::string>(), where);
      a.result = result_or_throw(j.at("result").get<std::string>(), where);
      actions.push_back(std::move(a));
    } catch (const json::exception& e) {
      throw errors::malformed_file("spadl", where, e.what());
    }
  }
  return actions;
}

std::string metadata_to_json(const GameMetadata& meta) {
  json j;
  j["game_id"] = meta.game_id;
  j["home_team_id"] = meta.home_team_id;
  j["away_team_id"] = meta.away_team_id;
  j["home_attacks_right"] = {meta.home_attacks_right[0], meta.home_attacks_right[1]};
  if (meta.score) j["score"] = {meta.score->first, meta.score->second};
  json players = json::array();
  for (const auto& [id, p] : meta.players) {
    json pj{{"player_id", id}, {"team_id", p.team_id}, {"minutes", p.minutes},
            {"position", p.position}};
    if (!p.birth_date.empty()) pj["birth_date"] = p.birth_date;
    players.push_back(std::move(pj));
  }
  j["players"] = std::move(players);
  return j.dump(2) + "\n";
}

GameMetadata metadata_from_json(const std::string& text, const std::string& source) {
  try {
    json j = json::parse(text);
    GameMetadata meta;
    meta.game_id = j.value("game_id", "");
    meta.home_team_id = j.at("home_team_id").get<std::string>();
    meta.away_team_id = j.at("away_team_id").get<std::string>();
    if (j.contains("home_attacks_right")) {
      const auto& d = j.at("home_attacks_right");
      meta.home_attacks_right = {d.at(0).get<bool>(), d.at(1).get<bool>()};
    }
    if (j.contains("score")) {
      meta.score = std::pair{j["score"].at(0).get<int>(), j["score"].at(1).get<int>()};
    }
    if (j.contains("players")) {
      for (const auto& pj : j.at("players")) {
        PlayerInfo p;
        p.team_id = pj.at("team_id").get<std::string>();
        p.minutes = pj.value("minutes", 0.0);
        p.position = pj.value("position", "");
        p.birth_date = pj.value("birth_date", "");
        meta.players[pj.at("player_id").get<std::string>()] = std::move(p);
      }
    }
    return meta;
  } catch (const json::exception& e) {
    throw errors::malformed_file("spadl", source, e.what());
  }
}

std::filesystem::path metadata_path_for(const std::filesystem::path& spadl_path) {
  std::string name = spadl_path.filename().string();
  for (const std::string suffix : {".spadl.csv", ".spadl.jsonl", ".csv", ".jsonl"}) {
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      name.resize(name.size() - suffix.size());
      break;
    }
  }
  return spadl_path.parent_path() / (name + ".meta.json");
}

Game load_game(const std::filesystem::path& spadl_path) {
  std::ifstream in(spadl_path);
  if (!in) throw errors::missing_file(spadl_path.string());
  std::vector<Action> actions = spadl_path.extension() == ".jsonl"
                                    ? read_spadl_jsonl(in, spadl_path.string())
                                    : read_spadl_csv(in, spadl_path.string());
  GameMetadata meta;
  const auto meta_path = metadata_path_for(spadl_path);
  if (std::filesystem::exists(meta_path)) {
    meta = metadata_from_json(read_text(meta_path), meta_path.string());
  } else {
    meta.home_attacks_right = {true, true};
    for (const auto& a : actions) {
      if (meta.home_team_id.empty()) {
        meta.home_team_id = a.team_id;
      } else if (meta.away_team_id.empty() && a.team_id != meta.home_team_id) {
        meta.away_team_id = a.team_id;
      }
    }
    if (meta.away_team_id.empty()) meta.away_team_id = meta.home_team_id + "_opponent";
    if (meta.home_team_id.empty()) {
      meta.home_team_id = "home";
      meta.away_team_id = "away";
    }
  }
  return build_game(std::move(actions), std::move(meta));
}

void save_game(const std::filesystem::path& spadl_path, const Game& g) {
  write_atomic(spadl_path, [&](std::ostream& out) { write_spadl_csv(out, g); });
  write_text_atomic(metadata_path_for(spadl_path), metadata_to_json(g.metadata()));
}

std::vector<std::filesystem::path> list_games(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw errors::missing_file(dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename().string().ends_with(".spadl.csv")) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Game> load_games(const std::filesystem::path& dir) {
  std::vector<Game> games;
  for (const auto& p : list_games(dir)) games.push_back(load_game(p));
  return games;
}

std::vector<Appearance> appearances_of(const Game& g) {
  std::vector<Appearance> out;
  for (const auto& [id, p] : g.players()) {
    out.push_back({g.game_id(), id, p.team_id, p.minutes, p.position, p.birth_date});
  }
  return out;
}

void write_appearances_csv(std::ostream& out, const std::vector<Appearance>& rows) {
  out << "game_id,player_id,team_id,minutes,position,birth_date\n";
  for (const auto& r : rows) {
    out << join_csv({r.game_id, r.player_id, r.team_id, format_double(r.minutes), r.position,
                     r.birth_date})
        << '\n';
  }
}

std::vector<Appearance> read_appearances_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const auto gi = t.column("game_id"), pi = t.column("player_id"), ti = t.column("team_id"),
             mi = t.column("minutes"), po = t.column("position");
  std::size_t bi = t.header.size();
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == "birth_date") bi = i;
  }
  std::vector<Appearance> out;
  for (const auto& row : t.rows) {
    out.push_back({row[gi], row[pi], row[ti], parse_double(row[mi]), row[po],
                   bi < row.size() ? row[bi] : std::string{}});
  }
  return out;
}

}  // namespace vaep::io
