#include "vaep/ingest.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vaep/errors.hpp"
#include "vaep/spadl_io.hpp"

namespace vaep::ingest {
namespace {

using nlohmann::json;

template <class E>
E parse_or_throw(std::optional<E> v, const std::string& what, const std::string& source) {
  if (!v) throw errors::bad_mapping(source + ": unknown SPADL value '" + what + "'");
  return *v;
}

bool provider_coord_ok(double v) { return std::isfinite(v) && v >= 0.0 && v <= kProviderRange; }

}  // namespace

Mapping load_mapping(std::istream& in, const std::string& source) {
  Mapping m;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML{}.from_config(in);
  } catch (const CLI::Error& e) {
    throw errors::bad_mapping(source + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    const std::string table = item.parents.empty() ? "" : item.parents.front();
    const auto one = [&]() -> const std::string& {
      if (item.inputs.size() != 1) {
        throw errors::bad_mapping(source + ": '" + item.name + "' needs a single value");
      }
      return item.inputs.front();
    };
    if (table == "types") {
      const std::string& v = one();
      m.types[item.name] = v == "ignore" ? std::nullopt
                                         : std::optional{parse_or_throw(parse_action_type(v), v, source)};
    } else if (table == "results") {
      m.results[item.name] = parse_or_throw(parse_result(one()), one(), source);
    } else if (table == "body_parts") {
      m.body_parts[item.name] = parse_or_throw(parse_body_part(one()), one(), source);
    } else if (table == "qualifier_types") {
      if (item.inputs.size() != 2) {
        throw errors::bad_mapping(source + ": qualifier_types." + item.name +
                                  " needs [base_type, replacement_type]");
      }
      m.qualifier_types[item.name] = {
          parse_or_throw(parse_action_type(item.inputs[0]), item.inputs[0], source),
          parse_or_throw(parse_action_type(item.inputs[1]), item.inputs[1], source)};
    } else if (table == "defaults") {
      if (item.name == "body_part") {
        m.default_body_part = parse_or_throw(parse_body_part(one()), one(), source);
      } else {
        throw errors::bad_mapping(source + ": unknown default '" + item.name + "'");
      }
    } else {
      throw errors::bad_mapping(source + ": unknown table '" + table + "'");
    }
  }
  return m;
}

Mapping load_mapping(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw errors::missing_file(path.string());
  return load_mapping(in, path.string());
}

Mapping default_mapping() { return load_mapping(std::filesystem::path(VAEP_DEFAULT_MAPPING)); }

double to_pitch_x(double provider_x) { return provider_x * (kPitchLength / kProviderRange); }
double to_pitch_y(double provider_y) { return provider_y * (kPitchWidth / kProviderRange); }
double to_provider_x(double pitch_x) { return pitch_x * (kProviderRange / kPitchLength); }
double to_provider_y(double pitch_y) { return pitch_y * (kProviderRange / kPitchWidth); }

Converted convert_event(const RawEvent& e, const Mapping& mapping, bool strict) {
  const auto skip = [](std::string reason) { return Converted{std::nullopt, std::move(reason)}; };

  auto type_it = mapping.types.find(e.type_name);
  if (type_it == mapping.types.end()) {
    if (strict) throw errors::unmapped_type(e.type_name);
    return skip("unmapped type '" + e.type_name + "'");
  }
  if (!type_it->second) return skip("ignored type '" + e.type_name + "'");
  ActionType type = *type_it->second;
  for (const auto& tag : e.qualifiers) {
    auto q = mapping.qualifier_types.find(tag);
    if (q != mapping.qualifier_types.end() && q->second.first == type) {
      type = q->second.second;
      break;
    }
  }

  ActionResult result;
  if (auto r = mapping.results.find(e.outcome); r != mapping.results.end()) {
    result = r->second;
  } else {
    const SuccessRule rule = catalog_entry(type).success_rule;
    if (e.outcome.empty() && rule == SuccessRule::always_success) {
      result = ActionResult::success;
    } else if (e.outcome.empty() && rule == SuccessRule::always_fail) {
      result = ActionResult::fail;
    } else {
      if (strict) {
        throw Error("ingest", "UnmappedOutcome",
                    "no mapping for outcome '" + e.outcome + "' of '" + e.type_name + "'",
                    ErrorKind::input);
      }
      return skip("unmapped outcome '" + e.outcome + "'");
    }
  }

  std::optional<BodyPart> body;
  for (const auto& tag : e.qualifiers) {
    if (auto b = mapping.body_parts.find(tag); b != mapping.body_parts.end()) {
      body = b->second;
      break;
    }
  }
  if (!body) {
    const bool keeper = type == ActionType::keeper_save || type == ActionType::keeper_claim ||
                        type == ActionType::keeper_punch || type == ActionType::keeper_pick_up;
    body = keeper ? BodyPart::none : mapping.default_body_part;
  }
  if (!body_part_allowed(type, *body)) {
    body = body_part_allowed(type, BodyPart::foot) ? BodyPart::foot : BodyPart::none;
  }

  const double ex = e.end_x.value_or(e.x);
  const double ey = e.end_y.value_or(e.y);
  for (double v : {e.x, e.y, ex, ey}) {
    if (!provider_coord_ok(v)) return skip("coordinate outside provider range");
  }

  Action a;
  a.game_id = e.game_id;
  a.period = e.period;
  a.start_time = e.ts;
  a.end_time = e.end_ts.value_or(e.ts);
  a.start_x = to_pitch_x(e.x);
  a.start_y = to_pitch_y(e.y);
  a.end_x = to_pitch_x(ex);
  a.end_y = to_pitch_y(ey);
  a.player_id = e.player;
  a.team_id = e.team;
  a.type = type;
  a.body_part = *body;
  a.result = result;

  if (auto violations = validate_action(a); !violations.empty()) {
    if (strict) throw Error("ingest", "IllegalAction", violations.front(), ErrorKind::input);
    return skip(violations.front());
  }
  return {std::move(a), {}};
}

RawEvent parse_raw_event(const std::string& line, std::size_t line_no) {
  try {
    json j = json::parse(line);
    RawEvent e;
    e.game_id = j.value("game_id", "");
    e.period = j.value("period", 1);
    e.ts = j.at("ts").get<double>();
    if (j.contains("end_ts")) e.end_ts = j["end_ts"].get<double>();
    e.type_name = j.at("type").get<std::string>();
    e.team = j.value("team", "");
    e.player = j.value("player", "");
    e.x = j.at("x").get<double>();
    e.y = j.at("y").get<double>();
    if (j.contains("end_x")) e.end_x = j["end_x"].get<double>();
    if (j.contains("end_y")) e.end_y = j["end_y"].get<double>();
    e.outcome = j.value("outcome", "");
    if (j.contains("qualifiers")) {
      for (const auto& q : j["qualifiers"]) e.qualifiers.insert(q.get<std::string>());
    }
    if (!std::isfinite(e.ts) || e.ts < 0) throw errors::malformed_line(line_no, "negative ts");
    return e;
  } catch (const json::exception& ex) {
    throw errors::malformed_line(line_no, ex.what());
  }
}

ParseResult parse_events(std::istream& in, const Mapping& mapping, bool strict) {
  ParseResult out;
  std::optional<GameMetadata> meta;
  std::vector<Action> actions;
  std::string game_id;
  std::vector<std::string> teams_seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line.find("\"meta\"") != std::string::npos) {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& ex) {
        throw errors::malformed_line(line_no, ex.what());
      }
      if (j.contains("meta")) {
        meta = io::metadata_from_json(j["meta"].dump(), "line " + std::to_string(line_no));
        continue;
      }
    }
    RawEvent e = parse_raw_event(line, line_no);
    if (game_id.empty()) game_id = e.game_id;
    if (e.game_id != game_id) throw errors::mixed_games(game_id, e.game_id);
    if (!e.team.empty() && std::find(teams_seen.begin(), teams_seen.end(), e.team) == teams_seen.end()) {
      teams_seen.push_back(e.team);
    }
    Converted c = convert_event(e, mapping, strict);
    if (!c.action) {
      out.skipped.push_back({line_no, std::move(c.skip_reason)});
      continue;
    }
    c.action->action_id = std::int64_t(line_no);
    actions.push_back(std::move(*c.action));
  }

  GameMetadata m;
  if (meta) {
    m = std::move(*meta);
  } else {
    m.home_attacks_right = {true, true};
    if (!teams_seen.empty()) m.home_team_id = teams_seen[0];
    m.away_team_id = teams_seen.size() > 1 ? teams_seen[1] : m.home_team_id + "_opponent";
    if (teams_seen.empty()) {
      m.home_team_id = "home";
      m.away_team_id = "away";
    }
  }
  if (m.game_id.empty()) m.game_id = game_id;
  if (!game_id.empty() && m.game_id != game_id) throw errors::mixed_games(m.game_id, game_id);
  out.game = build_game(std::move(actions), std::move(m));
  return out;
}

}  // namespace vaep::ingest
