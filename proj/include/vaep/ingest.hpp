#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vaep/spadl.hpp"

namespace vaep::ingest {

// Provider coordinates span [0, 100] on both axes.
inline constexpr double kProviderRange = 100.0;

struct RawEvent {
  std::string game_id;
  int period = 1;
  double ts = 0.0;
  std::optional<double> end_ts;
  std::string type_name;
  std::string team;
  std::string player;
  double x = 0.0, y = 0.0;
  std::optional<double> end_x, end_y;
  std::string outcome;
  std::set<std::string> qualifiers;
};

// Provider vocabulary -> SPADL. Loaded from a TOML file with the tables
// [types], [results], [body_parts], [qualifier_types] and [defaults].
struct Mapping {
  // nullopt marks a provider type that is deliberately ignored.
  std::map<std::string, std::optional<ActionType>> types;
  std::map<std::string, ActionResult> results;
  std::map<std::string, BodyPart> body_parts;
  // qualifier tag -> (base type, replacement type)
  std::map<std::string, std::pair<ActionType, ActionType>> qualifier_types;
  BodyPart default_body_part = BodyPart::foot;
};

Mapping load_mapping(std::istream& in, const std::string& source = "<mapping>");
Mapping load_mapping(const std::filesystem::path& path);
Mapping default_mapping();

double to_pitch_x(double provider_x);
double to_pitch_y(double provider_y);
double to_provider_x(double pitch_x);
double to_provider_y(double pitch_y);

struct Converted {
  std::optional<Action> action;
  std::string skip_reason;  // set when action is empty
};

// Maps one event; unmapped or unusable events come back as skips, or throw
// (UnmappedType, UnmappedOutcome, IllegalAction) when strict is set.
Converted convert_event(const RawEvent& e, const Mapping& mapping, bool strict = false);

struct SkippedEvent {
  std::size_t line_no;
  std::string reason;
};

struct ParseResult {
  Game game;
  std::vector<SkippedEvent> skipped;
};

// One JSON object per line. An optional {"meta": {...}} line carries the game
// metadata (same schema as the .meta.json sidecar). Throws MalformedLine,
// MixedGames and the build_game errors.
ParseResult parse_events(std::istream& in, const Mapping& mapping, bool strict = false);

RawEvent parse_raw_event(const std::string& line, std::size_t line_no);

}  // namespace vaep::ingest
