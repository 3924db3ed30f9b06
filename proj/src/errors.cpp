#include "vaep/errors.hpp"

namespace vaep {

Error::Error(std::string module, std::string code, const std::string& detail, ErrorKind kind)
    : std::runtime_error(module + ": " + code + ": " + detail),
      module_(std::move(module)),
      code_(std::move(code)),
      kind_(kind) {}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input:
      return 2;
    case ErrorKind::contract:
      return 3;
    case ErrorKind::internal:
      break;
  }
  return 4;
}

namespace errors {

Error duplicate_ordinal(long long action_id) {
  return {"spadl", "DuplicateOrdinal", "action_id " + std::to_string(action_id) + " appears twice",
          ErrorKind::contract};
}

Error unknown_team(const std::string& team_id) {
  return {"spadl", "UnknownTeam", "team '" + team_id + "' is neither the home nor the away team",
          ErrorKind::contract};
}

Error unsortable_timestamps(const std::string& detail) {
  return {"spadl", "UnsortableTimestamps", detail, ErrorKind::contract};
}

Error mixed_games(const std::string& a, const std::string& b) {
  return {"spadl", "MixedGames", "actions from games '" + a + "' and '" + b + "' in one stream",
          ErrorKind::contract};
}

Error score_mismatch(const std::string& detail) {
  return {"spadl", "ScoreMismatch", detail, ErrorKind::contract};
}

Error unmapped_type(const std::string& type_name) {
  return {"ingest", "UnmappedType", "no mapping for event type '" + type_name + "'",
          ErrorKind::input};
}

Error malformed_line(std::size_t line_no, const std::string& detail) {
  return {"ingest", "MalformedLine", "line " + std::to_string(line_no) + ": " + detail,
          ErrorKind::input};
}

Error bad_mapping(const std::string& detail) {
  return {"ingest", "BadMapping", detail, ErrorKind::input};
}

Error schema_mismatch(const std::string& detail) {
  return {"model", "SchemaMismatch", detail, ErrorKind::contract};
}

Error empty_input(const std::string& module, const std::string& detail) {
  return {module, "EmptyInput", detail, ErrorKind::input};
}

Error degenerate_input(const std::string& detail) {
  return {"model", "DegenerateInput", detail, ErrorKind::contract};
}

Error length_mismatch(const std::string& module, std::size_t a, std::size_t b) {
  return {module, "LengthMismatch", std::to_string(a) + " vs " + std::to_string(b),
          ErrorKind::contract};
}

Error version_mismatch(unsigned found, unsigned supported) {
  return {"model", "VersionMismatch",
          "file version " + std::to_string(found) + ", supported up to " + std::to_string(supported),
          ErrorKind::input};
}

Error corrupt_file(const std::string& detail) {
  return {"model", "CorruptFile", detail, ErrorKind::input};
}

Error missing_state(const std::string& detail) {
  return {"valuation", "MissingState", detail, ErrorKind::contract};
}

Error zero_minutes(const std::string& player_id) {
  return {"ratings", "ZeroMinutes", "player '" + player_id + "' has no minutes played",
          ErrorKind::contract};
}

Error missing_file(const std::string& path) {
  return {"io", "MissingFile", "cannot open '" + path + "'", ErrorKind::input};
}

Error io_failure(const std::string& path, const std::string& detail) {
  return {"io", "IoFailure", path + ": " + detail, ErrorKind::internal};
}

Error malformed_file(const std::string& module, const std::string& path, const std::string& detail) {
  return {module, "MalformedFile", path + ": " + detail, ErrorKind::input};
}

Error invalid_argument(const std::string& module, const std::string& detail) {
  return {module, "InvalidArgument", detail, ErrorKind::contract};
}

}  // namespace errors
}  // namespace vaep
