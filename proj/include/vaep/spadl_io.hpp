#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vaep/spadl.hpp"

namespace vaep::io {

// Fixed column order of the SPADL CSV format.
const std::vector<std::string>& spadl_columns();

void write_spadl_csv(std::ostream& out, const Game& g);
std::vector<Action> read_spadl_csv(std::istream& in, const std::string& source = "<stream>");

// One JSON object per line with the same fields as the CSV columns.
void write_spadl_jsonl(std::ostream& out, const Game& g);
std::vector<Action> read_spadl_jsonl(std::istream& in, const std::string& source = "<stream>");

std::string metadata_to_json(const GameMetadata& meta);
GameMetadata metadata_from_json(const std::string& text, const std::string& source = "<json>");

// Sidecar metadata lives next to the action file: game.spadl.csv -> game.meta.json.
std::filesystem::path metadata_path_for(const std::filesystem::path& spadl_path);

// Loads a SPADL CSV and its sidecar. Without a sidecar the first two teams in
// file order become home and away and the home team attacks toward x = 105 in
// both periods.
Game load_game(const std::filesystem::path& spadl_path);
void save_game(const std::filesystem::path& spadl_path, const Game& g);

// All *.spadl.csv files in a directory, sorted by file name.
std::vector<std::filesystem::path> list_games(const std::filesystem::path& dir);
std::vector<Game> load_games(const std::filesystem::path& dir);

// Per-appearance player metadata (the `meta.csv` consumed by the ratings CLI).
struct Appearance {
  std::string game_id;
  std::string player_id;
  std::string team_id;
  double minutes = 0.0;
  std::string position;
  std::string birth_date;
};
std::vector<Appearance> appearances_of(const Game& g);
void write_appearances_csv(std::ostream& out, const std::vector<Appearance>& rows);
std::vector<Appearance> read_appearances_csv(const std::filesystem::path& path);

}  // namespace vaep::io
