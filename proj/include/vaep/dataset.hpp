#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vaep/spadl.hpp"

namespace vaep {

inline constexpr int kDefaultWindow = 3;
inline constexpr int kDefaultHorizon = 10;

// Per windowed action: 21 type + 6 result + 4 body part one-hots, 5 raw
// continuous values and 6 geometric ones.
inline constexpr std::size_t kPerActionFeatures = kOnBallTypeCount + kResultCount + kBodyPartCount + 5 + 6;
inline constexpr std::size_t kPairFeatures = 3;
inline constexpr std::size_t kContextFeatures = 3;

constexpr std::size_t feature_count(int w) {
  return std::size_t(w) * kPerActionFeatures + std::size_t(w - 1) * kPairFeatures + kContextFeatures;
}

// Game indices of the on-the-ball actions. States, labels and values are all
// defined over this subsequence; run_without_ball actions are skipped.
std::vector<std::size_t> on_ball_indices(const Game& g);

// Whether the acting team still has the ball after `a`. Failed, offside and
// carded actions hand the ball to the opponent.
bool keeps_possession(const Action& a);
const std::string& possessing_team_after(const Game& g, std::size_t index);

struct GameState {
  std::string game_id;
  std::size_t index = 0;            // game index of a_i
  std::vector<std::size_t> window;  // game indices, oldest first, back() == index
  std::string possessing_team;
  int period = 1;
};

// One state per on-ball action. Windows shorter than w at the start of the
// game are left-padded by repeating the earliest action.
std::vector<GameState> gamestates(const Game& g, int w);

// Reference state before the first action of a period: the padded window of
// that period's first on-ball action.
GameState baseline_state(const Game& g, int period, int w);

class FeatureSchema {
 public:
  FeatureSchema() = default;
  static FeatureSchema for_window(int w);
  // Rebuilds a schema from column names; throws SchemaMismatch unless they are
  // exactly the names of some window size.
  static FeatureSchema from_names(const std::vector<std::string>& names);

  int window() const { return window_; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::uint64_t hash() const { return hash_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const FeatureSchema& o) const { return hash_ == o.hash_ && names_ == o.names_; }

 private:
  int window_ = 0;
  std::vector<std::string> names_;
  std::uint64_t hash_ = 0;
};

std::uint64_t schema_hash(const std::vector<std::string>& names);

// Row-major matrix tagged with the schema of its columns.
struct FeatureMatrix {
  FeatureSchema schema;
  std::size_t rows = 0;
  std::vector<double> values;

  std::size_t cols() const { return schema.size(); }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols(), cols()};
  }
  std::span<double> row(std::size_t r) { return {values.data() + r * cols(), cols()}; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
};

// Throws SchemaMismatch if the schema was built for another window size.
std::vector<double> encode_features(const Game& g, const GameState& s, const FeatureSchema& schema);
void encode_features_into(const Game& g, const GameState& s, const FeatureSchema& schema,
                          std::span<double> out);

// Feature rows for a whole game, one per state.
FeatureMatrix encode_game(const Game& g, const std::vector<GameState>& states,
                          const FeatureSchema& schema);

struct LabelPair {
  bool scores = false;
  bool concedes = false;
  bool operator==(const LabelPair&) const = default;
};

// scores: the team in possession after a_i scores in (i, i+k] on-ball actions
// of the same period; concedes: the other team does.
std::vector<LabelPair> label_states(const Game& g, int k);

struct StateRef {
  std::string game_id;
  std::int64_t action_id = 0;
  bool operator==(const StateRef&) const = default;
};

struct Dataset {
  FeatureMatrix features;
  std::vector<std::uint8_t> scores;
  std::vector<std::uint8_t> concedes;
  std::vector<StateRef> index;
};

// Rows in (game order, action order). Games are encoded in parallel; the
// layout does not depend on the thread count. Throws EmptyInput.
Dataset build_dataset(std::span<const Game> games, int w, int k);

namespace serial {
Dataset build_dataset(std::span<const Game> games, int w, int k);
}

// CSV: game_id, action_id, <schema columns>, scores, concedes.
void write_dataset_csv(std::ostream& out, const Dataset& d);
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace vaep
