#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vaep/dataset.hpp"
#include "vaep/forest.hpp"
#include "vaep/logistic.hpp"
#include "vaep/metrics.hpp"

namespace vaep {

enum class Target { scores, concedes };
std::string to_string(Target t);
Target parse_target(std::string_view s);

enum class LearnerKind : std::uint32_t { logistic = 1, forest = 2 };
std::string to_string(LearnerKind k);
LearnerKind parse_learner(std::string_view s);

// A trained classifier for one target. Models always work in the frame of
// the team in possession after the last action of the state.
struct Model {
  Target target = Target::scores;
  std::variant<LogisticModel, ForestModel> learner;

  LearnerKind kind() const;
  const FeatureSchema& schema() const;
};

// Probabilities strictly inside (0, 1). Throws SchemaMismatch.
std::vector<double> predict_proba(const Model& m, const FeatureMatrix& x);

namespace serial {
std::vector<double> predict_proba(const Model& m, const FeatureMatrix& x);
}

// Binary container: magic, format version, learner kind, schema hash, a JSON
// header (target, hyperparameters, schema), the raw payload and a checksum.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const Model& m, std::ostream& out);
void save_model(const Model& m, const std::filesystem::path& path);  // atomic
// Throws VersionMismatch, CorruptFile, MissingFile.
Model load_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

// Deterministic split by game: games sorted by id, the last
// ceil(test_fraction * n) go to the test set (at least one game each side
// when n >= 2). Throws InvalidArgument unless 0 < test_fraction < 1.
struct GameSplit {
  std::vector<Game> train;
  std::vector<Game> test;
};
GameSplit split_by_game(std::span<const Game> games, double test_fraction = 0.3);

struct SweepRow {
  int w = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  double log_loss = 0.0;
  double roc_auc = 0.5;
  double brier = 0.0;
  bool auc_defined = false;
};

// One "scores" forest per window size on a fixed split by game.
// Throws InvalidArgument when w_values is empty.
std::vector<SweepRow> window_sweep(std::span<const Game> games, std::span<const int> w_values, int k,
                                   const ForestParams& params, double test_fraction = 0.3);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace vaep
