#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vaep::cli {

// Every option of every subcommand; CLI11 binds flags and config-file keys
// straight into these fields.
struct PipelineConfig {
  // convert
  std::string input;
  std::string mapping;
  std::string format = "csv";
  bool strict = false;

  // synth
  std::size_t n_games = 20;
  std::size_t n_teams = 10;
  std::size_t n_actions = 1750;
  double shot_rate = 1.0;

  // dataset / sweep
  std::string games;
  int w = 3;
  int k = 10;
  std::string test_out;
  double test_fraction = 0.3;
  std::vector<int> windows{1, 2, 3, 4, 5};

  // train
  std::string features;
  std::string target = "scores";
  std::string learner = "forest";
  std::uint64_t seed = 0;
  int n_trees = 100;
  int max_depth = 10;
  double min_leaf = 100;
  double l2 = 1e-4;
  int epochs = 400;

  // eval
  std::string model;
  std::string report;
  std::string svg;
  int bins = 10;

  // value
  std::string game;
  std::string model_scores;
  std::string model_concedes;

  // rate / report
  std::string values;
  std::string meta;
  double min_minutes = 900;
  std::string position;
  std::string born_after;
  std::vector<std::string> exclude_teams;
  std::size_t top = 0;
  int ma_window = 15;
  std::string ratings;
  std::string eval_report;

  std::string out;
};

int run_convert(const PipelineConfig& c);
int run_synth(const PipelineConfig& c);
int run_dataset(const PipelineConfig& c);
int run_train(const PipelineConfig& c);
int run_eval(const PipelineConfig& c);
int run_value(const PipelineConfig& c);
int run_rate(const PipelineConfig& c);
int run_report(const PipelineConfig& c);
int run_sweep(const PipelineConfig& c);

}  // namespace vaep::cli
