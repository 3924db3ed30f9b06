#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "vaep/errors.hpp"
#include "vaep/parallel.hpp"

namespace {

void print_error(const std::string& module, const std::string& code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"module", module}, {"code", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using vaep::cli::PipelineConfig;
  PipelineConfig c;
  int jobs = 0;

  CLI::App app{"vaep: value soccer actions from event streams"};
  app.set_help_flag();
  app.set_help_all_flag("-h,--help", "Print this help, including every subcommand and flag");
  app.set_config("--config", "", "TOML or INI file with option values; command-line flags take precedence");
  app.add_option("--jobs", jobs, "Worker threads for parallel kernels (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.require_subcommand(1);

  auto* convert = app.add_subcommand("convert", "Convert a raw event stream (JSON lines) to SPADL");
  convert->add_option("--in,--input", c.input, "Raw events, one JSON object per line")->required();
  convert->add_option("--mapping", c.mapping, "Provider mapping table (TOML); built-in table when omitted");
  convert->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  convert->add_flag("--strict", c.strict, "Fail on unmapped or illegal events instead of skipping them");
  convert->add_option("--out", c.out, "Output SPADL file (a .meta.json sidecar is written next to it)")->required();

  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic league");
  synth->add_option("--seed", c.seed, "Seed for every random draw");
  synth->add_option("--games", c.n_games, "Number of games")->check(CLI::PositiveNumber);
  synth->add_option("--teams", c.n_teams, "Number of teams")->check(CLI::Range(2, 99));
  synth->add_option("--actions", c.n_actions, "Actions per game")->check(CLI::PositiveNumber);
  synth->add_option("--shot-rate", c.shot_rate, "Multiplier on every shooting hazard")->check(CLI::NonNegativeNumber);
  synth->add_option("--out", c.out, "Output directory (games, sidecars and meta.csv)")->required();

  auto* dataset = app.add_subcommand("dataset", "Build the feature/label table from SPADL games");
  dataset->add_option("--in,--games", c.games, "A .spadl.csv file or a directory of them")->required();
  dataset->add_option("-w,--w,--window", c.w, "Actions per game state")->check(CLI::Range(1, 10));
  dataset->add_option("-k,--k,--horizon", c.k, "Label horizon in actions")->check(CLI::PositiveNumber);
  dataset->add_option("--out", c.out, "Feature CSV (the training part when --test-out is given)")->required();
  dataset->add_option("--test-out", c.test_out, "Also split by game and write the test part here");
  dataset->add_option("--test-fraction", c.test_fraction, "Share of games held out")->check(CLI::Range(0.0, 1.0));

  auto* train = app.add_subcommand("train", "Train a scores or concedes classifier");
  train->add_option("--features", c.features, "Feature CSV from `dataset`")->required();
  train->add_option("--target", c.target, "Label to learn")->check(CLI::IsMember({"scores", "concedes"}));
  train->add_option("--learner", c.learner, "Classifier")->check(CLI::IsMember({"forest", "logistic"}));
  train->add_option("--seed", c.seed, "Seed for bootstrap and feature sampling");
  train->add_option("--n-trees", c.n_trees, "Forest size (1000 in the original setup)")->check(CLI::PositiveNumber);
  train->add_option("--max-depth", c.max_depth, "Forest tree depth limit")->check(CLI::NonNegativeNumber);
  train->add_option("--min-leaf", c.min_leaf, "Forest minimum rows per leaf")->check(CLI::Range(1.0, 1e12));
  train->add_option("--l2", c.l2, "Logistic L2 penalty")->check(CLI::NonNegativeNumber);
  train->add_option("--epochs", c.epochs, "Logistic maximum epochs")->check(CLI::NonNegativeNumber);
  train->add_option("--out", c.out, "Model file")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a model on a feature CSV");
  eval->add_option("--model", c.model, "Model file")->required();
  eval->add_option("--features", c.features, "Feature CSV")->required();
  eval->add_option("--report", c.report, "JSON report (log loss, ROC AUC, Brier, calibration bins)");
  eval->add_option("--svg", c.svg, "Calibration chart");
  eval->add_option("--bins", c.bins, "Calibration bins")->check(CLI::Range(1, 1000));

  auto* value = app.add_subcommand("value", "Value every on-ball action of one game or a directory of games");
  value->add_option("--game", c.game, "A .spadl.csv file or a directory of them")->required();
  value->add_option("--model-scores", c.model_scores, "Model trained on the scores target")->required();
  value->add_option("--model-concedes", c.model_concedes, "Model trained on the concedes target")->required();
  value->add_option("--out", c.out, "Values CSV, or a directory when --game is a directory")->required();

  auto* rate = app.add_subcommand("rate", "Aggregate action values into player and team ratings");
  rate->add_option("--values", c.values, "Values CSV or directory of *.values.csv")->required();
  rate->add_option("--meta", c.meta, "Appearances CSV (minutes, position, birth date)")->required();
  rate->add_option("--min-minutes", c.min_minutes, "Leaderboard minimum minutes")->check(CLI::NonNegativeNumber);
  rate->add_option("--position", c.position, "Leaderboard position or line (GK, DEF, MID, FWD)");
  rate->add_option("--born-after", c.born_after, "Keep players born on or after YYYY-MM-DD");
  rate->add_option("--exclude-teams", c.exclude_teams, "Teams left out of the leaderboard")->delimiter(',');
  rate->add_option("--top", c.top, "Leaderboard length (0: all)");
  rate->add_option("--ma-window", c.ma_window, "Games in the team moving average")->check(CLI::PositiveNumber);
  rate->add_option("--out", c.out, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Compose charts and tables from `rate` and `eval` outputs");
  report->add_option("--ratings", c.ratings, "Output directory of `rate`")->required();
  report->add_option("--eval-report", c.eval_report, "JSON report of `eval` for the calibration chart");
  report->add_option("--top", c.top, "Leaderboard rows to keep (0: all)");
  report->add_option("--ma-window", c.ma_window, "Window used by `rate`, for chart titles")->check(CLI::PositiveNumber);
  report->add_option("--out", c.out, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Compare forests over window sizes on a split by game");
  sweep->add_option("--games", c.games, "A directory of .spadl.csv games")->required();
  sweep->add_option("--windows", c.windows, "Window sizes")->delimiter(',');
  sweep->add_option("-k,--k,--horizon", c.k, "Label horizon in actions")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", c.seed, "Forest seed");
  sweep->add_option("--n-trees", c.n_trees, "Trees per forest")->check(CLI::PositiveNumber);
  sweep->add_option("--max-depth", c.max_depth, "Tree depth limit")->check(CLI::NonNegativeNumber);
  sweep->add_option("--min-leaf", c.min_leaf, "Minimum rows per leaf")->check(CLI::Range(1.0, 1e12));
  sweep->add_option("--test-fraction", c.test_fraction, "Share of games held out")->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--out", c.out, "Table CSV (also printed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("cli", "UsageError", e.what());
    return 2;
  }

  try {
    if (jobs > 0) vaep::set_jobs(jobs);
    if (*convert) return vaep::cli::run_convert(c);
    if (*synth) return vaep::cli::run_synth(c);
    if (*dataset) return vaep::cli::run_dataset(c);
    if (*train) return vaep::cli::run_train(c);
    if (*eval) return vaep::cli::run_eval(c);
    if (*value) return vaep::cli::run_value(c);
    if (*rate) return vaep::cli::run_rate(c);
    if (*report) return vaep::cli::run_report(c);
    if (*sweep) return vaep::cli::run_sweep(c);
  } catch (const vaep::Error& e) {
    print_error(e.module(), e.code(), e.what());
    return vaep::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    print_error("internal", "InternalError", e.what());
    return 4;
  }
  return 4;
}
