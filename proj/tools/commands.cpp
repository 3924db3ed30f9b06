#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "vaep/csv.hpp"
#include "vaep/dataset.hpp"
#include "vaep/errors.hpp"
#include "vaep/ingest.hpp"
#include "vaep/metrics.hpp"
#include "vaep/model.hpp"
#include "vaep/ratings.hpp"
#include "vaep/spadl_io.hpp"
#include "vaep/svg.hpp"
#include "vaep/synth.hpp"
#include "vaep/valuation.hpp"

namespace fs = std::filesystem;

namespace vaep::cli {
namespace {

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw errors::invalid_argument("cli", flag + " is required");
}

void require_exists(const std::string& path) {
  if (!fs::exists(path)) throw errors::missing_file(path);
}

std::vector<Game> load_game_inputs(const std::string& path) {
  require_exists(path);
  std::vector<Game> games;
  if (fs::is_directory(path)) {
    games = io::load_games(path);
  } else {
    games.push_back(io::load_game(path));
  }
  if (games.empty()) throw errors::empty_input("cli", "no *.spadl.csv games under " + path);
  return games;
}

// Value files from a single CSV or every *.values.csv in a directory.
std::vector<ActionValue> load_values(const std::string& path) {
  require_exists(path);
  if (!fs::is_directory(path)) return read_values_csv(path);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 11 && name.ends_with(".values.csv")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw errors::empty_input("cli", "no *.values.csv files under " + path);
  std::vector<ActionValue> all;
  for (const auto& f : files) {
    auto v = read_values_csv(f);
    all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  return all;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw errors::io_failure(dir, ec.message());
}

ForestParams forest_params(const PipelineConfig& c) {
  ForestParams p;
  p.n_trees = c.n_trees;
  p.max_depth = c.max_depth;
  p.min_leaf = c.min_leaf;
  p.seed = c.seed;
  return p;
}

const std::vector<std::uint8_t>& labels_for(const Dataset& d, Target t) {
  return t == Target::scores ? d.scores : d.concedes;
}

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

int run_convert(const PipelineConfig& c) {
  require(c.input, "--input");
  require(c.out, "--out");
  std::ifstream in(c.input);
  if (!in) throw errors::missing_file(c.input);
  const ingest::Mapping mapping = c.mapping.empty() ? ingest::default_mapping() : ingest::load_mapping(c.mapping);
  const auto result = ingest::parse_events(in, mapping, c.strict);
  if (c.format == "csv") {
    io::save_game(c.out, result.game);
  } else if (c.format == "jsonl") {
    io::write_atomic(c.out, [&](std::ostream& o) { io::write_spadl_jsonl(o, result.game); });
    io::write_text_atomic(io::metadata_path_for(c.out), io::metadata_to_json(result.game.metadata()));
  } else {
    throw errors::invalid_argument("cli", "--format must be csv or jsonl");
  }
  for (const auto& s : result.skipped) std::cerr << "skipped line " << s.line_no << ": " << s.reason << '\n';
  std::cout << "converted " << result.game.size() << " actions, skipped " << result.skipped.size() << " events\n";
  return 0;
}

int run_synth(const PipelineConfig& c) {
  require(c.out, "--out");
  ensure_dir(c.out);
  synth::CorpusConfig cfg;
  cfg.seed = c.seed;
  cfg.n_games = c.n_games;
  cfg.n_teams = c.n_teams;
  cfg.n_actions = c.n_actions;
  cfg.shot_rate = c.shot_rate;
  const auto games = synth::generate_corpus(cfg);
  std::vector<io::Appearance> appearances;
  for (const auto& g : games) {
    io::save_game(fs::path(c.out) / (g.game_id() + ".spadl.csv"), g);
    const auto a = io::appearances_of(g);
    appearances.insert(appearances.end(), a.begin(), a.end());
  }
  io::write_atomic(fs::path(c.out) / "meta.csv", [&](std::ostream& o) { io::write_appearances_csv(o, appearances); });
  std::cout << "wrote " << games.size() << " games to " << c.out << '\n';
  return 0;
}

int run_dataset(const PipelineConfig& c) {
  require(c.games, "--games");
  require(c.out, "--out");
  const auto games = load_game_inputs(c.games);
  if (c.test_out.empty()) {
    const Dataset d = build_dataset(games, c.w, c.k);
    io::write_atomic(c.out, [&](std::ostream& o) { write_dataset_csv(o, d); });
    std::cout << "wrote " << d.features.rows << " states x " << d.features.cols() << " features\n";
    return 0;
  }
  const GameSplit split = split_by_game(games, c.test_fraction);
  if (split.train.empty() || split.test.empty())
    throw errors::empty_input("cli", "a train/test split needs at least two games");
  const Dataset train = build_dataset(split.train, c.w, c.k);
  const Dataset test = build_dataset(split.test, c.w, c.k);
  io::write_atomic(c.out, [&](std::ostream& o) { write_dataset_csv(o, train); });
  io::write_atomic(c.test_out, [&](std::ostream& o) { write_dataset_csv(o, test); });
  std::cout << "wrote " << train.features.rows << " train and " << test.features.rows << " test states ("
            << split.train.size() << "/" << split.test.size() << " games)\n";
  return 0;
}

int run_train(const PipelineConfig& c) {
  require(c.features, "--features");
  require(c.out, "--out");
  const Target target = parse_target(c.target);
  const LearnerKind kind = parse_learner(c.learner);
  const Dataset d = read_dataset_csv(c.features);
  const auto& y = labels_for(d, target);
  Model m;
  m.target = target;
  if (kind == LearnerKind::forest) {
    m.learner = train_forest(d.features, y, forest_params(c));
  } else {
    LogisticParams p;
    p.l2 = c.l2;
    p.max_epochs = c.epochs;
    p.seed = c.seed;
    m.learner = train_logistic(d.features, y, p);
  }
  save_model(m, fs::path(c.out));
  std::cout << "trained " << to_string(kind) << " for " << to_string(target) << " on " << d.features.rows
            << " states\n";
  return 0;
}

int run_eval(const PipelineConfig& c) {
  require(c.model, "--model");
  require(c.features, "--features");
  const Model m = load_model(fs::path(c.model));
  const Dataset d = read_dataset_csv(c.features);
  const auto p = predict_proba(m, d.features);
  const EvalReport r = evaluate(p, labels_for(d, m.target), c.bins);
  const std::string json = report_to_json(r);
  if (!c.report.empty()) io::write_text_atomic(c.report, json);
  if (!c.svg.empty())
    io::write_text_atomic(c.svg, svg::calibration_chart(r, "Calibration (" + to_string(m.target) + ")"));
  std::cout << "log_loss " << fmt(r.log_loss) << " roc_auc " << fmt(r.roc_auc)
            << (r.auc_defined ? "" : " (undefined)") << " brier " << fmt(r.brier) << '\n';
  return 0;
}

int run_value(const PipelineConfig& c) {
  require(c.game, "--game");
  require(c.model_scores, "--model-scores");
  require(c.model_concedes, "--model-concedes");
  require(c.out, "--out");
  const Model ms = load_model(fs::path(c.model_scores));
  const Model mc = load_model(fs::path(c.model_concedes));
  if (ms.target != Target::scores) throw errors::invalid_argument("cli", c.model_scores + " is not a scores model");
  if (mc.target != Target::concedes)
    throw errors::invalid_argument("cli", c.model_concedes + " is not a concedes model");
  const auto games = load_game_inputs(c.game);
  const auto values = value_games(games, ms, mc);
  if (fs::is_directory(c.game)) {
    ensure_dir(c.out);
    for (std::size_t i = 0; i < games.size(); ++i) {
      io::write_atomic(fs::path(c.out) / (games[i].game_id() + ".values.csv"),
                       [&](std::ostream& o) { write_values_csv(o, values[i]); });
    }
  } else {
    io::write_atomic(c.out, [&](std::ostream& o) { write_values_csv(o, values.front()); });
  }
  std::size_t n = 0;
  for (const auto& v : values) n += v.size();
  std::cout << "valued " << n << " actions in " << games.size() << " games\n";
  return 0;
}

int run_rate(const PipelineConfig& c) {
  require(c.values, "--values");
  require(c.meta, "--meta");
  require(c.out, "--out");
  const auto values = load_values(c.values);
  const auto appearances = io::read_appearances_csv(c.meta);
  const auto ratings = rate_players(values, appearances);

  LeaderboardFilter filter;
  filter.min_minutes = c.min_minutes;
  if (!c.position.empty()) filter.position = c.position;
  if (!c.born_after.empty()) filter.born_after = c.born_after;
  filter.excluded_teams.insert(c.exclude_teams.begin(), c.exclude_teams.end());
  filter.limit = c.top;
  const auto board = leaderboard(ratings, filter);

  ensure_dir(c.out);
  const fs::path out(c.out);
  io::write_atomic(out / "leaderboard.csv", [&](std::ostream& o) { write_leaderboard_csv(o, board); });
  for (const Line l : {Line::goalkeeper, Line::defender, Line::midfielder, Line::forward}) {
    LeaderboardFilter per_line = filter;
    per_line.position = std::string(to_string(l));
    const auto rows = leaderboard(ratings, per_line);
    io::write_atomic(out / ("leaderboard_" + std::string(to_string(l)) + ".csv"),
                     [&](std::ostream& o) { write_leaderboard_csv(o, rows); });
  }
  io::write_text_atomic(out / "profiles.json", profiles_to_json(board));

  io::write_atomic(out / "scatter.csv", [&](std::ostream& o) {
    o << "player_id,team_id,position,minutes,actions_per90,mean_value_per_action,rating_per90\n";
    for (const auto& r : ratings) {
      if (r.minutes < c.min_minutes) continue;
      o << io::csv_escape(r.player_id) << ',' << io::csv_escape(r.team_id) << ',' << io::csv_escape(r.position) << ','
        << fmt(r.minutes) << ',' << fmt(r.actions_per90) << ',' << fmt(r.mean_value_per_action) << ','
        << fmt(r.rating_per90) << '\n';
    }
  });

  const auto teams = team_ratings(values);
  std::set<std::string> team_ids;
  for (const auto& t : teams) team_ids.insert(t.team_id);
  io::write_atomic(out / "team_ratings.csv", [&](std::ostream& o) {
    o << "team_id,game_index,game_id,rating,moving_average\n";
    for (const auto& team : team_ids) {
      const auto series = team_series(values, team);
      std::vector<double> xs;
      for (const auto& [g, v] : series) xs.push_back(v);
      const auto ma = moving_average(xs, c.ma_window);
      for (std::size_t i = 0; i < series.size(); ++i)
        o << io::csv_escape(team) << ',' << i << ',' << io::csv_escape(series[i].first) << ',' << fmt(xs[i]) << ','
          << fmt(ma[i]) << '\n';
    }
  });

  io::write_atomic(out / "lines.csv", [&](std::ostream& o) {
    o << "team_id,games,GK,DEF,MID,FWD,unclassified,team_per_game\n";
    for (const auto& l : line_contributions(values, appearances)) {
      o << io::csv_escape(l.team_id) << ',' << l.games;
      for (const double v : l.per_game) o << ',' << fmt(v);
      o << ',' << fmt(l.team_per_game) << '\n';
    }
  });
  std::cout << "rated " << ratings.size() << " players; " << board.size() << " on the leaderboard\n";
  return 0;
}

int run_report(const PipelineConfig& c) {
  require(c.ratings, "--ratings");
  require(c.out, "--out");
  require_exists(c.ratings);
  ensure_dir(c.out);
  const fs::path in(c.ratings), out(c.out);

  if (!c.eval_report.empty()) {
    const EvalReport r = report_from_json(io::read_text(c.eval_report));
    io::write_text_atomic(out / "calibration.svg", svg::calibration_chart(r));
  }

  const auto board = io::read_csv(in / "leaderboard.csv");
  const std::size_t limit = c.top ? std::min(c.top, board.rows.size()) : board.rows.size();
  io::write_atomic(out / "leaderboard.csv", [&](std::ostream& o) {
    o << io::join_csv(board.header) << '\n';
    for (std::size_t i = 0; i < limit; ++i) o << io::join_csv(board.rows[i]) << '\n';
  });
  io::write_text_atomic(out / "profiles.json", io::read_text(in / "profiles.json"));

  const auto scatter = io::read_csv(in / "scatter.csv");
  std::vector<svg::LabeledPoint> pts;
  const auto c_player = scatter.column("player_id"), c_x = scatter.column("actions_per90"),
             c_y = scatter.column("mean_value_per_action");
  for (const auto& row : scatter.rows)
    pts.push_back({row[c_player], io::parse_double(row[c_x]), io::parse_double(row[c_y])});
  io::write_text_atomic(out / "value_vs_volume.svg",
                        svg::scatter_chart("Value per action vs actions per 90", "actions per 90",
                                           "mean value per action", pts));

  const auto teams = io::read_csv(in / "team_ratings.csv");
  const auto c_team = teams.column("team_id"), c_idx = teams.column("game_index"),
             c_ma = teams.column("moving_average");
  std::vector<svg::Series> series;
  for (const auto& row : teams.rows) {
    if (series.empty() || series.back().label != row[c_team]) series.push_back({row[c_team], {}});
    series.back().points.emplace_back(io::parse_double(row[c_idx]), io::parse_double(row[c_ma]));
  }
  io::write_text_atomic(out / "team_series.svg",
                        svg::line_chart("Team rating, " + std::to_string(c.ma_window) + "-game moving average",
                                        "game", "rating", series));
  io::write_text_atomic(out / "team_series.csv", io::read_text(in / "team_ratings.csv"));

  std::ostringstream md;
  md << "# Ratings report\n\n"
     << "| rank | player | team | position | minutes | rating per 90 |\n|---|---|---|---|---|---|\n";
  const auto c_rank = board.column("rank"), c_pid = board.column("player_id"), c_tid = board.column("team_id"),
             c_pos = board.column("position"), c_min = board.column("minutes"),
             c_rating = board.column("rating_per90");
  for (std::size_t i = 0; i < std::min<std::size_t>(limit, 20); ++i) {
    const auto& r = board.rows[i];
    md << "| " << r[c_rank] << " | " << r[c_pid] << " | " << r[c_tid] << " | " << r[c_pos] << " | " << r[c_min]
       << " | " << r[c_rating] << " |\n";
  }
  io::write_text_atomic(out / "summary.md", md.str());
  std::cout << "report written to " << c.out << '\n';
  return 0;
}

int run_sweep(const PipelineConfig& c) {
  require(c.games, "--games");
  const auto games = load_game_inputs(c.games);
  const auto rows = window_sweep(games, c.windows, c.k, forest_params(c), c.test_fraction);
  std::ostringstream table;
  write_sweep_csv(table, rows);
  if (!c.out.empty()) io::write_text_atomic(c.out, table.str());
  std::cout << table.str();
  return 0;
}

}  // namespace vaep::cli
