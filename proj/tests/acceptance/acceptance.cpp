// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"
#include "vaep/dataset.hpp"
#include "vaep/metrics.hpp"
#include "vaep/model.hpp"
#include "vaep/parallel.hpp"
#include "vaep/ratings.hpp"
#include "vaep/spadl_io.hpp"
#include "vaep/synth.hpp"
#include "vaep/valuation.hpp"

using namespace vaep;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s  %-34s %s (%.1fs)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Every on-ball state of every game valued with one pair of models.
struct Valued {
  std::vector<StateProbabilities> probs;
  std::vector<std::vector<ActionValue>> values;
};

Valued value_corpus(std::span<const Game> games, const Model& ms, const Model& mc) {
  Valued v;
  for (const auto& g : games) {
    v.probs.push_back(state_probabilities(g, ms, mc));
    v.values.push_back(value_actions(g, v.probs.back()));
  }
  return v;
}

std::pair<Model, Model> quick_models(std::span<const Game> games, int trees, std::uint64_t seed) {
  const Dataset d = build_dataset(games, 3, 10);
  ForestParams p;
  p.n_trees = trees;
  p.seed = seed;
  return {Model{Target::scores, train_forest(d.features, d.scores, p)},
          Model{Target::concedes, train_forest(d.features, d.concedes, p)}};
}

// Full in-memory pipeline rendered to bytes: dataset, two forests, values,
// leaderboard and team table.
std::string pipeline_bytes(std::span<const Game> games) {
  const auto split = split_by_game(games, 0.3);
  const Dataset train = build_dataset(split.train, 3, 10);
  ForestParams p;
  p.n_trees = 20;
  p.seed = 7;
  const Model ms{Target::scores, train_forest(train.features, train.scores, p)};
  const Model mc{Target::concedes, train_forest(train.features, train.concedes, p)};
  std::ostringstream out;
  write_dataset_csv(out, train);
  save_model(ms, out);
  save_model(mc, out);
  std::vector<ActionValue> all;
  for (const auto& vs : value_games(games, ms, mc)) {
    write_values_csv(out, vs);
    all.insert(all.end(), vs.begin(), vs.end());
  }
  std::vector<io::Appearance> apps;
  for (const auto& g : games) {
    const auto a = io::appearances_of(g);
    apps.insert(apps.end(), a.begin(), a.end());
  }
  write_leaderboard_csv(out, leaderboard(rate_players(all, apps), {.min_minutes = 90}));
  for (const auto& t : team_ratings(all)) out << t.game_id << ',' << t.team_id << ',' << t.rating << '\n';
  return out.str();
}

}  // namespace

int main() {
  std::printf("vaep acceptance\n");
  const auto corpus80 = synth::generate_corpus({.seed = 1, .n_games = 80});
  const std::span<const Game> corpus50 = std::span(corpus80).first(50);

  report(1, "label oracle (50 games, k=10)", [&] {
    const auto t0 = Clock::now();
    const auto games = synth::generate_corpus({.seed = 1, .n_games = 50});
    std::size_t states = 0, agree = 0;
    for (const auto& g : games) {
      const auto got = label_states(g, 10);
      const auto want = testsupport::oracle_labels(g, 10);
      states += want.size();
      for (std::size_t i = 0; i < want.size() && i < got.size(); ++i) agree += got[i] == want[i];
      if (got.size() != want.size()) return Outcome{false, "state count differs in " + g.game_id()};
    }
    const double secs = elapsed(t0);
    return Outcome{agree == states && secs < 10.0,
                   fmt("%zu/%zu states agree, %.2fs (limit 10s)", agree, states, secs)};
  });

  const auto [ms, mc] = quick_models(corpus50, 20, 5);
  const Valued valued = value_corpus(corpus50, ms, mc);

  report(2, "telescoping within 1e-12", [&] {
    double worst = 0.0;
    std::size_t chains = 0;
    for (std::size_t g = 0; g < corpus50.size(); ++g) {
      const auto& values = valued.values[g];
      for (const auto& c : attack_decomposition(corpus50[g], values).chains) {
        double s = 0.0;
        for (std::size_t i = c.first; i <= c.last; ++i) s += values[i].total;
        worst = std::max(worst, std::abs(s - chain_endpoint_delta(valued.probs[g], c)));
        ++chains;
      }
    }
    return Outcome{worst <= 1e-12, fmt("%zu chains, max |sum V - endpoint delta| = %.3g", chains, worst)};
  });

  report(3, "constant probabilities give V = 0", [&] {
    std::size_t nonzero = 0, n = 0;
    Rng rng(3);
    for (const auto& g : corpus50) {
      const HomeFrame c{rng.uniform(0.0, 0.1), rng.uniform(0.0, 0.1)};
      for (const auto& v : value_actions(g, StateProbabilities::constant(g, c))) {
        ++n;
        nonzero += v.total != 0.0 || v.offensive != 0.0 || v.defensive != 0.0;
      }
    }
    return Outcome{nonzero == 0, fmt("%zu actions, %zu nonzero", n, nonzero)};
  });

  report(4, "side swap negates V exactly", [&] {
    std::size_t mismatches = 0, n = 0;
    for (std::size_t g = 0; g < corpus50.size(); ++g) {
      const Game swapped = swap_sides(corpus50[g]);
      auto probs = StateProbabilities::for_game(swapped);
      probs.frame = valued.probs[g].frame;
      probs.baseline = valued.probs[g].baseline;
      const auto values = value_actions(swapped, probs);
      for (std::size_t i = 0; i < values.size(); ++i) {
        ++n;
        mismatches += values[i].total != -valued.values[g][i].total;
      }
    }
    return Outcome{mismatches == 0, fmt("%zu actions, %zu not exactly negated", n, mismatches)};
  });

  report(5, "metric oracles", [&] {
    Rng rng(5);
    std::size_t auc_bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + rng.below(1999);
      const int levels = 1 + int(rng.below(25));
      std::vector<double> p(n);
      std::vector<std::uint8_t> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = double(rng.below(std::uint64_t(levels))) / levels;
        y[i] = rng.bernoulli(0.2 + 0.5 * p[i]);
      }
      y[0] = 1;
      y[1] = 0;
      auc_bad += roc_auc(p, y) != testsupport::oracle_auc(p, y);
    }
    const std::vector<double> half{0.5, 0.5};
    const std::vector<std::uint8_t> y10{1, 0};
    const auto r = evaluate(half, y10);
    const double ll_err = std::abs(r.log_loss - std::numbers::ln2);
    const double br_err = std::abs(r.brier - 0.25);
    const bool ok = auc_bad == 0 && ll_err <= 1e-12 && br_err <= 1e-12 && r.roc_auc == 0.5;
    return Outcome{ok, fmt("AUC exact on %d/50 sets (n<=2000, ties); |ll-ln2|=%.2g |brier-0.25|=%.2g",
                           50 - int(auc_bad), ll_err, br_err)};
  });

  report(6, "learnability (80 games)", [&] {
    const auto t0 = Clock::now();
    const auto split = split_by_game(corpus80, 0.3);
    const Dataset train = build_dataset(split.train, 3, 10);
    const Dataset test = build_dataset(split.test, 3, 10);
    ForestParams fp;
    fp.n_trees = 100;
    fp.max_depth = 10;
    fp.min_leaf = 100;
    fp.seed = 1;
    const Model forest{Target::scores, train_forest(train.features, train.scores, fp)};
    const auto fr = evaluate(predict_proba(forest, test.features), test.scores, 10);
    const Model logit{Target::scores, train_logistic(train.features, train.scores, {})};
    const auto lr = evaluate(predict_proba(logit, test.features), test.scores, 10);
    const double secs = elapsed(t0);
    const bool ok = fr.roc_auc >= 0.80 && fr.calibration_mae() < 0.10 && lr.roc_auc >= 0.70 && secs < 120.0;
    return Outcome{ok, fmt("forest AUC %.4f (>=0.80), MAE %.4f (<0.10); logistic AUC %.4f (>=0.70); "
                           "%zu/%zu rows, %.1fs (<120s)",
                           fr.roc_auc, fr.calibration_mae(), lr.roc_auc, train.features.rows, test.features.rows,
                           secs)};
  });

  report(7, "window sweep w=1..5", [&] {
    const std::vector<int> ws{1, 2, 3, 4, 5};
    ForestParams p;
    p.n_trees = 30;
    p.seed = 7;
    const auto rows = window_sweep(std::span(corpus80).first(24), ws, 10, p, 0.3);
    std::printf("    Comparison of five Random Forest models (synthetic corpus)\n");
    std::printf("    %-8s %-10s %-10s %-10s\n", "actions", "log loss", "ROC AUC", "Brier");
    bool ok = rows.size() == 5;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      std::printf("    %-8d %-10.4f %-10.4f %-10.4f\n", r.w, r.log_loss, r.roc_auc, r.brier);
      ok = ok && r.w == ws[i] && std::isfinite(r.log_loss) && std::isfinite(r.brier) && r.auc_defined;
    }
    return Outcome{ok, fmt("%zu rows", rows.size())};
  });

  report(8, "aggregation identities", [&] {
    std::vector<ActionValue> all;
    std::vector<io::Appearance> apps;
    for (std::size_t g = 0; g < corpus50.size(); ++g) {
      all.insert(all.end(), valued.values[g].begin(), valued.values[g].end());
      const auto a = io::appearances_of(corpus50[g]);
      apps.insert(apps.end(), a.begin(), a.end());
    }
    const auto ratings = rate_players(all, apps);
    std::size_t type_bad = 0;
    std::map<std::string, double> team_players, team_games;
    for (const auto& r : ratings) {
      double s = 0.0;
      for (const auto& [t, v] : r.per_type) s += v;
      type_bad += s != r.total_value;
      team_players[r.team_id] += r.total_value;
    }
    for (const auto& t : team_ratings(all)) team_games[t.team_id] += t.rating;
    std::size_t line_bad = 0;
    for (const auto& c : line_contributions(all, apps)) {
      double s = 0.0;
      for (double v : c.totals) s += v;
      line_bad += s != c.team_total || c.team_total != team_games[c.team_id];
    }
    const std::vector<ActionValue> half{[] {
      ActionValue v;
      v.player_id = "p";
      v.total = 0.5;
      return v;
    }()};
    const double per90 = player_rating("p", half, 45.0).rating_per90;
    const bool ok = type_bad == 0 && line_bad == 0 && team_players == team_games && per90 == 1.0;
    return Outcome{ok, fmt("%zu players, %zu teams; type/player/line mismatches %zu/%zu/%zu; 0.5 over 45' -> %.17g",
                           ratings.size(), team_games.size(), type_bad, std::size_t(team_players != team_games),
                           line_bad, per90)};
  });

  report(9, "determinism and model round trip", [&] {
    const auto games = std::span(corpus80).first(8);
    set_jobs(1);
    const std::string a = pipeline_bytes(games);
    set_jobs(4);
    const std::string b = pipeline_bytes(games);
    set_jobs(0);
    const std::string c = pipeline_bytes(games);

    std::stringstream buf;
    save_model(ms, buf);
    const Model back = load_model(buf);
    Rng rng(9);
    FeatureMatrix x;
    x.schema = ms.schema();
    x.rows = 1000;
    x.values.resize(x.rows * x.cols());
    for (auto& v : x.values) v = rng.bernoulli(0.4) ? double(rng.below(2)) : rng.uniform(-10, 120);
    const auto p0 = predict_proba(ms, x), p1 = predict_proba(back, x);
    double worst = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) worst = std::max(worst, std::abs(p0[i] - p1[i]));
    const bool ok = a == b && b == c && p0 == p1;
    return Outcome{ok, fmt("pipeline %zu bytes identical across 3 runs: %s; max |dp| over 1000 rows = %g",
                           a.size(), a == b && b == c ? "yes" : "no", worst)};
  });

  report(10, "synthetic realism envelope", [&] {
    std::size_t n = 0, passes = 0, shots = 0, goals = 0;
    for (const auto& g : corpus80) {
      for (const auto& a : g.actions()) {
        ++n;
        passes += a.type == ActionType::pass;
        if (is_shot(a.type)) {
          ++shots;
          goals += a.result == ActionResult::success;
        }
      }
    }
    const double pass_share = double(passes) / double(n), shot_share = double(shots) / double(n);
    const double conversion = double(goals) / double(shots);
    const bool ok = pass_share >= 0.45 && pass_share <= 0.60 && shot_share >= 0.005 && shot_share <= 0.03 &&
                    std::abs(conversion - 0.11) <= 0.06;
    return Outcome{ok, fmt("pass %.1f%% (45-60), shots %.2f%% (0.5-3), conversion %.1f%% (11+-6)",
                           100 * pass_share, 100 * shot_share, 100 * conversion)};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
