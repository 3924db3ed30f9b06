#include <algorithm>
#include <cmath>
#include <ostream>

#include "vaep/csv.hpp"
#include "vaep/errors.hpp"
#include "vaep/model.hpp"

namespace vaep {

GameSplit split_by_game(std::span<const Game> games, double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw errors::invalid_argument("model", "test_fraction must lie in (0, 1)");
  std::vector<const Game*> sorted;
  for (const auto& g : games) sorted.push_back(&g);
  std::sort(sorted.begin(), sorted.end(), [](const Game* a, const Game* b) { return a->game_id() < b->game_id(); });
  const std::size_t n = sorted.size();
  std::size_t n_test = std::size_t(std::ceil(test_fraction * double(n)));
  if (n >= 2) n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
  else n_test = 0;
  GameSplit s;
  for (std::size_t i = 0; i < n; ++i) (i < n - n_test ? s.train : s.test).push_back(*sorted[i]);
  return s;
}

std::vector<SweepRow> window_sweep(std::span<const Game> games, std::span<const int> w_values, int k,
                                   const ForestParams& params, double test_fraction) {
  if (w_values.empty()) throw errors::invalid_argument("model", "window_sweep needs at least one window size");
  const GameSplit split = split_by_game(games, test_fraction);
  if (split.train.empty() || split.test.empty())
    throw errors::empty_input("model", "window_sweep needs at least two games");
  std::vector<SweepRow> rows;
  for (const int w : w_values) {
    const Dataset train = build_dataset(split.train, w, k);
    const Dataset test = build_dataset(split.test, w, k);
    const ForestModel m = train_forest(train.features, train.scores, params);
    const auto p = predict_forest(m, test.features);
    const EvalReport r = evaluate(p, test.scores);
    rows.push_back({w, train.features.rows, test.features.rows, r.log_loss, r.roc_auc, r.brier, r.auc_defined});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "actions,log_loss,roc_auc,brier,auc_defined,train_rows,test_rows\n";
  for (const auto& r : rows) {
    out << r.w << ',' << io::format_double(r.log_loss) << ',' << io::format_double(r.roc_auc) << ','
        << io::format_double(r.brier) << ',' << (r.auc_defined ? 1 : 0) << ',' << r.train_rows << ','
        << r.test_rows << '\n';
  }
}

}  // namespace vaep
