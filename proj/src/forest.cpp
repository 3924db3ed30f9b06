#include "vaep/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vaep/errors.hpp"
#include "vaep/rng.hpp"

namespace vaep {
namespace {

void validate(const FeatureMatrix& x, std::span<const std::uint8_t> y, const ForestParams& p) {
  if (x.rows != y.size()) throw errors::length_mismatch("model", x.rows, y.size());
  if (x.rows == 0) throw errors::degenerate_input("cannot grow a forest on zero rows");
  if (p.n_trees < 1 || p.max_depth < 0 || !(p.min_leaf >= 1.0) || p.features_per_split < 0 || p.n_bins < 2 ||
      p.n_bins > 255)
    throw errors::invalid_argument("model",
                                   "forest: need n_trees >= 1, max_depth >= 0, min_leaf >= 1, 2 <= n_bins <= 255");
}

std::vector<double> column_thresholds(std::vector<double> v, int n_bins) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  std::vector<double> distinct(v);
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> t;
  if (distinct.size() <= std::size_t(n_bins)) {
    t.assign(distinct.begin(), distinct.end() - 1);
    return t;
  }
  for (int q = 1; q < n_bins; ++q) {
    const std::size_t idx = std::size_t(q) * n / std::size_t(n_bins);
    t.push_back(v[std::max<std::size_t>(idx, 1) - 1]);
  }
  t.erase(std::unique(t.begin(), t.end()), t.end());
  while (!t.empty() && t.back() >= distinct.back()) t.pop_back();
  return t;
}

void bin_column(const FeatureMatrix& x, std::size_t c, int n_bins, BinnedMatrix& b) {
  std::vector<double> col(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) col[r] = x.at(r, c);
  b.thresholds[c] = column_thresholds(col, n_bins);
  const auto& t = b.thresholds[c];
  for (std::size_t r = 0; r < x.rows; ++r)
    b.bins[c * x.rows + r] = std::uint8_t(std::lower_bound(t.begin(), t.end(), col[r]) - t.begin());
}

BinnedMatrix make_binned(const FeatureMatrix& x, int n_bins, bool parallel) {
  BinnedMatrix b;
  b.rows = x.rows;
  b.cols = x.cols();
  b.bins.resize(b.rows * b.cols);
  b.thresholds.resize(b.cols);
  const auto d = static_cast<std::ptrdiff_t>(b.cols);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < d; ++c) bin_column(x, std::size_t(c), n_bins, b);
  } else {
    for (std::ptrdiff_t c = 0; c < d; ++c) bin_column(x, std::size_t(c), n_bins, b);
  }
  return b;
}

class TreeBuilder {
 public:
  TreeBuilder(const BinnedMatrix& b, std::span<const std::uint8_t> y, const ForestParams& p, std::uint64_t seed)
      : b_(b), y_(y), p_(p), rng_(seed) {
    const std::size_t d = b.cols;
    mtry_ = p.features_per_split > 0 ? std::min<std::size_t>(std::size_t(p.features_per_split), d)
                                     : std::size_t(std::ceil(std::sqrt(double(d))));
    mtry_ = std::max<std::size_t>(mtry_, 1);
    pool_.resize(d);
    for (std::size_t j = 0; j < d; ++j) pool_[j] = std::uint32_t(j);
    hist_n_.resize(256);
    hist_p_.resize(256);
  }

  Tree grow() {
    const std::size_t n = b_.rows;
    w_.assign(n, 0.0);
    if (p_.bootstrap) {
      for (std::size_t k = 0; k < n; ++k) w_[rng_.below(n)] += 1.0;
    } else {
      std::fill(w_.begin(), w_.end(), 1.0);
    }
    rows_.clear();
    for (std::size_t r = 0; r < n; ++r)
      if (w_[r] > 0) rows_.push_back(std::uint32_t(r));
    tree_ = Tree{};
    build(0, rows_.size(), 0);
    return std::move(tree_);
  }

 private:
  std::int32_t build(std::size_t begin, std::size_t end, int depth) {
    double n = 0.0, pos = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const auto r = rows_[k];
      n += w_[r];
      if (y_[r]) pos += w_[r];
    }
    const auto idx = std::int32_t(tree_.nodes.size());
    TreeNode node;
    node.value = (pos + 1.0) / (n + 2.0);
    node.weight = n;
    tree_.nodes.push_back(node);
    if (depth >= p_.max_depth || n < 2.0 * p_.min_leaf || pos == 0.0 || pos == n) return idx;

    // Partial Fisher-Yates draw of mtry candidate features, then scan them in
    // ascending order so ties go to the lowest feature and lowest threshold.
    for (std::size_t k = 0; k < mtry_; ++k) {
      const std::size_t j = k + std::size_t(rng_.below(pool_.size() - k));
      std::swap(pool_[k], pool_[j]);
    }
    std::vector<std::uint32_t> cand(pool_.begin(), pool_.begin() + std::ptrdiff_t(mtry_));
    std::sort(cand.begin(), cand.end());

    double best = -std::numeric_limits<double>::infinity();
    std::int32_t best_f = -1;
    int best_bin = -1;
    for (const auto f : cand) {
      const std::size_t nb = b_.thresholds[f].size() + 1;
      if (nb < 2) continue;
      std::fill(hist_n_.begin(), hist_n_.begin() + std::ptrdiff_t(nb), 0.0);
      std::fill(hist_p_.begin(), hist_p_.begin() + std::ptrdiff_t(nb), 0.0);
      const std::uint8_t* col = b_.bins.data() + std::size_t(f) * b_.rows;
      for (std::size_t k = begin; k < end; ++k) {
        const auto r = rows_[k];
        hist_n_[col[r]] += w_[r];
        if (y_[r]) hist_p_[col[r]] += w_[r];
      }
      double ln = 0.0, lp = 0.0;
      for (std::size_t bin = 0; bin + 1 < nb; ++bin) {
        ln += hist_n_[bin];
        lp += hist_p_[bin];
        const double rn = n - ln, rp = pos - lp;
        if (ln < p_.min_leaf || rn < p_.min_leaf) continue;
        const double score = (lp * lp + (ln - lp) * (ln - lp)) / ln + (rp * rp + (rn - rp) * (rn - rp)) / rn;
        if (score > best) {
          best = score;
          best_f = std::int32_t(f);
          best_bin = int(bin);
        }
      }
    }
    const double parent = (pos * pos + (n - pos) * (n - pos)) / n;
    if (best_f < 0 || best <= parent * (1.0 + 1e-12)) return idx;

    const std::uint8_t* col = b_.bins.data() + std::size_t(best_f) * b_.rows;
    const auto mid_it =
        std::stable_partition(rows_.begin() + std::ptrdiff_t(begin), rows_.begin() + std::ptrdiff_t(end),
                              [&](std::uint32_t r) { return col[r] <= best_bin; });
    const auto mid = std::size_t(mid_it - rows_.begin());
    const auto left = build(begin, mid, depth + 1);
    const auto right = build(mid, end, depth + 1);
    auto& self = tree_.nodes[std::size_t(idx)];
    self.feature = best_f;
    self.threshold = b_.thresholds[std::size_t(best_f)][std::size_t(best_bin)];
    self.left = left;
    self.right = right;
    return idx;
  }

  const BinnedMatrix& b_;
  std::span<const std::uint8_t> y_;
  const ForestParams& p_;
  Rng rng_;
  std::size_t mtry_ = 1;
  std::vector<std::uint32_t> pool_;
  std::vector<double> w_;
  std::vector<std::uint32_t> rows_;
  std::vector<double> hist_n_, hist_p_;
  Tree tree_;
};

double mean_prediction(const ForestModel& m, std::span<const double> row) {
  double s = 0.0;
  for (const auto& t : m.trees) s += t.predict(row);
  return s / double(m.trees.size());
}

void check_schema(const ForestModel& m, const FeatureMatrix& x) {
  if (!(x.schema == m.schema)) throw errors::schema_mismatch("feature matrix does not match the model schema");
}

}  // namespace

double Tree::predict(std::span<const double> row) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& nd = nodes[i];
    i = std::size_t(row[std::size_t(nd.feature)] <= nd.threshold ? nd.left : nd.right);
  }
  return nodes[i].value;
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  int best = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (nodes[i].feature >= 0) {
      stack.push_back({std::size_t(nodes[i].left), d + 1});
      stack.push_back({std::size_t(nodes[i].right), d + 1});
    }
  }
  return best;
}

BinnedMatrix bin_features(const FeatureMatrix& x, int n_bins) { return make_binned(x, n_bins, true); }

ForestModel train_forest(const FeatureMatrix& x, std::span<const std::uint8_t> y, const ForestParams& params) {
  validate(x, y, params);
  const BinnedMatrix b = make_binned(x, params.n_bins, true);
  ForestModel m;
  m.schema = x.schema;
  m.params = params;
  m.trees.resize(std::size_t(params.n_trees));
  const auto nt = static_cast<std::ptrdiff_t>(params.n_trees);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < nt; ++t) {
    TreeBuilder builder(b, y, params, stream_seed(params.seed, std::uint64_t(t)));
    m.trees[std::size_t(t)] = builder.grow();
  }
  return m;
}

double predict_forest(const ForestModel& m, std::span<const double> row) { return mean_prediction(m, row); }

std::vector<double> predict_forest(const ForestModel& m, const FeatureMatrix& x) {
  check_schema(m, x);
  std::vector<double> out(x.rows);
  const auto n = static_cast<std::ptrdiff_t>(x.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[std::size_t(i)] = mean_prediction(m, x.row(std::size_t(i)));
  return out;
}

namespace serial {

ForestModel train_forest(const FeatureMatrix& x, std::span<const std::uint8_t> y, const ForestParams& params) {
  validate(x, y, params);
  const BinnedMatrix b = make_binned(x, params.n_bins, false);
  ForestModel m;
  m.schema = x.schema;
  m.params = params;
  for (int t = 0; t < params.n_trees; ++t) {
    TreeBuilder builder(b, y, params, stream_seed(params.seed, std::uint64_t(t)));
    m.trees.push_back(builder.grow());
  }
  return m;
}

std::vector<double> predict_forest(const ForestModel& m, const FeatureMatrix& x) {
  check_schema(m, x);
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = mean_prediction(m, x.row(i));
  return out;
}

}  // namespace serial
}  // namespace vaep
