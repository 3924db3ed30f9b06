#include "vaep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "vaep/errors.hpp"

namespace vaep {

double EvalReport::calibration_mae() const {
  double sum = 0.0;
  std::size_t occupied = 0;
  for (const auto& b : bins) {
    if (b.count == 0) continue;
    sum += std::abs(b.mean_predicted - b.fraction_positive);
    ++occupied;
  }
  return occupied ? sum / double(occupied) : 0.0;
}

double roc_auc(std::span<const double> probs, std::span<const std::uint8_t> y, bool* defined) {
  if (probs.size() != y.size()) throw errors::length_mismatch("model", probs.size(), y.size());
  const std::size_t n = probs.size();
  std::uint64_t pos = 0;
  for (auto v : y) pos += v ? 1 : 0;
  const std::uint64_t neg = n - pos;
  if (pos == 0 || neg == 0) {
    if (defined) *defined = false;
    return 0.5;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });

  // Twice the rank sum of the positives; a tie group spanning ranks lo..hi
  // contributes (lo + hi) per positive member.
  std::uint64_t twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && probs[order[j + 1]] == probs[order[i]]) ++j;
    std::uint64_t pos_in_group = 0;
    for (std::size_t t = i; t <= j; ++t) pos_in_group += y[order[t]] ? 1 : 0;
    twice_rank_sum += pos_in_group * std::uint64_t((i + 1) + (j + 1));
    i = j + 1;
  }
  const std::uint64_t twice_u = twice_rank_sum - pos * (pos + 1);
  if (defined) *defined = true;
  return double(twice_u) / double(2 * pos * neg);
}

EvalReport evaluate(std::span<const double> probs, std::span<const std::uint8_t> y, int n_bins) {
  if (probs.size() != y.size()) throw errors::length_mismatch("model", probs.size(), y.size());
  if (probs.empty()) throw errors::empty_input("model", "cannot evaluate zero predictions");
  if (n_bins < 1) throw errors::invalid_argument("model", "n_bins must be >= 1");

  EvalReport r;
  r.n = probs.size();
  constexpr double eps = 1e-15;
  double ll = 0.0, brier = 0.0;
  std::vector<double> bin_sum(std::size_t(n_bins), 0.0);
  std::vector<std::size_t> bin_pos(std::size_t(n_bins), 0), bin_count(std::size_t(n_bins), 0);
  for (std::size_t i = 0; i < r.n; ++i) {
    const double p = probs[i];
    const double t = y[i] ? 1.0 : 0.0;
    const double pc = std::clamp(p, eps, 1.0 - eps);
    ll -= y[i] ? std::log(pc) : std::log1p(-pc);
    brier += (p - t) * (p - t);
    r.positives += y[i] ? 1 : 0;
    const auto b = std::size_t(std::clamp(int(std::floor(p * n_bins)), 0, n_bins - 1));
    bin_sum[b] += p;
    bin_count[b] += 1;
    bin_pos[b] += y[i] ? 1 : 0;
  }
  r.log_loss = ll / double(r.n);
  r.brier = brier / double(r.n);
  r.roc_auc = roc_auc(probs, y, &r.auc_defined);
  for (int b = 0; b < n_bins; ++b) {
    CalibrationBin bin;
    bin.lower = double(b) / n_bins;
    bin.upper = double(b + 1) / n_bins;
    bin.count = bin_count[std::size_t(b)];
    if (bin.count) {
      bin.mean_predicted = bin_sum[std::size_t(b)] / double(bin.count);
      bin.fraction_positive = double(bin_pos[std::size_t(b)]) / double(bin.count);
    } else {
      bin.mean_predicted = 0.5 * (bin.lower + bin.upper);
    }
    r.bins.push_back(bin);
  }
  return r;
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["positives"] = r.positives;
  j["log_loss"] = r.log_loss;
  j["roc_auc"] = r.roc_auc;
  j["auc_defined"] = r.auc_defined;
  j["brier"] = r.brier;
  j["calibration_mae"] = r.calibration_mae();
  auto bins = nlohmann::json::array();
  for (const auto& b : r.bins) {
    bins.push_back({{"lower", b.lower},
                    {"upper", b.upper},
                    {"mean_predicted", b.mean_predicted},
                    {"fraction_positive", b.fraction_positive},
                    {"count", b.count}});
  }
  j["calibration"] = std::move(bins);
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    EvalReport r;
    r.n = j.at("n").get<std::size_t>();
    r.positives = j.at("positives").get<std::size_t>();
    r.log_loss = j.at("log_loss").get<double>();
    r.roc_auc = j.at("roc_auc").get<double>();
    r.auc_defined = j.at("auc_defined").get<bool>();
    r.brier = j.at("brier").get<double>();
    for (const auto& b : j.at("calibration")) {
      r.bins.push_back({b.at("lower").get<double>(), b.at("upper").get<double>(),
                        b.at("mean_predicted").get<double>(), b.at("fraction_positive").get<double>(),
                        b.at("count").get<std::size_t>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw errors::malformed_file("model", "<report>", e.what());
  }
}

}  // namespace vaep
