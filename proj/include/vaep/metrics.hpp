#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vaep {

struct CalibrationBin {
  double lower = 0.0;
  double upper = 0.0;
  double mean_predicted = 0.0;  // bin midpoint when empty
  double fraction_positive = 0.0;
  std::size_t count = 0;
};

struct EvalReport {
  std::size_t n = 0;
  std::size_t positives = 0;
  double log_loss = 0.0;
  double roc_auc = 0.5;
  double brier = 0.0;
  // False when the labels hold a single class; roc_auc is then reported as 0.5.
  bool auc_defined = false;
  std::vector<CalibrationBin> bins;

  // Mean |mean_predicted - fraction_positive| over occupied bins.
  double calibration_mae() const;
};

// Probabilities are clipped to [1e-15, 1 - 1e-15] inside the log loss only.
// Throws LengthMismatch, EmptyInput.
EvalReport evaluate(std::span<const double> probs, std::span<const std::uint8_t> y, int n_bins = 10);

// Mann-Whitney statistic with half credit for ties, computed from tie-averaged
// ranks in integer arithmetic.
double roc_auc(std::span<const double> probs, std::span<const std::uint8_t> y, bool* defined = nullptr);

std::string report_to_json(const EvalReport& r);
EvalReport report_from_json(const std::string& text);

}  // namespace vaep
