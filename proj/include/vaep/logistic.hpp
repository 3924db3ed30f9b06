#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vaep/dataset.hpp"

namespace vaep {

struct LogisticParams {
  double l2 = 1e-4;
  int max_epochs = 400;
  double tol = 1e-6;  // stop once the gradient norm drops below this
  std::uint64_t seed = 0;
};

// L2-regularized logistic regression on standardized inputs. Columns that only
// hold 0/1 values are left as they are.
struct LogisticModel {
  FeatureSchema schema;
  LogisticParams params;
  std::vector<double> weights;  // in standardized space
  std::vector<double> mean;
  std::vector<double> scale;
  double bias = 0.0;
  int epochs_run = 0;
  std::vector<double> loss_history;  // objective after each accepted step
};

// Full-batch gradient descent; the objective never increases between epochs.
// Labels of a single class yield a constant model. Throws DegenerateInput on
// zero rows and LengthMismatch when y does not match.
LogisticModel train_logistic(const FeatureMatrix& x, std::span<const std::uint8_t> y,
                             const LogisticParams& params = {});

double predict_logistic(const LogisticModel& m, std::span<const double> row);
std::vector<double> predict_logistic(const LogisticModel& m, const FeatureMatrix& x);

namespace serial {
std::vector<double> predict_logistic(const LogisticModel& m, const FeatureMatrix& x);
}

}  // namespace vaep
