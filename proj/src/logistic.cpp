#include "vaep/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "vaep/errors.hpp"

namespace vaep {
namespace {

constexpr std::size_t kChunk = 4096;
constexpr double kClip = 1e-15;

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::size_t n_chunks(std::size_t n) { return (n + kChunk - 1) / kChunk; }

// Row-major standardized design; the sums below are taken per fixed-size
// chunk and then combined in chunk order, so results do not depend on the
// number of threads.
struct Design {
  std::size_t n = 0, d = 0;
  std::vector<double> z;
  std::span<const double> row(std::size_t i) const { return {z.data() + i * d, d}; }
};

void margins(const Design& x, const std::vector<double>& w, double b, std::vector<double>& out) {
  const auto n = static_cast<std::ptrdiff_t>(x.n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = x.row(std::size_t(i));
    double s = b;
    for (std::size_t j = 0; j < x.d; ++j) s += w[j] * r[j];
    out[std::size_t(i)] = s;
  }
}

double mean_loss(const std::vector<double>& m, std::span<const std::uint8_t> y) {
  const std::size_t n = m.size();
  const std::size_t c = n_chunks(n);
  std::vector<double> part(c, 0.0);
  const auto cc = static_cast<std::ptrdiff_t>(c);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < cc; ++k) {
    double s = 0.0;
    const std::size_t hi = std::min(n, std::size_t(k + 1) * kChunk);
    for (std::size_t i = std::size_t(k) * kChunk; i < hi; ++i) s += softplus(m[i]) - (y[i] ? m[i] : 0.0);
    part[std::size_t(k)] = s;
  }
  double total = 0.0;
  for (double p : part) total += p;
  return total / double(n);
}

// Returns (1/n) * X^T r in out[0..d) and (1/n) * sum(r) in out[d].
void weighted_column_sums(const Design& x, const std::vector<double>& r, std::vector<double>& out) {
  const std::size_t c = n_chunks(x.n);
  const std::size_t d = x.d;
  std::vector<double> part(c * (d + 1), 0.0);
  const auto cc = static_cast<std::ptrdiff_t>(c);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < cc; ++k) {
    double* acc = part.data() + std::size_t(k) * (d + 1);
    const std::size_t hi = std::min(x.n, std::size_t(k + 1) * kChunk);
    for (std::size_t i = std::size_t(k) * kChunk; i < hi; ++i) {
      const auto row = x.row(i);
      const double ri = r[i];
      for (std::size_t j = 0; j < d; ++j) acc[j] += ri * row[j];
      acc[d] += ri;
    }
  }
  out.assign(d + 1, 0.0);
  for (std::size_t k = 0; k < c; ++k)
    for (std::size_t j = 0; j <= d; ++j) out[j] += part[k * (d + 1) + j];
  for (double& v : out) v /= double(x.n);
}

// Largest eigenvalue of (1/n) [X 1]^T [X 1] by power iteration.
double gram_spectral_norm(const Design& x) {
  std::vector<double> v(x.d + 1, 1.0 / std::sqrt(double(x.d + 1)));
  std::vector<double> u(x.n), next;
  double lambda = 0.0;
  for (int it = 0; it < 60; ++it) {
    std::vector<double> w(v.begin(), v.end() - 1);
    margins(x, w, v.back(), u);
    weighted_column_sums(x, u, next);
    double norm = 0.0;
    for (double t : next) norm += t * t;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    const double prev = lambda;
    lambda = norm;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = next[j] / norm;
    if (it > 5 && std::abs(lambda - prev) <= 1e-9 * lambda) break;
  }
  return lambda;
}

double l2_term(const std::vector<double>& w, double l2) {
  double s = 0.0;
  for (double t : w) s += t * t;
  return 0.5 * l2 * s;
}

}  // namespace

LogisticModel train_logistic(const FeatureMatrix& x, std::span<const std::uint8_t> y, const LogisticParams& params) {
  if (x.rows != y.size()) throw errors::length_mismatch("model", x.rows, y.size());
  if (x.rows == 0) throw errors::degenerate_input("cannot fit logistic regression on zero rows");
  if (!(params.l2 >= 0.0) || params.max_epochs < 0)
    throw errors::invalid_argument("model", "logistic: l2 must be >= 0 and max_epochs >= 0");

  const std::size_t n = x.rows, d = x.cols();
  LogisticModel m;
  m.schema = x.schema;
  m.params = params;
  m.weights.assign(d, 0.0);
  m.mean.assign(d, 0.0);
  m.scale.assign(d, 1.0);

  std::size_t pos = 0;
  for (auto v : y) pos += v ? 1 : 0;
  if (pos == 0 || pos == n) {
    const double p = (double(pos) + 1.0) / (double(n) + 2.0);
    m.bias = std::log(p / (1.0 - p));
    return m;
  }

  const auto dd = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 0; jj < dd; ++jj) {
    const auto j = std::size_t(jj);
    bool binary = true;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = x.at(i, j);
      binary = binary && (v == 0.0 || v == 1.0);
      s += v;
    }
    if (binary) continue;
    const double mu = s / double(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (x.at(i, j) - mu) * (x.at(i, j) - mu);
    const double sd = std::sqrt(ss / double(n));
    m.mean[j] = mu;
    m.scale[j] = sd > 1e-12 ? sd : 1.0;
  }

  Design z;
  z.n = n;
  z.d = d;
  z.z.resize(n * d);
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < nn; ++ii) {
    const auto i = std::size_t(ii);
    for (std::size_t j = 0; j < d; ++j) z.z[i * d + j] = (x.at(i, j) - m.mean[j]) / m.scale[j];
  }

  // Step 1/L with L an upper bound on the Lipschitz constant of the gradient;
  // step halving below guards against an underestimate.
  const double lipschitz = 0.25 * gram_spectral_norm(z) * 1.05 + params.l2;
  double step = lipschitz > 0 ? 1.0 / lipschitz : 1.0;

  const double p0 = double(pos) / double(n);
  m.bias = std::log(p0 / (1.0 - p0));

  std::vector<double> marg(n), resid(n), grad, trial_w(d), trial_m(n);
  margins(z, m.weights, m.bias, marg);
  double loss = mean_loss(marg, y) + l2_term(m.weights, params.l2);

  for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) resid[i] = sigmoid(marg[i]) - (y[i] ? 1.0 : 0.0);
    weighted_column_sums(z, resid, grad);
    double gnorm = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      grad[j] += params.l2 * m.weights[j];
      gnorm += grad[j] * grad[j];
    }
    gnorm += grad[d] * grad[d];
    if (std::sqrt(gnorm) < params.tol) break;

    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      for (std::size_t j = 0; j < d; ++j) trial_w[j] = m.weights[j] - step * grad[j];
      const double trial_b = m.bias - step * grad[d];
      margins(z, trial_w, trial_b, trial_m);
      const double trial_loss = mean_loss(trial_m, y) + l2_term(trial_w, params.l2);
      if (trial_loss <= loss) {
        m.weights.swap(trial_w);
        m.bias = trial_b;
        marg.swap(trial_m);
        loss = trial_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    m.epochs_run = epoch + 1;
    m.loss_history.push_back(loss);
  }
  return m;
}

double predict_logistic(const LogisticModel& m, std::span<const double> row) {
  double s = m.bias;
  for (std::size_t j = 0; j < m.weights.size(); ++j) s += m.weights[j] * (row[j] - m.mean[j]) / m.scale[j];
  return std::clamp(sigmoid(s), kClip, 1.0 - kClip);
}

std::vector<double> predict_logistic(const LogisticModel& m, const FeatureMatrix& x) {
  if (!(x.schema == m.schema)) throw errors::schema_mismatch("feature matrix does not match the model schema");
  std::vector<double> out(x.rows);
  const auto n = static_cast<std::ptrdiff_t>(x.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[std::size_t(i)] = predict_logistic(m, x.row(std::size_t(i)));
  return out;
}

namespace serial {
std::vector<double> predict_logistic(const LogisticModel& m, const FeatureMatrix& x) {
  if (!(x.schema == m.schema)) throw errors::schema_mismatch("feature matrix does not match the model schema");
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = vaep::predict_logistic(m, x.row(i));
  return out;
}
}  // namespace serial

}  // namespace vaep
