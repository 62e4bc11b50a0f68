#include "citecast/elastic_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "citecast/errors.hpp"

namespace citecast {

namespace {

struct Standardized {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<double> x;  // column-major, n x p
  std::vector<double> mean;
  std::vector<double> scale;  // 0 for constant columns
  std::vector<double> y;      // centered
  double y_mean = 0.0;
};

Standardized standardize(const Matrix& x, std::span<const double> y) {
  if (x.rows() != y.size()) throw ArgumentError("feature and target row counts differ");
  if (x.rows() < 2) throw ArgumentError("elastic net needs at least two samples");
  Standardized s;
  s.n = x.rows();
  s.p = x.cols();
  s.x.resize(s.n * s.p);
  s.mean.assign(s.p, 0.0);
  s.scale.assign(s.p, 0.0);
  const double n = static_cast<double>(s.n);
  for (std::size_t j = 0; j < s.p; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.n; ++i) m += x(i, j);
    m /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < s.n; ++i) var += (x(i, j) - m) * (x(i, j) - m);
    double sd = std::sqrt(var / n);
    s.mean[j] = m;
    s.scale[j] = sd > 0.0 ? sd : 0.0;
    for (std::size_t i = 0; i < s.n; ++i) s.x[j * s.n + i] = sd > 0.0 ? (x(i, j) - m) / sd : 0.0;
  }
  s.y_mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  s.y.resize(s.n);
  for (std::size_t i = 0; i < s.n; ++i) s.y[i] = y[i] - s.y_mean;
  return s;
}

double objective(const Standardized& s, std::span<const double> residual, std::span<const double> beta,
                 double lambda, double alpha) {
  double rss = 0.0;
  for (double r : residual) rss += r * r;
  double l1 = 0.0;
  double l2 = 0.0;
  for (double b : beta) {
    l1 += std::abs(b);
    l2 += b * b;
  }
  return rss / (2.0 * static_cast<double>(s.n)) + lambda * (alpha * l1 + 0.5 * (1.0 - alpha) * l2);
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

// Coordinate descent in place on standardized data, starting from `beta`.
ElasticNetFit descend(const Standardized& s, std::vector<double>& beta, double lambda,
                      const ElasticNetOptions& options) {
  const double n = static_cast<double>(s.n);
  const double alpha = options.alpha;
  std::vector<double> residual = s.y;
  for (std::size_t j = 0; j < s.p; ++j) {
    if (beta[j] == 0.0) continue;
    for (std::size_t i = 0; i < s.n; ++i) residual[i] -= s.x[j * s.n + i] * beta[j];
  }
  ElasticNetFit fit;
  fit.lambda = lambda;
  const double shrink = 1.0 + lambda * (1.0 - alpha);
  double change = 0.0;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    change = 0.0;
    for (std::size_t j = 0; j < s.p; ++j) {
      if (s.scale[j] == 0.0) continue;
      const double* col = &s.x[j * s.n];
      double z = 0.0;
      for (std::size_t i = 0; i < s.n; ++i) z += col[i] * residual[i];
      z = z / n + beta[j];
      double updated = soft_threshold(z, lambda * alpha) / shrink;
      double delta = updated - beta[j];
      if (delta != 0.0) {
        for (std::size_t i = 0; i < s.n; ++i) residual[i] -= col[i] * delta;
        beta[j] = updated;
        change = std::max(change, std::abs(delta));
      }
    }
    fit.objective_trace.push_back(objective(s, residual, beta, lambda, alpha));
    fit.sweeps = sweep;
    if (change <= options.tolerance) break;
  }
  if (change > options.tolerance) {
    throw ConvergenceError("elastic net did not converge in " + std::to_string(options.max_sweeps) + " sweeps",
                           change);
  }
  fit.coefficients.assign(s.p, 0.0);
  fit.intercept = s.y_mean;
  for (std::size_t j = 0; j < s.p; ++j) {
    if (s.scale[j] == 0.0) continue;
    fit.coefficients[j] = beta[j] / s.scale[j];
    fit.intercept -= fit.coefficients[j] * s.mean[j];
  }
  return fit;
}

std::vector<double> grid_for(const Standardized& s, const ElasticNetOptions& options) {
  if (!options.lambdas.empty()) return options.lambdas;
  double max_dot = 0.0;
  for (std::size_t j = 0; j < s.p; ++j) {
    double dot = 0.0;
    for (std::size_t i = 0; i < s.n; ++i) dot += s.x[j * s.n + i] * s.y[i];
    max_dot = std::max(max_dot, std::abs(dot));
  }
  double lambda_max = max_dot / (static_cast<double>(s.n) * std::max(options.alpha, 1e-3));
  if (!(lambda_max > 0.0)) lambda_max = 1e-6;
  std::vector<double> grid(static_cast<std::size_t>(options.lambda_count));
  const double steps = std::max(1, options.lambda_count - 1);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = lambda_max * std::pow(options.lambda_min_ratio, static_cast<double>(k) / steps);
  }
  return grid;
}

Matrix take_rows(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = x(rows[r], c);
  }
  return out;
}

}  // namespace

void ElasticNetOptions::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("alpha must lie in [0, 1]");
  if (lambdas.empty()) {
    if (lambda_count < 1) throw ArgumentError("lambda_count must be >= 1");
    if (!(lambda_min_ratio > 0.0 && lambda_min_ratio <= 1.0)) throw ArgumentError("lambda_min_ratio must lie in (0, 1]");
  }
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] >= 0.0)) throw ArgumentError("lambdas must be nonnegative");
    if (k > 0 && lambdas[k] > lambdas[k - 1]) throw ArgumentError("lambdas must be descending");
  }
  if (cv_folds < 2) throw ArgumentError("cv_folds must be >= 2");
  if (!(tolerance > 0.0)) throw ArgumentError("tolerance must be positive");
  if (max_sweeps < 1) throw ArgumentError("max_sweeps must be >= 1");
}

double ElasticNetFit::predict(std::span<const double> x) const {
  if (x.size() != coefficients.size()) throw ArgumentError("feature count mismatch");
  double out = intercept;
  for (std::size_t j = 0; j < x.size(); ++j) out += coefficients[j] * x[j];
  return out;
}

std::vector<double> ElasticNetModel::predict(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(horizons.size());
  for (const auto& h : horizons) out.push_back(h.predict(x));
  return out;
}

std::vector<double> lambda_grid(const Matrix& x, std::span<const double> y, double alpha, int count,
                                double min_ratio) {
  ElasticNetOptions options;
  options.alpha = alpha;
  options.lambda_count = count;
  options.lambda_min_ratio = min_ratio;
  options.validate();
  return grid_for(standardize(x, y), options);
}

ElasticNetFit elastic_net_solve(const Matrix& x, std::span<const double> y, double lambda,
                                const ElasticNetOptions& options) {
  options.validate();
  if (!(lambda >= 0.0)) throw ArgumentError("lambda must be nonnegative");
  auto s = standardize(x, y);
  std::vector<double> beta(s.p, 0.0);
  return descend(s, beta, lambda, options);
}

std::vector<ElasticNetFit> elastic_net_path(const Matrix& x, std::span<const double> y,
                                            std::span<const double> lambdas, const ElasticNetOptions& options) {
  options.validate();
  auto s = standardize(x, y);
  std::vector<double> beta(s.p, 0.0);
  std::vector<ElasticNetFit> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) out.push_back(descend(s, beta, lambda, options));
  return out;
}

ElasticNetModel fit_elastic_net(const Matrix& x, const Matrix& targets, const ElasticNetOptions& options) {
  options.validate();
  if (x.rows() != targets.rows()) throw ArgumentError("feature and target row counts differ");
  const std::size_t n = x.rows();
  const std::size_t folds = std::min<std::size_t>(static_cast<std::size_t>(options.cv_folds), n);
  if (folds < 2) throw ArgumentError("elastic net needs at least two samples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options.fold_seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t k = 0; k < n; ++k) fold_of[order[k]] = k % folds;

  ElasticNetModel model;
  model.alpha = options.alpha;
  for (std::size_t h = 0; h < targets.cols(); ++h) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = targets(i, h);
    auto grid = grid_for(standardize(x, y), options);

    std::vector<double> error(grid.size(), 0.0);
    for (std::size_t f = 0; f < folds; ++f) {
      std::vector<std::size_t> train;
      std::vector<std::size_t> held;
      for (std::size_t i = 0; i < n; ++i) (fold_of[i] == f ? held : train).push_back(i);
      if (train.size() < 2) continue;
      Matrix xt = take_rows(x, train);
      std::vector<double> yt;
      for (auto i : train) yt.push_back(y[i]);
      auto path = elastic_net_path(xt, yt, grid, options);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        for (auto i : held) {
          double r = path[k].predict(x.row(i)) - y[i];
          error[k] += r * r;
        }
      }
    }
    for (double& e : error) e /= static_cast<double>(n);
    std::size_t best = static_cast<std::size_t>(std::min_element(error.begin(), error.end()) - error.begin());

    auto path = elastic_net_path(x, y, std::span<const double>(grid).first(best + 1), options);
    model.horizons.push_back(std::move(path.back()));
    model.cv_error.push_back(std::move(error));
  }
  return model;
}

}  // namespace citecast
