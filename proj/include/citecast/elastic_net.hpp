#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "citecast/matrix.hpp"

namespace citecast {

// Minimizes (1/2n) RSS + lambda (alpha |b|_1 + (1 - alpha)/2 |b|^2) over
// standardized features (population std, constant columns get b = 0).
struct ElasticNetOptions {
  double alpha = 0.2;
  int lambda_count = 100;
  double lambda_min_ratio = 1e-4;
  std::vector<double> lambdas;  // explicit descending grid; overrides the two above
  int cv_folds = 10;
  std::uint64_t fold_seed = 0;
  double tolerance = 1e-10;  // largest coefficient change in a sweep, standardized scale
  int max_sweeps = 100000;

  void validate() const;
};

struct ElasticNetFit {
  std::vector<double> coefficients;  // original feature scale
  double intercept = 0.0;
  double lambda = 0.0;
  int sweeps = 0;
  std::vector<double> objective_trace;  // objective after each sweep

  double predict(std::span<const double> x) const;
};

// One fit per target column, each with its own cross-validated lambda.
struct ElasticNetModel {
  double alpha = 0.2;
  std::vector<ElasticNetFit> horizons;
  std::vector<std::vector<double>> cv_error;  // per horizon, per grid lambda

  std::vector<double> predict(std::span<const double> x) const;
};

// Descending log-spaced grid from the smallest lambda that zeroes every
// coefficient.
std::vector<double> lambda_grid(const Matrix& x, std::span<const double> y, double alpha, int count,
                                double min_ratio);

// Coordinate descent at one lambda. Throws ConvergenceError after max_sweeps.
ElasticNetFit elastic_net_solve(const Matrix& x, std::span<const double> y, double lambda,
                                const ElasticNetOptions& options);

// Warm-started path over a descending grid.
std::vector<ElasticNetFit> elastic_net_path(const Matrix& x, std::span<const double> y,
                                            std::span<const double> lambdas, const ElasticNetOptions& options);

// `targets` is samples x horizons. Lambda minimizes k-fold CV error.
ElasticNetModel fit_elastic_net(const Matrix& x, const Matrix& targets, const ElasticNetOptions& options = {});

}  // namespace citecast
