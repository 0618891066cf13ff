#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pred::oracle {

// Brute-force maximum likelihood for y ~ N(X beta, sigma2 (I + lambda Z Z'))
// with Z the group indicator matrix. Every likelihood is evaluated on the
// full n x n covariance by Cholesky; lambda is found by grid search.
struct DenseFit {
  Eigen::VectorXd beta;
  double sigma2 = 0.0;
  double sigma_b2 = 0.0;
  double lambda = 0.0;
  double loglik = 0.0;
};

Eigen::MatrixXd indicator(std::span<const std::string> groups, std::vector<std::string>* names = nullptr);

// Profiled log-likelihood at a fixed lambda; fills beta and sigma2.
double dense_profile(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::MatrixXd& Z,
                     double lambda, Eigen::VectorXd* beta = nullptr, double* sigma2 = nullptr);

// 200-point grid on log(lambda + 1e-10) up to lambda = 1e8 plus lambda = 0,
// then repeated 200-point zooms around the best point.
DenseFit dense_fit(const Eigen::MatrixXd& X, std::span<const double> y, std::span<const std::string> groups,
                   int zoom_rounds = 6);

// sigma_b2 Z' V^-1 (y - X beta), one entry per group in sorted name order.
Eigen::VectorXd dense_blups(const Eigen::MatrixXd& X, std::span<const double> y,
                            std::span<const std::string> groups, const DenseFit& fit);

// Exact Gaussian log density in nats.
double normal_logpdf(double y, double mean, double var);

}  // namespace pred::oracle
