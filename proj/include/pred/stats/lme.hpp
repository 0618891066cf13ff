#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pred::stats {

// Maximum-likelihood fit of y = X beta + b[group] + e with
// b ~ N(0, sigma_b2) per group and e ~ N(0, sigma2).
struct LMEFit {
  Eigen::VectorXd beta;
  double sigma_b2 = 0.0;
  double sigma2 = 0.0;
  std::map<std::string, double> blups;
  double loglik = 0.0;  // nats
  bool converged = false;
  double lambda = 0.0;  // sigma_b2 / sigma2
  int iterations = 0;
};

struct LMEOptions {
  // lambda is searched on u = log(lambda + lambda_eps).
  double lambda_eps = 1e-10;
  double lambda_max = 1e8;
  int grid_points = 41;
  int max_iterations = 200;
  // Relative tolerance on u for the bracketed minimizer.
  double tolerance = 1e-8;
  // Columns whose pivoted-QR diagonal falls below rank_tol * |R00| are
  // treated as linearly dependent.
  double rank_tol = 1e-9;
};

// Profiled likelihood for a fixed design. Per-group sufficient statistics
// are computed once; each evaluation costs O(n p) for the residual pass plus
// O(G p^2) for the normal equations.
class LMEProblem {
 public:
  // Throws DesignError when X is rank deficient, has no rows, or there are
  // fewer than two groups.
  LMEProblem(const Eigen::MatrixXd& X, std::span<const double> y,
             std::span<const std::string> groups, double rank_tol = 1e-9);

  struct Profile {
    Eigen::VectorXd beta;
    double sigma2 = 0.0;
    double loglik = 0.0;
  };
  Profile profile(double lambda) const;

  // BLUP per group index at (beta, lambda).
  Eigen::VectorXd blups(const Eigen::VectorXd& beta, double lambda) const;

  std::size_t rows() const { return static_cast<std::size_t>(X_.rows()); }
  std::size_t group_count() const { return group_names_.size(); }
  const std::vector<std::string>& group_names() const { return group_names_; }

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  std::vector<int> group_of_;
  std::vector<std::string> group_names_;
  std::vector<double> n_g_;
  Eigen::MatrixXd mean_x_;       // G x p group means of X
  Eigen::VectorXd mean_y_;       // G
  Eigen::MatrixXd within_xx_;    // pooled within-group scatter of X
  Eigen::VectorXd within_xy_;
};

LMEFit fit_lme(const Eigen::MatrixXd& X, std::span<const double> y,
               std::span<const std::string> groups, const LMEOptions& options = {});

enum class HeldoutMode {
  kConditional,  // seen subjects use their BLUP, variance sigma2
  kMarginal,     // every subject treated as unseen
};

// Per-observation log densities (nats). Subjects without a training BLUP
// use mean X beta and variance sigma2 + sigma_b2.
std::vector<double> heldout_loglik(const LMEFit& fit, const Eigen::MatrixXd& X,
                                   std::span<const double> y,
                                   std::span<const std::string> groups,
                                   HeldoutMode mode = HeldoutMode::kConditional);

// Numerical rank of X by column-pivoted QR on unit-norm columns.
Eigen::Index design_rank(const Eigen::MatrixXd& X, double rank_tol = 1e-9);

}  // namespace pred::stats
