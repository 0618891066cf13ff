#include "pred/stats/lme.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "pred/error.hpp"

namespace pred::stats {

Eigen::Index design_rank(const Eigen::MatrixXd& X, double rank_tol) {
  Eigen::MatrixXd scaled = X;
  for (Eigen::Index c = 0; c < scaled.cols(); ++c) {
    const double norm = scaled.col(c).norm();
    if (norm > 0.0) scaled.col(c) /= norm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(rank_tol);
  return qr.rank();
}

LMEProblem::LMEProblem(const Eigen::MatrixXd& X, std::span<const double> y,
                       std::span<const std::string> groups, double rank_tol)
    : X_(X), y_(Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()))) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n == 0 || p == 0) throw DesignError("empty design matrix");
  if (static_cast<std::size_t>(n) != y.size() || y.size() != groups.size()) {
    throw DesignError("design, response and group lengths differ");
  }
  if (n <= p) throw DesignError("fewer observations than fixed effects");
  if (const auto rank = design_rank(X, rank_tol); rank < p) {
    throw DesignError(fmt::format("design matrix is rank deficient (rank {} < {} columns)", rank, p));
  }

  std::unordered_map<std::string, int> index;
  group_of_.reserve(groups.size());
  for (const auto& g : groups) {
    auto [it, fresh] = index.try_emplace(g, static_cast<int>(group_names_.size()));
    if (fresh) group_names_.push_back(g);
    group_of_.push_back(it->second);
  }
  const auto G = static_cast<Eigen::Index>(group_names_.size());
  if (G < 2) throw DesignError("at least two groups are required");

  n_g_.assign(static_cast<std::size_t>(G), 0.0);
  mean_x_ = Eigen::MatrixXd::Zero(G, p);
  mean_y_ = Eigen::VectorXd::Zero(G);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = group_of_[static_cast<std::size_t>(i)];
    n_g_[static_cast<std::size_t>(g)] += 1.0;
    mean_x_.row(g) += X.row(i);
    mean_y_(g) += y_(i);
  }
  for (Eigen::Index g = 0; g < G; ++g) {
    mean_x_.row(g) /= n_g_[static_cast<std::size_t>(g)];
    mean_y_(g) /= n_g_[static_cast<std::size_t>(g)];
  }
  Eigen::MatrixXd xc(n, p);
  Eigen::VectorXd yc(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = group_of_[static_cast<std::size_t>(i)];
    xc.row(i) = X.row(i) - mean_x_.row(g);
    yc(i) = y_(i) - mean_y_(g);
  }
  within_xx_ = xc.transpose() * xc;
  within_xy_ = xc.transpose() * yc;
}

LMEProblem::Profile LMEProblem::profile(double lambda) const {
  const Eigen::Index p = X_.cols();
  Eigen::MatrixXd xwx = within_xx_;
  Eigen::VectorXd xwy = within_xy_;
  double logdet = 0.0;
  for (std::size_t g = 0; g < n_g_.size(); ++g) {
    const double ng = n_g_[g];
    const double w = ng / (1.0 + lambda * ng);
    const auto gi = static_cast<Eigen::Index>(g);
    xwx.noalias() += w * mean_x_.row(gi).transpose() * mean_x_.row(gi);
    xwy.noalias() += (w * mean_y_(gi)) * mean_x_.row(gi).transpose();
    logdet += std::log1p(lambda * ng);
  }
  Profile out;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(xwx);
  out.beta = ldlt.solve(xwy);
  if (out.beta.size() != p || !out.beta.allFinite()) {
    throw DesignError("normal equations are singular");
  }

  // r' (I + lambda Z Z')^{-1} r, group by group
  const Eigen::VectorXd r = y_ - X_ * out.beta;
  std::vector<double> sum(n_g_.size(), 0.0);
  for (Eigen::Index i = 0; i < r.size(); ++i) sum[static_cast<std::size_t>(group_of_[static_cast<std::size_t>(i)])] += r(i);
  double quad = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const auto g = static_cast<std::size_t>(group_of_[static_cast<std::size_t>(i)]);
    const double d = r(i) - sum[g] / n_g_[g];
    quad += d * d;
  }
  for (std::size_t g = 0; g < n_g_.size(); ++g) {
    const double mean = sum[g] / n_g_[g];
    quad += n_g_[g] * mean * mean / (1.0 + lambda * n_g_[g]);
  }
  const double n = static_cast<double>(r.size());
  out.sigma2 = quad / n;
  out.loglik = -0.5 * n * (std::log(2.0 * std::numbers::pi * out.sigma2) + 1.0) - 0.5 * logdet;
  return out;
}

Eigen::VectorXd LMEProblem::blups(const Eigen::VectorXd& beta, double lambda) const {
  const auto G = static_cast<Eigen::Index>(n_g_.size());
  Eigen::VectorXd b(G);
  for (Eigen::Index g = 0; g < G; ++g) {
    const double ng = n_g_[static_cast<std::size_t>(g)];
    const double resid = mean_y_(g) - mean_x_.row(g).dot(beta);
    b(g) = lambda * ng / (1.0 + lambda * ng) * resid;
  }
  return b;
}

LMEFit fit_lme(const Eigen::MatrixXd& X, std::span<const double> y,
               std::span<const std::string> groups, const LMEOptions& options) {
  const LMEProblem problem(X, y, groups, options.rank_tol);
  const double eps = options.lambda_eps;
  auto lambda_of = [eps](double u) { return std::max(0.0, std::exp(u) - eps); };
  auto objective = [&](double u) { return -problem.profile(lambda_of(u)).loglik; };

  const double u_lo = std::log(eps);
  const double u_hi = std::log(options.lambda_max + eps);
  const int m = std::max(options.grid_points, 3);
  std::vector<double> grid(static_cast<std::size_t>(m));
  std::size_t best = 0;
  double best_val = INFINITY;
  for (int i = 0; i < m; ++i) {
    const double u = u_lo + (u_hi - u_lo) * i / (m - 1);
    grid[static_cast<std::size_t>(i)] = u;
    const double v = objective(u);
    if (v < best_val) {
      best_val = v;
      best = static_cast<std::size_t>(i);
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];

  const int bits = static_cast<int>(std::ceil(1.0 - std::log2(options.tolerance)));
  std::uintmax_t iters = static_cast<std::uintmax_t>(options.max_iterations);
  const auto [u_star, f_star] = boost::math::tools::brent_find_minima(objective, lo, hi, bits, iters);
  if (iters >= static_cast<std::uintmax_t>(options.max_iterations)) {
    throw ConvergenceError(fmt::format(
        "lambda search did not converge in {} iterations (bracket [{:.6g}, {:.6g}], "
        "last lambda {:.6g}, loglik {:.10g})",
        options.max_iterations, lambda_of(lo), lambda_of(hi), lambda_of(u_star), -f_star));
  }

  double lambda = lambda_of(u_star);
  double value = f_star;
  if (best_val < value) {
    lambda = lambda_of(grid[best]);
    value = best_val;
  }
  if (const double at_zero = -problem.profile(0.0).loglik; at_zero <= value) {
    lambda = 0.0;
  }

  const auto prof = problem.profile(lambda);
  LMEFit fit;
  fit.beta = prof.beta;
  fit.sigma2 = prof.sigma2;
  fit.sigma_b2 = lambda * prof.sigma2;
  fit.lambda = lambda;
  fit.loglik = prof.loglik;
  fit.converged = true;
  fit.iterations = static_cast<int>(iters);
  if (!(fit.sigma2 > 0.0)) {
    throw ConvergenceError("residual variance collapsed to zero (perfect fit)");
  }
  const Eigen::VectorXd b = problem.blups(prof.beta, lambda);
  for (std::size_t g = 0; g < problem.group_names().size(); ++g) {
    fit.blups.emplace(problem.group_names()[g], b(static_cast<Eigen::Index>(g)));
  }
  return fit;
}

std::vector<double> heldout_loglik(const LMEFit& fit, const Eigen::MatrixXd& X,
                                   std::span<const double> y,
                                   std::span<const std::string> groups, HeldoutMode mode) {
  if (static_cast<std::size_t>(X.rows()) != y.size() || y.size() != groups.size()) {
    throw DomainError("held-out design, response and group lengths differ");
  }
  if (X.cols() != fit.beta.size()) throw DomainError("held-out design has wrong column count");
  const Eigen::VectorXd mean = X * fit.beta;
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    double mu = mean(static_cast<Eigen::Index>(i));
    double var = fit.sigma2 + fit.sigma_b2;
    if (mode == HeldoutMode::kConditional) {
      if (auto it = fit.blups.find(groups[i]); it != fit.blups.end()) {
        mu += it->second;
        var = fit.sigma2;
      }
    }
    const double d = y[i] - mu;
    out[i] = -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * d * d / var;
  }
  return out;
}

}  // namespace pred::stats
