#include "pred/manip/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pred/error.hpp"
#include "pred/random.hpp"

namespace pred::manip {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double sq_dist(const Eigen::Ref<const Eigen::RowVectorXd>& a,
               const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  return (a - b).squaredNorm();
}

struct Run {
  std::vector<int> assignment;
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

Eigen::MatrixXd plus_plus_seed(const Eigen::Ref<const RowMat>& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd c(k, x.cols());
  c.row(0) = x.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = sq_dist(x.row(i), c.row(0));
  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index pick = n - 1;
    double u = rng.uniform() * total;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = d2[static_cast<std::size_t>(i)];
      if (w <= 0.0) continue;
      pick = i;
      if (u < w) break;
      u -= w;
    }
    c.row(j) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& v = d2[static_cast<std::size_t>(i)];
      v = std::min(v, sq_dist(x.row(i), c.row(j)));
    }
  }
  return c;
}

// Nearest centroid per row; ties go to the lower cluster id.
double assign(const Eigen::Ref<const RowMat>& x, const Eigen::MatrixXd& c, std::vector<int>& out,
              std::vector<double>& dist) {
  const Eigen::Index n = x.rows();
  const Eigen::VectorXd cn = c.rowwise().squaredNorm();
  // Cross terms in blocks keep memory bounded for large vocabularies.
  constexpr Eigen::Index kBlock = 4096;
  double inertia = 0.0;
  for (Eigen::Index b = 0; b < n; b += kBlock) {
    const Eigen::Index m = std::min(kBlock, n - b);
    const Eigen::MatrixXd cross = x.middleRows(b, m) * c.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < c.rows(); ++j) {
        const double d = cn(j) - 2.0 * cross(i, j);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      const auto r = static_cast<std::size_t>(b + i);
      out[r] = static_cast<int>(best);
      dist[r] = sq_dist(x.row(b + i), c.row(best));
      inertia += dist[r];
    }
  }
  return inertia;
}

Run lloyd(const Eigen::Ref<const RowMat>& x, int k, int max_iterations, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  Run run;
  run.centroids = plus_plus_seed(x, k, rng);
  run.assignment.assign(n, -1);
  std::vector<int> next(n);
  std::vector<double> dist(n);
  for (int it = 0;; ++it) {
    run.inertia = assign(x, run.centroids, next, dist);
    run.trace.push_back(run.inertia);
    const bool fixed = next == run.assignment;
    run.assignment = next;
    if (fixed || it == max_iterations) break;

    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> members(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum.row(run.assignment[i]) += x.row(static_cast<Eigen::Index>(i));
      ++members[static_cast<std::size_t>(run.assignment[i])];
    }
    for (int j = 0; j < k; ++j) {
      if (members[static_cast<std::size_t>(j)] > 0) {
        run.centroids.row(j) = sum.row(j) / members[static_cast<std::size_t>(j)];
        continue;
      }
      // Empty cluster: take over the point farthest from its centroid.
      const auto far = static_cast<std::size_t>(
          std::max_element(dist.begin(), dist.end()) - dist.begin());
      run.centroids.row(j) = x.row(static_cast<Eigen::Index>(far));
      dist[far] = 0.0;
    }
  }
  return run;
}

}  // namespace

std::size_t distinct_rows(const lm::EmbeddingMatrix& embeddings) {
  std::set<std::vector<double>> seen;
  for (std::size_t r = 0; r < embeddings.rows(); ++r) {
    const auto row = embeddings.row(r);
    seen.emplace(row.begin(), row.end());
  }
  return seen.size();
}

ClusterAssignment kmeans_cluster(const lm::EmbeddingMatrix& embeddings, int k,
                                 const KMeansOptions& options) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (options.runs < 1 || options.max_iterations < 1) throw DomainError("runs and iterations must be positive");
  if (static_cast<std::size_t>(k) > distinct_rows(embeddings)) {
    throw DomainError("k = " + std::to_string(k) + " exceeds the number of distinct embedding rows");
  }
  const Eigen::Map<const RowMat> x(embeddings.data().data(),
                                   static_cast<Eigen::Index>(embeddings.rows()),
                                   static_cast<Eigen::Index>(embeddings.dim()));
  Rng rng(options.seed);
  ClusterAssignment best;
  best.k = k;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.runs; ++r) {
    Run run = lloyd(x, k, options.max_iterations, rng);
    best.traces.push_back(run.trace);
    if (run.inertia < best.inertia) {
      best.assignment = std::move(run.assignment);
      best.centroids = std::move(run.centroids);
      best.inertia = run.inertia;
      best.best_run = r;
    }
  }
  return best;
}

std::vector<double> cluster_masses(const lm::TokenDistribution& dist,
                                   const ClusterAssignment& clusters) {
  if (dist.size() != clusters.assignment.size()) {
    throw DomainError("distribution and cluster assignment sizes differ");
  }
  std::vector<double> mass(static_cast<std::size_t>(clusters.k), 0.0);
  for (std::size_t t = 0; t < dist.size(); ++t) {
    mass[static_cast<std::size_t>(clusters.assignment[t])] += std::exp(dist.logprobs[t]);
  }
  return mass;
}

double h2_logprob(const lm::DistributionProvider& provider, std::span<const lm::TokenId> prefix,
                  const ClusterAssignment& clusters, std::string_view word) {
  const auto tokens = provider.segmentation().segment(word);
  std::vector<lm::TokenId> seq(prefix.begin(), prefix.end());
  double lp = 0.0;
  for (lm::TokenId t : tokens) {
    const auto mass = cluster_masses(provider.next_distribution(seq), clusters);
    lp += std::log(mass[static_cast<std::size_t>(clusters.cluster_of(t))]);
    seq.push_back(t);
  }
  return lp;
}

double h2_probability(const lm::DistributionProvider& provider,
                      std::span<const lm::TokenId> prefix, const ClusterAssignment& clusters,
                      std::string_view word) {
  return std::exp(h2_logprob(provider, prefix, clusters, word));
}

}  // namespace pred::manip
