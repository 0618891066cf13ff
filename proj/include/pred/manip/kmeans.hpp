#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pred/lm/embedding.hpp"
#include "pred/lm/provider.hpp"

namespace pred::manip {

struct ClusterAssignment {
  int k = 0;
  std::vector<int> assignment;  // token -> cluster in [0, k)
  Eigen::MatrixXd centroids;    // k x d
  double inertia = 0.0;
  // Inertia after every assignment step, one trace per run.
  std::vector<std::vector<double>> traces;
  int best_run = 0;

  int cluster_of(lm::TokenId t) const { return assignment.at(static_cast<std::size_t>(t)); }
};

struct KMeansOptions {
  int runs = 1;
  int max_iterations = 300;
  std::uint64_t seed = 0;
};

std::size_t distinct_rows(const lm::EmbeddingMatrix& embeddings);

// Lloyd's algorithm from k-means++ seeding; the run with the lowest inertia
// wins. Throws DomainError when k < 1 or k exceeds the distinct rows.
ClusterAssignment kmeans_cluster(const lm::EmbeddingMatrix& embeddings, int k,
                                 const KMeansOptions& options = {});

// Probability mass of each cluster under `dist`.
std::vector<double> cluster_masses(const lm::TokenDistribution& dist,
                                   const ClusterAssignment& clusters);

// log of the product, over the word's tokens, of the mass of each token's
// cluster under that token's conditional distribution. No whitespace
// correction is applied.
double h2_logprob(const lm::DistributionProvider& provider, std::span<const lm::TokenId> prefix,
                  const ClusterAssignment& clusters, std::string_view word);

double h2_probability(const lm::DistributionProvider& provider,
                      std::span<const lm::TokenId> prefix, const ClusterAssignment& clusters,
                      std::string_view word);

}  // namespace pred::manip
