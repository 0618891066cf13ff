#include <algorithm>
#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "oracles/dense_lme.hpp"
#include "oracles/enumeration.hpp"
#include "pred/error.hpp"
#include "pred/random.hpp"
#include "pred/stats/compare.hpp"
#include "pred/stats/correlation.hpp"
#include "pred/stats/folds.hpp"
#include "pred/stats/lme.hpp"
#include "pred/stats/permutation.hpp"
#include "pred/stats/predictors.hpp"

namespace pred::stats {
namespace {

struct Dataset {
  Eigen::MatrixXd X;
  std::vector<double> y;
  std::vector<std::string> groups;
};

Dataset hand_dataset() {
  Dataset d;
  d.X.resize(6, 2);
  d.X << 1, 0.5, 1, 1.5, 1, -0.2, 1, 2.0, 1, 0.9, 1, -1.1;
  d.y = {3.1, 4.0, 1.2, 4.4, 3.9, 0.8};
  d.groups = {"s1", "s1", "s2", "s2", "s3", "s3"};
  return d;
}

// Random intercepts with real between-group spread.
Dataset random_dataset(Rng& rng, std::size_t n, int n_groups, int p) {
  Dataset d;
  d.X.resize(static_cast<Eigen::Index>(n), p);
  std::vector<double> offset(static_cast<std::size_t>(n_groups));
  for (auto& o : offset) o = 2.0 * rng.normal();
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    d.X(r, 0) = 1.0;
    for (int j = 1; j < p; ++j) d.X(r, j) = rng.normal();
    const auto g = i < static_cast<std::size_t>(n_groups) ? i : rng.below(static_cast<std::uint64_t>(n_groups));
    d.groups.push_back("g" + std::to_string(g));
    double y = 1.0 + offset[g] + rng.normal();
    for (int j = 1; j < p; ++j) y += 0.5 * j * d.X(r, j);
    d.y.push_back(y);
  }
  return d;
}

Eigen::VectorXd ols(const Eigen::MatrixXd& X, const std::vector<double>& y) {
  const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
  return X.colPivHouseholderQr().solve(v);
}

TEST(LmeTest, MatchesDenseOracleOnHandData) {
  const auto d = hand_dataset();
  const auto fit = fit_lme(d.X, d.y, d.groups);
  const auto dense = oracle::dense_fit(d.X, d.y, d.groups);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.loglik, dense.loglik, 1e-6);
  for (Eigen::Index j = 0; j < 2; ++j) EXPECT_NEAR(fit.beta(j), dense.beta(j), 1e-6 * (1.0 + std::abs(dense.beta(j))));
  // The reported optimum is a true likelihood value, and no lower than the oracle's.
  const Eigen::Map<const Eigen::VectorXd> y(d.y.data(), 6);
  const auto Z = oracle::indicator(d.groups);
  EXPECT_NEAR(oracle::dense_profile(d.X, y, Z, fit.lambda), fit.loglik, 1e-8);
  EXPECT_GE(fit.loglik, dense.loglik - 1e-9);
  EXPECT_NEAR(fit.sigma_b2, fit.lambda * fit.sigma2, 1e-12 * (1.0 + fit.sigma_b2));
}

TEST(LmeTest, BlupsMatchDenseOracle) {
  Rng rng(21);
  const auto d = random_dataset(rng, 60, 5, 3);
  const auto fit = fit_lme(d.X, d.y, d.groups);
  oracle::DenseFit at_fit;
  at_fit.beta = fit.beta;
  at_fit.sigma2 = fit.sigma2;
  at_fit.sigma_b2 = fit.sigma_b2;
  at_fit.lambda = fit.lambda;
  std::vector<std::string> names;
  oracle::indicator(d.groups, &names);
  const auto b = oracle::dense_blups(d.X, d.y, d.groups, at_fit);
  for (std::size_t g = 0; g < names.size(); ++g) {
    EXPECT_NEAR(fit.blups.at(names[g]), b(static_cast<Eigen::Index>(g)), 1e-8);
  }
}

TEST(LmeTest, ProfileMatchesDenseAcrossLambda) {
  Rng rng(22);
  const auto d = random_dataset(rng, 40, 4, 2);
  const LMEProblem problem(d.X, d.y, d.groups);
  const Eigen::Map<const Eigen::VectorXd> y(d.y.data(), static_cast<Eigen::Index>(d.y.size()));
  const auto Z = oracle::indicator(d.groups);
  for (double lambda : {0.0, 1e-6, 0.01, 0.3, 1.0, 7.5, 1e3, 1e6}) {
    const auto prof = problem.profile(lambda);
    Eigen::VectorXd beta;
    double s2 = 0.0;
    const double ll = oracle::dense_profile(d.X, y, Z, lambda, &beta, &s2);
    EXPECT_NEAR(prof.loglik, ll, 1e-8 * (1.0 + std::abs(ll))) << lambda;
    EXPECT_NEAR(prof.sigma2, s2, 1e-9 * (1.0 + s2)) << lambda;
    for (Eigen::Index j = 0; j < beta.size(); ++j) EXPECT_NEAR(prof.beta(j), beta(j), 1e-8) << lambda;
  }
}

TEST(LmeTest, RandomDatasetsMatchDenseOracle) {
  Rng rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const auto n = 10 + rng.below(70);
    const int g = 2 + static_cast<int>(rng.below(6));
    const int p = 1 + static_cast<int>(rng.below(3));
    const auto d = random_dataset(rng, n, g, p);
    const auto fit = fit_lme(d.X, d.y, d.groups);
    const auto dense = oracle::dense_fit(d.X, d.y, d.groups);
    EXPECT_NEAR(fit.loglik, dense.loglik, 1e-6) << trial;
    for (Eigen::Index j = 0; j < p; ++j) {
      EXPECT_NEAR(fit.beta(j), dense.beta(j), 1e-6 * (1.0 + std::abs(dense.beta(j)))) << trial;
    }
  }
}

TEST(LmeTest, NoGroupVarianceGivesOls) {
  // Residuals around 1 + 2x sum to zero in every group and are orthogonal
  // to x, so the likelihood peaks at sigma_b2 = 0.
  Dataset d;
  d.X.resize(6, 2);
  d.X << 1, 0, 1, 1, 1, 2, 1, 3, 1, 4, 1, 5;
  const double e[] = {0.5, -0.5, -1.0, 1.0, 0.5, -0.5};
  for (int i = 0; i < 6; ++i) d.y.push_back(1.0 + 2.0 * i + e[i]);
  d.groups = {"a", "a", "b", "b", "c", "c"};
  const auto fit = fit_lme(d.X, d.y, d.groups);
  EXPECT_LT(fit.sigma_b2, 1e-6);
  const auto b = ols(d.X, d.y);
  EXPECT_NEAR(fit.beta(0), b(0), 1e-8);
  EXPECT_NEAR(fit.beta(1), b(1), 1e-8);
  // profile(0) is ordinary least squares for any data.
  Rng rng(24);
  const auto r = random_dataset(rng, 50, 5, 3);
  const auto prof = LMEProblem(r.X, r.y, r.groups).profile(0.0);
  const auto rb = ols(r.X, r.y);
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(prof.beta(j), rb(j), 1e-8);
}

TEST(LmeTest, RowOrderAndGroupNamesDoNotMatter) {
  Rng rng(25);
  const auto d = random_dataset(rng, 50, 6, 2);
  const auto base = fit_lme(d.X, d.y, d.groups);
  Dataset s = d;
  std::vector<std::size_t> perm(d.y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    s.X.row(static_cast<Eigen::Index>(i)) = d.X.row(static_cast<Eigen::Index>(perm[i]));
    s.y[i] = d.y[perm[i]];
    s.groups[i] = "renamed_" + d.groups[perm[i]];
  }
  const auto other = fit_lme(s.X, s.y, s.groups);
  EXPECT_NEAR(other.loglik, base.loglik, 1e-8);
  EXPECT_NEAR(other.beta(1), base.beta(1), 1e-6);
  EXPECT_NEAR(other.sigma_b2, base.sigma_b2, 1e-5 * (1.0 + base.sigma_b2));
}

TEST(LmeTest, Rescaling) {
  Rng rng(26);
  const auto d = random_dataset(rng, 60, 6, 2);
  const auto base = fit_lme(d.X, d.y, d.groups);
  // Scaling a predictor by c divides its coefficient by c.
  Dataset s = d;
  s.X.col(1) *= 4.0;
  const auto scaled = fit_lme(s.X, s.y, s.groups);
  EXPECT_NEAR(scaled.beta(1), base.beta(1) / 4.0, 1e-6);
  EXPECT_NEAR(scaled.loglik, base.loglik, 1e-7);
  // Scaling the response by c scales beta by c and variances by c^2.
  Dataset r = d;
  for (auto& v : r.y) v *= 3.0;
  const auto ry = fit_lme(r.X, r.y, r.groups);
  EXPECT_NEAR(ry.beta(0), 3.0 * base.beta(0), 1e-5);
  EXPECT_NEAR(ry.sigma2, 9.0 * base.sigma2, 1e-5 * base.sigma2);
  EXPECT_NEAR(ry.loglik, base.loglik - 60.0 * std::log(3.0), 1e-6);
}

TEST(LmeTest, DesignErrors) {
  const auto d = hand_dataset();
  Eigen::MatrixXd dup(6, 3);
  dup << d.X, d.X.col(1) * 2.0;
  EXPECT_THROW(fit_lme(dup, d.y, d.groups), DesignError);
  const std::vector<std::string> one(6, "s");
  EXPECT_THROW(fit_lme(d.X, d.y, one), DesignError);
  EXPECT_THROW(fit_lme(Eigen::MatrixXd(0, 1), std::vector<double>{}, std::vector<std::string>{}), DesignError);
  EXPECT_EQ(design_rank(dup), 2);
  EXPECT_EQ(design_rank(d.X), 2);
}

TEST(LmeTest, NestedModelsNeverLoseInSampleLikelihood) {
  Rng rng(27);
  for (int trial = 0; trial < 15; ++trial) {
    const auto d = random_dataset(rng, 30 + rng.below(60), 3 + static_cast<int>(rng.below(5)), 3);
    const auto full = fit_lme(d.X, d.y, d.groups);
    const auto reduced = fit_lme(d.X.leftCols(2), d.y, d.groups);
    EXPECT_GE(full.loglik, reduced.loglik - 1e-8) << trial;
  }
}

LMEFit hand_fit() {
  LMEFit f;
  f.beta = Eigen::VectorXd::Constant(1, 2.0);
  f.sigma2 = 4.0;
  f.sigma_b2 = 1.0;
  f.blups = {{"a", 0.5}};
  return f;
}

TEST(HeldoutTest, Densities) {
  const auto fit = hand_fit();
  const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(3, 1);
  const std::vector<double> y{2.5, 2.0, 3.7};
  const std::vector<std::string> g{"a", "z", "a"};
  const auto ll = heldout_loglik(fit, X, y, g);
  EXPECT_NEAR(ll[0], -0.5 * std::log(2.0 * std::numbers::pi * 4.0), 1e-12);
  EXPECT_NEAR(ll[1], -0.5 * std::log(2.0 * std::numbers::pi * 5.0), 1e-12);
  EXPECT_NEAR(ll[2], oracle::normal_logpdf(3.7, 2.5, 4.0), 1e-12);
  const auto marginal = heldout_loglik(fit, X, y, g, HeldoutMode::kMarginal);
  EXPECT_NEAR(marginal[0], oracle::normal_logpdf(2.5, 2.0, 5.0), 1e-12);
  EXPECT_NEAR(marginal[2], oracle::normal_logpdf(3.7, 2.0, 5.0), 1e-12);
}

// A fitted model scored on its own training rows (conditional on BLUPs)
// equals the dense conditional Gaussian density.
TEST(HeldoutTest, MatchesDenseConditionalDensity) {
  Rng rng(28);
  const auto d = random_dataset(rng, 40, 4, 2);
  const auto fit = fit_lme(d.X, d.y, d.groups);
  const auto ll = heldout_loglik(fit, d.X, d.y, d.groups);
  for (std::size_t i = 0; i < d.y.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double mean = d.X.row(r).dot(fit.beta) + fit.blups.at(d.groups[i]);
    EXPECT_NEAR(ll[i], oracle::normal_logpdf(d.y[i], mean, fit.sigma2), 1e-8);
  }
}

std::vector<RTObservation> observations(int subjects, int sentences, int words) {
  std::vector<RTObservation> out;
  // Deliberately not in sorted order.
  for (int w = 0; w < words; ++w) {
    for (int s = sentences - 1; s >= 0; --s) {
      for (int j = 0; j < subjects; ++j) {
        RTObservation o;
        o.subject_id = "p" + std::to_string(j);
        o.context = {"item" + std::to_string(s % 3), "s" + std::to_string(s), w};
        o.rt = 300.0;
        out.push_back(o);
      }
    }
  }
  return out;
}

TEST(FoldsTest, TwentyCombinationsTenFolds) {
  const auto obs = observations(4, 5, 3);
  const auto plan = make_folds(obs, 10);
  EXPECT_EQ(plan.n_folds, 10);
  EXPECT_EQ(plan.fold_of_combination.size(), 20u);
  for (auto n : plan.fold_sizes()) EXPECT_EQ(n, 6u);
  std::vector<int> per_fold(10, 0);
  for (const auto& [c, f] : plan.fold_of_combination) ++per_fold[static_cast<std::size_t>(f)];
  for (int n : per_fold) EXPECT_EQ(n, 2);
}

TEST(FoldsTest, RoundRobinOverSortedCombinations) {
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int subjects = 1 + static_cast<int>(rng.below(6));
    const int sentences = 1 + static_cast<int>(rng.below(8));
    auto obs = observations(subjects, sentences, 1 + static_cast<int>(rng.below(4)));
    for (std::size_t i = obs.size(); i > 1; --i) std::swap(obs[i - 1], obs[rng.below(i)]);
    const int combos = subjects * sentences;
    const int k = 2 + static_cast<int>(rng.below(9));
    if (combos < k) {
      EXPECT_THROW(make_folds(obs, k), PlanError);
      continue;
    }
    const auto plan = make_folds(obs, k);
    int i = 0;
    for (const auto& [c, f] : plan.fold_of_combination) EXPECT_EQ(f, i++ % k);
    ASSERT_EQ(plan.row_fold.size(), obs.size());
    std::size_t covered = 0;
    for (int f = 0; f < k; ++f) {
      const auto test = plan.test_rows(f);
      const auto train = plan.train_rows(f);
      EXPECT_EQ(test.size() + train.size(), obs.size());
      covered += test.size();
      for (auto r : test) {
        const auto& o = obs[r];
        EXPECT_EQ(plan.fold_of_combination.at({o.subject_id, o.context.item_id, o.context.sentence_id}), f);
      }
    }
    EXPECT_EQ(covered, obs.size());
  }
}

TEST(FoldsTest, PlanErrors) {
  EXPECT_THROW(make_folds(observations(2, 2, 1), 1), PlanError);
  EXPECT_THROW(make_folds(observations(2, 2, 1), 5), PlanError);
}

TEST(PermutationTest, ExactValues) {
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<double> zero(10, 0.0);
  EXPECT_DOUBLE_EQ(paired_permutation_test(a, zero), 2.0 / 1024.0);
  EXPECT_DOUBLE_EQ(paired_permutation_test(a, a), 1.0);
  std::vector<double> mixed{1, 2, 3, 4, 5, 6, 7, 8, 9, -10};
  std::vector<double> d(mixed);
  EXPECT_DOUBLE_EQ(paired_permutation_test(mixed, zero), oracle::brute_force_permutation_p(d));
}

TEST(PermutationTest, AgreesWithBruteForce) {
  Rng rng(30);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<double> a(n), b(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal() + 0.3;
      b[i] = rng.normal();
      if (rng.below(4) == 0) b[i] = a[i];
      d[i] = a[i] - b[i];
    }
    const double p = paired_permutation_test(a, b);
    EXPECT_NEAR(p, oracle::brute_force_permutation_p(d), 1e-15);
    EXPECT_DOUBLE_EQ(paired_permutation_test(b, a), p);
    std::vector<double> as(a), bs(b);
    for (std::size_t i = 0; i < n; ++i) {
      as[i] += 100.0;
      bs[i] += 100.0;
    }
    EXPECT_NEAR(paired_permutation_test(as, bs), p, 1e-12);
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(PermutationTest, Errors) {
  EXPECT_THROW(paired_permutation_test(std::vector<double>{1, 2}, std::vector<double>{1}), DomainError);
  EXPECT_THROW(paired_permutation_test(std::vector<double>{}, std::vector<double>{}), DomainError);
  EXPECT_THROW(paired_permutation_test(std::vector<double>(21, 1.0), std::vector<double>(21, 0.0)), DomainError);
}

TEST(SummaryTest, BonferroniMeanSem) {
  EXPECT_NEAR(bonferroni(0.004, 3), 0.012, 1e-15);
  EXPECT_EQ(bonferroni(0.5, 3), 1.0);
  EXPECT_EQ(bonferroni(0.2, 1), 0.2);
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(mean(x), 2.5);
  EXPECT_NEAR(sem(x), std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(sem(std::vector<double>{7.0}), 0.0);
}

TEST(PearsonTest, Values) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_NEAR(pearson(x, std::vector<double>{3, 5, 7, 9, 11}), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(pearson(x, std::vector<double>{2, 4, 5, 4, 5}), 6.0 / std::sqrt(60.0), 1e-15);
  EXPECT_THROW(pearson(x, std::vector<double>{1, 1, 1, 1, 1}), DomainError);
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), DomainError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{2, 1}), DomainError);
}

TEST(PearsonTest, BootstrapInterval) {
  Rng rng(31);
  std::vector<double> x(40), y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = rng.normal();
    y[i] = 0.6 * x[i] + rng.normal();
  }
  const auto c = pearson_with_ci(x, y, 2000, 5);
  EXPECT_DOUBLE_EQ(c.r, pearson(x, y));
  EXPECT_LE(c.ci_low, c.r);
  EXPECT_GE(c.ci_high, c.r);
  const auto again = pearson_with_ci(x, y, 2000, 5);
  EXPECT_EQ(again.ci_low, c.ci_low);
  EXPECT_EQ(again.ci_high, c.ci_high);
}

TEST(PredictorTest, UnigramSurprisal) {
  manip::FrequencyTable f;
  f.set("all", 1e9);
  f.set("the", 1e6);
  f.set("zero", 0.0);
  EXPECT_NEAR(unigram_surprisal(f, "all"), 0.0, 1e-15);
  EXPECT_NEAR(unigram_surprisal(f, "The"), 9.965784284662087, 1e-12);
  EXPECT_NEAR(unigram_surprisal(f, "absent"), 36.541209043760986, 1e-12);
  EXPECT_NEAR(unigram_surprisal(f, "zero"), 36.541209043760986, 1e-12);
}

TEST(PredictorTest, TableAndDesign) {
  PredictorTable t({1, 2, 3, 4}, {"a", "a", "b", "b"});
  t.add_column("x", {1, 2, 3, 10});
  t.add_column("c", {5, 5, 5, 5});
  EXPECT_THROW(t.add_column("x", {0, 0, 0, 0}), DomainError);
  EXPECT_THROW(t.add_column("y", {0, 0, 0}), DomainError);
  EXPECT_THROW(t.add_column("y", {0, 0, NAN, 0}), DomainError);
  const std::vector<std::string> cols{"x", "c"};
  const std::vector<std::size_t> train{0, 1, 2};
  const auto z = Standardizer::fit(t, cols, train);
  const auto X = design_matrix(t, cols, train, &z);
  ASSERT_EQ(X.cols(), 3);
  EXPECT_NEAR(X.col(0).sum(), 3.0, 0.0);
  EXPECT_NEAR(X.col(1).sum(), 0.0, 1e-12);
  EXPECT_NEAR(X.col(2).cwiseAbs().sum(), 0.0, 1e-12);
  const auto sub = t.subset(std::vector<std::size_t>{3, 0});
  EXPECT_EQ(sub.response(), (std::vector<double>{4, 1}));
  EXPECT_EQ(sub.column("x"), (std::vector<double>{10, 1}));
  EXPECT_EQ(utf8_length("caf\xc3\xa9"), 4u);
}

// RT driven by one predictor; a second copy of it adds nothing.
PredictorTable synthetic_table(Rng& rng, int subjects, int sentences, int words,
                               std::vector<RTObservation>* obs_out) {
  std::vector<double> rt;
  std::vector<std::string> groups;
  std::vector<double> len, a, noise_pred;
  std::vector<double> offset(static_cast<std::size_t>(subjects));
  for (auto& o : offset) o = 30.0 * rng.normal();
  for (int j = 0; j < subjects; ++j) {
    for (int s = 0; s < sentences; ++s) {
      for (int w = 0; w < words; ++w) {
        RTObservation o;
        o.subject_id = "p" + std::to_string(j);
        o.context = {"i" + std::to_string(s), "s", w};
        obs_out->push_back(o);
        const double l = 2.0 + static_cast<double>(rng.below(8));
        const double x = rng.normal();
        len.push_back(l);
        a.push_back(x);
        noise_pred.push_back(rng.normal());
        rt.push_back(300.0 + offset[static_cast<std::size_t>(j)] + 5.0 * l + 25.0 * x + 20.0 * rng.normal());
        groups.push_back(o.subject_id);
      }
    }
  }
  PredictorTable t(rt, groups);
  t.add_column("len", len);
  t.add_column("a", a);
  t.add_column("a_copy", a);
  t.add_column("noise", noise_pred);
  return t;
}

TEST(CompareTest, IdenticalPredictorIsDropped) {
  Rng rng(32);
  std::vector<RTObservation> obs;
  const auto t = synthetic_table(rng, 6, 10, 8, &obs);
  const auto plan = make_folds(obs, 10);
  const auto r = compare_models(t, {"len"}, "a", "a_copy", plan, 1);
  ASSERT_EQ(r.cv.models.size(), 3u);
  for (const auto& m : r.cv.models) EXPECT_EQ(m.fold_gain.size(), 10u);
  EXPECT_EQ(r.cv.model(r.name_both).dropped, (std::vector<std::string>{"a_copy"}));
  EXPECT_FALSE(r.cv.notes.empty());
  EXPECT_EQ(r.a_vs_both.p, 1.0);
  EXPECT_EQ(r.a_vs_both.sem, 0.0);
  EXPECT_EQ(r.cv.failed_folds(), 0);
  // The real predictor helps on every fold.
  for (double g : r.cv.model("a").fold_gain) EXPECT_GT(g, 0.0);
}

TEST(CompareTest, InformativeVersusNoise) {
  Rng rng(33);
  std::vector<RTObservation> obs;
  const auto t = synthetic_table(rng, 6, 10, 8, &obs);
  const auto plan = make_folds(obs, 10);
  const auto r = compare_models(t, {"len"}, "a", "noise", plan, 3);
  EXPECT_GT(r.a_vs_both.p, 0.05);
  EXPECT_LT(r.b_vs_both.p, 0.05);
  EXPECT_NEAR(r.b_vs_both.p_adjusted, std::min(1.0, 3.0 * r.b_vs_both.p), 1e-15);
  EXPECT_EQ(r.b_vs_both.p, 2.0 / 1024.0);
  EXPECT_TRUE(r.b_vs_both.significant(0.05));
  EXPECT_FALSE(r.a_vs_both.significant(0.05));
}

// Only a gain for the second model counts as significant.
TEST(CompareTest, SignificanceIsDirectional) {
  CVResult cv;
  cv.fold_failed.assign(10, false);
  cv.models.push_back({"small", std::vector<double>(10, 0.5), {}});
  std::vector<double> worse(10), better(10);
  for (int f = 0; f < 10; ++f) {
    worse[static_cast<std::size_t>(f)] = 0.4 - 0.001 * f;
    better[static_cast<std::size_t>(f)] = 0.6 + 0.001 * f;
  }
  cv.models.push_back({"worse", worse, {}});
  cv.models.push_back({"better", better, {}});
  const auto w = paired_test(cv, "small", "worse", 1);
  const auto b = paired_test(cv, "small", "better", 1);
  EXPECT_EQ(w.p, 2.0 / 1024.0);
  EXPECT_EQ(b.p, 2.0 / 1024.0);
  EXPECT_LT(w.mean_difference, 0.0);
  EXPECT_FALSE(w.significant(0.05));
  EXPECT_TRUE(b.significant(0.05));
  EXPECT_FALSE(paired_test(cv, "small", "better", 30).significant(0.05));
}

}  // namespace
}  // namespace pred::stats
