#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "whl/estimators.hpp"
#include "whl/rng.hpp"
#include "whl/sample.hpp"

namespace whl {

inline constexpr std::uint64_t kDefaultSeed = 20240101;

struct DistributionSpec {
  enum class Family { Uniform, Normal, ChiSquare, Poisson };

  Family family;
  double a;  // lo | mu | df | lambda
  double b;  // hi | sigma | unused

  static DistributionSpec uniform(double lo, double hi) { return {Family::Uniform, lo, hi}; }
  static DistributionSpec normal(double mu, double sigma) { return {Family::Normal, mu, sigma}; }
  static DistributionSpec chi_square(double df) { return {Family::ChiSquare, df, 0.0}; }
  static DistributionSpec poisson(double lambda) { return {Family::Poisson, lambda, 0.0}; }

  /// Throws Error(BadParameters) when the family constraints do not hold.
  void validate() const;

  double mean() const;
  double variance() const;
  double stddev() const;
  std::string describe() const;

  double draw(StreamEngine& engine) const;
};

/// `count` draws from a single stream keyed by `seed`.
std::vector<double> sampler(const DistributionSpec& spec, std::uint64_t seed, std::size_t count);

/// Per-observation normal means, standard deviations and raw weights.
struct SampleSpec {
  std::vector<double> mus;
  std::vector<double> sigmas;
  std::vector<double> weights;
  std::string id;

  std::size_t size() const noexcept { return mus.size(); }
  void validate() const;
};

/// Built-in small-sample configurations 1..6. Sample 1 has a fixed size of 4
/// (pass n = 0 or 4); samples 2..6 need n >= 1.
///
/// Sample 1 pairs means (4,3,2,1) and standard deviations (10,5,10,5) with
/// weights (0.1,0.2,0.3,0.4), which gives weighted mean 2 and weighted
/// variance 15.
SampleSpec reference_sample(int id, std::size_t n = 0);

/// x_i ~ Normal(mu_i, sigma_i), each observation on its own stream keyed by
/// (seed, replication, i). Weights are normalized.
WeightedSample generate_sample(const SampleSpec& spec, std::uint64_t seed,
                               std::uint64_t replication);

/// sum(wbar_i * mu_i) with normalized weights.
double true_theta(const SampleSpec& spec);
/// sum((wbar_i * sigma_i)^2) with normalized weights.
double true_var(const SampleSpec& spec);

struct MetricsRow {
  EstimatorKind estimator;
  std::size_t n;
  std::size_t replications;
  double theta;
  double bias;      // |mean of estimates - theta|
  double var_hat;   // unbiased variance of the estimates
  double mse;       // mean of (estimate - theta)^2
  double var_theta;
  double relative_efficiency;  // 100 * var_theta / mse
  std::uint64_t seed;
};

/// Runs `reps` replications and evaluates every kind on each. The result does
/// not depend on `workers`. Throws InsufficientReplications for reps < 2.
///
/// Relative efficiency divides by the mean squared error about theta rather
/// than by var_hat, so a biased estimator is charged for its bias. For
/// unbiased estimators the two agree up to Monte Carlo noise.
std::vector<MetricsRow> run_replications(const SampleSpec& spec,
                                         std::span<const EstimatorKind> kinds, std::size_t reps,
                                         std::uint64_t seed, unsigned workers = 1);

struct ContaminationSpec {
  double proportion = 0.0;
  double shift_multiplier = 5.0;

  void validate() const;
  /// ceil(proportion * n).
  std::size_t count(std::size_t n) const;
};

/// Shifts ceil(p * n) uniformly chosen observations by
/// shift_multiplier * population_sigma. For a fixed (seed, replication) the
/// chosen index sets are nested as the proportion grows.
WeightedSample inject_outliers(const WeightedSample& sample, const ContaminationSpec& spec,
                               double population_sigma, std::uint64_t seed,
                               std::uint64_t replication);

enum class WeightConstruction {
  W1,  // independent Uniform(10, 100)
  W2,  // value / 100
  W3,  // 3 - value / 100
};

std::string_view construction_name(WeightConstruction w) noexcept;

inline constexpr double kMinWeight = 1e-6;

struct SensitivityCase {
  int id;
  DistributionSpec distribution;
  WeightConstruction weights;
  std::size_t n = 100;
};

/// Cases 1..12: {Uniform(50,150), Normal(100,20), ChiSquare(100), Poisson(100)}
/// crossed with {W1, W2, W3}. Throws Error(BadCase) otherwise.
SensitivityCase sensitivity_case(int id);

/// Uncontaminated sample of one replication.
WeightedSample generate_case_sample(const SensitivityCase& c, std::uint64_t seed,
                                    std::uint64_t replication);

/// Weighted mean plus HL, WHL1 and WHL2 under every scheme.
std::vector<EstimatorKind> sensitivity_kinds();

struct SensitivityRow {
  int case_id;
  double proportion;
  EstimatorKind estimator;
  double avg_bias;  // mean of |estimate - clean weighted mean|
  double std_error;
  std::size_t replications;
  std::uint64_t seed;
};

/// Proportions must lie in [0, 0.25]. Rows are ordered by proportion, then by
/// sensitivity_kinds().
std::vector<SensitivityRow> sensitivity_sweep(int case_id, std::span<const double> grid,
                                              std::size_t reps, std::uint64_t seed,
                                              unsigned workers = 1,
                                              double shift_multiplier = 5.0);

std::vector<double> default_proportion_grid();

}  // namespace whl
