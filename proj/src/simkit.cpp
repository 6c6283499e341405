#include "whl/simkit.hpp"

#include <algorithm>
#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "whl/error.hpp"
#include "whl/io.hpp"

namespace whl {

void DistributionSpec::validate() const {
  const auto bad = [&](const char* why) {
    throw Error(ErrorCode::BadParameters, describe() + ": " + why);
  };
  if (!std::isfinite(a) || !std::isfinite(b)) bad("parameters must be finite");
  switch (family) {
    case Family::Uniform:
      if (!(b > a)) bad("need hi > lo");
      break;
    case Family::Normal:
      if (!(b > 0.0)) bad("need sigma > 0");
      break;
    case Family::ChiSquare:
      if (!(a > 0.0)) bad("need df > 0");
      break;
    case Family::Poisson:
      if (!(a > 0.0)) bad("need lambda > 0");
      break;
  }
}

double DistributionSpec::mean() const {
  switch (family) {
    case Family::Uniform: return (a + b) / 2;
    case Family::Normal: return a;
    case Family::ChiSquare: return a;
    case Family::Poisson: return a;
  }
  return 0.0;
}

double DistributionSpec::variance() const {
  switch (family) {
    case Family::Uniform: return (b - a) * (b - a) / 12;
    case Family::Normal: return b * b;
    case Family::ChiSquare: return 2 * a;
    case Family::Poisson: return a;
  }
  return 0.0;
}

double DistributionSpec::stddev() const { return std::sqrt(variance()); }

std::string DistributionSpec::describe() const {
  switch (family) {
    case Family::Uniform: return "Uniform(" + format_number(a) + "," + format_number(b) + ")";
    case Family::Normal: return "Normal(" + format_number(a) + "," + format_number(b) + ")";
    case Family::ChiSquare: return "ChiSquare(" + format_number(a) + ")";
    case Family::Poisson: return "Poisson(" + format_number(a) + ")";
  }
  return "?";
}

double DistributionSpec::draw(StreamEngine& engine) const {
  switch (family) {
    case Family::Uniform: return boost::random::uniform_real_distribution<double>(a, b)(engine);
    case Family::Normal: return boost::random::normal_distribution<double>(a, b)(engine);
    case Family::ChiSquare: return boost::random::chi_squared_distribution<double>(a)(engine);
    case Family::Poisson:
      return static_cast<double>(boost::random::poisson_distribution<long, double>(a)(engine));
  }
  return 0.0;
}

std::vector<double> sampler(const DistributionSpec& spec, std::uint64_t seed, std::size_t count) {
  spec.validate();
  auto engine = StreamEngine::at(seed, 0, 0, StreamDomain::Raw);
  std::vector<double> out(count);
  for (auto& x : out) x = spec.draw(engine);
  return out;
}

void SampleSpec::validate() const {
  if (mus.empty()) throw Error(ErrorCode::EmptySample, "sample spec has no observations");
  if (sigmas.size() != mus.size() || weights.size() != mus.size()) {
    throw Error(ErrorCode::LengthMismatch, "mus, sigmas and weights must have equal length");
  }
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (!std::isfinite(mus[i])) throw Error(ErrorCode::BadParameters, "mu must be finite");
    if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i])) {
      throw Error(ErrorCode::BadParameters, "sigma " + std::to_string(i) + " must be > 0");
    }
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorCode::NonPositiveWeight, "weight " + std::to_string(i) + " must be > 0");
    }
  }
}

SampleSpec reference_sample(int id, std::size_t n) {
  if (id == 1) {
    if (n != 0 && n != 4) throw Error(ErrorCode::BadParameters, "sample 1 has fixed size 4");
    return {{4, 3, 2, 1}, {10, 5, 10, 5}, {0.1, 0.2, 0.3, 0.4}, "sample1"};
  }
  if (id < 2 || id > 6) {
    throw Error(ErrorCode::BadCase, "unknown sample id " + std::to_string(id));
  }
  if (n == 0) throw Error(ErrorCode::BadParameters, "sample size must be >= 1");

  SampleSpec spec;
  spec.id = "sample" + std::to_string(id);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double i = static_cast<double>(k);
    const bool ascending = id == 2 || id == 4;
    spec.mus.push_back(id == 6 ? 5.0 : (ascending ? i : nd + 1 - i));
    spec.sigmas.push_back(i);
    switch (id) {
      case 2:
      case 3: spec.weights.push_back(1.0 / nd); break;
      case 4:
      case 5: spec.weights.push_back(1.0 / i); break;
      default: spec.weights.push_back(1.0 / (i * i)); break;
    }
  }
  return spec;
}

namespace {

std::vector<double> normalized_weights(const SampleSpec& spec) {
  std::vector<double> w = spec.weights;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

// Mean and unbiased variance, summed in index order.
std::pair<double, double> mean_and_variance(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(xs.size() - 1)};
}

}  // namespace

WeightedSample generate_sample(const SampleSpec& spec, std::uint64_t seed,
                               std::uint64_t replication) {
  spec.validate();
  std::vector<double> x(spec.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto engine = StreamEngine::at(seed, replication, i, StreamDomain::Observation);
    x[i] = boost::random::normal_distribution<double>(spec.mus[i], spec.sigmas[i])(engine);
  }
  return WeightedSample(std::move(x), normalized_weights(spec));
}

double true_theta(const SampleSpec& spec) {
  spec.validate();
  const auto w = normalized_weights(spec);
  return std::inner_product(w.begin(), w.end(), spec.mus.begin(), 0.0);
}

double true_var(const SampleSpec& spec) {
  spec.validate();
  const auto w = normalized_weights(spec);
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) v += (w[i] * spec.sigmas[i]) * (w[i] * spec.sigmas[i]);
  return v;
}

std::vector<MetricsRow> run_replications(const SampleSpec& spec,
                                         std::span<const EstimatorKind> kinds, std::size_t reps,
                                         std::uint64_t seed, unsigned workers) {
  if (reps < 2) {
    throw Error(ErrorCode::InsufficientReplications, "need at least 2 replications");
  }
  spec.validate();
  const std::size_t k = kinds.size();
  // estimates[kind * reps + rep]
  std::vector<double> estimates(k * reps);
  detail::parallel_for(reps, workers, [&](std::size_t r) {
    const auto sample = generate_sample(spec, seed, r);
    for (std::size_t j = 0; j < k; ++j) estimates[j * reps + r] = estimate(sample, kinds[j]);
  });

  const double theta = true_theta(spec);
  const double var_theta = true_var(spec);
  std::vector<MetricsRow> rows;
  rows.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto stream = std::span<const double>(estimates).subspan(j * reps, reps);
    const auto [avg, var] = mean_and_variance(stream);
    double sq = 0.0;
    for (double e : stream) sq += (e - theta) * (e - theta);
    const double mse = sq / static_cast<double>(reps);
    rows.push_back({kinds[j], spec.size(), reps, theta, std::abs(avg - theta), var, mse,
                    var_theta, 100.0 * var_theta / mse, seed});
  }
  return rows;
}

void ContaminationSpec::validate() const {
  if (!(proportion >= 0.0 && proportion <= 0.25)) {
    throw Error(ErrorCode::BadParameters,
                "outlier proportion " + format_number(proportion) + " outside [0, 0.25]");
  }
  if (!(shift_multiplier > 0.0) || !std::isfinite(shift_multiplier)) {
    throw Error(ErrorCode::BadParameters, "shift multiplier must be > 0");
  }
}

std::size_t ContaminationSpec::count(std::size_t n) const {
  // The small slack keeps products like 0.1 * 100 from rounding up to 11.
  return static_cast<std::size_t>(std::ceil(proportion * static_cast<double>(n) - 1e-9));
}

WeightedSample inject_outliers(const WeightedSample& sample, const ContaminationSpec& spec,
                               double population_sigma, std::uint64_t seed,
                               std::uint64_t replication) {
  spec.validate();
  const std::size_t n = sample.size();
  const std::size_t hits = std::min(spec.count(n), n);
  std::vector<double> x(sample.values().begin(), sample.values().end());
  if (hits == 0) return WeightedSample(std::move(x), {sample.weights().begin(), sample.weights().end()});

  // Partial Fisher-Yates: the first `hits` slots form a uniform subset, and a
  // longer prefix extends a shorter one.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto engine = StreamEngine::at(seed, replication, 0, StreamDomain::Outlier);
  for (std::size_t t = 0; t < hits; ++t) {
    const auto pick = boost::random::uniform_int_distribution<std::size_t>(t, n - 1)(engine);
    std::swap(order[t], order[pick]);
  }
  const double shift = spec.shift_multiplier * population_sigma;
  for (std::size_t t = 0; t < hits; ++t) x[order[t]] += shift;
  return WeightedSample(std::move(x), {sample.weights().begin(), sample.weights().end()});
}

std::string_view construction_name(WeightConstruction w) noexcept {
  switch (w) {
    case WeightConstruction::W1: return "W1";
    case WeightConstruction::W2: return "W2";
    case WeightConstruction::W3: return "W3";
  }
  return "?";
}

SensitivityCase sensitivity_case(int id) {
  if (id < 1 || id > 12) throw Error(ErrorCode::BadCase, "case must be 1..12, got " + std::to_string(id));
  static const DistributionSpec kDistributions[] = {
      DistributionSpec::uniform(50, 150), DistributionSpec::normal(100, 20),
      DistributionSpec::chi_square(100), DistributionSpec::poisson(100)};
  static const WeightConstruction kWeights[] = {WeightConstruction::W1, WeightConstruction::W2,
                                                WeightConstruction::W3};
  return {id, kDistributions[(id - 1) / 3], kWeights[(id - 1) % 3]};
}

WeightedSample generate_case_sample(const SensitivityCase& c, std::uint64_t seed,
                                    std::uint64_t replication) {
  std::vector<double> x(c.n);
  std::vector<double> w(c.n);
  for (std::size_t i = 0; i < c.n; ++i) {
    auto obs = StreamEngine::at(seed, replication, i, StreamDomain::Observation);
    x[i] = c.distribution.draw(obs);
    switch (c.weights) {
      case WeightConstruction::W1: {
        auto eng = StreamEngine::at(seed, replication, i, StreamDomain::Weight);
        w[i] = boost::random::uniform_real_distribution<double>(10.0, 100.0)(eng);
        break;
      }
      case WeightConstruction::W2: w[i] = std::max(x[i] / 100.0, kMinWeight); break;
      case WeightConstruction::W3: w[i] = std::max(3.0 - x[i] / 100.0, kMinWeight); break;
    }
  }
  return normalize(WeightedSample(std::move(x), std::move(w)));
}

std::vector<EstimatorKind> sensitivity_kinds() {
  std::vector<EstimatorKind> out{EstimatorKind::weighted_mean()};
  for (auto f : {EstimatorFamily::HL, EstimatorFamily::WHL1, EstimatorFamily::WHL2}) {
    for (auto s : kAllSchemes) out.push_back({f, s});
  }
  return out;
}

std::vector<double> default_proportion_grid() { return {0.0, 0.05, 0.10, 0.15, 0.20, 0.25}; }

std::vector<SensitivityRow> sensitivity_sweep(int case_id, std::span<const double> grid,
                                              std::size_t reps, std::uint64_t seed,
                                              unsigned workers, double shift_multiplier) {
  const auto c = sensitivity_case(case_id);
  if (reps < 2) {
    throw Error(ErrorCode::InsufficientReplications, "need at least 2 replications");
  }
  if (grid.empty()) throw Error(ErrorCode::BadParameters, "empty proportion grid");
  for (double p : grid) ContaminationSpec{p, shift_multiplier}.validate();

  const auto kinds = sensitivity_kinds();
  const std::size_t k = kinds.size();
  const std::size_t g = grid.size();
  const double sigma = c.distribution.stddev();
  // bias[(p * k + kind) * reps + rep]
  std::vector<double> bias(g * k * reps);
  detail::parallel_for(reps, workers, [&](std::size_t r) {
    const auto clean = generate_case_sample(c, seed, r);
    const double baseline = weighted_mean(clean);
    for (std::size_t p = 0; p < g; ++p) {
      const auto dirty = inject_outliers(clean, {grid[p], shift_multiplier}, sigma, seed, r);
      for (std::size_t j = 0; j < k; ++j) {
        bias[(p * k + j) * reps + r] = std::abs(estimate(dirty, kinds[j]) - baseline);
      }
    }
  });

  std::vector<SensitivityRow> rows;
  rows.reserve(g * k);
  for (std::size_t p = 0; p < g; ++p) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto [avg, var] = mean_and_variance(
          std::span<const double>(bias).subspan((p * k + j) * reps, reps));
      rows.push_back({case_id, grid[p], kinds[j], avg,
                      std::sqrt(var / static_cast<double>(reps)), reps, seed});
    }
  }
  return rows;
}

}  // namespace whl
