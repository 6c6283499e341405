#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "whl/estimators.hpp"
#include "whl/sample.hpp"

namespace whl {

struct ExactBreakdown {
  double value;
  friend bool operator==(const ExactBreakdown&, const ExactBreakdown&) = default;
};

struct BreakdownBounds {
  double lower;
  double upper;
  friend bool operator==(const BreakdownBounds&, const BreakdownBounds&) = default;
};

struct BreakdownReport {
  EstimatorKind estimator;
  std::size_t n;
  std::size_t m;  // pair count (n for sample-level estimators)
  std::variant<ExactBreakdown, BreakdownBounds> bp;

  bool is_exact() const noexcept { return std::holds_alternative<ExactBreakdown>(bp); }
  double exact() const { return std::get<ExactBreakdown>(bp).value; }
  const BreakdownBounds& bounds() const { return std::get<BreakdownBounds>(bp); }
};

/// floor((n - 1) / 2) / n.
double bp_median(std::size_t n);

/// Largest tolerated number of contaminated observations for WHL1 (and HL)
/// under `scheme`; bp_whl1() divides it by n.
std::size_t whl1_tolerated(std::size_t n, PairScheme scheme);
double bp_whl1(std::size_t n, PairScheme scheme);

/// Order in which contamination consumes the weights.
enum class Adversary {
  Ascending,   // smallest weights first: best case, upper bound
  Descending,  // largest weights first: worst case, lower bound
  AsGiven,
};

/// max{k <= m - 1 : sum of the first k consumed weights < 1/2}. Weights must
/// sum to 1. Throws EmptySet for m == 0.
std::size_t tolerated_count(std::span<const double> weights, Adversary order);
double bp_weighted_median(std::span<const double> weights, Adversary order);

/// Weighted-median breakdown bounds over the observation weights of a sample.
BreakdownReport bp_weighted_median(const WeightedSample& sample);

/// WHL2 bounds from the renormalized pair weights of `sample` under `scheme`.
/// Throws EmptyPairSet when the scheme has no pairs.
BreakdownReport bp_whl2(const WeightedSample& sample, PairScheme scheme);

inline constexpr std::size_t kMaxEmpiricalSize = 12;

/// Brute-force breakdown fraction: the largest k/n such that replacing ANY k
/// observations by +magnitude leaves the estimate bounded. "Bounded" means the
/// estimate moved by less than magnitude/2 and did not drift when the
/// magnitude was raised tenfold (movement under 1e-6 * magnitude). Throws
/// SampleTooLarge for n > 12.
double empirical_breakdown(const WeightedSample& sample, const EstimatorKind& kind,
                           double magnitude = 1e12);

/// Observation-weight generator for tabulation.
struct WeightFamily {
  enum class Type { Equal, Arithmetic, Explicit } type = Type::Equal;
  /// Arithmetic: weights proportional to 1 + spread * i, i = 0..n-1. Without
  /// a spread, the bounds are swept over a log grid of spreads.
  std::optional<double> spread;
  /// Explicit: the first n entries are used for a table row of size n.
  std::vector<double> weights;

  static WeightFamily equal() { return {}; }
  static WeightFamily arithmetic(std::optional<double> spread = std::nullopt) {
    return {Type::Arithmetic, spread, {}};
  }
  static WeightFamily explicit_weights(std::vector<double> w) {
    return {Type::Explicit, std::nullopt, std::move(w)};
  }

  /// "equal", "arithmetic", "arithmetic:<spread>" or "csv:<path>".
  static WeightFamily parse(const std::string& spec);

  bool is_sweep() const noexcept { return type == Type::Arithmetic && !spread; }
  /// Raw (unnormalized) weights for one sample size and spread.
  std::vector<double> generate(std::size_t n, double sweep_spread = 0.0) const;
};

/// Spreads visited by a sweep: 121 points log-spaced over [1e-3, 1e3].
std::vector<double> sweep_spreads();

/// One row of the breakdown table.
struct BreakdownRow {
  std::size_t n;
  double median;
  BreakdownBounds weighted_median;
  std::size_t pairs[3];
  double whl1[3];
  std::optional<BreakdownBounds> whl2[3];  // empty when the scheme has no pairs
};

/// Rows n = 1..n_max. For a swept family each bound is the largest value
/// attained over the sweep: the worst-case bound peaks at the least spread,
/// the best-case bound at the greatest.
std::vector<BreakdownRow> bp_table(std::size_t n_max, const WeightFamily& family);

/// The same table flattened into reports (median, weighted median, WHL1 x 3,
/// WHL2 x 3 per n).
std::vector<BreakdownReport> bp_table_reports(std::size_t n_max, const WeightFamily& family);

}  // namespace whl
