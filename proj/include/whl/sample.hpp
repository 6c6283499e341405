#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace whl {

/// Observations x_i with strictly positive weights w_i.
///
/// Construction validates the invariants (equal lengths, n >= 1, every
/// weight > 0). Weights may be supplied unnormalized; call normalize() to
/// obtain the canonical form with sum(w) == 1.
class WeightedSample {
 public:
  WeightedSample(std::vector<double> values, std::vector<double> weights);

  /// All weights equal to 1/n.
  static WeightedSample equal_weights(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const WeightedSample&, const WeightedSample&) = default;

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
};

WeightedSample normalize(const WeightedSample& sample);

enum class PairScheme {
  Strict,        // i < j
  WithDiagonal,  // i <= j
  All,           // every ordered (i, j)
};

inline constexpr PairScheme kAllSchemes[] = {PairScheme::Strict, PairScheme::WithDiagonal,
                                             PairScheme::All};

/// Short name used in CSV output: "strict", "diag", "all".
std::string_view scheme_name(PairScheme scheme) noexcept;
/// Inverse of scheme_name(); throws Error(BadParameters) on unknown names.
PairScheme parse_scheme(std::string_view name);

/// Number of index pairs the scheme produces for n observations.
std::size_t pair_count(std::size_t n, PairScheme scheme) noexcept;

/// Pairwise weighted averages and their renormalized weights, enumerated
/// row-major by (i, j).
struct PairSet {
  PairScheme scheme;
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t size() const noexcept { return values.size(); }
};

/// Weighted average of one pair. Equal weights give exactly (a + b) / 2 and
/// the result always lies between a and b.
double pair_average(double a, double wa, double b, double wb) noexcept;

/// Expects a normalized sample. Strict with n == 1 yields an empty set.
PairSet build_pairs(const WeightedSample& sample, PairScheme scheme);

/// Unweighted pair averages (x_i + x_j) / 2 in the same order as build_pairs.
std::vector<double> walsh_averages(std::span<const double> values, PairScheme scheme);

struct OrderedWeightedSet {
  std::vector<double> values;
  std::vector<double> weights;
  std::vector<double> cumulative;

  std::size_t size() const noexcept { return values.size(); }
};

/// Stable ascending sort by value, carrying the weights along.
OrderedWeightedSet order_by_value(std::span<const double> values,
                                  std::span<const double> weights);

}  // namespace whl
