#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "whl/sample.hpp"

namespace whl {

enum class EstimatorFamily { Mean, Median, WeightedMean, WeightedMedian, HL, WHL1, WHL2 };

/// One location estimator. Pairwise families (HL, WHL1, WHL2) carry a scheme;
/// the rest do not.
struct EstimatorKind {
  EstimatorFamily family;
  std::optional<PairScheme> scheme;

  static EstimatorKind mean() { return {EstimatorFamily::Mean, std::nullopt}; }
  static EstimatorKind median() { return {EstimatorFamily::Median, std::nullopt}; }
  static EstimatorKind weighted_mean() { return {EstimatorFamily::WeightedMean, std::nullopt}; }
  static EstimatorKind weighted_median() {
    return {EstimatorFamily::WeightedMedian, std::nullopt};
  }
  static EstimatorKind hl(PairScheme s) { return {EstimatorFamily::HL, s}; }
  static EstimatorKind whl1(PairScheme s) { return {EstimatorFamily::WHL1, s}; }
  static EstimatorKind whl2(PairScheme s) { return {EstimatorFamily::WHL2, s}; }

  bool is_pairwise() const noexcept { return scheme.has_value(); }

  friend bool operator==(const EstimatorKind&, const EstimatorKind&) = default;
};

std::string_view family_name(EstimatorFamily family) noexcept;

/// "whl2/all", "median", ...
std::string to_string(const EstimatorKind& kind);

/// Parses the family name used in CSV output ("mean", "whl1", ...) plus an
/// optional scheme. Throws Error(BadParameters) on mismatch.
EstimatorKind parse_kind(std::string_view family, std::string_view scheme = {});

/// The 13 variants: mean, median, weighted_mean, weighted_median and the
/// three pairwise families over the three schemes.
std::vector<EstimatorKind> all_kinds();

/// The 8 columns of the small-sample tables: weighted mean, weighted median,
/// WHL1 x 3 schemes, WHL2 x 3 schemes.
std::vector<EstimatorKind> table_kinds();

/// Unweighted median; the two middle order statistics are averaged for even
/// counts. Throws EmptySet on empty input.
double median_of(std::span<const double> values);

/// Weighted median of an ordered set: z_(k+1) with k the largest count whose
/// cumulative weight does not exceed 1/2. Ties at exactly 1/2 therefore
/// select the upper element.
double weighted_median(const OrderedWeightedSet& set);

/// Tolerance applied when comparing a cumulative weight with 1/2.
inline constexpr double kHalfTolerance = 1e-12;

double mean(const WeightedSample& sample);
double median(const WeightedSample& sample);
double weighted_mean(const WeightedSample& sample);
double weighted_median(const WeightedSample& sample);
double hl(const WeightedSample& sample, PairScheme scheme);
double whl1(const WeightedSample& sample, PairScheme scheme);
double whl2(const WeightedSample& sample, PairScheme scheme);

/// Dispatches to the routine for `kind`. Weighted estimators normalize the
/// sample themselves, so raw weights are accepted everywhere.
double estimate(const WeightedSample& sample, const EstimatorKind& kind);

}  // namespace whl
