#include "whl/estimators.hpp"

#include <algorithm>
#include <numeric>

#include "whl/error.hpp"

namespace whl {

std::string_view family_name(EstimatorFamily family) noexcept {
  switch (family) {
    case EstimatorFamily::Mean: return "mean";
    case EstimatorFamily::Median: return "median";
    case EstimatorFamily::WeightedMean: return "weighted_mean";
    case EstimatorFamily::WeightedMedian: return "weighted_median";
    case EstimatorFamily::HL: return "hl";
    case EstimatorFamily::WHL1: return "whl1";
    case EstimatorFamily::WHL2: return "whl2";
  }
  return "?";
}

std::string to_string(const EstimatorKind& kind) {
  std::string out(family_name(kind.family));
  if (kind.scheme) {
    out += '/';
    out += scheme_name(*kind.scheme);
  }
  return out;
}

EstimatorKind parse_kind(std::string_view family, std::string_view scheme) {
  for (auto f : {EstimatorFamily::Mean, EstimatorFamily::Median, EstimatorFamily::WeightedMean,
                 EstimatorFamily::WeightedMedian, EstimatorFamily::HL, EstimatorFamily::WHL1,
                 EstimatorFamily::WHL2}) {
    if (family_name(f) != family) continue;
    const bool pairwise =
        f == EstimatorFamily::HL || f == EstimatorFamily::WHL1 || f == EstimatorFamily::WHL2;
    if (pairwise != !scheme.empty()) {
      throw Error(ErrorCode::BadParameters,
                  "estimator '" + std::string(family) + "' " +
                      (pairwise ? "needs a pair scheme" : "takes no pair scheme"));
    }
    if (!pairwise) return {f, std::nullopt};
    return {f, parse_scheme(scheme)};
  }
  throw Error(ErrorCode::BadParameters, "unknown estimator '" + std::string(family) + "'");
}

std::vector<EstimatorKind> all_kinds() {
  std::vector<EstimatorKind> out{EstimatorKind::mean(), EstimatorKind::median(),
                                 EstimatorKind::weighted_mean(),
                                 EstimatorKind::weighted_median()};
  for (auto f : {EstimatorFamily::HL, EstimatorFamily::WHL1, EstimatorFamily::WHL2}) {
    for (auto s : kAllSchemes) out.push_back({f, s});
  }
  return out;
}

std::vector<EstimatorKind> table_kinds() {
  std::vector<EstimatorKind> out{EstimatorKind::weighted_mean(),
                                 EstimatorKind::weighted_median()};
  for (auto s : kAllSchemes) out.push_back(EstimatorKind::whl1(s));
  for (auto s : kAllSchemes) out.push_back(EstimatorKind::whl2(s));
  return out;
}

namespace {

// Median of a scratch buffer, reordered in place.
double median_inplace(std::vector<double>& v) {
  if (v.empty()) throw Error(ErrorCode::EmptySet, "median of an empty set");
  const std::size_t half = v.size() / 2;
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(half);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return (lower + upper) / 2;
}

PairSet nonempty_pairs(const WeightedSample& sample, PairScheme scheme) {
  auto pairs = build_pairs(normalize(sample), scheme);
  if (pairs.size() == 0) {
    throw Error(ErrorCode::EmptyPairSet, "scheme '" + std::string(scheme_name(scheme)) +
                                             "' has no pairs for n = " +
                                             std::to_string(sample.size()));
  }
  return pairs;
}

}  // namespace

double median_of(std::span<const double> values) {
  std::vector<double> scratch(values.begin(), values.end());
  return median_inplace(scratch);
}

double weighted_median(const OrderedWeightedSet& set) {
  if (set.size() == 0) throw Error(ErrorCode::EmptySet, "weighted median of an empty set");
  // cumulative is non-decreasing, so k is the count of prefixes at or below 1/2.
  const auto it = std::upper_bound(set.cumulative.begin(), set.cumulative.end(),
                                   0.5 + kHalfTolerance);
  auto k = static_cast<std::size_t>(it - set.cumulative.begin());
  k = std::min(k, set.size() - 1);
  return set.values[k];
}

double mean(const WeightedSample& sample) {
  const auto x = sample.values();
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double median(const WeightedSample& sample) { return median_of(sample.values()); }

double weighted_mean(const WeightedSample& sample) {
  const auto norm = normalize(sample);
  const auto x = norm.values();
  const auto w = norm.weights();
  return std::inner_product(x.begin(), x.end(), w.begin(), 0.0);
}

double weighted_median(const WeightedSample& sample) {
  const auto norm = normalize(sample);
  return weighted_median(order_by_value(norm.values(), norm.weights()));
}

double hl(const WeightedSample& sample, PairScheme scheme) {
  auto walsh = walsh_averages(sample.values(), scheme);
  if (walsh.empty()) {
    throw Error(ErrorCode::EmptyPairSet, "scheme '" + std::string(scheme_name(scheme)) +
                                             "' has no pairs for n = 1");
  }
  return median_inplace(walsh);
}

double whl1(const WeightedSample& sample, PairScheme scheme) {
  auto pairs = nonempty_pairs(sample, scheme);
  return median_inplace(pairs.values);
}

double whl2(const WeightedSample& sample, PairScheme scheme) {
  const auto pairs = nonempty_pairs(sample, scheme);
  return weighted_median(order_by_value(pairs.values, pairs.weights));
}

double estimate(const WeightedSample& sample, const EstimatorKind& kind) {
  const auto scheme_or = [&] {
    if (!kind.scheme) {
      throw Error(ErrorCode::BadParameters, to_string(kind) + " requires a pair scheme");
    }
    return *kind.scheme;
  };
  switch (kind.family) {
    case EstimatorFamily::Mean: return mean(sample);
    case EstimatorFamily::Median: return median(sample);
    case EstimatorFamily::WeightedMean: return weighted_mean(sample);
    case EstimatorFamily::WeightedMedian: return weighted_median(sample);
    case EstimatorFamily::HL: return hl(sample, scheme_or());
    case EstimatorFamily::WHL1: return whl1(sample, scheme_or());
    case EstimatorFamily::WHL2: return whl2(sample, scheme_or());
  }
  throw Error(ErrorCode::BadParameters, "unknown estimator");
}

}  // namespace whl
