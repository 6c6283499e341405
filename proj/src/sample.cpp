#include "whl/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "whl/error.hpp"

namespace whl {

WeightedSample::WeightedSample(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.size() != weights_.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(values_.size()) + " values vs " +
                                               std::to_string(weights_.size()) + " weights");
  }
  if (values_.empty()) throw Error(ErrorCode::EmptySample, "sample has no observations");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    // Also rejects NaN.
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw Error(ErrorCode::NonPositiveWeight,
                  "weight " + std::to_string(i) + " is " + std::to_string(weights_[i]));
    }
  }
}

WeightedSample WeightedSample::equal_weights(std::vector<double> values) {
  const auto n = values.size();
  std::vector<double> w(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  return WeightedSample(std::move(values), std::move(w));
}

WeightedSample normalize(const WeightedSample& sample) {
  const auto w = sample.weights();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> out(w.begin(), w.end());
  for (auto& x : out) x /= total;
  return WeightedSample({sample.values().begin(), sample.values().end()}, std::move(out));
}

std::string_view scheme_name(PairScheme scheme) noexcept {
  switch (scheme) {
    case PairScheme::Strict: return "strict";
    case PairScheme::WithDiagonal: return "diag";
    case PairScheme::All: return "all";
  }
  return "?";
}

PairScheme parse_scheme(std::string_view name) {
  for (auto s : kAllSchemes) {
    if (scheme_name(s) == name) return s;
  }
  throw Error(ErrorCode::BadParameters, "unknown pair scheme '" + std::string(name) + "'");
}

std::size_t pair_count(std::size_t n, PairScheme scheme) noexcept {
  switch (scheme) {
    case PairScheme::Strict: return (n * n - n) / 2;
    case PairScheme::WithDiagonal: return (n * n + n) / 2;
    case PairScheme::All: return n * n;
  }
  return 0;
}

double pair_average(double a, double wa, double b, double wb) noexcept {
  const double total = wa + wb;
  const double v = (wa / total) * a + (wb / total) * b;
  return std::clamp(v, std::min(a, b), std::max(a, b));
}

namespace {

// Calls fn(i, j) for every index pair of the scheme in row-major order.
template <typename Fn>
void for_each_pair(std::size_t n, PairScheme scheme, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    if (scheme == PairScheme::Strict) j = i + 1;
    if (scheme == PairScheme::WithDiagonal) j = i;
    for (; j < n; ++j) fn(i, j);
  }
}

}  // namespace

PairSet build_pairs(const WeightedSample& sample, PairScheme scheme) {
  const auto x = sample.values();
  const auto w = sample.weights();
  const std::size_t m = pair_count(sample.size(), scheme);

  PairSet out{scheme, {}, {}};
  out.values.reserve(m);
  out.weights.reserve(m);
  double total = 0.0;
  for_each_pair(sample.size(), scheme, [&](std::size_t i, std::size_t j) {
    out.values.push_back(pair_average(x[i], w[i], x[j], w[j]));
    const double pw = w[i] + w[j];
    out.weights.push_back(pw);
    total += pw;
  });
  for (auto& pw : out.weights) pw /= total;
  return out;
}

std::vector<double> walsh_averages(std::span<const double> values, PairScheme scheme) {
  std::vector<double> out;
  out.reserve(pair_count(values.size(), scheme));
  for_each_pair(values.size(), scheme,
                [&](std::size_t i, std::size_t j) { out.push_back((values[i] + values[j]) / 2); });
  return out;
}

OrderedWeightedSet order_by_value(std::span<const double> values,
                                  std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw Error(ErrorCode::LengthMismatch, "values and weights differ in length");
  }
  const std::size_t m = values.size();
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  OrderedWeightedSet out;
  out.values.resize(m);
  out.weights.resize(m);
  out.cumulative.resize(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    out.values[k] = values[idx[k]];
    out.weights[k] = weights[idx[k]];
    running += out.weights[k];
    out.cumulative[k] = running;
  }
  return out;
}

}  // namespace whl
