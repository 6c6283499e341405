#include "whl/breakdown.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>

#include "whl/error.hpp"
#include "whl/io.hpp"

namespace whl {

namespace {

// Floor division for a possibly negative numerator and positive divisor.
std::int64_t floor_div(std::int64_t num, std::int64_t den) {
  std::int64_t q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

std::vector<double> normalized(std::vector<double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

BreakdownBounds bounds_of(std::span<const double> weights) {
  return {bp_weighted_median(weights, Adversary::Descending),
          bp_weighted_median(weights, Adversary::Ascending)};
}

BreakdownBounds envelope(const BreakdownBounds& a, const BreakdownBounds& b) {
  return {std::max(a.lower, b.lower), std::max(a.upper, b.upper)};
}

}  // namespace

double bp_median(std::size_t n) {
  if (n == 0) return 0.0;
  return static_cast<double>((n - 1) / 2) / static_cast<double>(n);
}

std::size_t whl1_tolerated(std::size_t n, PairScheme scheme) {
  const auto nn = static_cast<std::int64_t>(n);
  const double nd = static_cast<double>(n);
  double k = 0.0;
  switch (scheme) {
    case PairScheme::Strict: {
      const double inner = static_cast<double>(floor_div(nn * nn - nn - 2, 4));
      k = std::floor(nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * inner));
      break;
    }
    case PairScheme::WithDiagonal: {
      const double inner = static_cast<double>(floor_div(nn * nn + nn - 2, 4));
      k = std::floor(nd + 0.5 - std::sqrt((nd + 0.5) * (nd + 0.5) - 2.0 * inner));
      break;
    }
    case PairScheme::All: {
      const double inner = static_cast<double>(floor_div(nn * nn - 1, 2));
      k = std::floor(nd - std::sqrt(nd * nd - inner));
      break;
    }
  }
  return k > 0.0 ? static_cast<std::size_t>(k) : 0;
}

double bp_whl1(std::size_t n, PairScheme scheme) {
  if (n == 0) return 0.0;
  return static_cast<double>(whl1_tolerated(n, scheme)) / static_cast<double>(n);
}

std::size_t tolerated_count(std::span<const double> weights, Adversary order) {
  if (weights.empty()) throw Error(ErrorCode::EmptySet, "no weights to contaminate");
  std::vector<double> consumed(weights.begin(), weights.end());
  if (order == Adversary::Ascending) std::sort(consumed.begin(), consumed.end());
  if (order == Adversary::Descending) std::sort(consumed.begin(), consumed.end(), std::greater<>());

  std::size_t k = 0;
  double running = 0.0;
  for (std::size_t j = 1; j < consumed.size(); ++j) {
    running += consumed[j - 1];
    if (!(running < 0.5 - kHalfTolerance)) break;
    k = j;
  }
  return k;
}

double bp_weighted_median(std::span<const double> weights, Adversary order) {
  return static_cast<double>(tolerated_count(weights, order)) /
         static_cast<double>(weights.size());
}

BreakdownReport bp_weighted_median(const WeightedSample& sample) {
  const auto norm = normalize(sample);
  return {EstimatorKind::weighted_median(), sample.size(), sample.size(),
          bounds_of(norm.weights())};
}

BreakdownReport bp_whl2(const WeightedSample& sample, PairScheme scheme) {
  const auto pairs = build_pairs(normalize(sample), scheme);
  if (pairs.size() == 0) {
    throw Error(ErrorCode::EmptyPairSet, "scheme '" + std::string(scheme_name(scheme)) +
                                             "' has no pairs for n = " +
                                             std::to_string(sample.size()));
  }
  return {EstimatorKind::whl2(scheme), sample.size(), pairs.size(), bounds_of(pairs.weights)};
}

double empirical_breakdown(const WeightedSample& sample, const EstimatorKind& kind,
                           double magnitude) {
  const std::size_t n = sample.size();
  if (n > kMaxEmpiricalSize) {
    throw Error(ErrorCode::SampleTooLarge,
                "exhaustive search needs n <= 12, got " + std::to_string(n));
  }
  const double clean = estimate(sample, kind);
  const std::vector<double> w(sample.weights().begin(), sample.weights().end());

  const auto bounded = [&](const std::vector<bool>& hit) {
    std::vector<double> x(sample.values().begin(), sample.values().end());
    for (std::size_t i = 0; i < n; ++i) {
      if (hit[i]) x[i] = magnitude;
    }
    const double near = estimate(WeightedSample(x, w), kind);
    for (std::size_t i = 0; i < n; ++i) {
      if (hit[i]) x[i] = 10.0 * magnitude;
    }
    const double far = estimate(WeightedSample(x, w), kind);
    return std::abs(near - clean) < magnitude / 2 && std::abs(far - near) <= 1e-6 * magnitude;
  };

  std::size_t tolerated = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    // Selector with k leading trues; prev_permutation walks every k-subset.
    std::vector<bool> hit(n, false);
    std::fill(hit.begin(), hit.begin() + static_cast<std::ptrdiff_t>(k), true);
    bool all_bounded = true;
    do {
      if (!bounded(hit)) {
        all_bounded = false;
        break;
      }
    } while (std::prev_permutation(hit.begin(), hit.end()));
    if (!all_bounded) break;
    tolerated = k;
  }
  return static_cast<double>(tolerated) / static_cast<double>(n);
}

WeightFamily WeightFamily::parse(const std::string& spec) {
  if (spec == "equal") return equal();
  if (spec == "arithmetic") return arithmetic();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const auto head = spec.substr(0, colon);
    const auto tail = spec.substr(colon + 1);
    if (head == "arithmetic") {
      double d = 0.0;
      try {
        std::size_t used = 0;
        d = std::stod(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(tail);
      } catch (const std::exception&) {
        throw Error(ErrorCode::BadParameters, "bad arithmetic spread '" + tail + "'");
      }
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw Error(ErrorCode::BadParameters, "arithmetic spread must be >= 0");
      }
      return arithmetic(d);
    }
    if (head == "csv") {
      std::ifstream in(tail);
      if (!in) throw Error(ErrorCode::BadParameters, "cannot open weight file '" + tail + "'");
      return explicit_weights(read_weight_column(in));
    }
  }
  throw Error(ErrorCode::BadParameters, "unknown weight family '" + spec + "'");
}

std::vector<double> WeightFamily::generate(std::size_t n, double sweep_spread) const {
  switch (type) {
    case Type::Equal: return std::vector<double>(n, 1.0);
    case Type::Arithmetic: {
      const double d = spread.value_or(sweep_spread);
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + d * static_cast<double>(i);
      return w;
    }
    case Type::Explicit:
      if (weights.size() < n) {
        throw Error(ErrorCode::BadParameters, "weight file has " +
                                                  std::to_string(weights.size()) +
                                                  " rows, need " + std::to_string(n));
      }
      return {weights.begin(), weights.begin() + static_cast<std::ptrdiff_t>(n)};
  }
  return {};
}

std::vector<double> sweep_spreads() {
  std::vector<double> out;
  for (int i = 0; i <= 120; ++i) out.push_back(std::pow(10.0, -3.0 + i / 20.0));
  return out;
}

std::vector<BreakdownRow> bp_table(std::size_t n_max, const WeightFamily& family) {
  const auto spreads = family.is_sweep() ? sweep_spreads() : std::vector<double>{0.0};
  std::vector<BreakdownRow> rows;
  rows.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    BreakdownRow row{};
    row.n = n;
    row.median = bp_median(n);
    for (std::size_t s = 0; s < 3; ++s) {
      row.pairs[s] = pair_count(n, kAllSchemes[s]);
      row.whl1[s] = bp_whl1(n, kAllSchemes[s]);
    }

    bool first = true;
    for (double d : spreads) {
      const WeightedSample sample(std::vector<double>(n, 0.0), family.generate(n, d));
      const auto wm = bounds_of(normalized({sample.weights().begin(), sample.weights().end()}));
      row.weighted_median = first ? wm : envelope(row.weighted_median, wm);
      for (std::size_t s = 0; s < 3; ++s) {
        if (row.pairs[s] == 0) continue;
        const auto b = bp_whl2(sample, kAllSchemes[s]).bounds();
        row.whl2[s] = first ? b : envelope(*row.whl2[s], b);
      }
      first = false;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<BreakdownReport> bp_table_reports(std::size_t n_max, const WeightFamily& family) {
  std::vector<BreakdownReport> out;
  for (const auto& row : bp_table(n_max, family)) {
    out.push_back({EstimatorKind::median(), row.n, row.n, ExactBreakdown{row.median}});
    out.push_back({EstimatorKind::weighted_median(), row.n, row.n, row.weighted_median});
    for (std::size_t s = 0; s < 3; ++s) {
      out.push_back(
          {EstimatorKind::whl1(kAllSchemes[s]), row.n, row.pairs[s], ExactBreakdown{row.whl1[s]}});
    }
    for (std::size_t s = 0; s < 3; ++s) {
      if (!row.whl2[s]) continue;
      out.push_back({EstimatorKind::whl2(kAllSchemes[s]), row.n, row.pairs[s], *row.whl2[s]});
    }
  }
  return out;
}

}  // namespace whl
