#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <doctest.h>

#include "whl/error.hpp"
#include "whl/sample.hpp"

namespace whl::test {

// Random inputs for property tests. Deliberately uses the standard library
// engine rather than the library's own streams.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal(double mu = 0.0, double sigma = 1.0) {
    return std::normal_distribution<double>(mu, sigma)(eng_);
  }

  std::vector<double> values(std::size_t n) {
    std::vector<double> x(n);
    for (auto& v : x) v = normal(0.0, 10.0);
    return x;
  }
  std::vector<double> weights(std::size_t n) {
    std::vector<double> w(n);
    for (auto& v : w) v = real(0.01, 1.0);
    return w;
  }
  WeightedSample sample(std::size_t n) { return WeightedSample(values(n), weights(n)); }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Weighted median straight from its definition: the element z whose
// strictly-smaller mass is at most 1/2 while that mass plus its own weight
// exceeds 1/2. Needs distinct values.
inline double weighted_median_by_definition(std::span<const double> x,
                                            std::span<const double> w) {
  for (std::size_t c = 0; c < x.size(); ++c) {
    double below = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < x[c]) below += w[i];
    }
    if (below <= 0.5 && below + w[c] > 0.5) return x[c];
  }
  // Mass above 1/2 never reached: the largest element.
  return *std::max_element(x.begin(), x.end());
}

inline double plain_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : (v[m / 2 - 1] + v[m / 2]) / 2.0;
}

// Code of the whl::Error raised by fn; fails the test when nothing is thrown.
template <typename Fn>
ErrorCode error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected whl::Error");
  return ErrorCode::BadParameters;
}

}  // namespace whl::test
