// Acceptance checks. Each criterion prints one PASS/FAIL line; pass criterion
// numbers as arguments to run a subset. Exit status is non-zero if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "whl/breakdown.hpp"
#include "whl/estimators.hpp"
#include "whl/io.hpp"
#include "whl/simkit.hpp"

using namespace whl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Table = std::vector<std::map<std::string, std::string>>;

Table parse_csv(const std::string& text) {
  Table rows;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    for (auto f : split_csv_line(line)) fields.emplace_back(f);
    if (header.empty()) {
      header = fields;
      continue;
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) row[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs the whl executable with `args`, CSV into a scratch file. Returns the
// CSV text; throws when the tool exits non-zero.
std::string run_whl(const std::string& args) {
  static int counter = 0;
  const auto out = fs::temp_directory_path() /
                   ("whl_acceptance_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++) + ".csv");
  const std::string cmd = std::string("\"") + WHL_CLI_PATH + "\" " + args + " --out \"" +
                          out.string() + "\"";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw std::runtime_error("command failed (" + std::to_string(rc) + "): " + cmd);
  auto text = slurp(out);
  fs::remove(out);
  return text;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << std::fixed << v;
  return s.str();
}

Table reference_table() {
  return parse_csv(slurp(WHL_FIXTURE_DIR "/breakdown_reference.csv"));
}

const char* kSchemeCols[] = {"strict", "diag", "all"};

// --- criteria ------------------------------------------------------------

Outcome whl1_breakdown_exact() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto got = parse_csv(run_whl("breakdown --n-max 20"));
  const double elapsed = seconds_since(t0);
  const auto ref = reference_table();
  if (got.size() != 20 || ref.size() != 20) return {false, "expected 20 rows"};
  int match = 0;
  std::string bad;
  for (std::size_t r = 0; r < 20; ++r) {
    const double n = static_cast<double>(r + 1);
    for (const char* s : kSchemeCols) {
      const std::string col = std::string("bp_whl1_") + s;
      const double v = std::stod(got[r].at(col));
      const double k = v * n;
      const bool rational = std::abs(k - std::round(k)) < 1e-4;
      if (rational && round3(v) == std::stod(ref[r].at(col))) {
        ++match;
      } else if (bad.empty()) {
        bad = " first mismatch n=" + got[r].at("n") + " " + s;
      }
    }
  }
  const bool ok = match == 60 && elapsed < 1.0;
  return {ok, std::to_string(match) + "/60 cells match;" + bad + " runtime " + fmt(elapsed, 3) +
                  " s (limit 1 s)"};
}

Outcome median_breakdown_exact() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto got = parse_csv(run_whl("breakdown --n-max 20"));
  const double elapsed = seconds_since(t0);
  const auto ref = reference_table();
  int match = 0;
  for (std::size_t r = 0; r < 20 && r < got.size(); ++r) {
    const std::size_t n = r + 1;
    const double formula = static_cast<double>((n - 1) / 2) / static_cast<double>(n);
    const double v = std::stod(got[r].at("bp_median"));
    if (round3(v) == std::stod(ref[r].at("bp_median")) && bp_median(n) == formula &&
        std::abs(v - formula) < 1e-6)
      ++match;
  }
  return {match == 20 && elapsed < 1.0,
          std::to_string(match) + "/20 rows match; runtime " + fmt(elapsed, 3) + " s"};
}

Outcome pair_counts() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto got = parse_csv(run_whl("breakdown --n-max 20"));
  const double elapsed = seconds_since(t0);
  const auto ref = reference_table();
  int match = 0;
  for (std::size_t r = 0; r < 20 && r < got.size(); ++r) {
    for (std::size_t s = 0; s < 3; ++s) {
      const std::string col = std::string("pairs_") + kSchemeCols[s];
      if (got[r].at(col) == ref[r].at(col) &&
          pair_count(r + 1, kAllSchemes[s]) == std::stoul(ref[r].at(col)))
        ++match;
    }
  }
  return {match == 60 && elapsed < 1.0,
          std::to_string(match) + "/60 counts match; runtime " + fmt(elapsed, 3) + " s"};
}

Outcome sample1_constants() {
  const auto spec = reference_sample(1);
  const double theta = true_theta(spec);
  const double var = true_var(spec);
  std::ostringstream d;
  d.precision(17);
  d << "theta=" << theta << " var=" << var;
  return {theta == 2.0 && var == 15.0, d.str()};
}

Outcome sample1_efficiency() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = parse_csv(run_whl("simulate --sample 1 --reps 10000"));
  const double elapsed = seconds_since(t0);
  double var_wm = NAN, re_wm = NAN, re_whl1 = NAN;
  for (const auto& r : rows) {
    if (r.at("estimator") == "weighted_mean") {
      var_wm = std::stod(r.at("var_hat"));
      re_wm = std::stod(r.at("relative_efficiency"));
    }
    if (r.at("estimator") == "whl1" && r.at("scheme") == "strict")
      re_whl1 = std::stod(r.at("relative_efficiency"));
  }
  const bool a = var_wm >= 14.5 && var_wm <= 16.5;
  const bool b = re_wm >= 93 && re_wm <= 101;
  const bool c = re_whl1 >= 96 && re_whl1 <= 106;
  return {a && b && c && elapsed < 10.0,
          "var(WM)=" + fmt(var_wm) + (a ? " ok" : " OUT") + " [14.5,16.5]; RE(WM)=" + fmt(re_wm) +
              (b ? " ok" : " OUT") + " [93,101]; RE(WHL1 strict)=" + fmt(re_whl1) +
              (c ? " ok" : " OUT") + " [96,106]; runtime " + fmt(elapsed, 2) + " s"};
}

double re_of(const std::vector<MetricsRow>& rows, const EstimatorKind& k) {
  for (const auto& r : rows)
    if (r.estimator == k) return r.relative_efficiency;
  return NAN;
}

Outcome skewed_weight_efficiency() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto k1 = EstimatorKind::whl1(PairScheme::Strict);
  const auto k2 = EstimatorKind::whl2(PairScheme::Strict);
  const std::vector<EstimatorKind> kinds{k1, k2};
  const auto s2 = run_replications(reference_sample(2, 15), kinds, 10000, kDefaultSeed);
  const auto s4 = run_replications(reference_sample(4, 15), kinds, 10000, kDefaultSeed);
  const double elapsed = seconds_since(t0);
  const double a = re_of(s2, k1), b = re_of(s4, k1), c = re_of(s4, k2);
  const bool pa = a >= 91 && a <= 99, pb = b >= 5 && b <= 10, pc = c >= 30 && c <= 40;
  return {pa && pb && pc && elapsed < 60.0,
          "sample2 RE(WHL1 strict)=" + fmt(a) + (pa ? " ok" : " OUT") +
              " [91,99]; sample4 RE(WHL1 strict)=" + fmt(b) + (pb ? " ok" : " OUT") +
              " [5,10]; sample4 RE(WHL2 strict)=" + fmt(c) + (pc ? " ok" : " OUT") +
              " [30,40]; runtime " + fmt(elapsed, 2) + " s"};
}

Outcome sample3_bias_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<EstimatorKind> kinds{EstimatorKind::weighted_mean(),
                                         EstimatorKind::weighted_median(),
                                         EstimatorKind::whl1(PairScheme::Strict)};
  int ok = 0;
  double worst_wm = 0.0;
  std::string bad;
  for (std::size_t n = 5; n <= 15; ++n) {
    const auto rows = run_replications(reference_sample(3, n), kinds, 10000, kDefaultSeed);
    worst_wm = std::max(worst_wm, rows[0].bias);
    if (rows[1].bias > rows[2].bias && rows[0].bias < 0.05) {
      ++ok;
    } else if (bad.empty()) {
      bad = " first failure n=" + std::to_string(n) + " (WM " + fmt(rows[0].bias) + ", WMD " +
            fmt(rows[1].bias) + ", WHL1 " + fmt(rows[2].bias) + ")";
    }
  }
  const double elapsed = seconds_since(t0);
  return {ok == 11 && elapsed < 60.0, std::to_string(ok) + "/11 sizes ordered; max WM bias " +
                                          fmt(worst_wm) + bad + "; runtime " + fmt(elapsed, 2) +
                                          " s"};
}

// Weighted median from the definition scan: sort, then take the largest k
// whose leading mass is at most one half and return the next element.
double definition_scan(const std::vector<double>& x, const std::vector<double>& w) {
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::size_t best = 0;
  for (std::size_t k = 0; k <= idx.size(); ++k) {
    double lead = 0.0;
    for (std::size_t i = 0; i < k; ++i) lead += w[idx[i]];
    if (lead <= 0.5) best = k;
  }
  return x[idx[std::min(best, idx.size() - 1)]];
}

Outcome weighted_median_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng(8);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::uniform_real_distribution<double> wdist(1e-3, 1.0);
  std::normal_distribution<double> xdist(0.0, 100.0);
  int equal = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto n = size(eng);
    std::vector<double> x(n), w(n);
    for (auto& v : x) v = xdist(eng);
    for (auto& v : w) v = wdist(eng);
    const auto s = normalize(WeightedSample(x, w));
    const std::vector<double> nw(s.weights().begin(), s.weights().end());
    if (weighted_median(s) == definition_scan(x, nw)) ++equal;
  }
  const double elapsed = seconds_since(t0);
  return {equal == 10000 && elapsed < 5.0,
          std::to_string(equal) + "/10000 identical; runtime " + fmt(elapsed, 2) + " s"};
}

Outcome breakdown_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng(9);
  std::uniform_real_distribution<double> wdist(0.01, 1.0);
  std::normal_distribution<double> xdist(0.0, 10.0);
  int total = 0, whl1_equal = 0, within = 0, below = 0, above = 0;
  std::string example;
  for (std::size_t n = 2; n <= 8; ++n) {
    for (auto scheme : kAllSchemes) {
      for (int t = 0; t < 50; ++t) {
        std::vector<double> x(n), w(n);
        for (auto& v : x) v = xdist(eng);
        for (auto& v : w) v = wdist(eng);
        const WeightedSample s(x, w);
        ++total;
        if (empirical_breakdown(s, EstimatorKind::whl1(scheme)) == bp_whl1(n, scheme))
          ++whl1_equal;
        const double e2 = empirical_breakdown(s, EstimatorKind::whl2(scheme));
        const auto b = bp_whl2(s, scheme).bounds();
        if (e2 < b.lower - 1e-12) {
          ++below;
          if (example.empty())
            example = " e.g. n=" + std::to_string(n) + " " + std::string(scheme_name(scheme)) +
                      ": empirical " + fmt(e2, 3) + " vs [" + fmt(b.lower, 3) + ", " +
                      fmt(b.upper, 3) + "]";
        } else if (e2 > b.upper + 1e-12) {
          ++above;
        } else {
          ++within;
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const bool ok = whl1_equal == total && within == total && elapsed < 120.0;
  return {ok, "WHL1 " + std::to_string(whl1_equal) + "/" + std::to_string(total) +
                  " equal; WHL2 within bounds " + std::to_string(within) + "/" +
                  std::to_string(total) + " (below lower " + std::to_string(below) +
                  ", above upper " + std::to_string(above) + ")" + example + "; runtime " +
                  fmt(elapsed, 2) + " s"};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

Outcome equal_weight_collapse() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng(10);
  std::uniform_int_distribution<std::size_t> size(2, 30);
  std::normal_distribution<double> xdist(0.0, 10.0);
  int whl1_checks = 0, whl1_ok = 0, whl2_checks = 0, whl2_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto n = size(eng);
    std::vector<double> x(n);
    for (auto& v : x) v = xdist(eng);
    const auto s = WeightedSample::equal_weights(x);
    for (auto scheme : kAllSchemes) {
      const double h = hl(s, scheme);
      ++whl1_checks;
      whl1_ok += same_bits(whl1(s, scheme), h);
      if (pair_count(n, scheme) % 2 == 1) {
        ++whl2_checks;
        whl2_ok += same_bits(whl2(s, scheme), h);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {whl1_ok == whl1_checks && whl2_ok == whl2_checks && elapsed < 5.0,
          "WHL1=HL " + std::to_string(whl1_ok) + "/" + std::to_string(whl1_checks) +
              "; WHL2=HL (odd m) " + std::to_string(whl2_ok) + "/" +
              std::to_string(whl2_checks) + "; runtime " + fmt(elapsed, 2) + " s"};
}

Outcome affine_equivariance() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng(11);
  std::uniform_int_distribution<std::size_t> size(2, 30);
  std::uniform_real_distribution<double> adist(-10.0, 10.0), bdist(-100.0, 100.0),
      wdist(0.01, 1.0);
  std::normal_distribution<double> xdist(0.0, 10.0);
  const auto kinds = all_kinds();
  int checks = 0, ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto n = size(eng);
    std::vector<double> x(n), w(n), y(n);
    for (auto& v : x) v = xdist(eng);
    for (auto& v : w) v = wdist(eng);
    double a = 0.0;
    while (a == 0.0) a = adist(eng);
    const double b = bdist(eng);
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b;
    const WeightedSample sx(x, w), sy(y, w);
    for (const auto& k : kinds) {
      const double expect = a * estimate(sx, k) + b;
      const double err = std::abs(estimate(sy, k) - expect);
      const double tol = 1e-9 * (1.0 + std::abs(expect));
      worst = std::max(worst, err / tol);
      ++checks;
      ok += err <= tol;
    }
  }
  const double elapsed = seconds_since(t0);
  return {ok == checks && elapsed < 5.0,
          std::to_string(ok) + "/" + std::to_string(checks) + " within tolerance; worst " +
              fmt(worst, 4) + " of tolerance; runtime " + fmt(elapsed, 2) + " s"};
}

Outcome contamination_sensitivity() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = default_proportion_grid();
  const auto kinds = sensitivity_kinds();
  const std::size_t k = kinds.size();
  const std::size_t wm = 0;
  const std::size_t whl2_all = static_cast<std::size_t>(
      std::find(kinds.begin(), kinds.end(), EstimatorKind::whl2(PairScheme::All)) - kinds.begin());
  int growth_ok = 0, order_checks = 0, order_ok = 0;
  std::string bad;
  for (int c = 1; c <= 12; ++c) {
    const auto rows = sensitivity_sweep(c, grid, 500, kDefaultSeed);
    const auto& at0 = rows[0 * k + wm];
    const auto& at25 = rows[(grid.size() - 1) * k + wm];
    const double se = std::hypot(at0.std_error, at25.std_error);
    if (at25.avg_bias - at0.avg_bias >= 3.0 * se) {
      ++growth_ok;
    } else if (bad.empty()) {
      bad = " case " + std::to_string(c) + " WM growth " + fmt(at25.avg_bias - at0.avg_bias) +
            " < 3*" + fmt(se);
    }
    const auto w = sensitivity_case(c).weights;
    if (w == WeightConstruction::W1) continue;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      if (grid[p] < 0.10 - 1e-12) continue;
      ++order_checks;
      const auto& m = rows[p * k + wm];
      const auto& r = rows[p * k + whl2_all];
      if (r.avg_bias < m.avg_bias) {
        ++order_ok;
      } else if (bad.empty()) {
        bad = " case " + std::to_string(c) + " p=" + fmt(grid[p], 2) + " WHL2/all " +
              fmt(r.avg_bias) + " >= WM " + fmt(m.avg_bias);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {growth_ok == 12 && order_ok == order_checks && elapsed < 600.0,
          "WM growth >= 3 se in " + std::to_string(growth_ok) + "/12 cases; WHL2/all < WM in " +
              std::to_string(order_ok) + "/" + std::to_string(order_checks) +
              " W2/W3 cells at p>=0.10;" + bad + " runtime " + fmt(elapsed, 1) + " s"};
}

Outcome determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> commands{"simulate --sample 1 --reps 10000 --seed 20240101"};
  for (int c = 1; c <= 12; ++c)
    commands.push_back("sensitivity --case " + std::to_string(c) +
                       " --reps 500 --seed 20240101");
  int identical = 0;
  std::string bad;
  for (const auto& cmd : commands) {
    const auto one = run_whl(cmd + " --workers 1");
    const auto many = run_whl(cmd + " --workers 4");
    if (!one.empty() && one == many) {
      ++identical;
    } else if (bad.empty()) {
      bad = " differs: " + cmd;
    }
  }
  const double elapsed = seconds_since(t0);
  return {identical == static_cast<int>(commands.size()),
          std::to_string(identical) + "/" + std::to_string(commands.size()) +
              " commands byte-identical across --workers 1 and 4;" + bad + " runtime " +
              fmt(elapsed, 1) + " s"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "whl1_breakdown_exact", whl1_breakdown_exact},
      {2, "median_breakdown_exact", median_breakdown_exact},
      {3, "pair_counts", pair_counts},
      {4, "sample1_constants", sample1_constants},
      {5, "sample1_efficiency", sample1_efficiency},
      {6, "skewed_weight_efficiency", skewed_weight_efficiency},
      {7, "sample3_bias_ordering", sample3_bias_ordering},
      {8, "weighted_median_oracle", weighted_median_oracle},
      {9, "breakdown_oracle", breakdown_oracle},
      {10, "equal_weight_collapse", equal_weight_collapse},
      {11, "affine_equivariance", affine_equivariance},
      {12, "contamination_sensitivity", contamination_sensitivity},
      {13, "determinism", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : criteria()) std::cout << c.id << ' ' << c.name << '\n';
      return 0;
    }
    wanted.push_back(std::atoi(argv[i]));
  }
  int failures = 0;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2d %-26s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
