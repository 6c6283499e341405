#include "whl/cli.hpp"

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "whl/breakdown.hpp"
#include "whl/error.hpp"
#include "whl/io.hpp"
#include "whl/report.hpp"
#include "whl/simkit.hpp"

namespace whl {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  unsigned workers = 1;
  std::string out_path;
  bool gnuplot = false;
  std::string scheme = "all3";
};

std::uint64_t resolve_seed(const CommonOptions& opt) {
  if (opt.seed_given) return opt.seed;
  if (const char* env = std::getenv("WHL_SEED"); env && *env) {
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw UsageError("WHL_SEED is not an unsigned 64-bit integer: '" + std::string(text) + "'");
    }
    return seed;
  }
  return kDefaultSeed;
}

std::vector<PairScheme> selected_schemes(const std::string& choice) {
  if (choice == "all3") return {std::begin(kAllSchemes), std::end(kAllSchemes)};
  return {parse_scheme(choice)};
}

std::vector<EstimatorKind> filter_kinds(std::vector<EstimatorKind> kinds,
                                        const std::string& scheme_choice) {
  const auto keep = selected_schemes(scheme_choice);
  std::erase_if(kinds, [&](const EstimatorKind& k) {
    return k.scheme && std::find(keep.begin(), keep.end(), *k.scheme) == keep.end();
  });
  return kinds;
}

Metadata base_metadata(const std::string& command) {
  return {{"command", "whl " + command}};
}

Metadata generator_metadata(std::uint64_t seed) {
  return {{"generator", kGeneratorId},
          {"generator_version", std::to_string(kGeneratorVersion)},
          {"variates", "boost.random " BOOST_LIB_VERSION},
          {"seed", std::to_string(seed)}};
}

void append(Metadata& into, const Metadata& more) { into.insert(into.end(), more.begin(), more.end()); }

// Writes CSV text to --out (plus the optional gnuplot script) or to `out`.
void emit(const CommonOptions& opt, const std::string& csv, std::ostream& out,
          const std::string& gnuplot_script) {
  if (opt.gnuplot && opt.out_path.empty()) throw UsageError("--gnuplot requires --out");
  if (opt.out_path.empty()) {
    out << csv;
    return;
  }
  std::ofstream file(opt.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + opt.out_path + "'");
  file << csv;
  if (!file) throw UsageError("write failed for '" + opt.out_path + "'");
  if (opt.gnuplot) {
    std::ofstream gp(opt.out_path + ".gp", std::ios::binary);
    if (!gp) throw UsageError("cannot write '" + opt.out_path + ".gp'");
    gp << gnuplot_script;
  }
}

WeightedSample load_sample(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return read_weighted_csv(in);
  } catch (const CsvError& e) {
    throw UsageError(path + ":" + e.what());
  }
}

SampleSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  SampleSpec spec;
  try {
    for (const auto& row : read_numeric_csv(in, {"mu", "sigma", "weight"})) {
      spec.mus.push_back(row[0]);
      spec.sigmas.push_back(row[1]);
      spec.weights.push_back(row[2]);
    }
  } catch (const CsvError& e) {
    throw UsageError(path + ":" + e.what());
  }
  spec.id = "custom";
  spec.validate();
  return spec;
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool simulation) {
  cmd->add_option("--out", opt.out_path, "Write CSV to this path instead of stdout");
  cmd->add_flag("--gnuplot", opt.gnuplot, "Also write <out>.gp, a gnuplot script");
  cmd->add_option("--scheme", opt.scheme, "Pair scheme: strict, diag, all or all3")
      ->check(CLI::IsMember({"strict", "diag", "all", "all3"}));
  if (simulation) {
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&opt](const std::uint64_t& s) {
          opt.seed = s;
          opt.seed_given = true;
        },
        "RNG seed (default 20240101, or $WHL_SEED)");
    cmd->add_option("--workers", opt.workers, "Worker threads; output does not depend on it")
        ->check(CLI::Range(1u, 1024u));
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Hodges-Lehmann location estimators: estimation, breakdown tables "
               "and Monte Carlo studies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "whl 1.0.0");

  CommonOptions opt;

  auto* estimate_cmd = app.add_subcommand("estimate", "Evaluate every estimator on a value,weight CSV");
  std::string in_path;
  estimate_cmd->add_option("input", in_path, "CSV with header value,weight")->required();
  add_common(estimate_cmd, opt, false);

  auto* pairs_cmd = app.add_subcommand("pairs", "Dump pairwise weighted averages and weights");
  pairs_cmd->add_option("input", in_path, "CSV with header value,weight")->required();
  add_common(pairs_cmd, opt, false);

  auto* breakdown_cmd = app.add_subcommand("breakdown", "Tabulate finite-sample breakdown points");
  std::size_t n_max = 20;
  std::string family_spec = "equal";
  breakdown_cmd->add_option("--n-max", n_max, "Largest sample size (1..200)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{200}));
  breakdown_cmd->add_option("--family", family_spec,
                            "Weights: equal, arithmetic, arithmetic:<spread>, csv:<path>");
  add_common(breakdown_cmd, opt, false);

  auto* simulate_cmd = app.add_subcommand("simulate", "Bias and relative efficiency study");
  int sample_id = 0;
  std::string spec_path;
  std::size_t n_fixed = 0, n_lo = 3, n_hi = 15, reps = 10000;
  std::string estimator_set = "table";
  auto* sample_opt = simulate_cmd->add_option("--sample", sample_id, "Built-in sample 1..6");
  auto* spec_opt = simulate_cmd->add_option("--spec", spec_path, "CSV with header mu,sigma,weight");
  sample_opt->excludes(spec_opt);
  auto* n_opt = simulate_cmd->add_option("--n", n_fixed, "Single sample size");
  simulate_cmd->add_option("--n-min", n_lo, "Smallest sample size of the sweep")->excludes(n_opt);
  simulate_cmd->add_option("--n-max", n_hi, "Largest sample size of the sweep")->excludes(n_opt);
  simulate_cmd->add_option("--reps", reps, "Replications per sample size");
  simulate_cmd->add_option("--estimators", estimator_set, "table (8 columns) or all (13)")
      ->check(CLI::IsMember({"table", "all"}));
  add_common(simulate_cmd, opt, true);

  auto* sens_cmd = app.add_subcommand("sensitivity", "Outlier sensitivity study");
  int case_id = 0;
  std::vector<double> grid = default_proportion_grid();
  std::size_t sens_reps = 500;
  double shift = 5.0;
  sens_cmd->add_option("--case", case_id, "Case 1..12")->required();
  sens_cmd->add_option("--grid", grid, "Outlier proportions in [0, 0.25]")->delimiter(',');
  sens_cmd->add_option("--reps", sens_reps, "Replications per proportion");
  sens_cmd->add_option("--shift", shift, "Outlier shift in population standard deviations");
  add_common(sens_cmd, opt, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "whl: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::ostringstream csv;
    std::string script;

    if (estimate_cmd->parsed()) {
      const auto sample = load_sample(in_path);
      auto meta = base_metadata("estimate");
      meta.emplace_back("n", std::to_string(sample.size()));
      write_estimates_csv(csv, sample, filter_kinds(all_kinds(), opt.scheme), meta);
    } else if (pairs_cmd->parsed()) {
      const auto sample = load_sample(in_path);
      write_pairs_csv(csv, sample, selected_schemes(opt.scheme), base_metadata("pairs"));
    } else if (breakdown_cmd->parsed()) {
      WeightFamily family;
      try {
        family = WeightFamily::parse(family_spec);
      } catch (const CsvError& e) {
        throw UsageError(family_spec + ": " + e.what());
      }
      auto meta = base_metadata("breakdown");
      meta.emplace_back("family", family_spec);
      if (family.is_sweep()) {
        meta.emplace_back("sweep", "bounds are maxima over 121 log-spaced spreads in [1e-3, 1e3]");
      }
      const auto rows = bp_table(n_max, family);
      write_breakdown_csv(csv, rows, meta);
      script = breakdown_gnuplot(opt.out_path);
    } else if (simulate_cmd->parsed()) {
      if (!sample_opt->count() && !spec_opt->count()) {
        throw UsageError("simulate needs --sample or --spec");
      }
      if (reps < 2) throw UsageError("--reps must be at least 2");
      const auto seed = resolve_seed(opt);
      const auto kinds =
          filter_kinds(estimator_set == "all" ? all_kinds() : table_kinds(), opt.scheme);

      std::vector<SampleSpec> specs;
      if (spec_opt->count()) {
        specs.push_back(load_spec(spec_path));
      } else if (sample_id == 1) {
        specs.push_back(reference_sample(1, n_fixed));
      } else {
        if (sample_id < 2 || sample_id > 6) throw UsageError("--sample must be 1..6");
        if (n_fixed) {
          n_lo = n_hi = n_fixed;
        }
        if (n_lo < 1 || n_lo > n_hi) throw UsageError("need 1 <= --n-min <= --n-max");
        for (std::size_t n = n_lo; n <= n_hi; ++n) specs.push_back(reference_sample(sample_id, n));
      }

      auto meta = base_metadata("simulate");
      meta.emplace_back("sample", specs.front().id);
      meta.emplace_back("bias", "|mean of estimates - theta|");
      meta.emplace_back("relative_efficiency", "100 * var_theta / mse");
      append(meta, generator_metadata(seed));
      bool first = true;
      for (const auto& spec : specs) {
        const auto rows = run_replications(spec, kinds, reps, seed, opt.workers);
        write_metrics_csv(csv, spec.id, rows, first ? meta : Metadata{}, first);
        first = false;
      }
      script = metrics_gnuplot(opt.out_path, kinds);
    } else if (sens_cmd->parsed()) {
      if (case_id < 1 || case_id > 12) throw UsageError("--case must be 1..12");
      for (double p : grid) {
        if (!(p >= 0.0 && p <= 0.25)) throw UsageError("--grid values must lie in [0, 0.25]");
      }
      if (sens_reps < 2) throw UsageError("--reps must be at least 2");
      const auto seed = resolve_seed(opt);
      const auto c = sensitivity_case(case_id);

      auto meta = base_metadata("sensitivity");
      meta.emplace_back("case", std::to_string(case_id));
      meta.emplace_back("distribution", c.distribution.describe());
      meta.emplace_back("weights", std::string(construction_name(c.weights)));
      meta.emplace_back("n", std::to_string(c.n));
      meta.emplace_back("contamination", "additive shift of +" + format_number(shift) +
                                             " population sd on ceil(p*n) uniformly chosen "
                                             "observations; weights unchanged");
      meta.emplace_back("bias_baseline", "weighted mean of the uncontaminated replication");
      append(meta, generator_metadata(seed));

      // One row per family unless a scheme is requested.
      if (sens_cmd->get_option("--scheme")->count() == 0) opt.scheme = "all";
      auto rows = sensitivity_sweep(case_id, grid, sens_reps, seed, opt.workers, shift);
      const auto keep = filter_kinds(sensitivity_kinds(), opt.scheme);
      std::erase_if(rows, [&](const SensitivityRow& r) {
        return std::find(keep.begin(), keep.end(), r.estimator) == keep.end();
      });
      write_sensitivity_csv(csv, rows, meta);
      script = sensitivity_gnuplot(opt.out_path, keep);
    }

    emit(opt, csv.str(), out, script);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "whl: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CsvError& e) {
    err << "whl: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "whl: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "whl: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace whl
