#include "whl/report.hpp"

#include <sstream>

#include "whl/error.hpp"
#include "whl/io.hpp"

namespace whl {

namespace {

std::string scheme_field(const EstimatorKind& kind) {
  return kind.scheme ? std::string(scheme_name(*kind.scheme)) : std::string();
}

std::string bound_fields(const std::optional<BreakdownBounds>& b) {
  if (!b) return ",";
  return format_number(b->lower) + "," + format_number(b->upper);
}

// Long-format CSVs hold one row per estimator; plots select rows with awk.
std::string row_filter(const std::string& csv_path, const EstimatorKind& kind, int est_col,
                       int scheme_col) {
  std::ostringstream s;
  s << "\"< awk -F, '!/^#/ && $" << est_col << "==\\\"" << family_name(kind.family)
    << "\\\" && $" << scheme_col << "==\\\"" << scheme_field(kind) << "\\\"' " << csv_path
    << "\"";
  return s.str();
}

}  // namespace

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

void write_estimates_csv(std::ostream& out, const WeightedSample& sample,
                         std::span<const EstimatorKind> kinds, const Metadata& meta) {
  write_metadata(out, meta);
  out << "estimator,scheme,estimate\n";
  for (const auto& kind : kinds) {
    out << family_name(kind.family) << ',' << scheme_field(kind) << ',';
    try {
      out << format_number(estimate(sample, kind));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyPairSet) throw;
    }
    out << '\n';
  }
}

void write_pairs_csv(std::ostream& out, const WeightedSample& sample,
                     std::span<const PairScheme> schemes, const Metadata& meta) {
  write_metadata(out, meta);
  out << "scheme,i,j,value,weight\n";
  const auto norm = normalize(sample);
  const std::size_t n = sample.size();
  for (auto scheme : schemes) {
    const auto pairs = build_pairs(norm, scheme);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (scheme == PairScheme::Strict && j <= i) continue;
        if (scheme == PairScheme::WithDiagonal && j < i) continue;
        out << scheme_name(scheme) << ',' << i << ',' << j << ','
            << format_number(pairs.values[k]) << ',' << format_number(pairs.weights[k]) << '\n';
        ++k;
      }
    }
  }
}

void write_breakdown_csv(std::ostream& out, std::span<const BreakdownRow> rows,
                         const Metadata& meta) {
  write_metadata(out, meta);
  out << "n,bp_median,wm_lower,wm_upper";
  for (auto s : kAllSchemes) out << ",pairs_" << scheme_name(s) << ",bp_whl1_" << scheme_name(s);
  for (auto s : kAllSchemes) {
    out << ",whl2_lower_" << scheme_name(s) << ",whl2_upper_" << scheme_name(s);
  }
  out << '\n';
  for (const auto& row : rows) {
    out << row.n << ',' << format_number(row.median) << ','
        << bound_fields(row.weighted_median);
    for (std::size_t s = 0; s < 3; ++s) out << ',' << row.pairs[s] << ',' << format_number(row.whl1[s]);
    for (std::size_t s = 0; s < 3; ++s) out << ',' << bound_fields(row.whl2[s]);
    out << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const std::string& sample_id,
                       std::span<const MetricsRow> rows, const Metadata& meta, bool header) {
  write_metadata(out, meta);
  if (header) {
    out << "sample,n,estimator,scheme,reps,theta,bias,var_hat,mse,var_theta,"
           "relative_efficiency,seed\n";
  }
  for (const auto& r : rows) {
    out << sample_id << ',' << r.n << ',' << family_name(r.estimator.family) << ','
        << scheme_field(r.estimator) << ',' << r.replications << ',' << format_number(r.theta)
        << ',' << format_number(r.bias) << ',' << format_number(r.var_hat) << ','
        << format_number(r.mse) << ',' << format_number(r.var_theta) << ',' << format_number(r.relative_efficiency) << ','
        << r.seed << '\n';
  }
}

void write_sensitivity_csv(std::ostream& out, std::span<const SensitivityRow> rows,
                           const Metadata& meta, bool header) {
  write_metadata(out, meta);
  if (header) out << "case,proportion,estimator,scheme,avg_bias,stderr,reps,seed\n";
  for (const auto& r : rows) {
    out << r.case_id << ',' << format_number(r.proportion) << ','
        << family_name(r.estimator.family) << ',' << scheme_field(r.estimator) << ','
        << format_number(r.avg_bias) << ',' << format_number(r.std_error) << ','
        << r.replications << ',' << r.seed << '\n';
  }
}

std::string breakdown_gnuplot(const std::string& csv_path) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
       "set datafile commentschars '#'\n"
       "set key autotitle columnhead outside\n"
       "set xlabel 'sample size n'\nset ylabel 'breakdown point'\n"
       "set yrange [0:1]\n"
       "plot '"
    << csv_path
    << "' using 1:2 with linespoints, \\\n"
       "  '' using 1:3 with lines, '' using 1:4 with lines, \\\n"
       "  '' using 1:6 with linespoints, '' using 1:8 with linespoints, "
       "'' using 1:10 with linespoints, \\\n"
       "  '' using 1:11 with lines, '' using 1:12 with lines, \\\n"
       "  '' using 1:13 with lines, '' using 1:14 with lines, \\\n"
       "  '' using 1:15 with lines, '' using 1:16 with lines\n"
       "pause mouse close\n";
  return s.str();
}

std::string metrics_gnuplot(const std::string& csv_path, std::span<const EstimatorKind> kinds) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
       "set key outside\n"
       "set xlabel 'sample size n'\nset ylabel 'relative efficiency (%)'\n"
       "plot ";
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    s << (i ? ", \\\n  " : "") << row_filter(csv_path, kinds[i], 3, 4)
      << " using 2:11 with linespoints title '" << to_string(kinds[i]) << "'";
  }
  s << "\npause mouse close\n";
  return s.str();
}

std::string sensitivity_gnuplot(const std::string& csv_path,
                                std::span<const EstimatorKind> kinds) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
       "set key outside\n"
       "set xlabel 'outlier proportion'\nset ylabel 'average bias'\n"
       "plot ";
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    s << (i ? ", \\\n  " : "") << row_filter(csv_path, kinds[i], 3, 4)
      << " using 2:5:6 with yerrorlines title '" << to_string(kinds[i]) << "'";
  }
  s << "\npause mouse close\n";
  return s.str();
}

}  // namespace whl
