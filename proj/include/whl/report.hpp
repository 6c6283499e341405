#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "whl/breakdown.hpp"
#include "whl/estimators.hpp"
#include "whl/simkit.hpp"

namespace whl {

/// `# key: value` lines written ahead of a CSV header.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& out, const Metadata& meta);

/// `estimator,scheme,estimate`; kinds that cannot be evaluated (no pairs) get
/// an empty estimate field.
void write_estimates_csv(std::ostream& out, const WeightedSample& sample,
                         std::span<const EstimatorKind> kinds, const Metadata& meta = {});

/// `scheme,i,j,value,weight`, 0-based indices, row-major.
void write_pairs_csv(std::ostream& out, const WeightedSample& sample,
                     std::span<const PairScheme> schemes, const Metadata& meta = {});

/// Columns mirror the breakdown table: n, bp_median, wm_lower, wm_upper, then
/// pairs/bp_whl1 per scheme, then whl2 lower/upper per scheme.
void write_breakdown_csv(std::ostream& out, std::span<const BreakdownRow> rows,
                         const Metadata& meta = {});

void write_metrics_csv(std::ostream& out, const std::string& sample_id,
                       std::span<const MetricsRow> rows, const Metadata& meta = {},
                       bool header = true);

void write_sensitivity_csv(std::ostream& out, std::span<const SensitivityRow> rows,
                           const Metadata& meta = {}, bool header = true);

/// Gnuplot scripts reading the CSV at `csv_path`.
std::string breakdown_gnuplot(const std::string& csv_path);
std::string metrics_gnuplot(const std::string& csv_path, std::span<const EstimatorKind> kinds);
std::string sensitivity_gnuplot(const std::string& csv_path,
                                std::span<const EstimatorKind> kinds);

}  // namespace whl
