#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "scifit/panel.hpp"
#include "scifit/registry.hpp"

namespace scifit {

// Pearson correlation; returns nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Gini index over regional values:
//   G = 1 - sum_i f_i (S_{i-1} + S_i) / S_n,  S_i = sum_{j<=i} f_j y_j
// with values sorted ascending and f_i the population share of region i
// (1/n unweighted). Requires n >= 2 and at least one positive value.
double gini(std::vector<double> values);
double weighted_gini(std::vector<double> values, std::vector<double> weights);

// Gini per year over all regions of the cube pooled together (values are
// per-region totals across sectors). Years where the index is undefined are
// skipped with a warning; throws if no year is computable.
std::map<int, double> world_gini_series(const PanelCube& cube,
                                        std::vector<std::string>* warnings = nullptr);

enum class ExpenditureMeasure { HERD, GERD, HERD_pc, GERD_pc };

std::string to_string(ExpenditureMeasure m);
ExpenditureMeasure expenditure_measure_from_string(const std::string& s);

struct ExpenditureSeries {
  std::string geo;
  ExpenditureMeasure measure = ExpenditureMeasure::HERD;
  std::map<int, double> values;
  std::set<int> interpolated;   // interior years filled linearly
  bool reconstructed = false;   // regional series inherited from the nation
};

// Fills interior gaps of a sparse yearly series by linear interpolation; no
// extrapolation beyond the observed range. With fewer than 2 observations the
// series is returned as-is.
ExpenditureSeries interpolate_expenditure(const std::string& geo, ExpenditureMeasure measure,
                                          const std::map<int, double>& raw);

// Per-capita variant: value / population in the years where both exist.
ExpenditureSeries per_capita(const ExpenditureSeries& series,
                             const std::map<int, double>& population);

// Regional series inherit the national per-capita values ("constant national
// performance"); used when sub-national expenditure is too sparse.
std::map<std::string, ExpenditureSeries> inherit_national_series(
    const ExpenditureSeries& national, const GeoRegistry& geo);

struct LagCorrelation {
  int lag = 0;
  double mean_correlation = 0;
  double q25 = 0;
  double q75 = 0;
  int years_used = 0;
  int replicates = 0;
};

// geo -> year -> fitness
using FitnessTable = std::map<std::string, std::map<int, double>>;

// Cross-correlation between fitness F_g(t) and expenditure E_g(t + lag):
// per-year Pearson across geographies, averaged over years with at least
// 3 geographies of overlap. Bands are the 25/75% quantiles over bootstrap
// resamples of the geography set (seeded, reproducible). Lags with no valid
// year are omitted with a warning.
std::vector<LagCorrelation> lagged_xcorr(const FitnessTable& fitness,
                                         const std::map<std::string, ExpenditureSeries>& expenditure,
                                         int lag_min, int lag_max, int replicates,
                                         std::uint64_t seed,
                                         std::vector<std::string>* warnings = nullptr);

struct NationalRegionalCorrelation {
  double pearson_with_max = 0;
  double pearson_with_mean = 0;
  std::size_t pairs = 0;  // (nation, year) observations pooled
};

// Correlates national fitness against the max and the mean of each nation's
// regional fitness, pooled over years.
NationalRegionalCorrelation national_vs_regional(const FitnessTable& tl1, const FitnessTable& tl2,
                                                 const GeoRegistry& geo,
                                                 std::vector<std::string>* warnings = nullptr);

// Soft-to-hard production ratio per geography over [year_min, year_max].
// Geographies with zero hard production map to nullopt.
std::map<std::string, std::optional<double>> hard_soft_ratio(const PanelCube& documents_layer0,
                                                             const std::set<std::string>& soft_set,
                                                             const FosRegistry& fos, int year_min,
                                                             int year_max);

}  // namespace scifit
