#include "scifit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "scifit/rng.hpp"

namespace scifit {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

// shared weighted form; weights must already be positive
double gini_impl(std::vector<double>& values, std::vector<double>& weights) {
  const std::size_t n = values.size();
  if (n < 2) throw std::runtime_error("gini needs at least 2 regions");
  double wsum = 0;
  bool any_positive = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] < 0 || !std::isfinite(values[i])) {
      throw std::runtime_error("gini values must be finite and non-negative");
    }
    if (weights[i] <= 0 || !std::isfinite(weights[i])) {
      throw std::runtime_error("gini weights must be positive");
    }
    if (values[i] > 0) any_positive = true;
    wsum += weights[i];
  }
  if (!any_positive) throw std::runtime_error("undefined inequality: all values are zero");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  double s_prev = 0, s_cur = 0, acc = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double f = weights[order[k]] / wsum;
    s_cur = s_prev + f * values[order[k]];
    acc += f * (s_prev + s_cur);
    s_prev = s_cur;
  }
  return 1.0 - acc / s_cur;
}

}  // namespace

double gini(std::vector<double> values) {
  std::vector<double> weights(values.size(), 1.0);
  return gini_impl(values, weights);
}

double weighted_gini(std::vector<double> values, std::vector<double> weights) {
  if (values.size() != weights.size()) {
    throw std::runtime_error("gini values and weights must have equal length");
  }
  return gini_impl(values, weights);
}

std::map<int, double> world_gini_series(const PanelCube& cube, std::vector<std::string>* warnings) {
  std::map<int, double> out;
  for (int year : cube.years()) {
    const auto totals = cube.geo_totals(year);
    std::vector<double> values;
    values.reserve(totals.size());
    for (const auto& [geo, v] : totals) values.push_back(v);
    try {
      out[year] = gini(std::move(values));
    } catch (const std::exception& e) {
      if (warnings) {
        warnings->push_back("world gini skipped for " + std::to_string(year) + ": " + e.what());
      }
    }
  }
  if (out.empty()) throw std::runtime_error("world gini undefined for every year");
  return out;
}

std::string to_string(ExpenditureMeasure m) {
  switch (m) {
    case ExpenditureMeasure::HERD: return "HERD";
    case ExpenditureMeasure::GERD: return "GERD";
    case ExpenditureMeasure::HERD_pc: return "HERD_pc";
    case ExpenditureMeasure::GERD_pc: return "GERD_pc";
  }
  return "unknown";
}

ExpenditureMeasure expenditure_measure_from_string(const std::string& s) {
  if (s == "HERD") return ExpenditureMeasure::HERD;
  if (s == "GERD") return ExpenditureMeasure::GERD;
  if (s == "HERD_pc") return ExpenditureMeasure::HERD_pc;
  if (s == "GERD_pc") return ExpenditureMeasure::GERD_pc;
  throw std::runtime_error("unknown expenditure measure '" + s + "'");
}

ExpenditureSeries interpolate_expenditure(const std::string& geo, ExpenditureMeasure measure,
                                          const std::map<int, double>& raw) {
  ExpenditureSeries out;
  out.geo = geo;
  out.measure = measure;
  out.values = raw;
  if (raw.size() < 2) return out;
  auto it = raw.begin();
  auto prev = it++;
  for (; it != raw.end(); prev = it++) {
    const int y0 = prev->first, y1 = it->first;
    const double v0 = prev->second, v1 = it->second;
    for (int y = y0 + 1; y < y1; ++y) {
      const double t = static_cast<double>(y - y0) / static_cast<double>(y1 - y0);
      out.values[y] = v0 + t * (v1 - v0);
      out.interpolated.insert(y);
    }
  }
  return out;
}

ExpenditureSeries per_capita(const ExpenditureSeries& series,
                             const std::map<int, double>& population) {
  ExpenditureSeries out;
  out.geo = series.geo;
  out.measure = series.measure == ExpenditureMeasure::GERD ? ExpenditureMeasure::GERD_pc
                                                           : ExpenditureMeasure::HERD_pc;
  out.reconstructed = series.reconstructed;
  for (const auto& [year, value] : series.values) {
    auto pit = population.find(year);
    if (pit == population.end() || pit->second <= 0) continue;
    out.values[year] = value / pit->second;
    if (series.interpolated.count(year)) out.interpolated.insert(year);
  }
  return out;
}

std::map<std::string, ExpenditureSeries> inherit_national_series(const ExpenditureSeries& national,
                                                                 const GeoRegistry& geo) {
  std::map<std::string, ExpenditureSeries> out;
  for (const auto& region : geo.regions_of(national.geo)) {
    ExpenditureSeries s = national;
    s.geo = region;
    s.reconstructed = true;
    out.emplace(region, std::move(s));
  }
  return out;
}

namespace {

// mean over years of the cross-sectional Pearson correlation between
// F_g(t) and E_g(t+lag), over the given geography multiset
std::optional<std::pair<double, int>> mean_lag_correlation(
    const std::vector<const std::map<int, double>*>& fit,
    const std::vector<const std::map<int, double>*>& exp_values, int lag) {
  // collect candidate years from fitness coverage
  std::set<int> years;
  for (const auto* f : fit) {
    for (const auto& [y, v] : *f) years.insert(y);
  }
  double acc = 0;
  int used = 0;
  for (int year : years) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < fit.size(); ++i) {
      const auto fy = fit[i]->find(year);
      if (fy == fit[i]->end()) continue;
      const auto ey = exp_values[i]->find(year + lag);
      if (ey == exp_values[i]->end()) continue;
      x.push_back(fy->second);
      y.push_back(ey->second);
    }
    if (x.size() < 3) continue;
    const auto r = pearson(x, y);
    if (!r) continue;
    acc += *r;
    ++used;
  }
  if (used == 0) return std::nullopt;
  return std::make_pair(acc / used, used);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::vector<LagCorrelation> lagged_xcorr(const FitnessTable& fitness,
                                         const std::map<std::string, ExpenditureSeries>& expenditure,
                                         int lag_min, int lag_max, int replicates,
                                         std::uint64_t seed, std::vector<std::string>* warnings) {
  if (lag_min > lag_max) throw std::runtime_error("empty lag range");
  if (replicates < 0) throw std::runtime_error("replicates must be non-negative");

  // geographies present on both sides, in deterministic order
  std::vector<const std::map<int, double>*> fit, exp_values;
  for (const auto& [geo, series] : fitness) {
    const auto it = expenditure.find(geo);
    if (it == expenditure.end()) continue;
    fit.push_back(&series);
    exp_values.push_back(&it->second.values);
  }
  if (fit.size() < 3) throw std::runtime_error("cross-correlation needs at least 3 geographies");

  std::vector<LagCorrelation> out;
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    const auto point = mean_lag_correlation(fit, exp_values, lag);
    if (!point) {
      if (warnings) {
        warnings->push_back("lag " + std::to_string(lag) + " omitted: insufficient overlap");
      }
      continue;
    }
    LagCorrelation lc;
    lc.lag = lag;
    lc.mean_correlation = point->first;
    lc.years_used = point->second;

    // bootstrap over geographies, one independent substream per replicate
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(replicates));
    for (int r = 0; r < replicates; ++r) {
      Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(r));
      std::vector<const std::map<int, double>*> bf, be;
      bf.reserve(fit.size());
      be.reserve(fit.size());
      for (std::size_t i = 0; i < fit.size(); ++i) {
        const std::size_t k = rng.next_below(fit.size());
        bf.push_back(fit[k]);
        be.push_back(exp_values[k]);
      }
      const auto stat = mean_lag_correlation(bf, be, lag);
      if (stat) samples.push_back(stat->first);
    }
    lc.replicates = static_cast<int>(samples.size());
    if (!samples.empty()) {
      std::sort(samples.begin(), samples.end());
      lc.q25 = quantile_sorted(samples, 0.25);
      lc.q75 = quantile_sorted(samples, 0.75);
    } else {
      lc.q25 = lc.q75 = lc.mean_correlation;
    }
    out.push_back(lc);
  }
  if (out.empty()) throw std::runtime_error("no lag had sufficient overlap");
  return out;
}

NationalRegionalCorrelation national_vs_regional(const FitnessTable& tl1, const FitnessTable& tl2,
                                                 const GeoRegistry& geo,
                                                 std::vector<std::string>* warnings) {
  // nation -> regions with TL2 fitness
  std::map<std::string, std::vector<const std::map<int, double>*>> regions;
  for (const auto& [region, series] : tl2) {
    if (!geo.contains(region) || geo.level(region) != GeoLevel::TL2) continue;
    regions[geo.tl1_parent(region)].push_back(&series);
  }

  std::vector<double> national, region_max, region_mean;
  for (const auto& [nation, series] : tl1) {
    const auto rit = regions.find(nation);
    if (rit == regions.end()) {
      if (warnings) warnings->push_back("nation '" + nation + "' has no regional coverage");
      continue;
    }
    for (const auto& [year, f_national] : series) {
      double best = 0, sum = 0;
      int n = 0;
      for (const auto* rseries : rit->second) {
        const auto it = rseries->find(year);
        if (it == rseries->end()) continue;
        best = std::max(best, it->second);
        sum += it->second;
        ++n;
      }
      if (n == 0) continue;
      national.push_back(f_national);
      region_max.push_back(best);
      region_mean.push_back(sum / n);
    }
  }
  if (national.size() < 2) throw std::runtime_error("not enough (nation, year) pairs for correlation");

  NationalRegionalCorrelation out;
  out.pairs = national.size();
  const auto rmax = pearson(national, region_max);
  const auto rmean = pearson(national, region_mean);
  if (!rmax || !rmean) throw std::runtime_error("degenerate variance in national/regional fitness");
  out.pearson_with_max = *rmax;
  out.pearson_with_mean = *rmean;
  return out;
}

std::map<std::string, std::optional<double>> hard_soft_ratio(const PanelCube& documents_layer0,
                                                             const std::set<std::string>& soft_set,
                                                             const FosRegistry& fos, int year_min,
                                                             int year_max) {
  for (const auto& id : soft_set) {
    if (!fos.contains(id) || fos.layer(id) != 0) {
      throw std::runtime_error("soft-science set entry '" + id + "' is not a layer-0 sector");
    }
  }
  std::map<std::string, double> soft, hard;
  for (int year : documents_layer0.years()) {
    if (year < year_min || year > year_max) continue;
    const YearSlice s = documents_layer0.slice(year);
    for (std::size_t g = 0; g < s.geos.size(); ++g) {
      for (std::size_t j = 0; j < s.sectors.size(); ++j) {
        const double v = s.at(g, j);
        if (v == 0) continue;
        if (soft_set.count(s.sectors[j])) soft[s.geos[g]] += v;
        else hard[s.geos[g]] += v;
      }
    }
  }
  std::map<std::string, std::optional<double>> out;
  std::set<std::string> geos;
  for (const auto& [g, v] : soft) geos.insert(g);
  for (const auto& [g, v] : hard) geos.insert(g);
  for (const auto& g : geos) {
    const double h = hard.count(g) ? hard.at(g) : 0.0;
    const double sft = soft.count(g) ? soft.at(g) : 0.0;
    if (h > 0) out[g] = sft / h;
    else out[g] = std::nullopt;  // undefined rather than infinite
  }
  return out;
}

}  // namespace scifit
