#include "scifit/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace scifit {

WeightMatrix log_counts(const YearSlice& slice) {
  WeightMatrix w;
  w.year = slice.year;
  w.geos = slice.geos;
  w.sectors = slice.sectors;
  w.values.resize(slice.counts.size());
  for (std::size_t i = 0; i < slice.counts.size(); ++i) {
    const double c = slice.counts[i];
    if (c < 0 || !std::isfinite(c)) throw std::runtime_error("negative or non-finite count");
    w.values[i] = std::log1p(c);
  }
  return w;
}

RcaMatrix rca(const WeightMatrix& w) {
  const std::size_t ng = w.geos.size();
  const std::size_t ns = w.sectors.size();

  std::vector<double> row_sum(ng, 0.0), col_sum(ns, 0.0);
  double total = 0;
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t s = 0; s < ns; ++s) {
      const double v = w.at(g, s);
      row_sum[g] += v;
      col_sum[s] += v;
      total += v;
    }
  }
  if (total <= 0) throw std::runtime_error("empty weight matrix");

  RcaMatrix out;
  out.year = w.year;
  out.geos = w.geos;
  out.sectors = w.sectors;
  out.values.assign(ng * ns, 0.0);
  out.defined.assign(ng * ns, 0);
  for (std::size_t g = 0; g < ng; ++g) {
    if (row_sum[g] <= 0) continue;  // geography absent this year: masked row
    for (std::size_t s = 0; s < ns; ++s) {
      if (col_sum[s] <= 0) continue;  // sector absent this year: masked column
      const std::size_t i = g * ns + s;
      out.values[i] = (w.values[i] / row_sum[g]) / (col_sum[s] / total);
      out.defined[i] = 1;
    }
  }
  return out;
}

std::vector<RcaMatrix> smooth_rca(const std::vector<RcaMatrix>& series, double half_life_years) {
  if (half_life_years <= 0) throw std::runtime_error("half-life must be positive");

  std::vector<const RcaMatrix*> ordered;
  ordered.reserve(series.size());
  for (const auto& m : series) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const RcaMatrix* a, const RcaMatrix* b) { return a->year < b->year; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->year == ordered[i - 1]->year) {
      throw std::runtime_error("duplicate year in smoothing input");
    }
  }

  struct CellState {
    double value;
    int year;
  };
  std::unordered_map<std::string, CellState> state;

  std::vector<RcaMatrix> out;
  out.reserve(series.size());
  for (const RcaMatrix* m : ordered) {
    RcaMatrix sm = *m;
    const std::size_t ns = m->sectors.size();
    for (std::size_t g = 0; g < m->geos.size(); ++g) {
      for (std::size_t s = 0; s < ns; ++s) {
        const std::size_t i = g * ns + s;
        if (!m->defined[i]) continue;
        const std::string key = m->geos[g] + '\x1f' + m->sectors[s];
        const double x = m->values[i];
        auto it = state.find(key);
        if (it == state.end()) {
          state.emplace(key, CellState{x, m->year});
        } else {
          const double elapsed = static_cast<double>(m->year - it->second.year);
          const double retain = std::exp2(-elapsed / half_life_years);
          it->second.value = (1.0 - retain) * x + retain * it->second.value;
          it->second.year = m->year;
          sm.values[i] = it->second.value;
        }
      }
    }
    out.push_back(std::move(sm));
  }
  return out;
}

CompetitivenessMatrix threshold(const RcaMatrix& rca, double thr) {
  CompetitivenessMatrix out;
  out.year = rca.year;
  out.geos = rca.geos;
  out.sectors = rca.sectors;
  out.m.resize(rca.values.size());
  for (std::size_t i = 0; i < rca.values.size(); ++i) {
    out.m[i] = (rca.defined[i] && rca.values[i] >= thr) ? 1 : 0;
  }
  return out;
}

}  // namespace scifit
