#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scifit/panel.hpp"
#include "scifit/records.hpp"
#include "scifit/registry.hpp"

namespace scifit {

struct AggregationStats {
  std::size_t records_seen = 0;
  std::size_t records_contributed = 0;
  std::size_t records_dropped = 0;          // no resolvable geo or fos assignment left
  std::size_t geo_assignments_dropped = 0;  // unresolvable at the requested level
  std::size_t fos_assignments_dropped = 0;  // unresolvable at the requested layer

  std::string summary() const;
};

// Turns validated document records into per-year panel counts at a fixed
// territorial level and field-of-study layer. Each record contributes a total
// document weight of exactly 1 (citations scaled by the same shares):
// unresolvable assignments are dropped with the remaining weights
// renormalized, so partial losses never leak mass.
//
// Aggregation is a commutative reduction; shard-local aggregators can be
// merged via PanelCube::merge.
class FractionalAggregator {
 public:
  FractionalAggregator(const GeoRegistry& geo, const FosRegistry& fos, GeoLevel geo_level,
                       int fos_layer);

  void add(const DocumentRecord& record);

  const PanelCube& citations() const { return citations_; }
  const PanelCube& documents() const { return documents_; }
  const AggregationStats& stats() const { return stats_; }

  PanelCube take_citations() { return std::move(citations_); }
  PanelCube take_documents() { return std::move(documents_); }

 private:
  const GeoRegistry& geo_;
  const FosRegistry& fos_;
  GeoLevel geo_level_;
  int fos_layer_;
  PanelCube citations_{Measure::citations};
  PanelCube documents_{Measure::documents};
  AggregationStats stats_;
};

struct AggregateResult {
  PanelCube citations{Measure::citations};
  PanelCube documents{Measure::documents};
  AggregationStats stats;
};

AggregateResult fractional_aggregate(const std::vector<DocumentRecord>& records,
                                     const GeoRegistry& geo, const FosRegistry& fos,
                                     GeoLevel geo_level, int fos_layer);

// Rolls a TL2 cube up to nations. A TL1 cube passes through unchanged.
PanelCube aggregate_geo(const PanelCube& cube, const GeoRegistry& geo);

// Lifts the sector axis to a shallower layer, splitting weights equally among
// parents at each step.
PanelCube aggregate_fos(const PanelCube& cube, const FosRegistry& fos, int to_layer);

}  // namespace scifit
