#include "scifit/ingest.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace scifit {

std::string AggregationStats::summary() const {
  std::ostringstream os;
  os << "records_seen=" << records_seen << " contributed=" << records_contributed
     << " dropped=" << records_dropped << " geo_assignments_dropped=" << geo_assignments_dropped
     << " fos_assignments_dropped=" << fos_assignments_dropped;
  return os.str();
}

FractionalAggregator::FractionalAggregator(const GeoRegistry& geo, const FosRegistry& fos,
                                           GeoLevel geo_level, int fos_layer)
    : geo_(geo), fos_(fos), geo_level_(geo_level), fos_layer_(fos_layer) {}

void FractionalAggregator::add(const DocumentRecord& record) {
  ++stats_.records_seen;

  // resolve geography assignments at the requested level
  std::map<std::string, double> geo_weights;
  double geo_sum = 0;
  for (const auto& a : record.geo) {
    if (!geo_.contains(a.id)) {
      ++stats_.geo_assignments_dropped;
      continue;
    }
    if (geo_level_ == GeoLevel::TL1) {
      geo_weights[geo_.tl1_parent(a.id)] += a.weight;
    } else {
      // a nation-level assignment carries no region information
      if (geo_.level(a.id) != GeoLevel::TL2) {
        ++stats_.geo_assignments_dropped;
        continue;
      }
      geo_weights[a.id] += a.weight;
    }
    geo_sum += a.weight;
  }

  // resolve fields of study, lifting to the requested layer
  std::map<std::string, double> fos_weights;
  double fos_sum = 0;
  for (const auto& a : record.fos) {
    if (!fos_.contains(a.id) || fos_.layer(a.id) < fos_layer_) {
      ++stats_.fos_assignments_dropped;
      continue;
    }
    for (const auto& [lifted, share] : fos_.lift(a.id, fos_layer_)) {
      fos_weights[lifted] += a.weight * share;
    }
    fos_sum += a.weight;
  }

  if (geo_sum <= 0 || fos_sum <= 0) {
    ++stats_.records_dropped;
    return;
  }

  // remaining weights renormalized so the record contributes exactly 1
  const double citations = static_cast<double>(record.citations);
  for (const auto& [g, wg] : geo_weights) {
    const double gshare = wg / geo_sum;
    for (const auto& [s, ws] : fos_weights) {
      const double share = gshare * (ws / fos_sum);
      documents_.add(g, s, record.year, share);
      if (citations > 0) citations_.add(g, s, record.year, citations * share);
    }
  }
  ++stats_.records_contributed;
}

AggregateResult fractional_aggregate(const std::vector<DocumentRecord>& records,
                                     const GeoRegistry& geo, const FosRegistry& fos,
                                     GeoLevel geo_level, int fos_layer) {
  FractionalAggregator agg(geo, fos, geo_level, fos_layer);
  for (const auto& r : records) agg.add(r);
  AggregateResult out;
  out.stats = agg.stats();
  out.citations = agg.take_citations();
  out.documents = agg.take_documents();
  return out;
}

PanelCube aggregate_geo(const PanelCube& cube, const GeoRegistry& geo) {
  PanelCube out(cube.measure());
  for (int year : cube.years()) {
    const YearSlice s = cube.slice(year);
    for (std::size_t g = 0; g < s.geos.size(); ++g) {
      const std::string& parent = geo.tl1_parent(s.geos[g]);
      for (std::size_t j = 0; j < s.sectors.size(); ++j) {
        const double v = s.at(g, j);
        if (v != 0) out.add(parent, s.sectors[j], year, v);
      }
    }
  }
  return out;
}

PanelCube aggregate_fos(const PanelCube& cube, const FosRegistry& fos, int to_layer) {
  PanelCube out(cube.measure());
  for (int year : cube.years()) {
    const YearSlice s = cube.slice(year);
    for (std::size_t j = 0; j < s.sectors.size(); ++j) {
      const auto lifted = fos.lift(s.sectors[j], to_layer);
      for (std::size_t g = 0; g < s.geos.size(); ++g) {
        const double v = s.at(g, j);
        if (v == 0) continue;
        for (const auto& [id, share] : lifted) out.add(s.geos[g], id, year, v * share);
      }
    }
  }
  return out;
}

}  // namespace scifit
