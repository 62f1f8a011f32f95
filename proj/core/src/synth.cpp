#include "scifit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scifit/fitness.hpp"
#include "scifit/pipeline.hpp"
#include "scifit/records.hpp"
#include "scifit/registry.hpp"
#include "scifit/rng.hpp"
#include "scifit/tables.hpp"

namespace scifit {

namespace {

std::string geo_id(int g) {
  std::ostringstream os;
  os << 'G' << (g < 10 ? "0" : "") << g;
  return os.str();
}

std::string absorber_id(int a) {
  std::ostringstream os;
  os << 'R' << (a < 10 ? "0" : "") << a;
  return os.str();
}

std::string sector_id(int s) {
  std::ostringstream os;
  os << "SEC" << (s < 10 ? "0" : "") << s;
  return os.str();
}

struct Design {
  int n_real_sectors = 0;
  int absorbers = 0;
  std::vector<long long> ranked_citations;  // per ranked geo, in-support cells
  double margin_in = 0;
  double margin_out = 0;
};

// RCA margins of the noise-free count matrix; rows = ranked geos then
// absorbers, columns = real sectors then niches.
void evaluate_margins(const SynthParams& p, const Design& d, double* margin_in,
                      double* margin_out) {
  const int G = p.n_geos;
  const int Sr = d.n_real_sectors;
  const int S = p.n_sectors;
  const int rows = G + d.absorbers;
  std::vector<double> w(static_cast<std::size_t>(rows) * S, 0.0);
  auto cell = [&](int r, int s) -> double& { return w[static_cast<std::size_t>(r) * S + s]; };
  for (int g = 0; g < G; ++g) {
    for (int s = g; s < Sr; ++s) cell(g, s) = std::log1p(static_cast<double>(d.ranked_citations[g]));
  }
  // absorbers live entirely in the niche sectors; any production in the real
  // columns would make them competitive in the sparse ones and collapse the
  // fitness gaps between the top ranked geographies
  for (int a = 0; a < d.absorbers; ++a) {
    for (int s = Sr; s < S; ++s) cell(G + a, s) = std::log1p(static_cast<double>(p.niche_citations));
  }
  std::vector<double> row(rows, 0.0), col(S, 0.0);
  double total = 0;
  for (int r = 0; r < rows; ++r) {
    for (int s = 0; s < S; ++s) {
      row[r] += cell(r, s);
      col[s] += cell(r, s);
      total += cell(r, s);
    }
  }
  double min_in = 1e300, max_out = 0;
  for (int g = 0; g < G; ++g) {
    for (int s = 0; s < Sr; ++s) {
      const double rc = (cell(g, s) / row[g]) / (col[s] / total);
      if (s >= g) min_in = std::min(min_in, rc);
      else max_out = std::max(max_out, rc);
    }
  }
  *margin_in = min_in;
  *margin_out = max_out;
}

Design make_design(const SynthParams& p) {
  if (p.n_geos < 2) throw std::runtime_error("synth needs at least 2 geographies");
  if (p.n_sectors <= p.n_geos) {
    throw std::runtime_error("synth needs more sectors than geographies (niches carry the background weight)");
  }
  if (p.year_min > p.year_max) throw std::runtime_error("synth year range is empty");
  if (p.noise < 0 || p.noise > 1) throw std::runtime_error("synth noise must be in [0, 1]");
  if (p.top_citations < 2) throw std::runtime_error("synth top_citations must be at least 2");

  Design d;
  d.n_real_sectors = p.n_geos;
  d.ranked_citations.resize(p.n_geos);
  const double decay = std::pow(static_cast<double>(p.top_citations),
                                -1.0 / static_cast<double>(p.n_geos - 1));
  for (int g = 0; g < p.n_geos; ++g) {
    const double c = static_cast<double>(p.top_citations) * std::pow(decay, g);
    d.ranked_citations[g] = std::max<long long>(1, std::llround(c));
  }

  // grow the absorber pool until every planted cell clears the threshold by
  // the target margin
  for (int absorbers = 1; absorbers <= 4096; ++absorbers) {
    d.absorbers = absorbers;
    evaluate_margins(p, d, &d.margin_in, &d.margin_out);
    if (d.margin_in >= p.target_margin) return d;
  }
  throw std::runtime_error("synth design infeasible: margins not reachable for these parameters");
}

}  // namespace

SynthReport generate_corpus(const SynthParams& params, const std::filesystem::path& out_dir) {
  const Design design = make_design(params);
  const int G = params.n_geos;
  const int Sr = design.n_real_sectors;
  const int S = params.n_sectors;

  std::filesystem::create_directories(out_dir);

  SynthReport report;
  report.absorber_count = design.absorbers;
  report.design_margin_in = design.margin_in;
  report.design_margin_out = design.margin_out;
  for (int g = 0; g < G; ++g) report.ranked_geos.push_back(geo_id(g));
  for (int a = 0; a < design.absorbers; ++a) report.background_geos.push_back(absorber_id(a));

  PipelineConfig cfg;
  cfg.documents = out_dir / "documents.jsonl";
  cfg.geo_registry = out_dir / "geo_registry.csv";
  cfg.fos_registry = out_dir / "fos_registry.csv";
  cfg.output_dir = out_dir / "out";
  cfg.geo_level = GeoLevel::TL1;
  cfg.fos_layer = 0;
  cfg.reference_geo_tl1 = geo_id(0);
  cfg.year_min = params.year_min;
  cfg.year_max = params.year_max;
  cfg.seed = params.seed;
  cfg.soft_sectors.clear();  // the synthetic taxonomy has no soft/hard split
  cfg.save(out_dir / "synth.cfg");
  const std::string hash = cfg.hash();

  GeoRegistry geos;
  for (const auto& id : report.ranked_geos) geos.add(id, {"synthetic geography " + id, GeoLevel::TL1, ""});
  for (const auto& id : report.background_geos) geos.add(id, {"background pool " + id, GeoLevel::TL1, ""});
  geos.save(out_dir / "geo_registry.csv", hash);

  FosRegistry fos;
  for (int s = 0; s < S; ++s) fos.add(sector_id(s), {"synthetic sector " + sector_id(s), 0, {}});
  fos.save(out_dir / "fos_registry.csv", hash);

  // per-cell noise: amplitude jitter on planted cells, occasional spurious
  // background production elsewhere in the real block
  Rng rng = Rng::substream(params.seed, 0x5f9e);
  const double sigma = 1.0;

  std::ostringstream docs;
  std::size_t written = 0;
  auto emit = [&](const std::string& geo, const std::string& sector, int year, long long citations) {
    DocumentRecord rec;
    rec.doc_id = "d-" + geo + "-" + sector + "-" + std::to_string(year);
    rec.year = year;
    rec.citations = citations;
    rec.geo = {{geo, 1.0}};
    rec.fos = {{sector, 1.0}};
    docs << to_json_line(rec) << "\n";
    ++written;
  };

  for (int year = params.year_min; year <= params.year_max; ++year) {
    for (int g = 0; g < G; ++g) {
      for (int s = 0; s < Sr; ++s) {
        const bool planted = s >= g;
        long long c = planted ? design.ranked_citations[g] : 0;
        if (params.noise > 0 && rng.next_double() < params.noise) {
          const double factor = std::exp(sigma * rng.next_normal());
          if (planted) {
            c = std::llround(static_cast<double>(c) * factor);
          } else {
            c = std::llround(0.05 * static_cast<double>(design.ranked_citations[g]) * factor);
          }
        }
        if (c > 0) emit(geo_id(g), sector_id(s), year, c);
      }
    }
    for (int a = 0; a < design.absorbers; ++a) {
      for (int s = Sr; s < S; ++s) emit(absorber_id(a), sector_id(s), year, params.niche_citations);
    }
  }
  atomic_write_text(out_dir / "documents.jsonl", docs.str());
  report.documents_written = written;

  {
    TableWriter w(out_dir / "ground_truth.csv", {"rank", "geo"}, hash);
    for (int g = 0; g < G; ++g) w.row({std::to_string(g + 1), geo_id(g)});
    w.commit();
  }

  return report;
}

}  // namespace scifit
