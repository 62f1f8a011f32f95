#include "scifit/pipeline.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scifit/tables.hpp"
#include "scifit/transform.hpp"

namespace scifit {

PipelineRun run_fitness_pipeline(const PanelCube& cube, const PipelineParams& params) {
  PipelineRun run;

  std::vector<RcaMatrix> rca_series;
  for (int year : cube.years()) {
    if (year < params.year_min || year > params.year_max) continue;
    const YearSlice slice = cube.slice(year);
    WeightMatrix w = log_counts(slice);
    try {
      rca_series.push_back(rca(w));
    } catch (const std::exception& e) {
      run.warnings.push_back("year " + std::to_string(year) + " skipped: " + e.what());
      continue;
    }
    run.rca_raw[year] = rca_series.back();
    run.weights[year] = std::move(w);
  }

  for (auto& smoothed : smooth_rca(rca_series, params.half_life)) {
    const int year = smoothed.year;
    CompetitivenessMatrix m = threshold(smoothed, params.rca_threshold);
    run.rca_smoothed[year] = std::move(smoothed);
    FitnessResult result;
    try {
      result = fitness_complexity(m, params.fitness);
    } catch (const std::exception& e) {
      run.warnings.push_back("year " + std::to_string(year) + " skipped: " + e.what());
      run.matrices[year] = std::move(m);
      continue;
    }
    run.matrices[year] = std::move(m);
    if (!params.reference_geo.empty()) {
      result = normalize_fitness(std::move(result), params.reference_geo);
      if (result.reference_fallback) {
        run.warnings.push_back("year " + std::to_string(year) + ": reference geography '" +
                               params.reference_geo + "' absent or zero, normalized by '" +
                               result.reference_geo + "'");
      }
    }
    run.results[year] = std::move(result);
  }
  return run;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  PipelineConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "documents") cfg.documents = value;
    else if (key == "geo_registry") cfg.geo_registry = value;
    else if (key == "fos_registry") cfg.fos_registry = value;
    else if (key == "expenditure") cfg.expenditure = value;
    else if (key == "population") cfg.population = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "geo_level") cfg.geo_level = geo_level_from_string(value);
    else if (key == "fos_layer") cfg.fos_layer = static_cast<int>(parse_int(value, key));
    else if (key == "half_life") cfg.half_life = parse_double(value, key);
    else if (key == "rca_threshold") cfg.rca_threshold = parse_double(value, key);
    else if (key == "max_iter") cfg.max_iter = static_cast<int>(parse_int(value, key));
    else if (key == "tol") cfg.tol = parse_double(value, key);
    else if (key == "rank_window") cfg.rank_window = static_cast<int>(parse_int(value, key));
    else if (key == "reference_geo_tl1") cfg.reference_geo_tl1 = value;
    else if (key == "reference_geo_tl2") cfg.reference_geo_tl2 = value;
    else if (key == "year_min") cfg.year_min = static_cast<int>(parse_int(value, key));
    else if (key == "year_max") cfg.year_max = static_cast<int>(parse_int(value, key));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "lag_min") cfg.lag_min = static_cast<int>(parse_int(value, key));
    else if (key == "lag_max") cfg.lag_max = static_cast<int>(parse_int(value, key));
    else if (key == "replicates") cfg.replicates = static_cast<int>(parse_int(value, key));
    else if (key == "soft_sectors") cfg.soft_sectors = value;
    else throw std::runtime_error(path.string() + ": unknown config key '" + key + "'");
  }
  return cfg;
}

std::string PipelineConfig::canonical_text() const {
  std::ostringstream os;
  os << "documents = " << documents.string() << "\n";
  os << "fos_layer = " << fos_layer << "\n";
  os << "fos_registry = " << fos_registry.string() << "\n";
  os << "geo_level = " << to_string(geo_level) << "\n";
  os << "geo_registry = " << geo_registry.string() << "\n";
  os << "expenditure = " << expenditure.string() << "\n";
  os << "half_life = " << format_double(half_life) << "\n";
  os << "lag_max = " << lag_max << "\n";
  os << "lag_min = " << lag_min << "\n";
  os << "max_iter = " << max_iter << "\n";
  os << "population = " << population.string() << "\n";
  os << "rank_window = " << rank_window << "\n";
  os << "rca_threshold = " << format_double(rca_threshold) << "\n";
  os << "reference_geo_tl1 = " << reference_geo_tl1 << "\n";
  os << "reference_geo_tl2 = " << reference_geo_tl2 << "\n";
  os << "replicates = " << replicates << "\n";
  os << "seed = " << seed << "\n";
  os << "soft_sectors = " << soft_sectors << "\n";
  os << "tol = " << format_double(tol) << "\n";
  os << "year_max = " << year_max << "\n";
  os << "year_min = " << year_min << "\n";
  return os.str();
}

void PipelineConfig::save(const std::filesystem::path& path) const {
  // output_dir travels with the file but stays out of the canonical form
  atomic_write_text(path, canonical_text() + "output_dir = " + output_dir.string() + "\n");
}

// The hash stamped into every table. Only fields that determine table
// contents participate, so reruns into different directories stay
// byte-identical.
std::string PipelineConfig::hash() const { return to_hex(fnv1a64(canonical_text())); }

PipelineParams PipelineConfig::params() const {
  PipelineParams p;
  p.half_life = half_life;
  p.rca_threshold = rca_threshold;
  p.fitness.max_iter = max_iter;
  p.fitness.tol = tol;
  p.fitness.rank_window = rank_window;
  p.reference_geo = reference_geo();
  p.year_min = year_min;
  p.year_max = year_max;
  return p;
}

void PipelineConfig::validate() const {
  if (half_life <= 0) throw std::runtime_error("half_life must be positive");
  if (rca_threshold <= 0) throw std::runtime_error("rca_threshold must be positive");
  if (max_iter < 1) throw std::runtime_error("max_iter must be at least 1");
  if (tol < 0) throw std::runtime_error("tol must be non-negative");
  if (rank_window < 1) throw std::runtime_error("rank_window must be at least 1");
  if (fos_layer < 0 || fos_layer > 2) throw std::runtime_error("fos_layer must be 0, 1 or 2");
  if (year_min > year_max) throw std::runtime_error("year_min exceeds year_max");
  if (lag_min > lag_max) throw std::runtime_error("lag_min exceeds lag_max");
  if (replicates < 0) throw std::runtime_error("replicates must be non-negative");
}

}  // namespace scifit
