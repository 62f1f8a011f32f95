#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scifit/fitness.hpp"
#include "scifit/matrices.hpp"
#include "scifit/panel.hpp"
#include "scifit/registry.hpp"

namespace scifit {

struct PipelineParams {
  double half_life = 3.0;
  double rca_threshold = 1.0;
  FitnessOptions fitness;
  std::string reference_geo;  // empty: skip reference normalization
  int year_min = 0;
  int year_max = 9999;
};

struct PipelineRun {
  std::map<int, WeightMatrix> weights;
  std::map<int, RcaMatrix> rca_raw;
  std::map<int, RcaMatrix> rca_smoothed;
  std::map<int, CompetitivenessMatrix> matrices;
  std::map<int, FitnessResult> results;
  std::vector<std::string> warnings;  // skipped degenerate years, fallbacks
};

// Full chain for one measure: log counts -> RCA -> smoothing -> binary filter
// -> fitness-complexity fixed point -> reference normalization. Feeding the
// citations cube yields scientific fitness, the documents cube document
// fitness. Years whose network is degenerate are skipped with a warning.
PipelineRun run_fitness_pipeline(const PanelCube& cube, const PipelineParams& params);

// Flat key=value configuration driving the command-line pipeline. Flags
// override file values; defaults follow the reference setup (half-life 3,
// threshold 1, reference US at TL1 / US06 at TL2).
struct PipelineConfig {
  std::filesystem::path documents;
  std::filesystem::path geo_registry;
  std::filesystem::path fos_registry;
  std::filesystem::path expenditure;
  std::filesystem::path population;
  std::filesystem::path output_dir = "out";

  GeoLevel geo_level = GeoLevel::TL1;
  int fos_layer = 0;
  double half_life = 3.0;
  double rca_threshold = 1.0;
  int max_iter = 1000;
  double tol = 1e-9;
  int rank_window = 50;
  std::string reference_geo_tl1 = "US";
  std::string reference_geo_tl2 = "US06";
  int year_min = 1960;
  int year_max = 2100;
  std::uint64_t seed = 1;

  int lag_min = -6;
  int lag_max = 6;
  int replicates = 200;
  std::string soft_sectors = "Sociology;Political Science;Art;Business;Philosophy;History";

  static PipelineConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::string canonical_text() const;
  std::string hash() const;

  const std::string& reference_geo() const {
    return geo_level == GeoLevel::TL1 ? reference_geo_tl1 : reference_geo_tl2;
  }
  PipelineParams params() const;
  void validate() const;
};

}  // namespace scifit
