#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "scifit/pipeline.hpp"
#include "scifit/synth.hpp"

using scifit::PipelineConfig;
using scifit::SynthParams;

namespace {

// Pipeline options come from an optional config file with flags layered on
// top; only flags the user actually passed override the file.
struct ConfigCli {
  std::string config_file;
  PipelineConfig raw;
  std::string geo_level;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("-c,--config", config_file, "pipeline configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--documents", raw.documents, "document records (line-delimited JSON)");
    sub->add_option("--geo-registry", raw.geo_registry, "geography registry file");
    sub->add_option("--fos-registry", raw.fos_registry, "field-of-study registry file");
    sub->add_option("--expenditure", raw.expenditure, "expenditure table (geo,year,measure,value)");
    sub->add_option("--population", raw.population, "population table (geo,year,value)");
    sub->add_option("-o,--output", raw.output_dir, "output directory");
    sub->add_option("--geo-level", geo_level, "territorial level (TL1 or TL2)");
    sub->add_option("--fos-layer", raw.fos_layer, "field-of-study layer (0, 1 or 2)");
    sub->add_option("--half-life", raw.half_life, "smoothing half-life in years");
    sub->add_option("--rca-threshold", raw.rca_threshold, "competitiveness threshold");
    sub->add_option("--max-iter", raw.max_iter, "fixed-point iteration budget");
    sub->add_option("--tol", raw.tol, "fixed-point relative tolerance");
    sub->add_option("--rank-window", raw.rank_window, "iterations of stable ranking to accept");
    sub->add_option("--reference-geo-tl1", raw.reference_geo_tl1, "normalization reference at TL1");
    sub->add_option("--reference-geo-tl2", raw.reference_geo_tl2, "normalization reference at TL2");
    sub->add_option("--year-min", raw.year_min, "first year included");
    sub->add_option("--year-max", raw.year_max, "last year included");
    sub->add_option("--seed", raw.seed, "seed for all randomized analytics");
    sub->add_option("--lag-min", raw.lag_min, "smallest cross-correlation lag");
    sub->add_option("--lag-max", raw.lag_max, "largest cross-correlation lag");
    sub->add_option("--replicates", raw.replicates, "bootstrap replicates");
    sub->add_option("--soft-sectors", raw.soft_sectors, "semicolon-separated soft-science roots");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg = config_file.empty() ? PipelineConfig{} : PipelineConfig::load(config_file);
    auto take = [&](const char* flag, auto member) {
      if (app->count(flag)) cfg.*member = raw.*member;
    };
    take("--documents", &PipelineConfig::documents);
    take("--geo-registry", &PipelineConfig::geo_registry);
    take("--fos-registry", &PipelineConfig::fos_registry);
    take("--expenditure", &PipelineConfig::expenditure);
    take("--population", &PipelineConfig::population);
    take("--output", &PipelineConfig::output_dir);
    take("--fos-layer", &PipelineConfig::fos_layer);
    take("--half-life", &PipelineConfig::half_life);
    take("--rca-threshold", &PipelineConfig::rca_threshold);
    take("--max-iter", &PipelineConfig::max_iter);
    take("--tol", &PipelineConfig::tol);
    take("--rank-window", &PipelineConfig::rank_window);
    take("--reference-geo-tl1", &PipelineConfig::reference_geo_tl1);
    take("--reference-geo-tl2", &PipelineConfig::reference_geo_tl2);
    take("--year-min", &PipelineConfig::year_min);
    take("--year-max", &PipelineConfig::year_max);
    take("--seed", &PipelineConfig::seed);
    take("--lag-min", &PipelineConfig::lag_min);
    take("--lag-max", &PipelineConfig::lag_max);
    take("--replicates", &PipelineConfig::replicates);
    take("--soft-sectors", &PipelineConfig::soft_sectors);
    if (app->count("--geo-level")) cfg.geo_level = scifit::geo_level_from_string(geo_level);
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scientific fitness and complexity pipeline"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "parse documents and build panel cubes");
  auto* fitness = app.add_subcommand("fitness", "fitness/complexity tables from the cubes");
  auto* sector = app.add_subcommand("sector-fitness", "fitness restricted to each root sector");
  auto* metrics = app.add_subcommand("metrics", "inequality and expenditure analytics");
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted ranking");
  auto* exp = app.add_subcommand("export", "export pipeline stages as delimited tables");

  std::map<std::string, ConfigCli> resolvers;
  for (auto* sub : {ingest, fitness, sector, metrics, synth, exp}) {
    resolvers[sub->get_name()].attach(sub);
  }

  std::string root;
  sector->add_option("--root", root, "restrict to a single layer-0 sector");

  SynthParams synth_params;
  synth->add_option("--geos", synth_params.n_geos, "ranked geographies");
  synth->add_option("--sectors", synth_params.n_sectors, "sectors (must exceed geographies)");
  synth->add_option("--synth-year-min", synth_params.year_min, "first corpus year");
  synth->add_option("--synth-year-max", synth_params.year_max, "last corpus year");
  synth->add_option("--noise", synth_params.noise, "per-cell perturbation probability");

  std::string stage = "cube", measure = "citations";
  exp->add_option("--stage", stage, "cube, weights, rca, rca_smoothed or m");
  exp->add_option("--measure", measure, "citations or documents");

  CLI11_PARSE(app, argc, argv);

  try {
    auto* sub = app.get_subcommands().front();
    const PipelineConfig cfg = resolvers[sub->get_name()].resolve();
    if (sub == ingest) return scifit::cli::cmd_ingest(cfg);
    if (sub == fitness) return scifit::cli::cmd_fitness(cfg);
    if (sub == sector) return scifit::cli::cmd_sector_fitness(cfg, root);
    if (sub == metrics) return scifit::cli::cmd_metrics(cfg);
    if (sub == synth) {
      synth_params.seed = cfg.seed;
      synth_params.year_min = synth->count("--synth-year-min") ? synth_params.year_min : 2000;
      synth_params.year_max = synth->count("--synth-year-max") ? synth_params.year_max : 2004;
      return scifit::cli::cmd_synth(cfg, synth_params);
    }
    if (sub == exp) return scifit::cli::cmd_export(cfg, stage, measure);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return scifit::cli::kFatal;
  }
  return scifit::cli::kFatal;
}
