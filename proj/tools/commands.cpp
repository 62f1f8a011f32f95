#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "scifit/ingest.hpp"
#include "scifit/metrics.hpp"
#include "scifit/tables.hpp"
#include "scifit/transform.hpp"

namespace scifit::cli {

namespace {

std::string level_tag(GeoLevel level) { return to_string(level); }

std::filesystem::path cube_path(const PipelineConfig& cfg, Measure measure, GeoLevel level,
                                int layer) {
  return cfg.output_dir /
         (to_string(measure) + "_" + level_tag(level) + "_L" + std::to_string(layer) + ".csv");
}

std::filesystem::path fitness_path(const PipelineConfig& cfg, Measure measure, GeoLevel level,
                                   int layer) {
  const std::string prefix = measure == Measure::citations ? "fitness" : "document_fitness";
  return cfg.output_dir / (prefix + "_" + level_tag(level) + "_L" + std::to_string(layer) + ".csv");
}

// Loads the cube for the configured level/layer; a TL1 request is served by
// rolling up an existing TL2 cube of the same layer.
std::optional<PanelCube> load_cube(const PipelineConfig& cfg, Measure measure, GeoLevel level,
                                   int layer) {
  const auto direct = cube_path(cfg, measure, level, layer);
  if (std::filesystem::exists(direct)) return PanelCube::read(direct, measure);
  if (level == GeoLevel::TL1) {
    const auto fine = cube_path(cfg, measure, GeoLevel::TL2, layer);
    if (std::filesystem::exists(fine)) {
      const GeoRegistry geo = GeoRegistry::load(cfg.geo_registry);
      return aggregate_geo(PanelCube::read(fine, measure), geo);
    }
  }
  return std::nullopt;
}

void write_fitness_table(const std::filesystem::path& path, const std::string& hash,
                         const std::map<int, FitnessResult>& results) {
  TableWriter w(path, {"geo", "year", "fitness"}, hash);
  std::set<std::string> geos;
  for (const auto& [year, r] : results) {
    for (const auto& [geo, f] : r.fitness) geos.insert(geo);
  }
  for (const auto& geo : geos) {
    for (const auto& [year, r] : results) {
      const auto it = r.fitness.find(geo);
      if (it != r.fitness.end()) w.row({geo, std::to_string(year), format_double(it->second)});
    }
  }
  w.commit();
}

void write_complexity_table(const std::filesystem::path& path, const std::string& hash,
                            const std::map<int, FitnessResult>& results) {
  TableWriter w(path, {"sector", "year", "complexity"}, hash);
  std::set<std::string> sectors;
  for (const auto& [year, r] : results) {
    for (const auto& [sector, q] : r.complexity) sectors.insert(sector);
  }
  for (const auto& sector : sectors) {
    for (const auto& [year, r] : results) {
      const auto it = r.complexity.find(sector);
      if (it != r.complexity.end()) w.row({sector, std::to_string(year), format_double(it->second)});
    }
  }
  w.commit();
}

FitnessTable read_fitness_table(const std::filesystem::path& path) {
  FitnessTable out;
  const Table t = read_table(path);
  for (const auto& row : t.rows) {
    out[row[0]][static_cast<int>(parse_int(row[1], "fitness year"))] =
        parse_double(row[2], "fitness value");
  }
  return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int cmd_ingest(const PipelineConfig& cfg) {
  cfg.validate();
  std::ifstream in(cfg.documents);
  if (!in) {
    std::cerr << "error: cannot open documents file: " << cfg.documents.string() << "\n";
    return kFatal;
  }
  const GeoRegistry geo = GeoRegistry::load(cfg.geo_registry);
  FosRegistry::LoadReport fos_report;
  const FosRegistry fos = FosRegistry::load(cfg.fos_registry, &fos_report);
  for (const auto& id : fos_report.dropped) {
    std::cerr << "warning: field-of-study '" << id << "' dropped (invalid parents)\n";
  }

  std::filesystem::create_directories(cfg.output_dir);

  DocumentReader reader(in);
  FractionalAggregator agg(geo, fos, cfg.geo_level, cfg.fos_layer);
  DocumentRecord rec;
  while (reader.next(rec)) {
    if (rec.year < cfg.year_min || rec.year > cfg.year_max) continue;
    agg.add(rec);
  }

  const std::string hash = cfg.hash();
  agg.citations().write(cube_path(cfg, Measure::citations, cfg.geo_level, cfg.fos_layer), hash);
  agg.documents().write(cube_path(cfg, Measure::documents, cfg.geo_level, cfg.fos_layer), hash);

  std::ostringstream report;
  report << "# config_hash=" << hash << "\n";
  report << "parse: " << reader.report().summary() << "\n";
  report << "aggregate: " << agg.stats().summary() << "\n";
  for (const auto& id : fos_report.dropped) report << "fos_dropped: " << id << "\n";
  atomic_write_text(cfg.output_dir / "rejections.txt", report.str());

  std::cout << "ingest: " << reader.report().accepted << " records accepted, "
            << reader.report().total_rejected() << " rejected; cubes written to "
            << cfg.output_dir.string() << "\n";
  return kOk;
}

int cmd_fitness(const PipelineConfig& cfg) {
  cfg.validate();
  const auto citations = load_cube(cfg, Measure::citations, cfg.geo_level, cfg.fos_layer);
  const auto documents = load_cube(cfg, Measure::documents, cfg.geo_level, cfg.fos_layer);
  if (!citations || !documents) {
    std::cerr << "error: no cubes for " << level_tag(cfg.geo_level) << " layer " << cfg.fos_layer
              << " in " << cfg.output_dir.string() << "; run ingest first\n";
    return kFatal;
  }

  const std::string hash = cfg.hash();
  TableWriter convergence(cfg.output_dir / ("convergence_" + level_tag(cfg.geo_level) + "_L" +
                                            std::to_string(cfg.fos_layer) + ".csv"),
                          {"measure", "year", "iterations", "converged", "criterion", "floor_events",
                           "dropped_geos", "dropped_sectors", "reference_geo", "reference_fallback"},
                          hash);

  for (const auto* cube : {&*citations, &*documents}) {
    const PipelineRun run = run_fitness_pipeline(*cube, cfg.params());
    print_warnings(run.warnings);
    write_fitness_table(fitness_path(cfg, cube->measure(), cfg.geo_level, cfg.fos_layer), hash,
                        run.results);
    if (cube->measure() == Measure::citations) {
      write_complexity_table(cfg.output_dir / ("complexity_" + level_tag(cfg.geo_level) + "_L" +
                                               std::to_string(cfg.fos_layer) + ".csv"),
                             hash, run.results);
    }
    for (const auto& [year, r] : run.results) {
      convergence.row({to_string(cube->measure()), std::to_string(year),
                       std::to_string(r.iterations_used), r.converged ? "true" : "false",
                       to_string(r.criterion), std::to_string(r.floor_events),
                       std::to_string(r.dropped_geos.size()), std::to_string(r.dropped_sectors.size()),
                       r.reference_geo, r.reference_fallback ? "true" : "false"});
    }
  }
  convergence.commit();
  std::cout << "fitness: tables written to " << cfg.output_dir.string() << "\n";
  return kOk;
}

int cmd_sector_fitness(const PipelineConfig& cfg, const std::string& requested_root) {
  cfg.validate();
  if (cfg.fos_layer < 1) {
    std::cerr << "error: sector-fitness needs fos_layer >= 1 (got " << cfg.fos_layer << ")\n";
    return kFatal;
  }
  const auto citations = load_cube(cfg, Measure::citations, cfg.geo_level, cfg.fos_layer);
  if (!citations) {
    std::cerr << "error: no citations cube for this level/layer; run ingest first\n";
    return kFatal;
  }
  const FosRegistry fos = FosRegistry::load(cfg.fos_registry);

  const std::string hash = cfg.hash();
  const PipelineRun run = run_fitness_pipeline(*citations, cfg.params());
  print_warnings(run.warnings);

  std::vector<std::string> roots;
  if (requested_root.empty()) roots = fos.ids_at_layer(0);
  else roots.push_back(requested_root);

  bool any_failed = false;
  TableWriter table(cfg.output_dir / ("sector_fitness_" + level_tag(cfg.geo_level) + ".csv"),
                    {"root", "geo", "year", "fitness"}, hash);
  for (const auto& root : roots) {
    for (const auto& [year, m] : run.matrices) {
      try {
        FitnessResult r = sector_fitness(m, fos, root, cfg.params().fitness);
        r = normalize_fitness(std::move(r), cfg.reference_geo());
        for (const auto& [geo, f] : r.fitness) {
          table.row({root, geo, std::to_string(year), format_double(f)});
        }
      } catch (const std::exception& e) {
        std::cerr << "warning: sector fitness for root '" << root << "' year " << year
                  << " failed: " << e.what() << "\n";
        any_failed = true;
      }
    }
  }
  table.commit();

  // complexity ordering of the roots, from the unrestricted layer-1 run
  if (cfg.fos_layer == 1) {
    TableWriter order(cfg.output_dir / ("sector_order_" + level_tag(cfg.geo_level) + ".csv"),
                      {"year", "rank", "root", "mean_complexity"}, hash);
    for (const auto& [year, r] : run.results) {
      std::vector<std::string> warnings;
      const auto ranked = sector_complexity_order(r, fos, &warnings);
      print_warnings(warnings);
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        order.row({std::to_string(year), std::to_string(i + 1), ranked[i].first,
                   format_double(ranked[i].second)});
      }
    }
    order.commit();
  }
  std::cout << "sector-fitness: tables written to " << cfg.output_dir.string() << "\n";
  return any_failed ? kPartial : kOk;
}

namespace {

struct ExpenditureData {
  // measure -> geo -> series (interpolated)
  std::map<std::string, std::map<std::string, ExpenditureSeries>> by_measure;
  std::size_t interpolated_points = 0;
};

ExpenditureData load_expenditure(const PipelineConfig& cfg) {
  ExpenditureData out;
  if (cfg.expenditure.empty()) return out;
  const Table t = read_table(cfg.expenditure);
  std::map<std::pair<std::string, std::string>, std::map<int, double>> raw;
  for (const auto& row : t.rows) {
    raw[{row[2], row[0]}][static_cast<int>(parse_int(row[1], "expenditure year"))] =
        parse_double(row[3], "expenditure value");
  }
  for (const auto& [key, series] : raw) {
    const auto& [measure, geo] = key;
    auto s = interpolate_expenditure(geo, expenditure_measure_from_string(measure), series);
    out.interpolated_points += s.interpolated.size();
    out.by_measure[measure].emplace(geo, std::move(s));
  }
  return out;
}

std::map<std::string, std::map<int, double>> load_population(const PipelineConfig& cfg) {
  std::map<std::string, std::map<int, double>> out;
  if (cfg.population.empty()) return out;
  const Table t = read_table(cfg.population);
  for (const auto& row : t.rows) {
    out[row[0]][static_cast<int>(parse_int(row[1], "population year"))] =
        parse_double(row[2], "population value");
  }
  return out;
}

}  // namespace

int cmd_metrics(const PipelineConfig& cfg) {
  cfg.validate();
  const std::string hash = cfg.hash();
  std::filesystem::create_directories(cfg.output_dir);
  const GeoRegistry geo = GeoRegistry::load(cfg.geo_registry);

  std::ostringstream methods;
  methods << "# config_hash=" << hash << "\n";
  methods << "seed = " << cfg.seed << "\n";
  methods << "replicates = " << cfg.replicates << "\n";
  methods << "lags = [" << cfg.lag_min << ", " << cfg.lag_max << "]\n";
  bool any_failed = false;
  auto fail = [&](const std::string& what, const std::exception& e) {
    std::cerr << "warning: " << what << " failed: " << e.what() << "\n";
    methods << what << ": FAILED (" << e.what() << ")\n";
    any_failed = true;
  };
  auto note = [&](const std::string& line) { methods << line << "\n"; };

  // inequality analytics need the regional citations cube
  const auto tl2_citations = load_cube(cfg, Measure::citations, GeoLevel::TL2, cfg.fos_layer);
  if (tl2_citations) {
    const auto population = load_population(cfg);
    try {
      TableWriter w(cfg.output_dir / "gini.csv", {"nation", "year", "gini", "regions"}, hash);
      TableWriter ww(cfg.output_dir / "weighted_gini.csv",
                     {"nation", "year", "gini", "regions"}, hash);
      std::size_t weighted_rows = 0;
      for (int year : tl2_citations->years()) {
        const auto totals = tl2_citations->geo_totals(year);
        std::map<std::string, std::vector<std::pair<std::string, double>>> by_nation;
        for (const auto& [region, value] : totals) {
          if (!geo.contains(region) || geo.level(region) != GeoLevel::TL2) continue;
          by_nation[geo.tl1_parent(region)].emplace_back(region, value);
        }
        for (const auto& [nation, regions] : by_nation) {
          if (regions.size() < 2) continue;
          std::vector<double> values;
          for (const auto& [region, v] : regions) values.push_back(v);
          try {
            w.row({nation, std::to_string(year), format_double(gini(values)),
                   std::to_string(regions.size())});
          } catch (const std::exception&) {
            // all-zero nation-year: undefined, skip the row
          }
          // weighted variant where researcher headcount is known
          std::vector<double> weights;
          bool complete = true;
          for (const auto& [region, v] : regions) {
            const auto pit = population.find(region);
            if (pit == population.end() || !pit->second.count(year)) {
              complete = false;
              break;
            }
            weights.push_back(pit->second.at(year));
          }
          if (complete) {
            try {
              ww.row({nation, std::to_string(year), format_double(weighted_gini(values, weights)),
                      std::to_string(regions.size())});
              ++weighted_rows;
            } catch (const std::exception&) {
            }
          }
        }
      }
      w.commit();
      if (weighted_rows > 0) ww.commit();
      note("gini: written");
    } catch (const std::exception& e) {
      fail("gini", e);
    }

    try {
      std::vector<std::string> warnings;
      const auto series = world_gini_series(*tl2_citations, &warnings);
      print_warnings(warnings);
      TableWriter w(cfg.output_dir / "world_gini.csv", {"year", "gini"}, hash);
      for (const auto& [year, g] : series) w.row({std::to_string(year), format_double(g)});
      w.commit();
      note("world_gini: written");
    } catch (const std::exception& e) {
      fail("world_gini", e);
    }
  } else {
    note("gini: skipped (no TL2 citations cube)");
  }

  // cross-correlation of fitness against expenditure
  const auto fitness_file = fitness_path(cfg, Measure::citations, cfg.geo_level, cfg.fos_layer);
  ExpenditureData expenditure = load_expenditure(cfg);
  methods << "interpolated_points = " << expenditure.interpolated_points << "\n";
  if (std::filesystem::exists(fitness_file) && !expenditure.by_measure.empty()) {
    const FitnessTable fitness = read_fitness_table(fitness_file);
    for (auto& [measure, by_geo] : expenditure.by_measure) {
      // regional runs inherit national series when the file has no regions
      if (cfg.geo_level == GeoLevel::TL2) {
        std::map<std::string, ExpenditureSeries> regional;
        for (const auto& [gid, series] : by_geo) {
          if (geo.contains(gid) && geo.level(gid) == GeoLevel::TL2) regional.emplace(gid, series);
        }
        if (regional.empty()) {
          for (const auto& [gid, series] : by_geo) {
            if (!geo.contains(gid) || geo.level(gid) != GeoLevel::TL1) continue;
            for (auto& [region, rs] : inherit_national_series(series, geo)) {
              regional.emplace(region, std::move(rs));
            }
          }
          note("xcorr_" + measure + ": regional series reconstructed from national values");
        }
        by_geo = std::move(regional);
      }
      try {
        std::vector<std::string> warnings;
        const auto lags = lagged_xcorr(fitness, by_geo, cfg.lag_min, cfg.lag_max, cfg.replicates,
                                       cfg.seed, &warnings);
        print_warnings(warnings);
        TableWriter w(cfg.output_dir / ("xcorr_" + measure + ".csv"),
                      {"lag", "mean_correlation", "q25", "q75", "years_used", "replicates"}, hash);
        for (const auto& lc : lags) {
          w.row({std::to_string(lc.lag), format_double(lc.mean_correlation), format_double(lc.q25),
                 format_double(lc.q75), std::to_string(lc.years_used),
                 std::to_string(lc.replicates)});
        }
        w.commit();
        note("xcorr_" + measure + ": written");
      } catch (const std::exception& e) {
        fail("xcorr_" + measure, e);
      }
    }
  } else {
    note("xcorr: skipped (missing fitness table or expenditure data)");
  }

  // national fitness against the spread of its regions
  const auto tl1_file = fitness_path(cfg, Measure::citations, GeoLevel::TL1, cfg.fos_layer);
  const auto tl2_file = fitness_path(cfg, Measure::citations, GeoLevel::TL2, cfg.fos_layer);
  if (std::filesystem::exists(tl1_file) && std::filesystem::exists(tl2_file)) {
    try {
      std::vector<std::string> warnings;
      const auto nvr = national_vs_regional(read_fitness_table(tl1_file),
                                            read_fitness_table(tl2_file), geo, &warnings);
      print_warnings(warnings);
      TableWriter w(cfg.output_dir / "national_vs_regional.csv",
                    {"pearson_with_max", "pearson_with_mean", "pairs"}, hash);
      w.row({format_double(nvr.pearson_with_max), format_double(nvr.pearson_with_mean),
             std::to_string(nvr.pairs)});
      w.commit();
      note("national_vs_regional: written");
    } catch (const std::exception& e) {
      fail("national_vs_regional", e);
    }
  } else {
    note("national_vs_regional: skipped (needs fitness tables at both levels)");
  }

  // soft/hard production ratio on the layer-0 documents cube
  auto documents = load_cube(cfg, Measure::documents, cfg.geo_level, 0);
  if (!documents) {
    const auto fine = load_cube(cfg, Measure::documents, cfg.geo_level, cfg.fos_layer);
    if (fine) {
      const FosRegistry fos = FosRegistry::load(cfg.fos_registry);
      documents = aggregate_fos(*fine, fos, 0);
    }
  }
  std::set<std::string> soft;
  for (const auto& s : split(cfg.soft_sectors, ';')) {
    if (!s.empty()) soft.insert(s);
  }
  if (soft.empty()) {
    note("hard_soft: skipped (empty soft-science set)");
  } else if (documents) {
    try {
      const FosRegistry fos = FosRegistry::load(cfg.fos_registry);
      const auto ratios = hard_soft_ratio(*documents, soft, fos, cfg.year_min, cfg.year_max);
      TableWriter w(cfg.output_dir / "hard_soft.csv", {"geo", "ratio", "defined"}, hash);
      for (const auto& [gid, ratio] : ratios) {
        w.row({gid, ratio ? format_double(*ratio) : "", ratio ? "true" : "false"});
      }
      w.commit();
      note("hard_soft: written");
    } catch (const std::exception& e) {
      fail("hard_soft", e);
    }
  } else {
    note("hard_soft: skipped (no documents cube)");
  }

  // the expenditure series actually used, with provenance flags
  if (!expenditure.by_measure.empty()) {
    TableWriter w(cfg.output_dir / "expenditure_series.csv",
                  {"geo", "measure", "year", "value", "interpolated", "reconstructed"}, hash);
    for (const auto& [measure, by_geo] : expenditure.by_measure) {
      for (const auto& [gid, series] : by_geo) {
        for (const auto& [year, value] : series.values) {
          w.row({gid, measure, std::to_string(year), format_double(value),
                 series.interpolated.count(year) ? "true" : "false",
                 series.reconstructed ? "true" : "false"});
        }
      }
    }
    w.commit();
  }

  atomic_write_text(cfg.output_dir / "methods.txt", methods.str());
  std::cout << "metrics: tables written to " << cfg.output_dir.string() << "\n";
  return any_failed ? kPartial : kOk;
}

int cmd_synth(const PipelineConfig& cfg, const SynthParams& params) {
  const auto report = generate_corpus(params, cfg.output_dir);
  std::cout << "synth: " << report.documents_written << " documents, "
            << report.ranked_geos.size() << " ranked geographies, " << report.absorber_count
            << " background geographies\n"
            << "synth: design margins in=" << format_double(report.design_margin_in)
            << " out=" << format_double(report.design_margin_out) << "\n"
            << "synth: corpus written to " << cfg.output_dir.string() << "\n";
  return kOk;
}

int cmd_export(const PipelineConfig& cfg, const std::string& stage, const std::string& measure_name) {
  cfg.validate();
  const Measure measure = measure_from_string(measure_name);
  const auto cube = load_cube(cfg, measure, cfg.geo_level, cfg.fos_layer);
  if (!cube) {
    std::cerr << "error: no " << measure_name << " cube for this level/layer; run ingest first\n";
    return kFatal;
  }
  const std::string hash = cfg.hash();
  const std::string suffix = "_" + measure_name + "_" + level_tag(cfg.geo_level) + "_L" +
                             std::to_string(cfg.fos_layer) + ".csv";

  if (stage == "cube") {
    cube->write(cfg.output_dir / ("cube" + suffix), hash);
    std::cout << "export: cube" << suffix << "\n";
    return kOk;
  }

  const PipelineRun run = run_fitness_pipeline(*cube, cfg.params());
  print_warnings(run.warnings);
  TableWriter w(cfg.output_dir / (stage + suffix), {"geo", "sector", "year", "value"}, hash);
  auto emit_matrix = [&](int year, const std::vector<std::string>& geos,
                         const std::vector<std::string>& sectors, auto value_at) {
    for (std::size_t g = 0; g < geos.size(); ++g) {
      for (std::size_t s = 0; s < sectors.size(); ++s) {
        w.row({geos[g], sectors[s], std::to_string(year), format_double(value_at(g, s))});
      }
    }
  };
  if (stage == "weights") {
    for (const auto& [year, m] : run.weights) {
      emit_matrix(year, m.geos, m.sectors, [&](std::size_t g, std::size_t s) { return m.at(g, s); });
    }
  } else if (stage == "rca") {
    for (const auto& [year, m] : run.rca_raw) {
      emit_matrix(year, m.geos, m.sectors, [&](std::size_t g, std::size_t s) { return m.at(g, s); });
    }
  } else if (stage == "rca_smoothed") {
    for (const auto& [year, m] : run.rca_smoothed) {
      emit_matrix(year, m.geos, m.sectors, [&](std::size_t g, std::size_t s) { return m.at(g, s); });
    }
  } else if (stage == "m") {
    for (const auto& [year, m] : run.matrices) {
      emit_matrix(year, m.geos, m.sectors,
                  [&](std::size_t g, std::size_t s) { return m.at(g, s) ? 1.0 : 0.0; });
    }
  } else {
    std::cerr << "error: unknown stage '" << stage
              << "' (expected cube, weights, rca, rca_smoothed or m)\n";
    return kFatal;
  }
  w.commit();
  std::cout << "export: " << stage << suffix << "\n";
  return kOk;
}

}  // namespace scifit::cli
