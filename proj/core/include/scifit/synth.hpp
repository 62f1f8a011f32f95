#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace scifit {

struct SynthParams {
  int n_geos = 30;     // ranked geographies carrying the planted nested structure
  int n_sectors = 40;  // must exceed n_geos; the surplus becomes background niches
  int year_min = 2000;
  int year_max = 2004;
  double noise = 0.0;  // per-cell perturbation probability
  std::uint64_t seed = 1;

  // intensity profile: top geography's per-sector citations, decaying
  // geometrically to 1 for the weakest
  long long top_citations = 1500;
  long long niche_citations = 20'000'000;
  double target_margin = 1.25;  // designed distance of RCA from the threshold
};

struct SynthReport {
  std::vector<std::string> ranked_geos;  // strongest first; the ground truth
  std::vector<std::string> background_geos;
  int absorber_count = 0;
  std::size_t documents_written = 0;
  double design_margin_in = 0;   // min in-support RCA of the noise-free design
  double design_margin_out = 0;  // max RCA outside the planted structure
};

// Writes a synthetic corpus with a planted, strictly nested competitiveness
// structure: documents.jsonl (ingest format), geo_registry.csv,
// fos_registry.csv, ground_truth.csv (rank,geo) and synth.cfg (a pipeline
// configuration wired to the generated files).
//
// Ranked geography g is competitive exactly in real sectors {g..n_geos-1}; a
// pool of background geographies holds the surplus weight (in niche sectors)
// that keeps every planted RCA strictly away from the threshold. An RCA
// filter cannot make a nested matrix out of the ranked rows alone: the top
// row would cover every produced sector and forces boundary cells, so the
// slack has to live outside the ranking.
SynthReport generate_corpus(const SynthParams& params, const std::filesystem::path& out_dir);

}  // namespace scifit
