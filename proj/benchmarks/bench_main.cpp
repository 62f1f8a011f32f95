#include <benchmark/benchmark.h>

#include <sstream>
#include <string>
#include <vector>

#include "scifit/fitness.hpp"
#include "scifit/ingest.hpp"
#include "scifit/metrics.hpp"
#include "scifit/records.hpp"
#include "scifit/rng.hpp"
#include "scifit/transform.hpp"

namespace {

using namespace scifit;

std::string make_corpus(std::size_t records) {
  Rng rng(42);
  std::ostringstream os;
  for (std::size_t i = 0; i < records; ++i) {
    DocumentRecord r;
    r.doc_id = "doc" + std::to_string(i);
    r.year = 2000 + static_cast<int>(rng.next_below(10));
    r.citations = static_cast<long long>(rng.next_below(200));
    const double w = 0.2 + 0.6 * rng.next_double();
    r.geo = {{"G" + std::to_string(rng.next_below(50)), w},
             {"G" + std::to_string(rng.next_below(50)), 1.0 - w}};
    r.fos = {{"F" + std::to_string(rng.next_below(30)), 0.5},
             {"F" + std::to_string(rng.next_below(30)), 0.5}};
    os << to_json_line(r) << "\n";
  }
  return os.str();
}

void bench_parse_and_aggregate(benchmark::State& state) {
  const std::string corpus = make_corpus(static_cast<std::size_t>(state.range(0)));
  GeoRegistry geo;
  for (int i = 0; i < 50; ++i) geo.add("G" + std::to_string(i), {"", GeoLevel::TL1, ""});
  FosRegistry fos;
  for (int i = 0; i < 30; ++i) fos.add("F" + std::to_string(i), {"", 0, {}});
  for (auto _ : state) {
    std::istringstream in(corpus);
    DocumentReader reader(in);
    FractionalAggregator agg(geo, fos, GeoLevel::TL1, 0);
    DocumentRecord rec;
    while (reader.next(rec)) agg.add(rec);
    benchmark::DoNotOptimize(agg.citations().total());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_parse_and_aggregate)->Arg(1000)->Arg(10000);

WeightMatrix random_weights(std::size_t ng, std::size_t ns) {
  Rng rng(7);
  WeightMatrix w;
  w.year = 2000;
  for (std::size_t g = 0; g < ng; ++g) w.geos.push_back("g" + std::to_string(g));
  for (std::size_t s = 0; s < ns; ++s) w.sectors.push_back("s" + std::to_string(s));
  w.values.resize(ng * ns);
  for (auto& v : w.values) v = rng.next_double() * 8;
  return w;
}

void bench_rca(benchmark::State& state) {
  const auto w = random_weights(static_cast<std::size_t>(state.range(0)),
                                static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rca(w));
  }
}
BENCHMARK(bench_rca)->Arg(100)->Arg(600);

void bench_fitness_complexity(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(11);
  CompetitivenessMatrix m;
  m.year = 2000;
  for (std::size_t g = 0; g < n; ++g) m.geos.push_back("g" + std::to_string(g));
  for (std::size_t s = 0; s < n; ++s) m.sectors.push_back("s" + std::to_string(s));
  m.m.resize(n * n);
  for (std::size_t g = 0; g < n; ++g) {
    // nested-plus-noise fill, the regime the solver sees in practice
    for (std::size_t s = 0; s < n; ++s) {
      m.m[g * n + s] = (s < n - g || rng.next_double() < 0.05) ? 1 : 0;
    }
  }
  FitnessOptions options;
  options.max_iter = 200;
  options.tol = 0;
  options.rank_window = 1 << 30;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fitness_complexity(m, options));
  }
}
BENCHMARK(bench_fitness_complexity)->Arg(50)->Arg(200)->Arg(600);

void bench_gini(benchmark::State& state) {
  Rng rng(13);
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (auto& v : values) v = rng.next_double() * 100;
  for (auto _ : state) {
    auto copy = values;
    benchmark::DoNotOptimize(gini(std::move(copy)));
  }
}
BENCHMARK(bench_gini)->Arg(500)->Arg(5000);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
