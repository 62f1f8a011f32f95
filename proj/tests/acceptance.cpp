// Acceptance suite: every criterion prints one pass/fail line and the binary
// exits non-zero if any fails. Oracle implementations live in
// support/oracles.hpp and are independent of the library code under test.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "scifit/fitness.hpp"
#include "scifit/ingest.hpp"
#include "scifit/metrics.hpp"
#include "scifit/pipeline.hpp"
#include "scifit/records.hpp"
#include "scifit/rng.hpp"
#include "scifit/synth.hpp"
#include "scifit/tables.hpp"
#include "scifit/transform.hpp"
#include "support/oracles.hpp"

using namespace scifit;
namespace fs = std::filesystem;

namespace {

struct Check {
  int failures = 0;
  void expect(bool ok, const std::string& detail) {
    if (!ok) {
      ++failures;
      std::cout << "    FAILED: " << detail << "\n";
    }
  }
};

int g_criteria_failed = 0;

void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("unexpected exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0 && elapsed >= budget_seconds) {
    check.expect(false, "runtime " + std::to_string(elapsed) + "s exceeds budget " +
                            std::to_string(budget_seconds) + "s");
  }
  const bool pass = check.failures == 0;
  if (!pass) ++g_criteria_failed;
  std::ostringstream time;
  time.precision(2);
  time << std::fixed << elapsed;
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << number << ": " << title << " ("
            << time.str() << "s)\n";
}

std::string binary_path() {
  const char* bin = std::getenv("SCIFIT_BIN");
  return bin ? bin : "";
}

int run_cli(const std::string& args) {
  const std::string cmd = binary_path() + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), dir).string()] = oracles::read_file(entry.path());
    }
  }
  return out;
}

CompetitivenessMatrix from_rows(const std::vector<std::vector<int>>& rows) {
  CompetitivenessMatrix m;
  m.year = 2000;
  for (std::size_t g = 0; g < rows.size(); ++g) m.geos.push_back("g" + std::to_string(g));
  for (std::size_t s = 0; s < rows[0].size(); ++s) m.sectors.push_back("s" + std::to_string(s));
  for (const auto& row : rows) {
    for (int v : row) m.m.push_back(static_cast<std::uint8_t>(v));
  }
  return m;
}

WeightMatrix make_weights(std::size_t ng, std::size_t ns, std::vector<double> v) {
  WeightMatrix w;
  w.year = 2000;
  for (std::size_t g = 0; g < ng; ++g) w.geos.push_back("g" + std::to_string(g));
  for (std::size_t s = 0; s < ns; ++s) w.sectors.push_back("s" + std::to_string(s));
  w.values = std::move(v);
  return w;
}

// planted ranking (rank 1 first) against pipeline fitness for one year; a
// geography absent from the network that year carries zero fitness, matching
// the dropped-row convention
double tau_vs_ground_truth(const std::vector<std::string>& planted,
                           const std::map<std::string, double>& fitness) {
  std::map<std::string, double> truth, got;
  for (std::size_t i = 0; i < planted.size(); ++i) {
    truth[planted[i]] = -static_cast<double>(i);  // higher is better
    const auto it = fitness.find(planted[i]);
    got[planted[i]] = it == fitness.end() ? 0.0 : it->second;
  }
  return oracles::kendall_tau(truth, got);
}

void c1_fractional_counting(Check& check) {
  GeoRegistry geo;
  geo.add("g1", {"", GeoLevel::TL1, ""});
  geo.add("g2", {"", GeoLevel::TL1, ""});
  FosRegistry fos;
  fos.add("s1", {"", 0, {}});
  fos.add("s2", {"", 0, {}});

  DocumentRecord rec;
  std::string reason;
  bool renorm = false;
  const std::string line = R"({"id":"p","year":2001,"n_citation":10,)"
                           R"("geo":[{"id":"g1","weight":0.6666666666666666},{"id":"g2","weight":0.3333333333333333}],)"
                           R"("fos":[{"id":"s1","weight":0.5},{"id":"s2","weight":0.5}]})";
  check.expect(parse_record_line(line, rec, reason, renorm), "footnote record parses");
  check.expect(std::abs(rec.geo[0].weight - 2.0 / 3.0) < 1e-12, "geo weight 2/3");
  check.expect(std::abs(rec.geo[1].weight - 1.0 / 3.0) < 1e-12, "geo weight 1/3");

  const auto agg = fractional_aggregate({rec}, geo, fos, GeoLevel::TL1, 0);
  check.expect(std::abs(agg.citations.value("g1", "s1", 2001) - 10.0 / 3.0) < 1e-12,
               "citation split g1/s1 = 10/3");
  check.expect(std::abs(agg.citations.value("g1", "s2", 2001) - 10.0 / 3.0) < 1e-12,
               "citation split g1/s2 = 10/3");
  check.expect(std::abs(agg.citations.value("g2", "s1", 2001) - 5.0 / 3.0) < 1e-12,
               "citation split g2/s1 = 5/3");
  check.expect(std::abs(agg.citations.value("g2", "s2", 2001) - 5.0 / 3.0) < 1e-12,
               "citation split g2/s2 = 5/3");

  // 1000 random multi-assignment records conserve document mass
  Rng rng(1);
  GeoRegistry big_geo;
  FosRegistry big_fos;
  for (int i = 0; i < 12; ++i) big_geo.add("G" + std::to_string(i), {"", GeoLevel::TL1, ""});
  for (int i = 0; i < 9; ++i) big_fos.add("F" + std::to_string(i), {"", 0, {}});
  std::vector<DocumentRecord> records;
  for (int i = 0; i < 1000; ++i) {
    DocumentRecord r;
    r.doc_id = "p" + std::to_string(i);
    r.year = 2000 + static_cast<int>(rng.next_below(4));
    r.citations = static_cast<long long>(rng.next_below(40));
    const int ngeo = 1 + static_cast<int>(rng.next_below(3));
    const int nfos = 1 + static_cast<int>(rng.next_below(3));
    double gsum = 0, fsum = 0;
    for (int k = 0; k < ngeo; ++k) {
      const double weight = 0.05 + rng.next_double();
      r.geo.push_back({"G" + std::to_string(rng.next_below(12)), weight});
      gsum += weight;
    }
    for (int k = 0; k < nfos; ++k) {
      const double weight = 0.05 + rng.next_double();
      r.fos.push_back({"F" + std::to_string(rng.next_below(9)), weight});
      fsum += weight;
    }
    for (auto& a : r.geo) a.weight /= gsum;
    for (auto& a : r.fos) a.weight /= fsum;
    records.push_back(std::move(r));
  }
  const auto agg2 = fractional_aggregate(records, big_geo, big_fos, GeoLevel::TL1, 0);
  check.expect(std::abs(agg2.documents.total() - 1000.0) < 1e-9 * 1000.0,
               "document mass of 1000 records conserved within 1e-9*N");
}

void c2_rca(Check& check) {
  const auto hand = rca(make_weights(2, 2, {2, 0, 0, 2}));
  check.expect(std::abs(hand.at(0, 0) - 2.0) < 1e-12 && std::abs(hand.at(1, 1) - 2.0) < 1e-12 &&
                   hand.at(0, 1) == 0.0 && hand.at(1, 0) == 0.0,
               "hand-computed 2x2 case");

  Rng rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t ng = 2 + rng.next_below(49);
    const std::size_t ns = 2 + rng.next_below(49);
    std::vector<double> v(ng * ns);
    for (auto& x : v) x = rng.next_double() * 6;
    v[0] += 0.1;
    const auto base = rca(make_weights(ng, ns, v));
    const double lambda = 0.01 + rng.next_double() * 100;
    auto scaled = v;
    for (auto& x : scaled) x *= lambda;
    const auto r = rca(make_weights(ng, ns, scaled));
    double worst = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      worst = std::max(worst, std::abs(r.values[i] - base.values[i]));
    }
    check.expect(worst < 1e-9, "scale invariance rep " + std::to_string(rep));

    const auto uniform = rca(make_weights(ng, ns, std::vector<double>(ng * ns, 1.0 + rep)));
    double udev = 0;
    for (double x : uniform.values) udev = std::max(udev, std::abs(x - 1.0));
    check.expect(udev < 1e-12, "uniform matrix gives all ones rep " + std::to_string(rep));
    if (check.failures > 0) break;
  }
}

void c3_smoothing(Check& check) {
  auto cell = [](int year, double v) {
    RcaMatrix m;
    m.year = year;
    m.geos = {"g"};
    m.sectors = {"s"};
    m.values = {v};
    m.defined = {1};
    return m;
  };
  std::vector<RcaMatrix> impulse{cell(2000, 1.0), cell(2001, 0.0), cell(2002, 0.0), cell(2003, 0.0)};
  const auto smoothed = smooth_rca(impulse, 3.0);
  check.expect(std::abs(smoothed[3].values[0] - 0.5) < 1e-12,
               "impulse weight after 3 years equals 1/2 within 1e-12");

  std::vector<RcaMatrix> constant;
  for (int y = 2000; y < 2010; ++y) constant.push_back(cell(y, 2.34));
  for (const auto& m : smooth_rca(constant, 3.0)) {
    check.expect(std::abs(m.values[0] - 2.34) < 1e-12, "constant series is a fixed point");
  }
}

void c4_fitness_complexity(Check& check) {
  Rng rng(4);
  // trajectories against the plain reference on random matrices up to 20x20
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t ng = 2 + rng.next_below(19);
    const std::size_t ns = 2 + rng.next_below(19);
    std::vector<std::vector<int>> rows;
    for (;;) {
      rows.assign(ng, std::vector<int>(ns, 0));
      for (auto& row : rows) {
        for (auto& v : row) v = rng.next_double() < 0.45 ? 1 : 0;
      }
      bool ok = true;
      for (const auto& row : rows) {
        if (std::accumulate(row.begin(), row.end(), 0) == 0) ok = false;
      }
      for (std::size_t s = 0; s < ns && ok; ++s) {
        int c = 0;
        for (std::size_t g = 0; g < ng; ++g) c += rows[g][s];
        if (c == 0) ok = false;
      }
      if (ok) break;
    }
    const int iters = 50;
    const auto ref = oracles::reference_fitness_trajectory(rows, iters);
    FitnessOptions options;
    options.max_iter = iters;
    options.tol = 0.0;
    options.rank_window = 1 << 30;
    double worst = 0, mean_dev = 0;
    fitness_complexity(from_rows(rows), options,
                       [&](int it, std::span<const double> f, std::span<const double> q) {
                         for (std::size_t g = 0; g < f.size(); ++g) {
                           worst = std::max(worst, std::abs(f[g] - ref[it - 1].fitness[g]));
                         }
                         for (std::size_t s = 0; s < q.size(); ++s) {
                           worst = std::max(worst, std::abs(q[s] - ref[it - 1].complexity[s]));
                         }
                         const double mf = std::accumulate(f.begin(), f.end(), 0.0) / f.size();
                         const double mq = std::accumulate(q.begin(), q.end(), 0.0) / q.size();
                         mean_dev = std::max({mean_dev, std::abs(mf - 1.0), std::abs(mq - 1.0)});
                       });
    check.expect(worst < 1e-9, "trajectory matches reference to 1e-9, rep " + std::to_string(rep));
    check.expect(mean_dev < 1e-12, "unit means to 1e-12, rep " + std::to_string(rep));
    if (check.failures > 0) return;
  }

  // 100 random nested instances: supersets never rank below subsets
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t ng = 3 + rng.next_below(10);
    const std::size_t ns = 3 + rng.next_below(12);
    std::vector<std::size_t> lengths(ng);
    for (auto& l : lengths) l = 1 + rng.next_below(ns);
    std::sort(lengths.rbegin(), lengths.rend());
    lengths[0] = ns;
    std::vector<std::vector<int>> rows(ng, std::vector<int>(ns, 0));
    for (std::size_t g = 0; g < ng; ++g) {
      for (std::size_t s = 0; s < lengths[g]; ++s) rows[g][s] = 1;
    }
    const auto result = fitness_complexity(from_rows(rows));
    for (std::size_t a = 0; a < ng; ++a) {
      for (std::size_t b = a + 1; b < ng; ++b) {
        if (lengths[a] > lengths[b]) {
          check.expect(result.fitness.at("g" + std::to_string(a)) >=
                           result.fitness.at("g" + std::to_string(b)) - 1e-12,
                       "superset ranks at least as high, rep " + std::to_string(rep));
        }
      }
    }
    if (check.failures > 0) return;
  }

  // permutation equivariance, compared at a fixed iterate so the two runs
  // cannot stop at different points
  FitnessOptions fixed;
  fixed.max_iter = 80;
  fixed.tol = 0.0;
  fixed.rank_window = 1 << 30;
  const std::vector<std::vector<int>> rows{{1, 1, 1, 1}, {1, 1, 0, 0}, {0, 1, 1, 0}, {1, 0, 0, 0}};
  const auto base = fitness_complexity(from_rows(rows), fixed);
  std::vector<std::vector<int>> permuted{{0, 1, 1, 0}, {1, 0, 0, 0}, {1, 1, 1, 1}, {1, 1, 0, 0}};
  auto pm = from_rows(permuted);
  pm.geos = {"g2", "g3", "g0", "g1"};
  const auto perm = fitness_complexity(pm, fixed);
  for (const auto& [geo, f] : base.fitness) {
    const double other = perm.fitness.at(geo);
    check.expect(std::abs(other - f) <= 1e-12 * std::max({std::abs(f), std::abs(other), 1.0}),
                 "permutation equivariance at " + geo);
  }
}

void c5_convergence_policy(Check& check) {
  std::vector<std::vector<int>> rows(10, std::vector<int>(10, 0));
  for (std::size_t g = 0; g < 10; ++g) {
    for (std::size_t s = 0; s + g < 10; ++s) rows[g][s] = 1;
  }
  const auto result = fitness_complexity(from_rows(rows));
  check.expect(result.converged, "run reports convergence");
  check.expect(result.criterion == StopCriterion::rank_stable,
               "criterion is rank stability, got " + to_string(result.criterion));
}

void c6_gini(Check& check) {
  check.expect(std::abs(gini({3, 3, 3})) < 1e-12, "equal values give zero");
  for (std::size_t n : {2, 5, 20, 100}) {
    std::vector<double> v(n, 0.0);
    v.back() = 7.0;
    check.expect(std::abs(gini(v) - (1.0 - 1.0 / n)) < 1e-12,
                 "single holder gives 1 - 1/n for n=" + std::to_string(n));
  }
  Rng rng(6);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> v(2 + rng.next_below(30));
    for (auto& x : v) x = rng.next_double() * 50;
    v[0] += 0.001;
    const double got = gini(v);
    const double want = oracles::gini_pairwise(v);
    if (std::abs(got - want) >= 1e-10) {
      check.expect(false, "pairwise oracle mismatch at rep " + std::to_string(rep));
      return;
    }
  }
  // weighted variant: reduction and population-split invariance
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> v(3 + rng.next_below(12));
    for (auto& x : v) x = rng.next_double() * 9;
    v[0] += 0.01;
    check.expect(std::abs(weighted_gini(v, std::vector<double>(v.size(), 3.0)) - gini(v)) < 1e-12,
                 "equal weights reduce to unweighted");
    std::vector<double> v2 = v, w2(v.size(), 1.0);
    v2.push_back(v[0]);
    w2[0] = 0.5;
    w2.push_back(0.5);
    check.expect(std::abs(weighted_gini(v2, w2) - gini(v)) < 1e-12, "population split invariance");
    if (check.failures > 0) return;
  }
}

void c7_cross_correlation(Check& check) {
  const int delta0 = 3;
  FitnessTable fitness;
  std::map<std::string, ExpenditureSeries> expenditure;
  Rng rng(7);
  for (int g = 0; g < 10; ++g) {
    const std::string geo = "g" + std::to_string(g);
    ExpenditureSeries s;
    s.geo = geo;
    for (int year = 2000; year < 2015; ++year) {
      const double f = 0.3 + rng.next_double();
      fitness[geo][year] = f;
      s.values[year + delta0] = 2.5 * f + 0.7;
    }
    expenditure.emplace(geo, std::move(s));
  }
  const auto a = lagged_xcorr(fitness, expenditure, -5, 5, 300, 1234);
  bool peak_found = false;
  for (const auto& lc : a) {
    if (lc.lag == delta0) {
      peak_found = true;
      check.expect(std::abs(lc.mean_correlation - 1.0) <= 1e-9,
                   "affine relation recovers correlation 1 at the constructed lag");
    }
  }
  check.expect(peak_found, "constructed lag present in the output");

  const auto b = lagged_xcorr(fitness, expenditure, -5, 5, 300, 1234);
  check.expect(a.size() == b.size(), "same lags across reruns");
  for (std::size_t i = 0; i < a.size(); ++i) {
    check.expect(a[i].q25 == b[i].q25 && a[i].q75 == b[i].q75 &&
                     a[i].mean_correlation == b[i].mean_correlation,
                 "identical bands for the same seed at lag " + std::to_string(a[i].lag));
  }
}

void c8_end_to_end(Check& check) {
  if (binary_path().empty()) {
    check.expect(false, "SCIFIT_BIN not set");
    return;
  }
  const auto dir = oracles::make_temp_dir("acceptance_e2e");
  const auto corpus = dir / "corpus";

  // noise-free run through the real executable
  check.expect(run_cli("synth -o " + corpus.string() + " --geos 30 --sectors 40 --seed 11") == 0,
               "synth exits cleanly");
  const std::string cfg = (corpus / "synth.cfg").string();
  check.expect(run_cli("ingest -c " + cfg) == 0, "ingest exits cleanly");
  check.expect(run_cli("fitness -c " + cfg) == 0, "fitness exits cleanly");

  std::vector<std::string> planted;
  for (const auto& row : read_table(corpus / "ground_truth.csv").rows) planted.push_back(row[1]);

  const Table table = read_table(corpus / "out" / "fitness_TL1_L0.csv");
  std::map<int, std::map<std::string, double>> by_year;
  for (const auto& row : table.rows) {
    by_year[static_cast<int>(parse_int(row[1], "year"))][row[0]] =
        parse_double(row[2], "fitness");
  }
  check.expect(!by_year.empty(), "fitness table has rows");
  for (const auto& [year, fitness] : by_year) {
    const double tau = tau_vs_ground_truth(planted, fitness);
    check.expect(tau == 1.0, "noise-free Kendall tau is exactly 1 in year " + std::to_string(year) +
                                 " (got " + format_double(tau) + ")");
  }

  // 10% noise, 20 seeds, through the library pipeline (same code path the
  // executable drives)
  double tau_sum = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto noisy_dir = dir / ("noisy_" + std::to_string(seed));
    SynthParams params;
    params.n_geos = 30;
    params.n_sectors = 40;
    params.noise = 0.10;
    params.seed = seed;
    generate_corpus(params, noisy_dir);
    const GeoRegistry geo = GeoRegistry::load(noisy_dir / "geo_registry.csv");
    const FosRegistry fos = FosRegistry::load(noisy_dir / "fos_registry.csv");
    std::ifstream in(noisy_dir / "documents.jsonl");
    const auto records = read_documents(in);
    auto agg = fractional_aggregate(records, geo, fos, GeoLevel::TL1, 0);
    const PipelineRun run = run_fitness_pipeline(agg.citations, {});
    const auto& last = run.results.rbegin()->second;
    std::vector<std::string> planted_noisy;
    for (const auto& row : read_table(noisy_dir / "ground_truth.csv").rows) {
      planted_noisy.push_back(row[1]);
    }
    tau_sum += tau_vs_ground_truth(planted_noisy, last.fitness);
  }
  const double tau_avg = tau_sum / 20.0;
  check.expect(tau_avg >= 0.9,
               "average Kendall tau over 20 noisy seeds >= 0.9 (got " + format_double(tau_avg) + ")");
  fs::remove_all(dir);
}

void c9_determinism(Check& check) {
  if (binary_path().empty()) {
    check.expect(false, "SCIFIT_BIN not set");
    return;
  }
  const auto dir = oracles::make_temp_dir("acceptance_det");
  const auto corpus = dir / "corpus";
  check.expect(run_cli("synth -o " + corpus.string() + " --geos 12 --sectors 18 --seed 3 --noise 0.05") == 0,
               "synth exits cleanly");
  const std::string cfg = (corpus / "synth.cfg").string();
  for (const auto& run_dir : {"run1", "run2"}) {
    const std::string out = (dir / run_dir).string();
    check.expect(run_cli("ingest -c " + cfg + " -o " + out) == 0, "ingest exits cleanly");
    check.expect(run_cli("fitness -c " + cfg + " -o " + out) == 0, "fitness exits cleanly");
    check.expect(run_cli("metrics -c " + cfg + " -o " + out) == 0, "metrics exits cleanly");
  }
  const auto a = dir_bytes(dir / "run1");
  const auto b = dir_bytes(dir / "run2");
  check.expect(a.size() == b.size(), "same file set across runs");
  for (const auto& [name, bytes] : a) {
    if (!b.count(name) || b.at(name) != bytes) {
      check.expect(false, "file differs between runs: " + name);
    }
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::cout << "acceptance suite\n";
  criterion(1, "fractional counting splits and conserves mass", 1.0, c1_fractional_counting);
  criterion(2, "rca invariances and hand-computed case", 1.0, c2_rca);
  criterion(3, "smoothing half-life and fixed point", 0.0, c3_smoothing);
  criterion(4, "fitness-complexity matches the reference map", 10.0, c4_fitness_complexity);
  criterion(5, "decaying instance stops via rank stability", 0.0, c5_convergence_policy);
  criterion(6, "gini oracles and weighted reductions", 0.0, c6_gini);
  criterion(7, "cross-correlation peak and reproducible bands", 0.0, c7_cross_correlation);
  criterion(8, "end-to-end planted ranking recovery", 60.0, c8_end_to_end);
  criterion(9, "byte-identical pipeline reruns", 0.0, c9_determinism);
  if (g_criteria_failed > 0) {
    std::cout << g_criteria_failed << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
