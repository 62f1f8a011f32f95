#include "scifit/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace scifit {

std::string to_string(StopCriterion c) {
  switch (c) {
    case StopCriterion::tolerance: return "tolerance";
    case StopCriterion::rank_stable: return "rank_stable";
    case StopCriterion::max_iterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

void mean_normalize(std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (!(mean > 0) || !std::isfinite(mean)) {
    throw std::runtime_error("fitness-complexity iteration broke down: non-positive mean");
  }
  for (double& x : v) x /= mean;
}

std::vector<std::size_t> ranking_of(const std::vector<double>& fitness) {
  std::vector<std::size_t> order(fitness.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
  return order;
}

}  // namespace

FitnessResult fitness_complexity(const CompetitivenessMatrix& m, const FitnessOptions& options,
                                 const IterationObserver& observer) {
  const std::size_t ng = m.geos.size();
  const std::size_t ns = m.sectors.size();
  for (std::uint8_t v : m.m) {
    if (v != 0 && v != 1) throw std::runtime_error("competitiveness matrix must be binary");
  }
  if (options.max_iter < 1) throw std::runtime_error("max_iter must be at least 1");

  FitnessResult result;
  result.year = m.year;

  // prune empty rows and columns before iterating; Q~ would otherwise divide
  // by sum 1/F over an empty set or F over an inactive geography
  std::vector<std::size_t> geo_keep, sector_keep;
  for (std::size_t g = 0; g < ng; ++g) {
    bool any = false;
    for (std::size_t s = 0; s < ns && !any; ++s) any = m.at(g, s);
    if (any) geo_keep.push_back(g);
    else result.dropped_geos.push_back(m.geos[g]);
  }
  for (std::size_t s = 0; s < ns; ++s) {
    bool any = false;
    for (std::size_t g = 0; g < ng && !any; ++g) any = m.at(g, s);
    if (any) sector_keep.push_back(s);
    else result.dropped_sectors.push_back(m.sectors[s]);
  }
  const std::size_t kg = geo_keep.size();
  const std::size_t ks = sector_keep.size();
  if (kg < 2 || ks < 2) throw std::runtime_error("degenerate network: fewer than 2 active geographies or sectors");

  std::vector<std::uint8_t> mm(kg * ks);
  for (std::size_t g = 0; g < kg; ++g) {
    for (std::size_t s = 0; s < ks; ++s) {
      mm[g * ks + s] = m.at(geo_keep[g], sector_keep[s]) ? 1 : 0;
    }
  }

  constexpr double kFloor = std::numeric_limits<double>::min();
  std::vector<double> fitness(kg, 1.0), complexity(ks, 1.0);
  std::vector<double> prev_f, prev_q;
  std::vector<std::size_t> prev_rank;
  int stable_iters = 0;
  int iteration = 0;
  result.criterion = StopCriterion::max_iterations;

  for (iteration = 1; iteration <= options.max_iter; ++iteration) {
    prev_f = fitness;
    prev_q = complexity;

    for (std::size_t g = 0; g < kg; ++g) {
      double acc = 0;
      for (std::size_t s = 0; s < ks; ++s) {
        if (mm[g * ks + s]) acc += complexity[s];
      }
      fitness[g] = acc;
    }
    mean_normalize(fitness);
    for (double& f : fitness) {
      if (f < kFloor) {
        f = kFloor;
        ++result.floor_events;
      }
    }

    for (std::size_t s = 0; s < ks; ++s) {
      double acc = 0;
      for (std::size_t g = 0; g < kg; ++g) {
        if (mm[g * ks + s]) acc += 1.0 / fitness[g];
      }
      complexity[s] = 1.0 / acc;
    }
    mean_normalize(complexity);
    for (double& q : complexity) {
      if (q < kFloor) {
        q = kFloor;
        ++result.floor_events;
      }
    }

    if (observer) observer(iteration, fitness, complexity);

    // convergence on the log scale; both vectors are kept at unit mean so the
    // comparison is scale-free
    double delta = 0;
    for (std::size_t g = 0; g < kg; ++g) delta = std::max(delta, std::abs(std::log(fitness[g] / prev_f[g])));
    for (std::size_t s = 0; s < ks; ++s) delta = std::max(delta, std::abs(std::log(complexity[s] / prev_q[s])));
    if (delta < options.tol) {
      result.converged = true;
      result.criterion = StopCriterion::tolerance;
      break;
    }

    auto rank = ranking_of(fitness);
    if (rank == prev_rank) {
      if (++stable_iters >= options.rank_window) {
        result.converged = true;
        result.criterion = StopCriterion::rank_stable;
        break;
      }
    } else {
      stable_iters = 0;
      prev_rank = std::move(rank);
    }
  }
  result.iterations_used = std::min(iteration, options.max_iter);

  for (std::size_t g = 0; g < kg; ++g) result.fitness[m.geos[geo_keep[g]]] = fitness[g];
  for (const auto& geo : result.dropped_geos) result.fitness[geo] = 0.0;
  for (std::size_t s = 0; s < ks; ++s) result.complexity[m.sectors[sector_keep[s]]] = complexity[s];
  return result;
}

FitnessResult normalize_fitness(FitnessResult result, const std::string& reference_geo) {
  auto it = result.fitness.find(reference_geo);
  if (it != result.fitness.end() && it->second > 0) {
    result.reference_geo = reference_geo;
  } else {
    if (result.fitness.empty()) throw std::runtime_error("cannot normalize an empty fitness result");
    auto best = std::max_element(
        result.fitness.begin(), result.fitness.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    if (best->second <= 0) throw std::runtime_error("cannot normalize: all fitness values are zero");
    result.reference_geo = best->first;
    result.reference_fallback = true;
  }
  const double ref = result.fitness.at(result.reference_geo);
  for (auto& [geo, f] : result.fitness) f /= ref;
  return result;
}

FitnessResult sector_fitness(const CompetitivenessMatrix& m_fine, const FosRegistry& fos,
                             const std::string& root, const FitnessOptions& options) {
  if (fos.layer(root) != 0) throw std::runtime_error("sector fitness root '" + root + "' is not layer 0");

  CompetitivenessMatrix restricted;
  restricted.year = m_fine.year;
  restricted.geos = m_fine.geos;
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < m_fine.sectors.size(); ++s) {
    const auto& id = m_fine.sectors[s];
    if (!fos.contains(id)) continue;
    if (id == root || fos.ancestors(id).count(root)) {
      keep.push_back(s);
      restricted.sectors.push_back(id);
    }
  }
  if (restricted.sectors.empty()) {
    throw std::runtime_error("no sectors descend from root '" + root + "'");
  }
  restricted.m.resize(restricted.geos.size() * restricted.sectors.size());
  for (std::size_t g = 0; g < restricted.geos.size(); ++g) {
    for (std::size_t j = 0; j < keep.size(); ++j) {
      restricted.m[g * restricted.sectors.size() + j] = m_fine.at(g, keep[j]) ? 1 : 0;
    }
  }
  return fitness_complexity(restricted, options);
}

std::vector<std::pair<std::string, double>> sector_complexity_order(
    const FitnessResult& layer1_result, const FosRegistry& fos, std::vector<std::string>* warnings) {
  std::map<std::string, std::pair<double, std::size_t>> acc;  // root -> (sum, count)
  for (const auto& [sector, q] : layer1_result.complexity) {
    if (!fos.contains(sector) || fos.layer(sector) != 1) continue;
    for (const auto& parent : fos.info(sector).parents) {
      auto& [sum, count] = acc[parent];
      sum += q;
      ++count;
    }
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& root : fos.ids_at_layer(0)) {
    auto it = acc.find(root);
    if (it == acc.end()) {
      if (warnings) warnings->push_back("root sector '" + root + "' has no children in the result");
      continue;
    }
    out.emplace_back(root, it->second.first / static_cast<double>(it->second.second));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace scifit
