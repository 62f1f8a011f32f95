#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scifit/matrices.hpp"
#include "scifit/registry.hpp"

namespace scifit {

struct FitnessOptions {
  int max_iter = 1000;
  double tol = 1e-9;
  // stop once the geography ranking has been unchanged this many iterations;
  // needed because on some matrices weak fitness values sink toward zero
  // without ever meeting the tolerance while the ranking is long settled
  int rank_window = 50;
};

enum class StopCriterion { tolerance, rank_stable, max_iterations };

std::string to_string(StopCriterion c);

struct FitnessResult {
  int year = 0;
  std::map<std::string, double> fitness;     // dropped geographies carry 0
  std::map<std::string, double> complexity;  // dropped sectors are absent
  int iterations_used = 0;
  bool converged = false;
  StopCriterion criterion = StopCriterion::max_iterations;
  std::string reference_geo;  // set by normalize_fitness
  bool reference_fallback = false;
  std::vector<std::string> dropped_geos;
  std::vector<std::string> dropped_sectors;
  long floor_events = 0;  // fitness values clamped away from zero during iteration
};

// Observer receives the mean-normalized F and Q after each iteration, indexed
// like the pruned matrix the solver works on.
using IterationObserver =
    std::function<void(int iteration, std::span<const double> fitness, std::span<const double> complexity)>;

// Fixed point of the fitness-complexity map on a binary matrix:
//   F~_g = sum_s M_gs Q_s        F_g = F~_g / <F~>
//   Q~_s = 1 / sum_g M_gs / F_g  Q_s = Q~_s / <Q~>
// starting from all ones. All-zero rows and columns are pruned before
// iterating; pruned geographies are reported with fitness 0.
FitnessResult fitness_complexity(const CompetitivenessMatrix& m, const FitnessOptions& options = {},
                                 const IterationObserver& observer = {});

// Rescales fitness so the reference geography sits at 1. Falls back to the
// highest-fitness geography (flagged in the result) when the reference is
// absent or has zero fitness.
FitnessResult normalize_fitness(FitnessResult result, const std::string& reference_geo);

// Fitness restricted to the sectors descending from one layer-0 root.
FitnessResult sector_fitness(const CompetitivenessMatrix& m_fine, const FosRegistry& fos,
                             const std::string& root, const FitnessOptions& options = {});

// Layer-0 sectors ordered by the mean complexity of their layer-1 children
// (descending, ties lexicographic). Roots without children in the result are
// skipped with a warning.
std::vector<std::pair<std::string, double>> sector_complexity_order(
    const FitnessResult& layer1_result, const FosRegistry& fos,
    std::vector<std::string>* warnings = nullptr);

}  // namespace scifit
