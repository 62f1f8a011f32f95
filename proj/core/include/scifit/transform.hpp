#pragma once

#include <vector>

#include "scifit/matrices.hpp"
#include "scifit/panel.hpp"

namespace scifit {

// w = log(1 + c), elementwise. Zero counts map to exactly zero weight.
WeightMatrix log_counts(const YearSlice& slice);

// RCA_gs = (w_gs / sum_s' w_gs') / (sum_g' w_g's / sum_g's' w_g's').
// Rows and columns with zero marginal are masked rather than divided.
// Throws on an all-zero matrix.
RcaMatrix rca(const WeightMatrix& w);

// Exponential smoothing per (geo, sector) cell across years with the given
// half-life. The first observation passes through unchanged; across a gap of
// d years the old state decays by 2^(-d/half_life). Cells undefined in a year
// stay undefined in the smoothed output.
std::vector<RcaMatrix> smooth_rca(const std::vector<RcaMatrix>& series, double half_life_years);

// M_gs = 1 iff RCA_gs >= threshold (masked cells are 0).
CompetitivenessMatrix threshold(const RcaMatrix& rca, double thr = 1.0);

}  // namespace scifit
