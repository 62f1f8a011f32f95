#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scifit {

// Log-transformed counts for one year, dense over the year's active labels.
struct WeightMatrix {
  int year = 0;
  std::vector<std::string> geos;
  std::vector<std::string> sectors;
  std::vector<double> values;  // row-major geos x sectors

  double at(std::size_t g, std::size_t s) const { return values[g * sectors.size() + s]; }
  double& at(std::size_t g, std::size_t s) { return values[g * sectors.size() + s]; }
};

// Revealed comparative advantage. Cells in a row or column with zero marginal
// are undefined: value 0 with defined=0, never NaN.
struct RcaMatrix {
  int year = 0;
  std::vector<std::string> geos;
  std::vector<std::string> sectors;
  std::vector<double> values;
  std::vector<std::uint8_t> defined;

  double at(std::size_t g, std::size_t s) const { return values[g * sectors.size() + s]; }
  bool is_defined(std::size_t g, std::size_t s) const { return defined[g * sectors.size() + s] != 0; }
};

// Binary competitiveness filter M.
struct CompetitivenessMatrix {
  int year = 0;
  std::vector<std::string> geos;
  std::vector<std::string> sectors;
  std::vector<std::uint8_t> m;

  bool at(std::size_t g, std::size_t s) const { return m[g * sectors.size() + s] != 0; }
  std::size_t row_sum(std::size_t g) const {
    std::size_t n = 0;
    for (std::size_t s = 0; s < sectors.size(); ++s) n += m[g * sectors.size() + s];
    return n;
  }
};

}  // namespace scifit
