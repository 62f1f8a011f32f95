#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace scifit {

enum class Measure { citations, documents };

std::string to_string(Measure m);
Measure measure_from_string(const std::string& s);

// One year of a cube, densified over the labels active in that year. Labels
// are sorted so downstream results are order-independent of ingestion.
struct YearSlice {
  int year = 0;
  std::vector<std::string> geos;
  std::vector<std::string> sectors;
  std::vector<double> counts;  // row-major geos x sectors

  double at(std::size_t g, std::size_t s) const { return counts[g * sectors.size() + s]; }
};

// Aggregated non-negative counts indexed by (geography, sector, year).
// Sparse: only touched cells are stored.
class PanelCube {
 public:
  explicit PanelCube(Measure measure = Measure::citations) : measure_(measure) {}

  Measure measure() const { return measure_; }

  void add(const std::string& geo, const std::string& sector, int year, double value);
  double value(const std::string& geo, const std::string& sector, int year) const;

  std::vector<int> years() const;
  YearSlice slice(int year) const;

  // Sum over sectors for one year, keyed by geography.
  std::map<std::string, double> geo_totals(int year) const;

  double total(int year) const;
  double total() const;
  std::size_t cell_count() const;
  bool empty() const;

  std::vector<std::string> geo_labels() const;
  std::vector<std::string> sector_labels() const;

  // Commutative-associative merge, used to combine shard-local cubes.
  void merge(const PanelCube& other);

  void write(const std::filesystem::path& path, const std::string& config_hash) const;
  static PanelCube read(const std::filesystem::path& path, Measure measure);

 private:
  friend class FractionalAggregator;

  int geo_index(const std::string& geo);
  int sector_index(const std::string& sector);

  Measure measure_;
  std::vector<std::string> geos_;
  std::vector<std::string> sectors_;
  std::unordered_map<std::string, int> geo_lookup_;
  std::unordered_map<std::string, int> sector_lookup_;
  // year -> ((geo_idx << 32) | sector_idx) -> value
  std::map<int, std::unordered_map<std::uint64_t, double>> cells_;
};

}  // namespace scifit
