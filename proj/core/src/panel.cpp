#include "scifit/panel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "scifit/tables.hpp"

namespace scifit {

std::string to_string(Measure m) { return m == Measure::citations ? "citations" : "documents"; }

Measure measure_from_string(const std::string& s) {
  if (s == "citations") return Measure::citations;
  if (s == "documents") return Measure::documents;
  throw std::runtime_error("unknown measure '" + s + "'");
}

int PanelCube::geo_index(const std::string& geo) {
  auto [it, inserted] = geo_lookup_.try_emplace(geo, static_cast<int>(geos_.size()));
  if (inserted) geos_.push_back(geo);
  return it->second;
}

int PanelCube::sector_index(const std::string& sector) {
  auto [it, inserted] = sector_lookup_.try_emplace(sector, static_cast<int>(sectors_.size()));
  if (inserted) sectors_.push_back(sector);
  return it->second;
}

void PanelCube::add(const std::string& geo, const std::string& sector, int year, double value) {
  if (value < 0 || !std::isfinite(value)) {
    throw std::runtime_error("panel cube values must be finite and non-negative");
  }
  if (value == 0) return;
  const std::uint64_t key =
      (static_cast<std::uint64_t>(geo_index(geo)) << 32) | static_cast<std::uint32_t>(sector_index(sector));
  cells_[year][key] += value;
}

double PanelCube::value(const std::string& geo, const std::string& sector, int year) const {
  const auto git = geo_lookup_.find(geo);
  const auto sit = sector_lookup_.find(sector);
  const auto yit = cells_.find(year);
  if (git == geo_lookup_.end() || sit == sector_lookup_.end() || yit == cells_.end()) return 0;
  const std::uint64_t key =
      (static_cast<std::uint64_t>(git->second) << 32) | static_cast<std::uint32_t>(sit->second);
  const auto cit = yit->second.find(key);
  return cit == yit->second.end() ? 0 : cit->second;
}

std::vector<int> PanelCube::years() const {
  std::vector<int> out;
  out.reserve(cells_.size());
  for (const auto& [year, slice] : cells_) {
    if (!slice.empty()) out.push_back(year);
  }
  return out;
}

YearSlice PanelCube::slice(int year) const {
  YearSlice out;
  out.year = year;
  const auto yit = cells_.find(year);
  if (yit == cells_.end()) return out;

  std::set<int> geo_ids, sector_ids;
  for (const auto& [key, value] : yit->second) {
    if (value == 0) continue;
    geo_ids.insert(static_cast<int>(key >> 32));
    sector_ids.insert(static_cast<int>(key & 0xffffffffu));
  }
  for (int g : geo_ids) out.geos.push_back(geos_[g]);
  for (int s : sector_ids) out.sectors.push_back(sectors_[s]);
  std::sort(out.geos.begin(), out.geos.end());
  std::sort(out.sectors.begin(), out.sectors.end());

  std::unordered_map<std::string, std::size_t> gpos, spos;
  for (std::size_t i = 0; i < out.geos.size(); ++i) gpos[out.geos[i]] = i;
  for (std::size_t i = 0; i < out.sectors.size(); ++i) spos[out.sectors[i]] = i;

  out.counts.assign(out.geos.size() * out.sectors.size(), 0.0);
  for (const auto& [key, value] : yit->second) {
    if (value == 0) continue;
    const auto& geo = geos_[key >> 32];
    const auto& sector = sectors_[key & 0xffffffffu];
    out.counts[gpos[geo] * out.sectors.size() + spos[sector]] += value;
  }
  return out;
}

std::map<std::string, double> PanelCube::geo_totals(int year) const {
  std::map<std::string, double> out;
  const auto yit = cells_.find(year);
  if (yit == cells_.end()) return out;
  for (const auto& [key, value] : yit->second) out[geos_[key >> 32]] += value;
  return out;
}

double PanelCube::total(int year) const {
  double sum = 0;
  const auto yit = cells_.find(year);
  if (yit == cells_.end()) return 0;
  for (const auto& [key, value] : yit->second) sum += value;
  return sum;
}

double PanelCube::total() const {
  double sum = 0;
  for (const auto& [year, slice] : cells_) {
    for (const auto& [key, value] : slice) sum += value;
  }
  return sum;
}

std::size_t PanelCube::cell_count() const {
  std::size_t n = 0;
  for (const auto& [year, slice] : cells_) n += slice.size();
  return n;
}

bool PanelCube::empty() const { return cell_count() == 0; }

std::vector<std::string> PanelCube::geo_labels() const {
  std::vector<std::string> out = geos_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> PanelCube::sector_labels() const {
  std::vector<std::string> out = sectors_;
  std::sort(out.begin(), out.end());
  return out;
}

void PanelCube::merge(const PanelCube& other) {
  if (measure_ != other.measure_) throw std::runtime_error("cannot merge cubes of different measures");
  for (const auto& [year, slice] : other.cells_) {
    for (const auto& [key, value] : slice) {
      add(other.geos_[key >> 32], other.sectors_[key & 0xffffffffu], year, value);
    }
  }
}

void PanelCube::write(const std::filesystem::path& path, const std::string& config_hash) const {
  TableWriter w(path, {"geo", "sector", "year", "value"}, config_hash);
  for (const auto& [year, _] : cells_) {
    const YearSlice s = slice(year);
    for (std::size_t g = 0; g < s.geos.size(); ++g) {
      for (std::size_t j = 0; j < s.sectors.size(); ++j) {
        const double v = s.at(g, j);
        if (v != 0) {
          w.row({s.geos[g], s.sectors[j], std::to_string(year), format_double(v)});
        }
      }
    }
  }
  w.commit();
}

PanelCube PanelCube::read(const std::filesystem::path& path, Measure measure) {
  const Table table = read_table(path);
  if (table.columns != std::vector<std::string>{"geo", "sector", "year", "value"}) {
    throw std::runtime_error("unexpected cube columns in " + path.string());
  }
  PanelCube cube(measure);
  for (const auto& row : table.rows) {
    cube.add(row[0], row[1], static_cast<int>(parse_int(row[2], "cube year")),
             parse_double(row[3], "cube value"));
  }
  return cube;
}

}  // namespace scifit
