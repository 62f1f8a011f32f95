#include "scifit/registry.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "scifit/tables.hpp"

namespace scifit {

std::string to_string(GeoLevel level) { return level == GeoLevel::TL1 ? "TL1" : "TL2"; }

GeoLevel geo_level_from_string(const std::string& s) {
  if (s == "TL1") return GeoLevel::TL1;
  if (s == "TL2") return GeoLevel::TL2;
  throw std::runtime_error("unknown territorial level '" + s + "' (expected TL1 or TL2)");
}

void GeoRegistry::add(const std::string& id, GeoInfo info) {
  if (id.empty()) throw std::runtime_error("empty geography id");
  if (!entries_.emplace(id, std::move(info)).second) {
    throw std::runtime_error("duplicate geography id '" + id + "'");
  }
}

GeoRegistry GeoRegistry::load(const std::filesystem::path& path) {
  const Table table = read_table(path);
  if (table.columns.size() != 4) {
    throw std::runtime_error("geo registry needs columns id,name,level,parent: " + path.string());
  }
  GeoRegistry reg;
  for (const auto& row : table.rows) {
    GeoInfo info;
    info.name = row[1];
    info.level = geo_level_from_string(row[2]);
    info.parent = row[3];
    reg.add(row[0], std::move(info));
  }
  // every TL2 entry must resolve to exactly one TL1 parent
  for (const auto& [id, info] : reg.entries_) {
    if (info.level == GeoLevel::TL2) {
      if (info.parent.empty()) {
        throw std::runtime_error("TL2 geography '" + id + "' has no TL1 parent");
      }
      auto it = reg.entries_.find(info.parent);
      if (it == reg.entries_.end() || it->second.level != GeoLevel::TL1) {
        throw std::runtime_error("TL2 geography '" + id + "' parent '" + info.parent +
                                 "' is not a TL1 entry");
      }
    } else if (!info.parent.empty()) {
      throw std::runtime_error("TL1 geography '" + id + "' must not have a parent");
    }
  }
  return reg;
}

const GeoInfo& GeoRegistry::info(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw std::runtime_error("unknown geography '" + id + "'");
  return it->second;
}

const std::string& GeoRegistry::tl1_parent(const std::string& id) const {
  const GeoInfo& i = info(id);
  if (i.level == GeoLevel::TL1) return id;
  return i.parent;
}

std::vector<std::string> GeoRegistry::regions_of(const std::string& tl1_id) const {
  std::vector<std::string> out;
  for (const auto& [id, info] : entries_) {
    if (info.level == GeoLevel::TL2 && info.parent == tl1_id) out.push_back(id);
  }
  return out;
}

void GeoRegistry::save(const std::filesystem::path& path, const std::string& config_hash) const {
  TableWriter w(path, {"id", "name", "level", "parent"}, config_hash);
  for (const auto& [id, info] : entries_) {
    w.row({id, info.name, to_string(info.level), info.parent});
  }
  w.commit();
}

void FosRegistry::add(const std::string& id, FosInfo info) {
  if (id.empty()) throw std::runtime_error("empty field-of-study id");
  if (info.layer < 0) throw std::runtime_error("negative layer for field-of-study '" + id + "'");
  if (!entries_.emplace(id, std::move(info)).second) {
    throw std::runtime_error("duplicate field-of-study id '" + id + "'");
  }
}

FosRegistry FosRegistry::load(const std::filesystem::path& path, LoadReport* report) {
  const Table table = read_table(path);
  if (table.columns.size() != 4) {
    throw std::runtime_error("fos registry needs columns id,name,layer,parents: " + path.string());
  }
  // first pass: collect raw entries
  std::map<std::string, FosInfo> raw;
  for (const auto& row : table.rows) {
    FosInfo info;
    info.name = row[1];
    info.layer = static_cast<int>(parse_int(row[2], "fos layer"));
    if (!row[3].empty()) {
      for (auto& p : split(row[3], ';')) {
        if (!p.empty()) info.parents.push_back(std::move(p));
      }
    }
    if (!raw.emplace(row[0], std::move(info)).second) {
      throw std::runtime_error("duplicate field-of-study id '" + row[0] + "'");
    }
  }
  // drop entries whose parent set is missing or inconsistent; repeat until
  // stable so that children of dropped entries fall out as well
  FosRegistry reg;
  std::vector<std::string> dropped;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = raw.begin(); it != raw.end();) {
      const auto& [id, info] = *it;
      bool ok = true;
      if (info.layer == 0) {
        ok = info.parents.empty();
      } else {
        ok = !info.parents.empty();
        for (const auto& p : info.parents) {
          auto pit = raw.find(p);
          if (pit == raw.end() || pit->second.layer != info.layer - 1) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) {
        dropped.push_back(id);
        it = raw.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  for (auto& [id, info] : raw) reg.add(id, std::move(info));
  if (report) report->dropped = std::move(dropped);
  return reg;
}

const FosInfo& FosRegistry::info(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw std::runtime_error("unknown field-of-study '" + id + "'");
  return it->second;
}

std::vector<std::pair<std::string, double>> FosRegistry::lift(const std::string& id,
                                                              int to_layer) const {
  const FosInfo& base = info(id);
  if (base.layer < to_layer) {
    throw std::runtime_error("cannot lift field-of-study '" + id + "' from layer " +
                             std::to_string(base.layer) + " to layer " + std::to_string(to_layer));
  }
  std::map<std::string, double> current{{id, 1.0}};
  for (int layer = base.layer; layer > to_layer; --layer) {
    std::map<std::string, double> up;
    for (const auto& [fid, weight] : current) {
      const auto& parents = info(fid).parents;
      const double share = weight / static_cast<double>(parents.size());
      for (const auto& p : parents) up[p] += share;
    }
    current = std::move(up);
  }
  return {current.begin(), current.end()};
}

std::set<std::string> FosRegistry::ancestors(const std::string& id) const {
  std::set<std::string> out;
  std::vector<std::string> stack{id};
  while (!stack.empty()) {
    const std::string cur = std::move(stack.back());
    stack.pop_back();
    for (const auto& p : info(cur).parents) {
      if (out.insert(p).second) stack.push_back(p);
    }
  }
  return out;
}

std::vector<std::string> FosRegistry::ids_at_layer(int layer) const {
  std::vector<std::string> out;
  for (const auto& [id, info] : entries_) {
    if (info.layer == layer) out.push_back(id);
  }
  return out;
}

void FosRegistry::save(const std::filesystem::path& path, const std::string& config_hash) const {
  TableWriter w(path, {"id", "name", "layer", "parents"}, config_hash);
  for (const auto& [id, info] : entries_) {
    std::ostringstream parents;
    for (std::size_t i = 0; i < info.parents.size(); ++i) {
      if (i) parents << ';';
      parents << info.parents[i];
    }
    w.row({id, info.name, std::to_string(info.layer), parents.str()});
  }
  w.commit();
}

}  // namespace scifit
