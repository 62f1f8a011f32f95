#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace scifit {

enum class GeoLevel { TL1, TL2 };

std::string to_string(GeoLevel level);
GeoLevel geo_level_from_string(const std::string& s);

struct GeoInfo {
  std::string name;
  GeoLevel level = GeoLevel::TL1;
  std::string parent;  // TL1 parent id, empty for TL1 entries
};

// Territorial classification: nations (TL1) and their regions (TL2).
class GeoRegistry {
 public:
  void add(const std::string& id, GeoInfo info);
  static GeoRegistry load(const std::filesystem::path& path);

  bool contains(const std::string& id) const { return entries_.count(id) > 0; }
  const GeoInfo& info(const std::string& id) const;
  GeoLevel level(const std::string& id) const { return info(id).level; }

  // TL1 parent of a TL2 region; a TL1 id maps to itself.
  const std::string& tl1_parent(const std::string& id) const;

  std::vector<std::string> regions_of(const std::string& tl1_id) const;
  const std::map<std::string, GeoInfo>& entries() const { return entries_; }

  void save(const std::filesystem::path& path, const std::string& config_hash = "") const;

 private:
  std::map<std::string, GeoInfo> entries_;
};

struct FosInfo {
  std::string name;
  int layer = 0;
  std::vector<std::string> parents;  // ids one layer up; empty only for layer 0
};

// Field-of-study hierarchy. Multi-parent is allowed; each parent must sit
// exactly one layer above. Entries violating that are dropped at load time.
class FosRegistry {
 public:
  void add(const std::string& id, FosInfo info);

  struct LoadReport {
    std::vector<std::string> dropped;  // ids removed for missing/invalid parents
  };
  static FosRegistry load(const std::filesystem::path& path, LoadReport* report = nullptr);

  bool contains(const std::string& id) const { return entries_.count(id) > 0; }
  const FosInfo& info(const std::string& id) const;
  int layer(const std::string& id) const { return info(id).layer; }

  // Distributes a unit weight from `id` up to `to_layer`, splitting equally
  // among parents at every step. Requires layer(id) >= to_layer.
  std::vector<std::pair<std::string, double>> lift(const std::string& id, int to_layer) const;

  // All ancestors (transitive parents), not including the entry itself.
  std::set<std::string> ancestors(const std::string& id) const;

  std::vector<std::string> ids_at_layer(int layer) const;
  const std::map<std::string, FosInfo>& entries() const { return entries_; }

  void save(const std::filesystem::path& path, const std::string& config_hash = "") const;

 private:
  std::map<std::string, FosInfo> entries_;
};

}  // namespace scifit
