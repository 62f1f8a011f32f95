#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace scifit {

// Shortest decimal form that parses back to the same double. Keeps exports
// lossless and byte-stable across runs.
std::string format_double(double v);

double parse_double(std::string_view s, std::string_view context);
long long parse_int(std::string_view s, std::string_view context);

std::vector<std::string> split(std::string_view line, char sep);

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t v);

// Writes a delimited table atomically (temp file + rename). Header carries the
// column names and the hash of the configuration that produced the file:
//   # config_hash=<hex>
//   col_a,col_b,...
class TableWriter {
 public:
  TableWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
              std::string_view config_hash);
  ~TableWriter();

  TableWriter(const TableWriter&) = delete;
  TableWriter& operator=(const TableWriter&) = delete;

  void row(const std::vector<std::string>& cells);
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  std::size_t n_columns_;
  bool committed_ = false;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string config_hash;  // empty when the file carries none
};

Table read_table(const std::filesystem::path& path);

void atomic_write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace scifit
