#include "scifit/tables.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace scifit {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view context) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("invalid number '" + std::string(s) + "' in " + std::string(context));
  }
  return v;
}

long long parse_int(std::string_view s, std::string_view context) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("invalid integer '" + std::string(s) + "' in " + std::string(context));
  }
  return v;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

TableWriter::TableWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
                         std::string_view config_hash)
    : path_(path), tmp_path_(path.string() + ".tmp"), n_columns_(columns.size()) {
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot open for writing: " + tmp_path_.string());
  out_ << "# config_hash=" << config_hash << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << "\n";
}

TableWriter::~TableWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_path_, ec);
  }
}

void TableWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_) {
    throw std::logic_error("row width mismatch writing " + path_.string());
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << "\n";
}

void TableWriter::commit() {
  out_.flush();
  if (!out_) throw std::runtime_error("write failed: " + tmp_path_.string());
  out_.close();
  std::filesystem::rename(tmp_path_, path_);
  committed_ = true;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  Table table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("config_hash=");
      if (pos != std::string::npos) table.config_hash = line.substr(pos + 12);
      continue;
    }
    auto cells = split(line, ',');
    if (!header_seen) {
      table.columns = std::move(cells);
      header_seen = true;
    } else {
      if (cells.size() != table.columns.size()) {
        throw std::runtime_error("ragged row in " + path.string() + ": '" + line + "'");
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (!header_seen) throw std::runtime_error("missing header row in " + path.string());
  return table;
}

void atomic_write_text(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace scifit
