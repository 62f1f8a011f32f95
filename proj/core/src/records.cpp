#include "scifit/records.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace scifit {

namespace {

using nlohmann::json;

// Pulls an assignment array ({id, weight} objects). Returns empty reason on
// success.
std::string parse_assignments(const json& arr, const char* what, std::vector<Assignment>& out) {
  if (!arr.is_array() || arr.empty()) return std::string("missing_") + what;
  out.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("id") || !item.contains("weight")) {
      return std::string("malformed_") + what;
    }
    Assignment a;
    if (!item["id"].is_string()) return std::string("malformed_") + what;
    a.id = item["id"].get<std::string>();
    if (!item["weight"].is_number()) return std::string("malformed_") + what;
    a.weight = item["weight"].get<double>();
    if (a.id.empty() || a.weight < 0 || !std::isfinite(a.weight)) {
      return std::string("malformed_") + what;
    }
    out.push_back(std::move(a));
  }
  return {};
}

// Weights must sum to 1; small drift is tolerated silently, larger drift is
// renormalized and counted.
std::string normalize_weights(std::vector<Assignment>& assignments, bool& renormalized) {
  double sum = 0;
  for (const auto& a : assignments) sum += a.weight;
  if (sum <= 0) return "zero_weights";
  if (std::abs(sum - 1.0) > 1e-6) renormalized = true;
  if (std::abs(sum - 1.0) > 1e-15) {
    for (auto& a : assignments) a.weight /= sum;
  }
  return {};
}

}  // namespace

std::size_t ParseReport::total_rejected() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : rejected) n += count;
  return n;
}

std::string ParseReport::summary() const {
  std::ostringstream os;
  os << "lines=" << lines << " accepted=" << accepted << " rejected=" << total_rejected()
     << " renormalized=" << renormalized;
  for (const auto& [reason, count] : rejected) os << "\n  " << reason << ": " << count;
  return os.str();
}

bool parse_record_line(const std::string& line, DocumentRecord& out, std::string& reason,
                       bool& renormalized) {
  const json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    reason = "malformed_json";
    return false;
  }
  if (!doc.contains("id") || !doc["id"].is_string()) {
    reason = "missing_id";
    return false;
  }
  out.doc_id = doc["id"].get<std::string>();
  if (!doc.contains("year") || !doc["year"].is_number_integer()) {
    reason = "missing_year";
    return false;
  }
  out.year = doc["year"].get<int>();
  if (!doc.contains("n_citation") || !doc["n_citation"].is_number_integer()) {
    reason = "missing_citations";
    return false;
  }
  out.citations = doc["n_citation"].get<long long>();
  if (out.citations < 0) {
    reason = "negative_citations";
    return false;
  }
  out.geo.clear();
  out.fos.clear();
  if (!doc.contains("geo")) {
    reason = "missing_geo";
    return false;
  }
  if (!doc.contains("fos")) {
    reason = "missing_fos";
    return false;
  }
  reason = parse_assignments(doc["geo"], "geo", out.geo);
  if (!reason.empty()) return false;
  reason = parse_assignments(doc["fos"], "fos", out.fos);
  if (!reason.empty()) return false;
  reason = normalize_weights(out.geo, renormalized);
  if (!reason.empty()) return false;
  reason = normalize_weights(out.fos, renormalized);
  return reason.empty();
}

bool DocumentReader::next(DocumentRecord& out) {
  std::string line;
  while (std::getline(in_, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++report_.lines;
    std::string reason;
    bool renormalized = false;
    if (parse_record_line(line, out, reason, renormalized)) {
      ++report_.accepted;
      if (renormalized) ++report_.renormalized;
      return true;
    }
    ++report_.rejected[reason];
  }
  return false;
}

std::vector<DocumentRecord> read_documents(std::istream& in, ParseReport* report) {
  DocumentReader reader(in);
  std::vector<DocumentRecord> out;
  DocumentRecord rec;
  while (reader.next(rec)) out.push_back(rec);
  if (report) *report = reader.report();
  return out;
}

std::string to_json_line(const DocumentRecord& record) {
  json doc;
  doc["id"] = record.doc_id;
  doc["year"] = record.year;
  doc["n_citation"] = record.citations;
  json geo = json::array();
  for (const auto& a : record.geo) geo.push_back({{"id", a.id}, {"weight", a.weight}});
  json fos = json::array();
  for (const auto& a : record.fos) fos.push_back({{"id", a.id}, {"weight", a.weight}});
  doc["geo"] = std::move(geo);
  doc["fos"] = std::move(fos);
  return doc.dump();
}

}  // namespace scifit
