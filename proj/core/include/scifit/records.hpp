#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace scifit {

struct Assignment {
  std::string id;
  double weight = 0;
};

struct DocumentRecord {
  std::string doc_id;
  int year = 0;
  long long citations = 0;
  std::vector<Assignment> geo;  // weights sum to 1
  std::vector<Assignment> fos;  // weights sum to 1
};

struct ParseReport {
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t renormalized = 0;  // weight sums off by more than 1e-6, fixed up
  std::map<std::string, std::size_t> rejected;  // reason -> count

  std::size_t total_rejected() const;
  std::string summary() const;
};

// Streaming reader for line-delimited JSON document records:
//   {"id": "...", "year": 1999, "n_citation": 12,
//    "geo": [{"id": "US", "weight": 0.5}, ...],
//    "fos": [{"id": "F1", "weight": 1.0}]}
// Malformed lines are counted per reason and skipped; the stream never aborts
// on data errors.
class DocumentReader {
 public:
  explicit DocumentReader(std::istream& in) : in_(in) {}

  // Returns false at end of stream. On true, `out` holds a validated record
  // with weights renormalized to sum exactly 1.
  bool next(DocumentRecord& out);

  const ParseReport& report() const { return report_; }

 private:
  std::istream& in_;
  ParseReport report_;
};

// Parses one record line; returns false with `reason` set when invalid.
bool parse_record_line(const std::string& line, DocumentRecord& out, std::string& reason,
                       bool& renormalized);

std::vector<DocumentRecord> read_documents(std::istream& in, ParseReport* report = nullptr);

std::string to_json_line(const DocumentRecord& record);

}  // namespace scifit
