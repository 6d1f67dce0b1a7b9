#include "fockbench/csv.hpp"

#include <cmath>
#include <cstdio>

#include "fockbench/common.hpp"

namespace fockbench {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header)
    : os_(os), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << '\n';
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (in_row_ == columns_) throw InvariantViolation("CsvWriter: too many cells in row");
  if (v.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : v) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    os_ << (in_row_ ? "," : "") << q << '"';
  } else {
    os_ << (in_row_ ? "," : "") << v;
  }
  ++in_row_;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw InvariantViolation("CsvWriter: incomplete row");
  os_ << '\n';
  in_row_ = 0;
}

}  // namespace fockbench
