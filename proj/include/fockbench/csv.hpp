#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fockbench {

/// Minimal CSV writer with round-trip number formatting (%.17g) for byte-stable output.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  std::ostream& os_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

std::string format_double(double v);

}  // namespace fockbench
