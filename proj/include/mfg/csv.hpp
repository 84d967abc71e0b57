#ifndef MFG_CSV_HPP
#define MFG_CSV_HPP

#include <string>
#include <vector>

namespace mfg {

/// One long-format result row.
struct CsvRecord {
  std::string experiment;
  std::string parameter;
  std::string metric;
  double value = 0.0;
};

/// Writes "experiment,parameter,metric,value" rows with 17 significant
/// digits; an empty table produces the header only. Throws on unwritable
/// paths.
void emit_csv(const std::vector<CsvRecord>& records, const std::string& path);

/// Parses a file produced by emit_csv (round-trip oracle).
std::vector<CsvRecord> parse_csv(const std::string& path);

}  // namespace mfg

#endif
