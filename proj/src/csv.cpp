#include "mfg/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfg {

void emit_csv(const std::vector<CsvRecord>& records, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit_csv: cannot write " + path);
  os.precision(17);
  os << "experiment,parameter,metric,value\n";
  for (const auto& r : records)
    os << r.experiment << "," << r.parameter << "," << r.metric << ","
       << r.value << "\n";
  if (!os) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::vector<CsvRecord> parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "experiment,parameter,metric,value")
    throw std::runtime_error("parse_csv: bad header in " + path);
  std::vector<CsvRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    CsvRecord r;
    std::string value;
    if (!std::getline(ls, r.experiment, ',') ||
        !std::getline(ls, r.parameter, ',') ||
        !std::getline(ls, r.metric, ',') || !std::getline(ls, value))
      throw std::runtime_error("parse_csv: malformed row in " + path);
    r.value = std::stod(value);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mfg
