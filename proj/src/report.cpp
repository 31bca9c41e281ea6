#include "mixsys/report.hpp"

#include <cmath>
#include <sstream>

namespace mixsys::report {

json envelope(const std::string& command, std::uint64_t seed, int threads) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["seed"] = seed;
  doc["threads"] = threads;
  return doc;
}

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  return out.str();
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return json(v).dump();
}

std::string num(long long v) { return json(v).dump(); }

}  // namespace mixsys::report
