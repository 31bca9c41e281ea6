#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mixsys::report {

// Insertion-ordered JSON keeps reruns byte-identical; every document carries
// schema_version first. Timing goes only into keys named elapsed_ms so
// consumers can strip them before comparing runs.
using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

json envelope(const std::string& command, std::uint64_t seed, int threads);

std::string render_json(const json& doc);

// header and rows in the fixed column order of the caller.
std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

// Shortest round-trip formatting, same as the JSON encoder uses.
std::string num(double v);
std::string num(long long v);

}  // namespace mixsys::report
