#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <variant>
#include <vector>

namespace gapstab {

using Json = nlohmann::ordered_json;

enum class Status { pass, fail, skipped };
const char* to_string(Status s);

struct CheckRecord {
  std::string id;
  std::string anchor;  // statement being checked
  Status status = Status::skipped;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "<=", ">=", "==" or "" for booleans
  std::string detail;
  double runtime = 0.0;  // seconds; kept out of the JSON
};

using Cell = std::variant<std::string, double, long long>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct VerificationReport {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<CheckRecord> checks;
  std::vector<Table> tables;
  Json results = Json::object();

  bool passed() const;  // conjunction over non-skipped checks
  std::size_t count(Status s) const;
  CheckRecord& add(CheckRecord rec);
  Table& table(const std::string& name, std::vector<std::string> columns);
};

Json environment_metadata();
Json to_json(const VerificationReport& report);

std::string format_double(double v);  // %.17g
std::string to_csv(const Table& table);

// report.json, one CSV per table and timings.csv under dir.
void emit(const VerificationReport& report, const std::string& dir);

}  // namespace gapstab
