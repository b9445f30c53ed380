#include "gapstab/report.hpp"

#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gapstab/common.hpp"

namespace gapstab {

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "?";
}

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (c.status == Status::fail) return false;
  return true;
}

std::size_t VerificationReport::count(Status s) const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.status == s;
  return n;
}

CheckRecord& VerificationReport::add(CheckRecord rec) {
  for (const auto& c : checks)
    if (c.id == rec.id) throw Error(Errc::invalid_input, "duplicate check id " + rec.id);
  checks.push_back(std::move(rec));
  return checks.back();
}

Table& VerificationReport::table(const std::string& name, std::vector<std::string> columns) {
  for (auto& t : tables)
    if (t.name == name) return t;
  tables.push_back({name, std::move(columns), {}});
  return tables.back();
}

Json environment_metadata() {
  Json env;
#if defined(__clang__)
  env["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = "gcc " __VERSION__;
#else
  env["compiler"] = "unknown";
#endif
  env["cxx_standard"] = static_cast<long long>(__cplusplus);
  env["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
#ifdef NDEBUG
  env["build"] = "release";
#else
  env["build"] = "debug";
#endif
  return env;
}

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + p.string());
  out << text;
  if (!out) throw Error(Errc::io, "write failed for " + p.string());
}

}  // namespace

Json to_json(const VerificationReport& r) {
  Json j;
  j["command"] = r.command;
  j["status"] = r.passed() ? "pass" : "fail";
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  j["environment"] = environment_metadata();
  j["summary"] = {{"checks", r.checks.size()},
                  {"passed", r.count(Status::pass)},
                  {"failed", r.count(Status::fail)},
                  {"skipped", r.count(Status::skipped)}};
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["status"] = to_string(c.status);
    e["measured"] = number(c.measured);
    e["tolerance"] = number(c.tolerance);
    e["relation"] = c.relation;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["results"] = r.results;
  Json tables = Json::object();
  for (const auto& t : r.tables) tables[t.name] = {{"columns", t.columns}, {"rows", t.rows.size()}};
  j["tables"] = std::move(tables);
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      if (auto s = std::get_if<std::string>(&row[i])) {
        // quote anything with separators
        if (s->find_first_of(",\"\n ") != std::string::npos) {
          std::string q = "\"";
          for (char ch : *s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          out += q + "\"";
        } else {
          out += *s;
        }
      } else if (auto d = std::get_if<double>(&row[i])) {
        out += format_double(*d);
      } else {
        out += std::to_string(std::get<long long>(row[i]));
      }
    }
    out += "\n";
  }
  return out;
}

void emit(const VerificationReport& r, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io, "cannot create output directory " + dir + ": " + ec.message());
  write_file(fs::path(dir) / "report.json", to_json(r).dump(2) + "\n");
  for (const auto& t : r.tables) write_file(fs::path(dir) / (t.name + ".csv"), to_csv(t));
  Table timings{"timings", {"id", "seconds"}, {}};
  for (const auto& c : r.checks) timings.rows.push_back({c.id, c.runtime});
  write_file(fs::path(dir) / "timings.csv", to_csv(timings));
}

}  // namespace gapstab
