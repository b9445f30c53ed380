#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gapstab/frustration_free.hpp"
#include "gapstab/single_particle.hpp"

namespace gapstab {

struct BondConfig {
  std::vector<int> offset;
  double re = 0.0;
  double im = 0.0;
  bool operator==(const BondConfig&) const = default;
};

struct EntryConfig {
  std::size_t i = 0;
  std::size_t j = 0;
  double re = 0.0;
  double im = 0.0;
  bool operator==(const EntryConfig&) const = default;
};

struct TermConfig {
  double re = 0.0;
  double im = 0.0;
  std::vector<std::pair<std::string, std::string>> factors;  // (site label, kind)
  bool operator==(const TermConfig&) const = default;
};

struct FlowConfig {
  double s_max = 0.1;
  int steps = 100;
  double gamma_factor = 0.9;
  int rk4_substeps = 1;
  int window = 2;  // sites of the doubled many-body window
  bool operator==(const FlowConfig&) const = default;
};

struct GapCurveConfig {
  double s_max = 1.0;
  int points = 41;
  bool operator==(const GapCurveConfig&) const = default;
};

struct LocalizeConfig {
  int n_max = 2;
  bool operator==(const LocalizeConfig&) const = default;
};

struct LRConfig {
  double t_max = 5.0;
  int points = 201;
  double theta = 0.1;
  bool operator==(const LRConfig&) const = default;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::vector<int> dims{6};
  std::vector<bool> periodic{false};
  std::vector<BondConfig> bonds;
  std::vector<EntryConfig> entries;
  double fermi_energy = 0.0;
  double disorder_width = 0.0;
  std::uint64_t disorder_seed = 0;
  std::vector<TermConfig> terms;
  double k_h = 2.0;
  double truncation = kDefaultTruncation;
  std::size_t max_doubled_sites = kDefaultMaxDoubledSites;
  FlowConfig flow;
  GapCurveConfig gap_curve;
  LocalizeConfig localize;
  LRConfig lr;
  std::map<std::string, double> tolerances;
  double tol_scale = 1.0;
  std::vector<std::string> suites{"all"};
  std::string out_dir = "out";

  bool operator==(const RunConfig&) const = default;

  Lattice lattice() const;
  HoppingSpec hopping() const;
  DisorderSpec disorder() const { return {disorder_width, disorder_seed}; }
  InteractionSet interaction() const;
  // Tolerance by name: override if present, else the default; times tol_scale.
  double tol(const std::string& name, double fallback) const;
};

// Throws Error(Errc::config) on malformed input. Geometry and range errors
// surface later from lattice() and interaction().
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);
std::string to_toml(const RunConfig& config);

// SHA-256 of the canonical TOML form, hex encoded.
std::string config_hash(const RunConfig& config);

FactorKind factor_kind(const std::string& name);
const char* to_string(FactorKind kind);

}  // namespace gapstab
