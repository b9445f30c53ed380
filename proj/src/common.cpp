#include "gapstab/common.hpp"

#include <algorithm>

namespace gapstab {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::unsupported_geometry: return "unsupported-geometry";
    case Errc::site_out_of_range: return "site-out-of-range";
    case Errc::hermiticity: return "hermiticity";
    case Errc::invalid_input: return "invalid-input";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::gapless: return "gapless";
    case Errc::unknown_mode: return "unknown-mode";
    case Errc::parity: return "parity";
    case Errc::unsupported: return "unsupported";
    case Errc::dimension: return "dimension";
    case Errc::degenerate_flow: return "degenerate-flow";
    case Errc::flow_aborted: return "flow-aborted";
    case Errc::refuse_to_build: return "refuse-to-build";
    case Errc::unbounded_relative: return "unbounded-relative";
    case Errc::domain: return "domain";
    case Errc::precondition: return "precondition";
    case Errc::numerical: return "numerical";
    case Errc::insufficient_signal: return "insufficient-signal";
    case Errc::config: return "config";
    case Errc::io: return "io";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

SiteSet make_site_set(std::vector<std::size_t> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

bool contains(const SiteSet& set, std::size_t site) {
  return std::binary_search(set.begin(), set.end(), site);
}

SiteSet set_union(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace gapstab
