#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gapstab {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cd>;

inline constexpr cd I{0.0, 1.0};

enum class Errc {
  invalid_dimension,
  unsupported_geometry,
  site_out_of_range,
  hermiticity,
  invalid_input,
  insufficient_data,
  gapless,
  unknown_mode,
  parity,
  unsupported,
  dimension,
  degenerate_flow,
  flow_aborted,
  refuse_to_build,
  unbounded_relative,
  domain,
  precondition,
  numerical,
  insufficient_signal,
  config,
  io,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Sorted, duplicate free list of lattice sites.
using SiteSet = std::vector<std::size_t>;

SiteSet make_site_set(std::vector<std::size_t> sites);
bool contains(const SiteSet& set, std::size_t site);
SiteSet set_union(const SiteSet& a, const SiteSet& b);

}  // namespace gapstab
