#pragma once

#include <optional>
#include <span>

#include "gapstab/common.hpp"

namespace gapstab {

enum class Boundary { open, periodic };

// Finite hypercubic box in Z^d, sites indexed in row-major order.
class Lattice {
 public:
  Lattice(std::vector<int> dims, std::vector<Boundary> boundary);

  std::size_t size() const { return size_; }
  int dimension() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  Boundary boundary(int axis) const { return boundary_[axis]; }

  std::vector<int> coordinates(std::size_t site) const;
  std::size_t index(std::span<const int> coords) const;

  // Translate a site by an offset; empty result when an open boundary is crossed.
  std::optional<std::size_t> shifted(std::size_t site, std::span<const int> offset) const;

  int distance(std::size_t a, std::size_t b) const;
  int distance(const SiteSet& from, std::size_t b) const;
  int diameter() const;

  SiteSet all_sites() const;
  SiteSet ball(const SiteSet& centre, int radius) const;

 private:
  void check_site(std::size_t site) const;

  std::vector<int> dims_;
  std::vector<Boundary> boundary_;
  std::size_t size_ = 1;
};

Lattice build_lattice(const std::vector<int>& dims, const std::vector<bool>& periodic);

}  // namespace gapstab
