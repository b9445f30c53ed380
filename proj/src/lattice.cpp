#include "gapstab/lattice.hpp"

#include <algorithm>
#include <cstdlib>

namespace gapstab {

Lattice::Lattice(std::vector<int> dims, std::vector<Boundary> boundary)
    : dims_(std::move(dims)), boundary_(std::move(boundary)) {
  if (dims_.empty()) throw Error(Errc::invalid_dimension, "lattice needs at least one axis");
  if (dims_.size() > 3) throw Error(Errc::unsupported_geometry, "at most three axes are supported");
  if (boundary_.size() != dims_.size())
    throw Error(Errc::invalid_dimension, "one boundary flag per axis is required");
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    const int d = dims_[axis];
    if (d <= 0) throw Error(Errc::invalid_dimension, "side lengths must be positive");
    // a periodic side of 2 would bond the same pair twice
    if (boundary_[axis] == Boundary::periodic && d < 3)
      throw Error(Errc::unsupported_geometry, "periodic axes need at least three sites");
    size_ *= static_cast<std::size_t>(d);
  }
}

void Lattice::check_site(std::size_t site) const {
  if (site >= size_)
    throw Error(Errc::site_out_of_range, "site " + std::to_string(site) + " not in lattice");
}

std::vector<int> Lattice::coordinates(std::size_t site) const {
  check_site(site);
  std::vector<int> c(dims_.size());
  for (int axis = dimension() - 1; axis >= 0; --axis) {
    c[axis] = static_cast<int>(site % dims_[axis]);
    site /= dims_[axis];
  }
  return c;
}

std::size_t Lattice::index(std::span<const int> coords) const {
  if (coords.size() != dims_.size()) throw Error(Errc::invalid_dimension, "coordinate rank mismatch");
  std::size_t idx = 0;
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    if (coords[axis] < 0 || coords[axis] >= dims_[axis])
      throw Error(Errc::site_out_of_range, "coordinate outside the box");
    idx = idx * dims_[axis] + coords[axis];
  }
  return idx;
}

std::optional<std::size_t> Lattice::shifted(std::size_t site, std::span<const int> offset) const {
  if (offset.size() != dims_.size()) throw Error(Errc::invalid_dimension, "offset rank mismatch");
  auto c = coordinates(site);
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    int v = c[axis] + offset[axis];
    if (boundary_[axis] == Boundary::periodic) {
      v %= dims_[axis];
      if (v < 0) v += dims_[axis];
    } else if (v < 0 || v >= dims_[axis]) {
      return std::nullopt;
    }
    c[axis] = v;
  }
  return index(c);
}

int Lattice::distance(std::size_t a, std::size_t b) const {
  auto ca = coordinates(a);
  auto cb = coordinates(b);
  int d = 0;
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    int delta = std::abs(ca[axis] - cb[axis]);
    if (boundary_[axis] == Boundary::periodic) delta = std::min(delta, dims_[axis] - delta);
    d += delta;
  }
  return d;
}

int Lattice::distance(const SiteSet& from, std::size_t b) const {
  if (from.empty()) throw Error(Errc::invalid_input, "distance to an empty set");
  int best = distance(from.front(), b);
  for (std::size_t a : from) best = std::min(best, distance(a, b));
  return best;
}

int Lattice::diameter() const {
  int d = 0;
  for (std::size_t axis = 0; axis < dims_.size(); ++axis)
    d += boundary_[axis] == Boundary::periodic ? dims_[axis] / 2 : dims_[axis] - 1;
  return d;
}

SiteSet Lattice::all_sites() const {
  SiteSet s(size_);
  for (std::size_t i = 0; i < size_; ++i) s[i] = i;
  return s;
}

SiteSet Lattice::ball(const SiteSet& centre, int radius) const {
  for (std::size_t x : centre) check_site(x);
  SiteSet out;
  if (centre.empty() || radius < 0) return out;
  for (std::size_t y = 0; y < size_; ++y)
    if (distance(centre, y) <= radius) out.push_back(y);
  return out;
}

Lattice build_lattice(const std::vector<int>& dims, const std::vector<bool>& periodic) {
  std::vector<Boundary> b;
  for (bool p : periodic) b.push_back(p ? Boundary::periodic : Boundary::open);
  if (periodic.empty()) b.assign(dims.size(), Boundary::open);
  return Lattice(dims, b);
}

}  // namespace gapstab
