#include <doctest.h>

#include <cmath>

#include "gapstab/assembly.hpp"
#include "gapstab/lieb_robinson.hpp"

using namespace gapstab;

namespace {

struct Chain {
  Lattice lattice;
  FockSpacePtr space;
  OperatorMatrix H;
};

Chain uniform_chain(int n) {
  Lattice l = build_lattice({n}, {false});
  auto space = FockSpace::numbered(n);
  HoppingSpec h;
  h.bonds = {{std::vector<int>{1}, cd(-1.0)}};
  OperatorMatrix H = physical_h0(assemble_T(l, h, 0.0), space) +
                     interaction_operator(nearest_neighbour_density(l, 0.5), space);
  return {l, space, H};
}

}  // namespace

TEST_CASE("evolution is an isometric one-parameter group") {
  Chain c = uniform_chain(4);
  Evolution ev(c.H);
  const CMat A = number(c.space, 0).dense();
  CHECK(isometry_defect(ev, A, {0.0, 0.5, 1.7, 3.0}) <= 1e-10);
  CHECK(group_law_defect(ev, A, 0.8, 1.3) <= 1e-10);
  CHECK((ev.evolve(A, 0.0) - A).norm() <= 1e-12);
  CHECK_THROWS_AS(Evolution(CMat(CMat::Identity(2, 2) * I)), Error);
}

TEST_CASE("arrival times grow with distance on the uniform chain") {
  Chain c = uniform_chain(6);
  Evolution ev(c.H);
  std::vector<double> ts;
  for (int k = 0; k <= 200; ++k) ts.push_back(0.025 * k);
  const OperatorMatrix A = number(c.space, 0);
  std::vector<LRProfile> profiles;
  for (std::size_t y = 1; y < 6; ++y) {
    LRProfile p = commutator_profile(ev, A, number(c.space, y), ts, c.lattice);
    CHECK(p.distance == static_cast<int>(y));
    CHECK(p.samples.front().norm <= 1e-12);
    for (const auto& s : p.samples) CHECK(s.norm <= p.bound + 1e-12);
    profiles.push_back(p);
  }
  VelocityFit f = fit_velocity(profiles);
  CHECK(f.monotone);
  CHECK(std::isfinite(f.velocity));
  CHECK(f.velocity > 0.0);
}

TEST_CASE("velocity fit needs enough signal") {
  LRProfile flat{1, 2.0, false, {{0.0, 0.0}, {1.0, 0.0}}};
  CHECK_THROWS_AS(fit_velocity({flat, flat}), Error);
  LRProfile p2 = flat, p3 = flat;
  p2.distance = 2;
  p3.distance = 3;
  try {
    fit_velocity({flat, p2, p3});
    FAIL("flat profiles fitted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_signal);
  }
}

TEST_CASE("reference decay") {
  // frozen below e^2 at exp(-mu e^2 / 4)
  CHECK(u_mu(1.0, 0.0) == doctest::Approx(0.15766795235301967).epsilon(1e-14));
  CHECK(u_mu(1.0, 3.0) == doctest::Approx(u_mu(1.0, 0.0)));
  const double x = 20.0;
  CHECK(u_mu(2.0, x) == doctest::Approx(std::exp(-2.0 * x / std::pow(std::log(x), 2))));
  double prev = reference_decay(1.0, 1.0, 0.0).F;
  for (int k = 1; k <= 300; ++k) {
    const double F = reference_decay(1.0, 1.0, 0.1 * k).F;
    CHECK(F <= prev * (1.0 + 1e-14));
    prev = F;
  }
  // dimension enters through the power (1 + r/r0)^{-(d+1)}
  const ReferenceDecay r2 = reference_decay(1.0, 1.0, 1.0, 2);
  CHECK(r2.F == doctest::Approx(r2.u / 8.0));
  CHECK_THROWS_AS(reference_decay(1.0, 0.0, 1.0), Error);
}
