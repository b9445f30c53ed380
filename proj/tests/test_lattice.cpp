#include <doctest.h>

#include "gapstab/lattice.hpp"

using namespace gapstab;

TEST_CASE("open chain distances and balls") {
  Lattice l = build_lattice({5}, {false});
  CHECK(l.size() == 5);
  CHECK(l.distance(0, 4) == 4);
  CHECK(l.diameter() == 4);
  CHECK(l.ball({2}, 1) == SiteSet{1, 2, 3});
  CHECK(l.ball({0}, 0) == SiteSet{0});
  CHECK(l.ball({0}, 10) == l.all_sites());
  CHECK_FALSE(l.shifted(4, std::vector<int>{1}).has_value());
}

TEST_CASE("periodic ring wraps") {
  Lattice l = build_lattice({6}, {true});
  CHECK(l.distance(0, 5) == 1);
  CHECK(l.distance(0, 3) == 3);
  CHECK(l.diameter() == 3);
  CHECK(*l.shifted(5, std::vector<int>{1}) == 0);
}

TEST_CASE("square lattice uses the l1 metric") {
  Lattice l = build_lattice({3, 4}, {false, true});
  const std::size_t a = l.index(std::vector<int>{0, 0});
  const std::size_t b = l.index(std::vector<int>{2, 3});
  CHECK(l.distance(a, b) == 3);  // 2 along the open axis, 1 around the ring
  CHECK(l.coordinates(b) == std::vector<int>{2, 3});
  CHECK(l.ball({a}, 1).size() == 4);
}

TEST_CASE("balls grow monotonically and saturate") {
  Lattice l = build_lattice({3, 3}, {false, false});
  for (std::size_t c = 0; c < l.size(); ++c) {
    SiteSet prev{c};
    for (int n = 0; n <= l.diameter(); ++n) {
      SiteSet cur = l.ball({c}, n);
      for (std::size_t x : prev) CHECK(contains(cur, x));
      prev = cur;
    }
    CHECK(prev == l.all_sites());
  }
}

TEST_CASE("geometry errors") {
  CHECK_THROWS_AS(build_lattice({}, {}), Error);
  CHECK_THROWS_AS(build_lattice({0}, {false}), Error);
  CHECK_THROWS_AS(build_lattice({2, 2, 2, 2}, {false, false, false, false}), Error);
  try {
    build_lattice({2}, {true});
    FAIL("periodic side 2 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_geometry);
  }
  Lattice l = build_lattice({3}, {false});
  CHECK_THROWS_AS(l.distance(0, 7), Error);
}
