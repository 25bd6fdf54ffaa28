#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "wgtrap/errors.hpp"
#include "wgtrap/geometry.hpp"

using namespace wgtrap;

namespace {

LayoutSpec straight_pair(double c1, double c2, double width = 2.0) {
  LayoutSpec l;
  l.eps_substrate = 10.56;
  l.window_width = 60.0;
  l.length = 1000.0;
  l.waveguides.push_back({"D1", Trajectory::constant(c1, 0, 1000), width, {10.76, 0.0}});
  l.waveguides.push_back({"D2", Trajectory::constant(c2, 0, 1000), width, {10.76, 0.0}});
  return l;
}

bool has_failure(const LayoutSpec& l, const std::string& name) {
  const auto checks = check_layout(l);
  return std::any_of(checks.begin(), checks.end(), [&](const auto& c) { return c.name == name && !c.passed; });
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("epsilon_at uses half-open cores and rejects points outside the window") {
  const auto l = straight_pair(20.0, 40.0);
  CHECK(epsilon_at(l, 19.0, 0.0) == cplx(10.76, 0.0));
  CHECK(epsilon_at(l, 21.0, 0.0) == cplx(10.56, 0.0));
  CHECK(epsilon_at(l, 30.0, 500.0) == cplx(10.56, 0.0));
  CHECK_THROWS_AS(epsilon_at(l, -0.1, 0.0), DomainError);
  CHECK_THROWS_AS(epsilon_at(l, 10.0, 1000.5), DomainError);
}

TEST_CASE("cell-averaged row integrates the core contrast exactly") {
  auto l = straight_pair(20.03, 40.0, 2.0);
  l.waveguides[1].eps_core = {10.76, -0.01};
  const double dx = 0.1;
  std::vector<cplx> row(601);
  permittivity_row(l, 0.0, dx, row);
  cplx excess{};
  for (const auto& e : row) excess += (e - 10.56) * dx;
  // two cores of width 2 with contrast 0.2 and 0.2 - 0.01j
  CHECK(excess.real() == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(excess.imag() == doctest::Approx(-0.02).epsilon(1e-12));
  // interior samples are exact
  CHECK(row[200].real() == doctest::Approx(10.76));
  CHECK(row[200].imag() == 0.0);
  CHECK(row[100] == cplx(10.56, 0.0));
}

TEST_CASE("scale_layout scales z, widths of D1/D2 and moves them by the gap shift") {
  auto l = straight_pair(20.0, 40.0);
  l.waveguides.push_back({"D3", Trajectory::constant(30.0, 0, 1000), 4.0, {10.76, -0.01}});
  const auto s = scale_layout(l, 1.3, 1.02, 0.5);
  CHECK(s.length == doctest::Approx(1300.0));
  CHECK(s.waveguides[0].width == doctest::Approx(2.04));
  CHECK(s.waveguides[1].width == doctest::Approx(2.04));
  CHECK(s.waveguides[2].width == 4.0);
  CHECK(s.waveguides[0].center(1300.0) == doctest::Approx(20.5));
  CHECK(s.waveguides[1].center(0.0) == doctest::Approx(39.5));
  CHECK(scale_layout(l, 1.0, 1.0, 0.0) == l);
  CHECK_THROWS_AS(scale_layout(l, 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(scale_layout(l, 1.0, 1.0, 9.5), ValidationError);
}

TEST_CASE("overlapping cores fail a named invariant") {
  const auto l = straight_pair(20.0, 21.5);
  CHECK(has_failure(l, "cores_disjoint.D1_D2"));
  CHECK_THROWS_AS(validate_layout(l), ValidationError);
}

TEST_CASE("a core touching the window edge fails the margin invariant") {
  const auto l = straight_pair(1.0, 40.0);
  CHECK(has_failure(l, "D1.window_margin"));
}

TEST_CASE("trajectory and material invariants") {
  auto l = straight_pair(20.0, 40.0);
  l.waveguides[0].center = Piecewise({{0, 500, Constant{20.0}}, {500, 1000, Constant{20.5}}});
  CHECK(has_failure(l, "D1.trajectory_continuous"));
  l = straight_pair(20.0, 40.0);
  l.waveguides[1].center = Trajectory::constant(40.0, 0, 900);
  CHECK(has_failure(l, "D2.trajectory_ends_at_length"));
  l = straight_pair(20.0, 40.0);
  l.waveguides[1].eps_core = {10.5, 0.0};
  CHECK(has_failure(l, "D2.guiding"));
  l.waveguides[1].eps_core = {10.76, 0.01};
  CHECK(has_failure(l, "D2.passive"));
  CHECK_NOTHROW(validate_layout(straight_pair(20.0, 40.0)));
}

TEST_CASE("overlap scan catches a brief crossing between sample points") {
  // D2 bends into D1 only near z = 250.2
  auto l = straight_pair(20.0, 30.0, 2.0);
  l.waveguides[1].center = Piecewise({{0, 250, Constant{30.0}},
                                      {250, 250.4, SineRamp{30.0, -9.0, 250.1, 0.4}},
                                      {250.4, 1000, Constant{30.0}}});
  CHECK(has_failure(l, "cores_disjoint.D1_D2"));
}

}
