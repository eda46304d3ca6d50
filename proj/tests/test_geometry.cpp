#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hgs/geometry.hpp"

using namespace hgs;

TEST_CASE("ball radius from geodesic distance") {
  CHECK(ball_radius_from_geodesic(0.0) == 0.0);
  CHECK(ball_radius_from_geodesic(std::log(3.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ball_radius_from_geodesic(2.0 * std::atanh(0.9)) ==
        doctest::Approx(0.9).epsilon(1e-14));
  CHECK(ball_radius_from_geodesic(1e4) < 1.0);
  CHECK(std::isfinite(geodesic_from_ball_radius(ball_radius_from_geodesic(1e4))));
  CHECK_THROWS_AS(ball_radius_from_geodesic(-0.1), domain_error);
  CHECK_THROWS_AS(ball_radius_from_geodesic(std::nan("")), domain_error);
}

TEST_CASE("geodesic distance from ball radius") {
  CHECK(geodesic_from_ball_radius(0.0) == 0.0);
  CHECK(geodesic_from_ball_radius(0.5) ==
        doctest::Approx(1.0986122886681098).epsilon(1e-14));
  const double big = geodesic_from_ball_radius(0.999999);
  CHECK(std::isfinite(big));
  CHECK(big > 14.0);
  CHECK_THROWS_AS(geodesic_from_ball_radius(1.0), domain_error);
  CHECK_THROWS_AS(geodesic_from_ball_radius(-0.2), domain_error);
}

TEST_CASE("coordinate maps round-trip and are monotone") {
  // The half-ulp rounding of rho amplifies through the inverse map as
  // ~eps e^t / 4, so the 1e-12-relative round trip is only meaningful while
  // rho still carries the information (t up to ~12); past that the error is
  // pinned by the information bound instead.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> pick(0.0, 30.0);
  const double eps = std::numeric_limits<double>::epsilon();
  double prev_t = -1.0, prev_rho = -1.0;
  std::vector<double> ts(400);
  for (double& t : ts) t = pick(rng);
  std::sort(ts.begin(), ts.end());
  for (double t : ts) {
    const double rho = ball_radius_from_geodesic(t);
    const double back = geodesic_from_ball_radius(rho);
    if (t <= 12.0)
      CHECK(std::abs(back - t) <= 1e-12 * std::max(1.0, t));
    else
      CHECK(std::abs(back - t) <= std::max(1e-12 * t, 0.5 * eps * std::exp(t)));
    if (t > prev_t) CHECK(rho > prev_rho);
    prev_t = t;
    prev_rho = rho;
  }

  std::uniform_real_distribution<double> pick_rho(0.0, 1.0 - 1e-9);
  std::vector<double> rhos(200);
  for (double& r : rhos) r = pick_rho(rng);
  std::sort(rhos.begin(), rhos.end());
  for (std::size_t i = 1; i < rhos.size(); ++i)
    CHECK(geodesic_from_ball_radius(rhos[i]) > geodesic_from_ball_radius(rhos[i - 1]));
}

TEST_CASE("radial volume weight") {
  const SpaceDim d3(3), d4(4);
  CHECK(radial_volume_weight(0.0, d3) == 0.0);
  CHECK(radial_volume_weight(std::log(2.0), d3) == doctest::Approx(0.5625).epsilon(1e-14));
  CHECK(radial_volume_weight(1.0, d4) ==
        doctest::Approx(std::pow(std::sinh(1.0), 3)).epsilon(1e-14));
  for (double t : {1e-8, 0.1, 1.0, 19.9, 20.1, 50.0})
    CHECK(radial_volume_weight(t, d3) > 0.0);
  // Continuity across the log-form switchover.
  CHECK(radial_volume_weight(20.0 + 1e-12, d3) ==
        doctest::Approx(radial_volume_weight(20.0 - 1e-12, d3)).epsilon(1e-10));
  // Survives far past the overflow point of naive sinh powering.
  CHECK(std::isfinite(radial_volume_weight(300.0, d3)));
  CHECK_THROWS_AS(radial_volume_weight(-1.0, d3), domain_error);
}

TEST_CASE("sphere area closed forms") {
  const double pi = std::numbers::pi;
  CHECK(sphere_area(SpaceDim(3)) == doctest::Approx(4.0 * pi).epsilon(1e-14));
  CHECK(sphere_area(SpaceDim(4)) == doctest::Approx(2.0 * pi * pi).epsilon(1e-14));
  CHECK(sphere_area(SpaceDim(6)) == doctest::Approx(pi * pi * pi).epsilon(1e-14));
}

TEST_CASE("space dimension domain") {
  CHECK_THROWS_AS(SpaceDim(2), domain_error);
  CHECK(SpaceDim(3).damping() == 2.0);
}

TEST_CASE("radial grid invariants") {
  Eigen::ArrayXd nodes(3), values(3);
  nodes << 0.0, 1.0, 2.0;
  values << 1.0, 1.0, 1.0;
  CHECK_NOTHROW(RadialGrid(nodes, values));

  Eigen::ArrayXd bad = nodes;
  bad[2] = 1.0;  // not strictly increasing
  CHECK_THROWS_AS(RadialGrid(bad, values), input_error);

  Eigen::ArrayXd neg = nodes;
  neg[0] = -0.5;
  CHECK_THROWS_AS(RadialGrid(neg, values), input_error);

  CHECK_THROWS_AS(RadialGrid(nodes, values.head(2)), input_error);

  Eigen::ArrayXd nan_vals = values;
  nan_vals[1] = std::nan("");
  CHECK_THROWS_AS(RadialGrid(nodes, nan_vals), input_error);
}

TEST_CASE("radial integral closed forms") {
  const SpaceDim d3(3);

  SUBCASE("zero profile") {
    Eigen::ArrayXd nodes = Eigen::ArrayXd::LinSpaced(11, 0.0, 3.0);
    CHECK(radial_integral(RadialGrid(nodes, Eigen::ArrayXd::Zero(11)), d3) == 0.0);
  }

  SUBCASE("exponential profile over the effective half-line") {
    // 4 pi int_0^inf sinh^2 t e^{-4t} dt = 4 pi / 24 = pi / 6
    Eigen::ArrayXd nodes = Eigen::ArrayXd::LinSpaced(16001, 0.0, 40.0);
    Eigen::ArrayXd values = (-4.0 * nodes).exp();
    CHECK(std::abs(radial_integral(RadialGrid(nodes, values), d3) - std::numbers::pi / 6.0) <=
          1e-8);
  }

  SUBCASE("constant profile on a finite span") {
    // 4 pi (sinh(2)/4 - 1/2) from the antiderivative sinh(2t)/4 - t/2
    Eigen::ArrayXd nodes = Eigen::ArrayXd::LinSpaced(4001, 0.0, 1.0);
    const double expect = 4.0 * std::numbers::pi * (std::sinh(2.0) / 4.0 - 0.5);
    CHECK(std::abs(radial_integral(RadialGrid(nodes, Eigen::ArrayXd::Ones(4001)), d3) -
                   expect) <= 1e-10 * expect);
  }

  SUBCASE("input validation") {
    Eigen::ArrayXd two = Eigen::ArrayXd::LinSpaced(2, 0.0, 1.0);
    CHECK_THROWS_AS(radial_integral(RadialGrid(two, Eigen::ArrayXd::Ones(2)), d3),
                    input_error);
  }
}

TEST_CASE("quadrature converges at its nominal order") {
  const SpaceDim d3(3);
  // 4 pi int_0^2 sinh^2 t e^{-t} dt with sinh^2 t e^{-t} =
  // (e^t + e^{-3t} - 2 e^{-t}) / 4, integrated term by term.
  const double exact =
      std::numbers::pi * (std::exp(2.0) - std::exp(-6.0) / 3.0 + 2.0 * std::exp(-2.0) -
                          (1.0 - 1.0 / 3.0 + 2.0));
  auto integral_error = [&](Eigen::Index n) {
    Eigen::ArrayXd nodes = Eigen::ArrayXd::LinSpaced(n, 0.0, 2.0);
    Eigen::ArrayXd values = (-nodes).exp();
    return std::abs(radial_integral(RadialGrid(nodes, values), d3) - exact);
  };
  const double e1 = integral_error(129);
  const double e2 = integral_error(257);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 1.9);
}
