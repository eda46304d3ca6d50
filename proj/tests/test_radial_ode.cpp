#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hgs/geometry.hpp"
#include "hgs/io.hpp"
#include "hgs/radial_ode.hpp"
#include "reference_ode.hpp"

using namespace hgs;

// Reference classifications computed with the fixed-step RK4 oracle in
// reference_ode.hpp at h = 1e-4 (h/2 agrees to ten digits in each case).
namespace frozen {
constexpr double kCrossTime10 = 0.7398475025;  // (3,3,3), a = b = 10
constexpr double kCrossTime50 = 0.1382833309;  // (3,3,3), a = b = 50
}  // namespace frozen

TEST_CASE("odd power keeps the sign of its argument") {
  CHECK(odd_pow(-0.5, 2.0) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(odd_pow(0.5, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(odd_pow(0.0, 3.7) == 0.0);
  CHECK(odd_pow(-2.0, 3.0) == doctest::Approx(-8.0).epsilon(1e-15));
}

TEST_CASE("right-hand side of the radial system") {
  const SpaceDim dim(3);
  const ExponentPair pq(2.0, 2.0);

  SUBCASE("damping term vanishes at rest") {
    const Eigen::Vector4d d = rhs(RadialState{1.0, 1.0, 0.0, 1.0, 0.0}, dim, pq);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(d[2] == 0.0);
    CHECK(d[3] == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("direct substitution with a moving state") {
    const Eigen::Vector4d d = rhs(RadialState{1.0, 1.0, -0.1, 1.0, 0.0}, dim, pq);
    const double coth1 = 1.0 / std::tanh(1.0);
    CHECK(d[1] == doctest::Approx(2.0 * coth1 * 0.1 - 1.0).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(-0.73740).epsilon(1e-4));
  }
  SUBCASE("sign convention of the nonlinearity") {
    const Eigen::Vector4d d = rhs(RadialState{1.0, 0.0, 0.0, -0.5, 0.0}, dim, pq);
    // forcing is -odd_pow(v, p) = -(-0.25)
    CHECK(d[1] == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(rhs(RadialState{0.0, 1.0, 0.0, 1.0, 0.0}, dim, pq), domain_error);
    CHECK_THROWS_AS(rhs(RadialState{1.0, std::nan(""), 0.0, 1.0, 0.0}, dim, pq),
                    input_error);
  }
}

TEST_CASE("series start near the origin") {
  SUBCASE("symmetric unit data") {
    const RadialState s = taylor_start(1.0, 1.0, SpaceDim(3), ExponentPair(2.0, 2.0), 0.01);
    // stated series terms hold within their remainder orders
    CHECK(std::abs(s.u - (1.0 - 1e-4 / 6.0)) <= std::pow(0.01, 4));
    CHECK(std::abs(s.du - (-0.01 / 3.0)) <= std::pow(0.01, 3));
    // reference value from graded-step integration started at t = 1e-6
    CHECK(s.u == doctest::Approx(0.999983333611106).epsilon(1e-12));
    CHECK(s.du == doctest::Approx(-0.003333222224682).epsilon(1e-8));
    CHECK(s.u == s.v);
    CHECK(s.du == s.dv);
  }
  SUBCASE("asymmetric data") {
    const RadialState s = taylor_start(2.0, 1.0, SpaceDim(4), ExponentPair(3.0, 2.0), 0.05);
    CHECK(s.u == doctest::Approx(2.0 - 0.0025 / 8.0).epsilon(1e-6));
    CHECK(s.v == doctest::Approx(1.0 - 4.0 * 0.0025 / 8.0).epsilon(1e-6));
  }
  SUBCASE("matching point domain") {
    CHECK_THROWS_AS(taylor_start(1.0, 1.0, SpaceDim(3), ExponentPair(2.0, 2.0), 0.0),
                    input_error);
    CHECK_THROWS_AS(taylor_start(1.0, 1.0, SpaceDim(3), ExponentPair(2.0, 2.0), 0.2),
                    input_error);
    CHECK_THROWS_AS(taylor_start(-1.0, 1.0, SpaceDim(3), ExponentPair(2.0, 2.0), 0.01),
                    input_error);
  }
}

TEST_CASE("integration outcomes against the reference oracle") {
  const SpaceDim dim(3);
  const ExponentPair pq(3.0, 3.0);
  const IntegratorControls ctl;

  SUBCASE("well above the ground state: u crosses zero") {
    const IntegrationResult res = integrate(10.0, 10.0, dim, pq, ctl);
    CHECK(res.outcome.kind == OutcomeKind::u_crossed);
    CHECK(res.outcome.time == doctest::Approx(frozen::kCrossTime10).epsilon(1e-7));
    const refode::Outcome ref = refode::classify(10.0, 10.0, 3, 3.0, 3.0);
    CHECK(ref.kind == "u_crossed");
    CHECK(res.outcome.time == doctest::Approx(ref.t).epsilon(1e-7));
  }
  SUBCASE("far above the ground state") {
    const IntegrationResult res = integrate(50.0, 50.0, dim, pq, ctl);
    CHECK(res.outcome.kind == OutcomeKind::u_crossed);
    CHECK(res.outcome.time == doctest::Approx(frozen::kCrossTime50).epsilon(1e-7));
  }
  SUBCASE("small data drifts and stays positive through T_max") {
    const IntegrationResult res = integrate(1e-3, 1e-3, dim, pq, ctl);
    CHECK(res.outcome.kind == OutcomeKind::undetermined);
    CHECK(res.outcome.time == ctl.t_max);
    CHECK(res.trajectory.back().u > 0.0);
    const refode::Outcome ref = refode::classify(1e-3, 1e-3, 3, 3.0, 3.0, 1e-3);
    CHECK(ref.kind == "undetermined");
  }
  SUBCASE("a span too short for any event") {
    IntegratorControls quick;
    quick.t0 = 0.01;
    quick.t_max = 0.02;
    const IntegrationResult res = integrate(1.0, 1.0, dim, ExponentPair(2.0, 2.0), quick);
    CHECK(res.outcome.kind == OutcomeKind::undetermined);
    CHECK(res.outcome.time == doctest::Approx(0.02));
  }
}

TEST_CASE("tolerance robustness of event classification") {
  const SpaceDim dim(3);
  const ExponentPair pq(3.0, 3.0);
  for (double ab : {10.0, 50.0}) {
    IntegratorControls coarse;
    IntegratorControls fine;
    fine.rel_tol = 0.5 * coarse.rel_tol;
    fine.abs_tol = 0.5 * coarse.abs_tol;
    fine.t0 = 0.5 * coarse.t0;
    const IntegrationResult r1 = integrate(ab, ab, dim, pq, coarse);
    const IntegrationResult r2 = integrate(ab, ab, dim, pq, fine);
    CHECK(r1.outcome.kind == r2.outcome.kind);
    CHECK(std::abs(r1.outcome.time - r2.outcome.time) <=
          10.0 * coarse.rel_tol * r1.outcome.time);
  }
}

TEST_CASE("the diagonal is preserved exactly for symmetric data") {
  const IntegrationResult res =
      integrate(2.0, 2.0, SpaceDim(3), ExponentPair(3.0, 3.0), IntegratorControls{});
  double worst_uv = 0.0, worst_duv = 0.0;
  for (const RadialState& s : res.trajectory.states()) {
    worst_uv = std::max(worst_uv, std::abs(s.u - s.v));
    worst_duv = std::max(worst_duv, std::abs(s.du - s.dv));
  }
  CHECK(worst_uv <= 100.0 * 1e-10 * 2.0);
  CHECK(worst_duv <= 100.0 * 1e-10 * 2.0);
}

TEST_CASE("series-start consistency under matching-point halving") {
  const SpaceDim dim(3);
  const ExponentPair pq(3.0, 3.0);
  IntegratorControls c1, c2;
  c1.t_max = 0.2;
  c2.t_max = 0.2;
  c2.t0 = 0.5 * c1.t0;
  const RadialState s1 = integrate(1.0, 1.0, dim, pq, c1).trajectory.back();
  const RadialState s2 = integrate(1.0, 1.0, dim, pq, c2).trajectory.back();
  CHECK(std::abs(s1.u - s2.u) <= 10.0 * c1.rel_tol);
  CHECK(std::abs(s1.du - s2.du) <= 10.0 * c1.rel_tol);
  CHECK(std::abs(s1.v - s2.v) <= 10.0 * c1.rel_tol);
  CHECK(std::abs(s1.dv - s2.dv) <= 10.0 * c1.rel_tol);
}

TEST_CASE("self-adjoint form holds in finite differences along trajectories") {
  // Checked on a decaying run, where the adaptive steps stay small enough
  // for second-order differencing of the exponentially growing weight.
  const SpaceDim dim(3);
  const ExponentPair pq(3.0, 3.0);
  const double a_star = 4.89897948556318;
  auto residual = [&](double rel_tol) {
    IntegratorControls ctl;
    ctl.rel_tol = rel_tol;
    ctl.abs_tol = rel_tol;
    const Trajectory traj = integrate(a_star, a_star, dim, pq, ctl).trajectory;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
      // near the origin the accepted steps are comparable to t itself and a
      // three-point stencil of the t^N-scaled flux has O(1) relative error;
      // the check is meaningful once h << t
      if (traj[i].t < 0.1) continue;
      const RadialState& lo = traj[i - 1];
      const RadialState& mid = traj[i];
      const RadialState& hi = traj[i + 1];
      const double k_lo = radial_volume_weight(lo.t, dim);
      const double k_mid = radial_volume_weight(mid.t, dim);
      const double k_hi = radial_volume_weight(hi.t, dim);
      // second-order three-point derivative on the non-uniform grid
      const double hm = mid.t - lo.t, hp = hi.t - mid.t;
      const double d_ku = -hp / (hm * (hm + hp)) * k_lo * lo.du +
                          (hp - hm) / (hm * hp) * k_mid * mid.du +
                          hm / (hp * (hm + hp)) * k_hi * hi.du;
      const double res = d_ku + k_mid * odd_pow(mid.v, pq.p());
      const double scale =
          k_mid * (std::abs(odd_pow(mid.v, pq.p())) + std::abs(mid.du)) + 1e-300;
      worst = std::max(worst, std::abs(res) / scale);
    }
    return worst;
  };
  const double coarse = residual(1e-8);
  const double fine = residual(1e-10);
  CHECK(coarse <= 0.01);        // second-order differencing on adaptive nodes
  CHECK(fine <= coarse / 4.0);  // shrinks with the step size at quadrature order
}

TEST_CASE("data beyond the magnitude bound is classified at the start") {
  IntegratorControls ctl;
  ctl.blowup_threshold = 5.0;
  const IntegrationResult res =
      integrate(10.0, 10.0, SpaceDim(3), ExponentPair(2.0, 2.0), ctl);
  CHECK(res.outcome.kind == OutcomeKind::blowup);
  CHECK(res.outcome.time == ctl.t0);
}

TEST_CASE("a crossing inside the series interval is classified from the series") {
  // b^p t0^2 / (2N) > a pushes u(t0) negative before integration can start
  const IntegrationResult res =
      integrate(1e-2, 54.0, SpaceDim(3), ExponentPair(3.0, 3.0), IntegratorControls{});
  CHECK(res.outcome.kind == OutcomeKind::u_crossed);
  CHECK(res.outcome.time == doctest::Approx(1e-3));
}

TEST_CASE("step-size underflow carries the partial trajectory") {
  IntegratorControls ctl;
  ctl.blowup_threshold = 1e300;  // keep the magnitude guard out of the way
  try {
    integrate(1e5, 1e5, SpaceDim(3), ExponentPair(19.0, 19.0), ctl);
    FAIL("expected integration_error");
  } catch (const integration_error& e) {
    CHECK(e.partial().size() >= 1);
    CHECK(e.partial().front().t == ctl.t0);
  }
}

TEST_CASE("trajectory invariants and controls validation") {
  CHECK_THROWS_AS(integrate(-1.0, 1.0, SpaceDim(3), ExponentPair(2.0, 2.0),
                            IntegratorControls{}),
                  input_error);
  IntegratorControls bad;
  bad.t0 = 0.5;
  CHECK_THROWS_AS(integrate(1.0, 1.0, SpaceDim(3), ExponentPair(2.0, 2.0), bad),
                  input_error);
  bad = IntegratorControls{};
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), input_error);

  std::vector<RadialState> states = {{0.1, 1, 0, 1, 0}, {0.05, 1, 0, 1, 0}};
  CHECK_THROWS_AS(Trajectory(states, Tolerances{1e-10, 1e-10}, StepStats{}), input_error);
}

TEST_CASE("trajectory CSV export is exact and locale independent") {
  const IntegrationResult res =
      integrate(1.0, 1.0, SpaceDim(3), ExponentPair(2.0, 2.0),
                IntegratorControls{.t_max = 1.0});
  std::ostringstream os;
  write_trajectory_csv(os, res.trajectory);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,u,du,v,dv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    CHECK(line.find(',') != std::string::npos);
    CHECK(line.find(' ') == std::string::npos);
    // 17 significant digits round-trip exactly
    double t, u;
    char comma;
    std::istringstream ls(line);
    ls >> t >> comma >> u;
    CHECK(t == res.trajectory[rows].t);
    CHECK(u == res.trajectory[rows].u);
    ++rows;
  }
  CHECK(rows == res.trajectory.size());
}
