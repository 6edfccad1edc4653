#include <catch2/catch_amalgamated.hpp>

#include "ccnlab/chain.hpp"
#include "ccnlab/multisymplectic.hpp"
#include "ccnlab/roll.hpp"

using namespace ccnlab;

namespace {
// deterministic wavenumber samples inside a radial band
std::vector<Wavenumber> band_samples(int count, double r_lo, double r_hi,
                                     uint64_t seed) {
  std::vector<Wavenumber> pts;
  uint64_t s = seed;
  while (static_cast<int>(pts.size()) < count) {
    const double r =
        std::sqrt(r_lo * r_lo +
                  (r_hi * r_hi - r_lo * r_lo) * detail::unit_uniform(s));
    const double th = 2 * M_PI * detail::unit_uniform(s);
    pts.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return pts;
}
}  // namespace

TEST_CASE("zero-wavenumber roll") {
  const RollState st = solve_roll({0.0, 0.0});
  CHECK(st.u_hat[0] == 1.0);
  CHECK(st.u_hat[1] == 0.0);
  Vec8 expect = Vec8::Zero();
  expect[0] = 1.0;
  CHECK((st.Zhat0 - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("roll at (0.8, 0): amplitude and theta derivative") {
  const RollState st = solve_roll({0.8, 0.0});
  CHECK(st.amp2 == Catch::Approx(0.36).margin(1e-15));
  Vec8 expect = Vec8::Zero();
  expect[1] = 0.6;
  expect[2] = -0.48;
  CHECK((st.Ztheta0 - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("outside the existence disc") {
  CHECK_THROWS_AS(solve_roll({0.9, 0.5}), ccn_error);
  CHECK_THROWS_AS(solve_roll({1.2, 0.0}), ccn_error);
  try {
    solve_roll({0.9, 0.5});
  } catch (const ccn_error& e) {
    CHECK(e.code() == errc::outside_existence);
    CHECK(e.exit_code() == 2);
  }
}

TEST_CASE("amp2 identity and printed first-derivative forms across the disc") {
  for (const Wavenumber kl : band_samples(40, 0.05, 0.98, 0xA11CE)) {
    const RollState st = solve_roll(kl);
    const double a2 = st.amp2;
    REQUIRE(std::abs(a2 - (1 - kl.q2())) < 1e-14);

    // printed closed forms, typed independently of solve_roll's construction
    const Eigen::Matrix2d J2 = j2();
    const Eigen::Vector2d u = st.u_hat;
    Vec8 zk = Vec8::Zero(), zl = Vec8::Zero();
    zk.segment<2>(0) = -(kl.k / a2) * u;
    zk.segment<2>(2) = ((a2 - kl.k * kl.k) / a2) * (J2 * u);
    zk.segment<2>(4) = -(kl.k * kl.l / a2) * (J2 * u);
    zl.segment<2>(0) = -(kl.l / a2) * u;
    zl.segment<2>(2) = -(kl.k * kl.l / a2) * (J2 * u);
    zl.segment<2>(4) = ((a2 - kl.l * kl.l) / a2) * (J2 * u);
    CHECK((st.Zk0 - zk).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((st.Zl0 - zl).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("second derivatives: analytic vs finite differences") {
  for (const Wavenumber kl :
       {Wavenumber{0.8, 0.0}, Wavenumber{0.6, 0.5}, Wavenumber{0.45, 0.45}}) {
    const RollState st = solve_roll(kl);
    const RollSecondDerivsFD fd = roll_second_derivs_fd(kl);
    CHECK((st.Zkk0 - fd.Zkk0).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((st.Zkl0 - fd.Zkl0).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((st.Zll0 - fd.Zll0).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("roll loop: endpoint samples and the tau identity") {
  const RollState st = solve_roll({0.6, 0.3});
  const LoopFunction Z = roll_loop(st, 32);
  SECTION("theta = 0 sample is Zhat0") {
    CHECK((Z.samples.row(0).transpose() - st.Zhat0).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("theta = pi sample is -Zhat0") {
    CHECK((Z.samples.row(16).transpose() + st.Zhat0).cwiseAbs().maxCoeff() <
          1e-15);
  }
  SECTION("<<Z_theta, M Z_theta>> = amp2") {
    const LoopFunction Zt = loop_derivative(Z);
    const Mat8 M = rgl_M();
    CHECK(loop_average_inner(Zt, {Zt.samples * M.transpose()}) ==
          Catch::Approx(st.amp2).margin(1e-13));
  }
}

TEST_CASE("steady residual < 1e-12 across the disc") {
  const SystemModel sys = build_rgl_system();
  for (const Wavenumber kl : band_samples(25, 0.0, 0.97, 0xB0B)) {
    const RollState st = solve_roll(kl);
    CHECK(steady_residual(sys, roll_loop(st), kl.k, kl.l) < 1e-12);
  }
}

TEST_CASE("rotation covariance: amp2 depends only on |q|") {
  const double q = 0.8;
  const RollState ref = solve_roll({q, 0.0});
  for (double th : {0.37, 1.1, 2.0, 4.4}) {
    const RollState st = solve_roll({q * std::cos(th), q * std::sin(th)});
    CHECK(std::abs(st.amp2 - ref.amp2) < 1e-14);
  }
}

TEST_CASE("kernel and Jordan-ladder identities in the reduced representation") {
  const Mat8 J = rgl_J(), K = rgl_K();
  for (const Wavenumber kl : band_samples(100, 0.02, 0.98, 0xC0FFEE)) {
    const RollState st = solve_roll(kl);
    const Mat8 L = assemble_L(st);
    CHECK((L * st.Ztheta0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((L * st.Zk0 - J * st.Ztheta0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((L * st.Zl0 - K * st.Ztheta0).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("classification of wavenumbers") {
  CHECK(classify({0.0, 0.0}) == Region::D_plus);
  CHECK(classify({0.8, 0.0}) == Region::D_minus);
  CHECK(classify({1.2, 0.0}) == Region::outside_D);
  CHECK(delta_zz_closed({0.8, 0.0}) == Catch::Approx(-0.3312).margin(1e-15));
  SECTION("boundary bands") {
    const double r = 1.0 / std::sqrt(3.0);
    CHECK(classify({r, 0.0}, 1e-9) == Region::boundary_zz);
    CHECK(classify({1.0, 0.0}, 1e-9) == Region::boundary_existence);
  }
  SECTION("tol must be positive") {
    CHECK_THROWS_AS(classify({0.5, 0.0}, 0.0), ccn_error);
  }
}
