#include <catch2/catch_amalgamated.hpp>

#include "ccnlab/chain.hpp"

using namespace ccnlab;

namespace {
std::vector<Wavenumber> annulus_samples(int count, uint64_t seed) {
  std::vector<Wavenumber> pts;
  uint64_t s = seed;
  while (static_cast<int>(pts.size()) < count) {
    const double r2 = 1.0 / 3 + 0.03 + (0.95 - 1.0 / 3 - 0.03) * detail::unit_uniform(s);
    const double th = 2 * M_PI * detail::unit_uniform(s);
    const double r = std::sqrt(r2);
    pts.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return pts;
}
}  // namespace

TEST_CASE("operator L: printed block form, symmetry, kernel, rank") {
  SECTION("(0, 0): block diagonal with A = -2 e1 e1^T") {
    const RollState st = solve_roll({0.0, 0.0});
    const Mat8 L = assemble_L(st);
    Mat8 expect = Mat8::Identity();
    expect(0, 0) = -1.0;  // 1 - 2 = -1 on the u1 axis
    expect(1, 1) = 0.0;
    expect(6, 6) = expect(7, 7) = 0.0;
    CHECK((L - expect).cwiseAbs().maxCoeff() < 1e-15);
    Vec8 kv = Vec8::Zero();
    kv[1] = 1.0;
    CHECK((L * kv).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("symmetry and kernel across the disc") {
    for (const Wavenumber kl : annulus_samples(20, 0x5)) {
      const RollState st = solve_roll(kl);
      const Mat8 L = assemble_L(st);
      CHECK((L - L.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK((L * st.Ztheta0).cwiseAbs().maxCoeff() < 1e-13);
      Eigen::JacobiSVD<Mat8> svd(L);
      int rank = 0;
      for (int i = 0; i < 8; ++i)
        if (svd.singularValues()[i] > 1e-10) ++rank;
      CHECK(rank == 7);
    }
  }
  SECTION("L equals hessS - (kJ + lK) Spin") {
    const SystemModel sys = build_rgl_system();
    const RollState st = solve_roll({0.8, 0.0});
    const Mat8 L = assemble_L(st);
    const Mat alt = sys.hessS(st.Zhat0) -
                    (st.kl.k * sys.J + st.kl.l * sys.K) * Mat(rgl_spin());
    CHECK((L - Mat8(alt)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("(0.8,0): L Zk = J Ztheta") {
    const RollState st = solve_roll({0.8, 0.0});
    CHECK((assemble_L(st) * st.Zk0 - rgl_J() * st.Ztheta0)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("solvability obstruction") {
  const RollState st = solve_roll({0.8, 0.0});
  const Mat8 L = assemble_L(st);
  SECTION("range of symmetric L is orthogonal to the kernel") {
    uint64_t s = 0x77;
    for (int i = 0; i < 5; ++i) {
      const Vec8 v = detail::random_state(s, 8, 1.0);
      CHECK(std::abs(solvability(st, L * v)) < 1e-12);
    }
  }
  SECTION("vanishes exactly at characteristics, nonzero off them") {
    const auto [cp, cm] = characteristics(fluxes_closed(st.kl));
    for (double C : {cp, cm}) {
      const Vec8 xi2 = st.Zk0 + C * st.Zl0;
      const Vec8 F = (rgl_J() + C * rgl_K()) * xi2;
      CHECK(std::abs(solvability(st, F)) < 1e-12);
    }
    for (double C : {cp + 0.1, cp - 0.1, cm + 0.1, 0.0}) {
      const Vec8 xi2 = st.Zk0 + C * st.Zl0;
      const Vec8 F = (rgl_J() + C * rgl_K()) * xi2;
      CHECK(std::abs(solvability(st, F)) > 1e-3);
    }
  }
  SECTION("obstruction equals the characteristic quadratic, normalized") {
    // <Ztheta, (J + CK)(Zk + C Zl)> = -(Bk + C Bl + C Ak + C^2 Al)
    const FluxData fd = fluxes_closed(st.kl);
    for (double C : {0.4, 1.0, -2.0}) {
      const Vec8 F = (rgl_J() + C * rgl_K()) * (st.Zk0 + C * st.Zl0);
      const double quad = fd.Bk + C * (fd.Bl + fd.Ak) + C * C * fd.Al;
      CHECK(solvability(st, F) ==
            Catch::Approx(-quad / st.Ztheta0.norm()).margin(1e-12));
    }
  }
}

TEST_CASE("twisted chain: residuals, kernel orthogonality, termination") {
  for (const Wavenumber kl : annulus_samples(12, 0xAB)) {
    for (Branch br : {Branch::plus, Branch::minus}) {
      const RollState st = solve_roll(kl);
      const ChainVectors cv = twisted_chain(st, br);
      const Mat8 L = assemble_L(st);
      const Mat8 JCK = rgl_J() + cv.C * rgl_K();
      CHECK((L * cv.xi2 - JCK * cv.xi1).cwiseAbs().maxCoeff() < 1e-11);
      CHECK((L * cv.xi3 - JCK * cv.xi2).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((L * cv.xi4 - JCK * cv.xi3).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(std::abs(cv.xi3.dot(cv.xi1)) < 1e-11);
      CHECK(std::abs(cv.xi4.dot(cv.xi1)) < 1e-11);
      // chain terminates: the length-five obstruction is nonzero
      CHECK(std::abs(cv.xi1.dot(JCK * cv.xi4)) > 1e-6);
    }
  }
}

TEST_CASE("chain refuses non-characteristic C") {
  const RollState st = solve_roll({0.8, 0.0});
  const auto [cp, cm] = characteristics(fluxes_closed(st.kl));
  try {
    twisted_chain_at(st, Branch::plus, cp + 0.1);
    FAIL("expected not_a_characteristic");
  } catch (const ccn_error& e) {
    CHECK(e.code() == errc::not_a_characteristic);
  }
  (void)cm;
}

TEST_CASE("printed xi3 matches the solved chain modulo kernel") {
  for (const Wavenumber kl : annulus_samples(8, 0xCD)) {
    const RollState st = solve_roll(kl);
    for (Branch br : {Branch::plus, Branch::minus}) {
      const ChainVectors cv = twisted_chain(st, br);
      const double C = cv.C, a2 = st.amp2;
      Vec8 printed = Vec8::Zero();
      printed.segment<2>(2) = ((-kl.k - C * kl.l) / a2) * st.u_hat;
      printed.segment<2>(4) = ((-C * kl.k - C * C * kl.l) / a2) * st.u_hat;
      const Vec8 n1 = cv.xi1 / cv.xi1.norm();
      const Vec8 p_solved = cv.xi3 - n1.dot(cv.xi3) * n1;
      const Vec8 p_printed = printed - n1.dot(printed) * n1;
      CHECK((p_solved - p_printed).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("curlyK: chain, termination, and closed form agree") {
  SECTION("spot value -512/81 at (0.8, 0)") {
    const RollState st = solve_roll({0.8, 0.0});
    const ChainVectors cv = twisted_chain(st, Branch::plus);
    const double expect = -512.0 / 81.0;
    CHECK(curlyK_chain(cv) == Catch::Approx(expect).epsilon(1e-12));
    CHECK(curlyK_termination(cv) == Catch::Approx(expect).epsilon(1e-12));
    CHECK(curlyK_closed(st.kl, cv.C) == Catch::Approx(expect).epsilon(1e-14));
  }
  SECTION("l = 0: both branches share curlyK (even in C)") {
    const RollState st = solve_roll({0.8, 0.0});
    const auto [cp, cm] = characteristics(fluxes_closed(st.kl));
    CHECK(curlyK_closed(st.kl, cp) == Catch::Approx(curlyK_closed(st.kl, cm)));
  }
  SECTION("annulus sample, both branches, both routes") {
    for (const Wavenumber kl : annulus_samples(10, 0xEF)) {
      const RollState st = solve_roll(kl);
      for (Branch br : {Branch::plus, Branch::minus}) {
        const ChainVectors cv = twisted_chain(st, br);
        const double closed = curlyK_closed(kl, cv.C);
        CHECK(std::abs(curlyK_chain(cv) - closed) <=
              1e-10 * std::abs(closed));
        CHECK(std::abs(curlyK_termination(cv) - closed) <=
              1e-10 * std::abs(closed));
      }
    }
  }
  SECTION("kernel shift leaves curlyK unchanged") {
    const RollState st = solve_roll({0.6, 0.5});
    ChainVectors cv = twisted_chain(st, Branch::minus);
    const double base = curlyK_chain(cv);
    cv.xi3 += 5.0 * cv.xi1;
    CHECK(std::abs(curlyK_chain(cv) - base) < 1e-12 * std::abs(base));
  }
  SECTION("strictly negative over a dense annulus grid") {
    int count = 0;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 25; ++j) {
        const double r = std::sqrt(1.0 / 3 + 1e-3 + (1 - 1.0 / 3 - 2e-3) * i / 39.0);
        const double th = 2 * M_PI * j / 25.0;
        const Wavenumber kl{r * std::cos(th), r * std::sin(th)};
        const auto [cp, cm] = characteristics(fluxes_closed(kl));
        CHECK(curlyK_closed(kl, cp) < 0.0);
        CHECK(curlyK_closed(kl, cm) < 0.0);
        ++count;
      }
    REQUIRE(count == 1000);
  }
}

TEST_CASE("kappa: solvability route vs flux directional derivative") {
  SECTION("reference values at (0.8, 0)") {
    const RollState st = solve_roll({0.8, 0.0});
    const ChainVectors cv = twisted_chain(st, Branch::plus);
    const double expect = -6.0 * (1 + 23.0 / 9.0) * 0.8;  // -153.6/9
    CHECK(kappa_solvability(st, cv) == Catch::Approx(expect).epsilon(1e-10));
    CHECK(kappa_flux(st.kl, cv.C) == Catch::Approx(expect).epsilon(1e-7));
  }
  SECTION("flux form vanishes at the origin by oddness") {
    CHECK(std::abs(kappa_flux({0.0, 0.0}, 0.7)) < 1e-10);
  }
  SECTION("odd symmetry: (k,l) -> (-k,-l) flips kappa at fixed C") {
    const Wavenumber kl{0.6, 0.5};
    const auto [cp, cm] = characteristics(fluxes_closed(kl));
    (void)cm;
    const double plusk = kappa_flux(kl, cp);
    const double minusk = kappa_flux({-kl.k, -kl.l}, cp);
    CHECK(plusk == Catch::Approx(-minusk).epsilon(1e-9));
    // and the solvability route agrees on the reflected point
    const RollState st2 = solve_roll({-kl.k, -kl.l});
    const ChainVectors cv2 = twisted_chain_at(st2, Branch::plus, cp);
    CHECK(kappa_solvability(st2, cv2) == Catch::Approx(minusk).epsilon(1e-8));
  }
  SECTION("20 random annulus points, both branches, rel err < 1e-6") {
    for (const Wavenumber kl : annulus_samples(20, 0x1234)) {
      const RollState st = solve_roll(kl);
      for (Branch br : {Branch::plus, Branch::minus}) {
        const ChainVectors cv = twisted_chain(st, br);
        const double ks = kappa_solvability(st, cv);
        const double kf = kappa_flux(kl, cv.C);
        CHECK(std::abs(ks - kf) <= 1e-6 * std::abs(kf));
      }
    }
  }
  SECTION("gauge invariance under kernel shifts of xi3") {
    const RollState st = solve_roll({0.6, 0.5});
    const ChainVectors cv = twisted_chain(st, Branch::minus);
    const double base = kappa_solvability(st, cv);
    for (int c = -10; c <= 10; c += 4) {
      ChainVectors shifted = cv;
      shifted.xi3 += static_cast<double>(c) * cv.xi1;
      CHECK(std::abs(kappa_solvability(st, shifted) - base) <
            1e-10 * std::abs(base));
    }
  }
  SECTION("reference polynomial disagrees off the diagonal k = l") {
    const Wavenumber kl{0.8, 0.0};
    const auto [cp, cm] = characteristics(fluxes_closed(kl));
    (void)cm;
    const double poly = kappa_reference_poly(kl, cp);
    const double flux = kappa_flux(kl, cp);
    CHECK(std::abs(poly - flux) > 1.0);  // documented discrepancy
    // ... but agrees on the diagonal
    const Wavenumber kd{0.45, 0.45};
    const auto [dp, dm] = characteristics(fluxes_closed(kd));
    (void)dm;
    CHECK(kappa_reference_poly(kd, dp) ==
          Catch::Approx(kappa_flux(kd, dp)).epsilon(1e-7));
  }
}

TEST_CASE("coefficient bundle at (0.8, 0), branch plus") {
  BundleChecks ck;
  const CoeffBundle b = ccn_bundle({0.8, 0.0}, Branch::plus, &ck);
  CHECK(b.tau == Catch::Approx(0.36).margin(1e-14));
  CHECK(b.sigma == Catch::Approx(2 * std::sqrt(0.3312)).margin(1e-14));
  CHECK(b.sigma == Catch::Approx(1.151).margin(1e-3));
  CHECK(b.cxy == Catch::Approx(-b.sigma).margin(1e-12));
  CHECK(b.curlyK == Catch::Approx(-512.0 / 81.0).epsilon(1e-12));
  CHECK(b.kappa == Catch::Approx(-153.6 / 9.0).epsilon(1e-9));
  CHECK(std::abs(ck.char_quad_residual) < 1e-12);
  CHECK(std::abs(ck.cxy_vs_bracket) < 1e-12);
  CHECK(ck.kappa_rel_diff < 1e-6);
  CHECK(ck.curlyK_rel_diff < 1e-10);
  CHECK(ck.kappa_reference_poly_rel_diff > 0.1);  // reported, not a failure
}

TEST_CASE("bundle branch antisymmetry of cxy at l = 0") {
  const CoeffBundle bp = ccn_bundle({0.8, 0.0}, Branch::plus);
  const CoeffBundle bm = ccn_bundle({0.8, 0.0}, Branch::minus);
  CHECK(bp.cxy == Catch::Approx(-bm.cxy).margin(1e-12));
  CHECK(bp.cxy + bm.cxy == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("bundle inside the annulus at (0.45, 0.45)") {
  BundleChecks ck;
  const CoeffBundle b = ccn_bundle({0.45, 0.45}, Branch::plus, &ck);
  CHECK(b.tau == Catch::Approx(1 - 0.405).margin(1e-14));
  CHECK(std::abs(ck.char_quad_residual) < 1e-10);
  CHECK(std::abs(ck.cxy_vs_sigma) < 1e-10);
  CHECK(ck.kappa_rel_diff < 1e-6);
  CHECK(ck.curlyK_rel_diff < 1e-10);
}

TEST_CASE("bundle error taxonomy") {
  SECTION("zig-zag stable region refuses") {
    try {
      ccn_bundle({0.2, 0.2}, Branch::plus);
      FAIL("expected complex_characteristics");
    } catch (const ccn_error& e) {
      CHECK(e.code() == errc::complex_characteristics);
      CHECK(e.exit_code() == 2);
    }
  }
  SECTION("coalescing characteristics near the inner boundary") {
    const double r = 1.0 / std::sqrt(3.0) + 1e-12;
    try {
      ccn_bundle({r, 0.0}, Branch::plus);
      FAIL("expected coalescing_characteristics");
    } catch (const ccn_error& e) {
      CHECK(e.code() == errc::coalescing_characteristics);
      CHECK(e.exit_code() == 3);
    }
  }
}

TEST_CASE("phi_XY coefficient: bracket = closed form = -+ sigma") {
  for (const Wavenumber kl : annulus_samples(10, 0x9999)) {
    const RollState st = solve_roll(kl);
    const FluxData fd = fluxes_closed(kl);
    const auto [cp, cm] = characteristics(fd);
    const double sigma = 2 * std::sqrt(-fd.delta_zz);
    struct Case { double C; double sign; } cases[2] = {{cp, -1.0}, {cm, +1.0}};
    for (const auto& c : cases) {
      const double closed = cxy_closed(fd, kl, c.C);
      const double bracket = cxy_bracket(st, c.C);
      CHECK(std::abs(closed - bracket) < 1e-12);
      CHECK(std::abs(closed - c.sign * sigma) < 1e-12);
      // the flux-sum Ak + Bl + 2C Al is the bracket's negative
      const double fluxsum = fd.Ak + fd.Bl + 2 * c.C * fd.Al;
      CHECK(std::abs(fluxsum + bracket) < 1e-12);
    }
  }
}
