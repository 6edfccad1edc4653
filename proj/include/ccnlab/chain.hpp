#pragma once

// Twisted Jordan chain of the pencil L - lambda (J + C K) about a roll, and
// every scalar coefficient of the characteristic phase equation
//
//     tau phi_T = c_XY phi_XY + kappa phi_X phi_XX + curlyK phi_XXXX.
//
// The chain xi1..xi4 mixes the k- and l-direction Jordan chains through the
// characteristic value C.  Kernel-projected bordered solves make the chain
// construction exact at dimension 8, and each coefficient is computed by at
// least two independent routes (chain inner products vs closed forms, and a
// solvability inner product vs a flux directional derivative for kappa).

#include <cmath>

#include "ccnlab/errors.hpp"
#include "ccnlab/fluxes.hpp"
#include "ccnlab/multisymplectic.hpp"
#include "ccnlab/roll.hpp"

namespace ccnlab {

enum class Branch { plus, minus };

inline const char* branch_name(Branch b) {
  return b == Branch::plus ? "plus" : "minus";
}

// Linearization about the roll in the reduced representation:
//   L = D^2 S(Zhat) - (kJ + lK) Spin.
// Symmetric; kernel spanned by Ztheta0 away from the origin.
inline Mat8 assemble_L(const RollState& st) {
  const double k = st.kl.k, l = st.kl.l;
  const Eigen::Matrix2d J2 = j2();
  const Eigen::Matrix2d I2 = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d A =
      st.kl.q2() * I2 - 2.0 * st.u_hat * st.u_hat.transpose();
  Mat8 L = Mat8::Zero();
  L.block<2, 2>(0, 0) = A;
  L.block<2, 2>(0, 2) = k * J2;
  L.block<2, 2>(0, 4) = l * J2;
  L.block<2, 2>(2, 0) = -k * J2;
  L.block<2, 2>(2, 2) = I2;
  L.block<2, 2>(2, 6) = l * J2;
  L.block<2, 2>(4, 0) = -l * J2;
  L.block<2, 2>(4, 4) = I2;
  L.block<2, 2>(4, 6) = -k * J2;
  L.block<2, 2>(6, 2) = -l * J2;
  L.block<2, 2>(6, 4) = k * J2;
  return L;
}

// Fredholm obstruction of L V = F in the reduced representation:
// <Ztheta0, F> / |Ztheta0|.  Solvable iff this vanishes.
inline double solvability(const RollState& st, const Vec8& F) {
  return st.Ztheta0.dot(F) / st.Ztheta0.norm();
}

struct ChainVectors {
  Branch branch = Branch::plus;
  double C = 0.0;
  Vec8 xi1, xi2, xi3, xi4;
};

namespace detail {
// Solve min |L x - F| with <x, ker> = 0 through the bordered system
//   [ L   ker ] [x ]   [F]
//   [ ker'  0 ] [mu] = [0].
// Exact and stable for the symmetric rank-7 L with known 1-d kernel; the
// multiplier mu reports the kernel component of F.
inline Vec8 bordered_solve(const Mat8& L, const Vec8& ker, const Vec8& F,
                           double* mu_out = nullptr) {
  Eigen::Matrix<double, 9, 9> Aug = Eigen::Matrix<double, 9, 9>::Zero();
  Aug.topLeftCorner<8, 8>() = L;
  Aug.topRightCorner<8, 1>() = ker;
  Aug.bottomLeftCorner<1, 8>() = ker.transpose();
  Eigen::Matrix<double, 9, 1> rhs = Eigen::Matrix<double, 9, 1>::Zero();
  rhs.head<8>() = F;
  const Eigen::Matrix<double, 9, 1> sol = Aug.fullPivLu().solve(rhs);
  if (mu_out) *mu_out = sol[8];
  return sol.head<8>();
}
}  // namespace detail

inline double characteristic_of(const RollState& st, Branch branch) {
  const auto [cp, cm] = characteristics(fluxes_closed(st.kl));
  return branch == Branch::plus ? cp : cm;
}

// Chain solve at a caller-supplied C; refuses unless C is a characteristic
// (the xi3 system is otherwise unsolvable).
inline ChainVectors twisted_chain_at(const RollState& st, Branch branch,
                                     double C) {
  const Mat8 L = assemble_L(st);
  const Mat8 JCK = rgl_J() + C * rgl_K();
  ChainVectors cv;
  cv.branch = branch;
  cv.C = C;
  cv.xi1 = st.Ztheta0;
  cv.xi2 = st.Zk0 + C * st.Zl0;
  const Vec8 F3 = JCK * cv.xi2;
  const double obstruction = std::abs(solvability(st, F3));
  if (obstruction > 1e-8)
    fail(errc::not_a_characteristic,
         "twisted_chain: xi3 solvability obstruction " + std::to_string(obstruction));
  cv.xi3 = detail::bordered_solve(L, cv.xi1, F3);
  cv.xi4 = detail::bordered_solve(L, cv.xi1, JCK * cv.xi3);
  return cv;
}

inline ChainVectors twisted_chain(const RollState& st, Branch branch) {
  return twisted_chain_at(st, branch, characteristic_of(st, branch));
}

// curlyK = <xi2, (J + CK) xi3>; invariant under xi3 -> xi3 + c xi1 because
// the skew form annihilates the kernel direction at a characteristic.
inline double curlyK_chain(const ChainVectors& cv) {
  return cv.xi2.dot((rgl_J() + cv.C * rgl_K()) * cv.xi3);
}

// Chain termination scalar: -<xi1, (J + CK) xi4>.  Nonzero termination is
// what makes the chain have length exactly four.
inline double curlyK_termination(const ChainVectors& cv) {
  return -cv.xi1.dot((rgl_J() + cv.C * rgl_K()) * cv.xi4);
}

inline double curlyK_closed(Wavenumber kl, double C) {
  const double a2 = 1.0 - kl.q2();
  const double s = kl.k + C * kl.l;
  return -(1.0 + C * C) * s * s / a2;
}

// kappa from the fifth-order solvability inner product (first-principles
// route; consumes the second roll derivatives and the rotated xi3):
//   kappa = -<xi1, (J+CK)(Zkk + 2C Zkl + C^2 Zll + Spin xi3)
//                 - D^3S(Zhat)[xi2, xi3]>.
inline double kappa_solvability(const RollState& st, const ChainVectors& cv,
                                const SystemModel& sys) {
  const double C = cv.C;
  const Mat8 JCK = rgl_J() + C * rgl_K();
  const Vec8 curv = st.Zkk0 + 2.0 * C * st.Zkl0 + C * C * st.Zll0;
  const Vec8 vec =
      JCK * (curv + rgl_spin() * cv.xi3).eval() -
      Vec8(sys.d3S(st.Zhat0, cv.xi2, cv.xi3));
  return -cv.xi1.dot(vec);
}

inline double kappa_solvability(const RollState& st, const ChainVectors& cv) {
  static const SystemModel sys = build_rgl_system();
  return kappa_solvability(st, cv, sys);
}

// kappa as the flux directional derivative (d/dk + C d/dl)^2 (B + C A) with C
// held fixed: fourth-order central stencil along the direction (1, C).  For
// the cubic RGL fluxes the stencil is exact up to roundoff.
inline double kappa_flux(Wavenumber kl, double C, double h = 1e-4) {
  auto f = [&](double t) {
    const double k = kl.k + t, l = kl.l + C * t;
    const double a2 = 1.0 - k * k - l * l;
    return k * a2 + C * (l * a2);
  };
  return (-f(2 * h) + 16 * f(h) - 30 * f(0) + 16 * f(-h) - f(-2 * h)) /
         (12 * h * h);
}

// Alternative published polynomial for the kappa coefficient, kept for
// comparison output only: it disagrees with the directional derivative of the
// fluxes except on the diagonal k = l, and is never used downstream.
inline double kappa_reference_poly(Wavenumber kl, double C) {
  return -6.0 * kl.k - 6.0 * C * kl.l - (2.0 * kl.k + 4.0 * kl.l) * C * C -
         6.0 * C * C * C * kl.l;
}

// phi_XY coefficient, closed form 4kl - 2C Al.  Equals the solvability
// bracket <Ztheta, J Zl + K Zk + 2C K Zl> and -+ sigma per branch.
inline double cxy_closed(const FluxData& fd, Wavenumber kl, double C) {
  (void)fd;
  return 4.0 * kl.k * kl.l - 2.0 * C * (1.0 - kl.k * kl.k - 3.0 * kl.l * kl.l);
}

// The same coefficient as the solvability inner product (quadrature route).
inline double cxy_bracket(const RollState& st, double C) {
  const Mat8 J = rgl_J(), K = rgl_K();
  const Vec8 v = J * st.Zl0 + K * st.Zk0 + 2.0 * C * (K * st.Zl0);
  return st.Ztheta0.dot(v);
}

struct CoeffBundle {
  Wavenumber kl;
  Branch branch = Branch::plus;
  double C = 0.0;
  double tau = 0.0;     // coefficient of phi_T (= amp2 for RGL)
  double sigma = 0.0;   // 2 sqrt(-delta_zz)
  double kappa = 0.0;   // nonlinearity coefficient
  double curlyK = 0.0;  // fourth-derivative coefficient (strictly < 0 for RGL)
  double cxy = 0.0;     // phi_XY coefficient, -+ sigma per branch
};

// Cross-check residuals recorded while assembling a bundle.
struct BundleChecks {
  double char_quad_residual = 0.0;   // Al C^2 + (Bl+Ak) C + Bk
  double cxy_vs_sigma = 0.0;         // cxy - (-+ sigma)
  double cxy_vs_bracket = 0.0;       // cxy - solvability bracket
  double kappa_flux_value = 0.0;
  double kappa_rel_diff = 0.0;       // |kappa_solv - kappa_flux| / |kappa_flux|
  double kappa_reference_poly_value = 0.0;
  double kappa_reference_poly_rel_diff = 0.0;  // reported, expected nonzero
  double curlyK_chain_value = 0.0;
  double curlyK_termination_value = 0.0;
  double curlyK_rel_diff = 0.0;      // chain vs closed form
  double chain_residual_xi3 = 0.0;   // |L xi3 - (J+CK) xi2|
  double chain_residual_xi4 = 0.0;
};

// Assembles every scalar of the characteristic phase equation at one
// (k, l, branch), verifying the internal identities as it goes.
inline CoeffBundle ccn_bundle(Wavenumber kl, Branch branch,
                              BundleChecks* checks = nullptr) {
  const FluxData fd = fluxes_closed(kl);
  if (fd.delta_zz >= 0.0)
    fail(errc::complex_characteristics,
         "ccn_bundle: delta_zz >= 0, no real characteristics (D_plus)");
  if (fd.delta_zz > -1e-9)
    fail(errc::coalescing_characteristics,
         "ccn_bundle: |delta_zz| < 1e-9, characteristics coalesce");
  const RollState st = solve_roll(kl);
  const auto [cp, cm] = characteristics(fd);
  const double C = (branch == Branch::plus) ? cp : cm;
  const ChainVectors cv = twisted_chain_at(st, branch, C);
  static const SystemModel sys = build_rgl_system();

  CoeffBundle b;
  b.kl = kl;
  b.branch = branch;
  b.C = C;
  b.tau = st.amp2;
  b.sigma = 2.0 * std::sqrt(-fd.delta_zz);
  b.kappa = kappa_solvability(st, cv, sys);
  b.curlyK = curlyK_closed(kl, C);
  b.cxy = cxy_closed(fd, kl, C);

  BundleChecks ck;
  ck.char_quad_residual = fd.Al * C * C + (fd.Bl + fd.Ak) * C + fd.Bk;
  const double sign = (branch == Branch::plus) ? -1.0 : 1.0;
  ck.cxy_vs_sigma = b.cxy - sign * b.sigma;
  ck.cxy_vs_bracket = b.cxy - cxy_bracket(st, C);
  ck.kappa_flux_value = kappa_flux(kl, C);
  ck.kappa_rel_diff =
      std::abs(b.kappa - ck.kappa_flux_value) / std::abs(ck.kappa_flux_value);
  ck.kappa_reference_poly_value = kappa_reference_poly(kl, C);
  ck.kappa_reference_poly_rel_diff =
      std::abs(b.kappa - ck.kappa_reference_poly_value) / std::abs(b.kappa);
  ck.curlyK_chain_value = curlyK_chain(cv);
  ck.curlyK_termination_value = curlyK_termination(cv);
  ck.curlyK_rel_diff =
      std::abs(ck.curlyK_chain_value - b.curlyK) / std::abs(b.curlyK);
  const Mat8 L = assemble_L(st);
  const Mat8 JCK = rgl_J() + C * rgl_K();
  ck.chain_residual_xi3 =
      (L * cv.xi3 - JCK * cv.xi2).lpNorm<Eigen::Infinity>();
  ck.chain_residual_xi4 =
      (L * cv.xi4 - JCK * cv.xi3).lpNorm<Eigen::Infinity>();

  if (std::abs(ck.char_quad_residual) > 1e-12 ||
      std::abs(ck.cxy_vs_sigma) > 1e-12 || std::abs(ck.cxy_vs_bracket) > 1e-12)
    fail(errc::internal_consistency, "ccn_bundle: phi_XY identity violated");
  if (ck.kappa_rel_diff > 1e-6)
    fail(errc::internal_consistency,
         "ccn_bundle: kappa solvability vs flux routes disagree");
  if (ck.curlyK_rel_diff > 1e-10)
    fail(errc::internal_consistency,
         "ccn_bundle: curlyK chain vs closed form disagree");
  if (checks) *checks = ck;
  return b;
}

}  // namespace ccnlab
