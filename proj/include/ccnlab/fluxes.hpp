#pragma once

// Conservation-law fluxes (B, A) of the steady pattern family, their
// wavenumber Jacobian, the zig-zag discriminant, characteristics of the
// steady phase-diffusion equation, and its dispersion quadratic.  Every
// quantity is available through two independent routes: RGL closed forms and
// loop-averaged quadrature.

#include <cmath>
#include <utility>

#include "ccnlab/errors.hpp"
#include "ccnlab/multisymplectic.hpp"
#include "ccnlab/roll.hpp"

namespace ccnlab {

struct FluxData {
  double B = 0.0, A = 0.0;
  double Bk = 0.0, Bl = 0.0, Ak = 0.0, Al = 0.0;
  double delta_zz = 0.0;
};

inline FluxData fluxes_closed(Wavenumber kl) {
  if (kl.q2() >= 1.0)
    fail(errc::outside_existence, "fluxes_closed: outside the existence disc");
  const double k = kl.k, l = kl.l, a2 = 1.0 - kl.q2();
  FluxData fd;
  fd.B = k * a2;
  fd.A = l * a2;
  fd.Bk = 1.0 - 3.0 * k * k - l * l;
  fd.Al = 1.0 - k * k - 3.0 * l * l;
  fd.Bl = fd.Ak = -2.0 * k * l;
  fd.delta_zz = fd.Al * fd.Bk - fd.Ak * fd.Bl;
  return fd;
}

// Quadrature route: B = <<J Z_theta, Z>>/2 over the actual theta loop, and
// the Jacobian entries as loop averages against the Z_k / Z_l loops.
inline FluxData fluxes_quadrature(const RollState& st, int n_theta = 32) {
  const Mat8 J = rgl_J(), K = rgl_K();
  const LoopFunction Z = roll_loop(st, n_theta);
  const LoopFunction Zt = loop_derivative(Z);
  const LoopFunction JZt{Zt.samples * J.transpose()};
  const LoopFunction KZt{Zt.samples * K.transpose()};
  const LoopFunction Zk = orbit_loop(st.Zk0, n_theta);
  const LoopFunction Zl = orbit_loop(st.Zl0, n_theta);
  FluxData fd;
  fd.B = 0.5 * loop_average_inner(JZt, Z);
  fd.A = 0.5 * loop_average_inner(KZt, Z);
  fd.Bk = loop_average_inner(JZt, Zk);
  fd.Bl = loop_average_inner(JZt, Zl);
  fd.Ak = loop_average_inner(KZt, Zk);
  fd.Al = loop_average_inner(KZt, Zl);
  fd.delta_zz = fd.Al * fd.Bk - fd.Ak * fd.Bl;
  return fd;
}

// Roots of  Al C^2 + (Bl + Ak) C + Bk = 0.  The plus/minus labels follow the
// +- in front of sqrt(-delta_zz)/Al literally, including when Al < 0 (which
// reverses the ordering of the roots); roots are never re-sorted.
inline std::pair<double, double> characteristics(const FluxData& fd) {
  if (std::abs(fd.Al) < 1e-12)
    fail(errc::degenerate_leading_coeff,
         "characteristics: |A_l| < 1e-12, quadratic degenerates");
  if (fd.delta_zz >= 0.0)
    fail(errc::complex_characteristics,
         "characteristics: delta_zz >= 0, characteristics are complex (D_plus)");
  if (fd.delta_zz > -1e-9)
    fail(errc::coalescing_characteristics,
         "characteristics: |delta_zz| < 1e-9, characteristics coalesce");
  const double root = std::sqrt(-fd.delta_zz);
  const double mid = -(fd.Bl + fd.Ak) / (2.0 * fd.Al);
  return {mid + root / fd.Al, mid - root / fd.Al};
}

// Dispersion quadratic of the linearized phase-diffusion equation: the growth
// rate of Fourier mode m is -Q(m)/tau.  Not integrated in time anywhere; in
// the zig-zag unstable region the linear equation is ill-posed and only this
// quadratic is meaningful.
inline double cn_quadratic(const FluxData& fd, double m1, double m2) {
  return fd.Bk * m1 * m1 + (fd.Bl + fd.Ak) * m1 * m2 + fd.Al * m2 * m2;
}

}  // namespace ccnlab
