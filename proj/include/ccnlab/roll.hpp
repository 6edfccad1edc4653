#pragma once

// The RGL roll family.  Everything is closed form: at wavenumber (k,l) inside
// the unit disc the roll has squared amplitude |u|^2 = 1 - k^2 - l^2, and the
// reduced representation at theta = 0 (phase normalized so u points along the
// first axis) carries the full state plus its theta/k/l derivatives.  All
// chain computations downstream happen in this reduced 8-dimensional picture,
// which is legitimate because the rotation action commutes with M, J, K.

#include <cmath>

#include "ccnlab/errors.hpp"
#include "ccnlab/multisymplectic.hpp"

namespace ccnlab {

struct Wavenumber {
  double k = 0.0;
  double l = 0.0;
  double q2() const { return k * k + l * l; }
  double q() const { return std::sqrt(q2()); }
  double angle() const { return std::atan2(l, k); }
};

enum class Region { outside_D, D_plus, D_minus, boundary_existence, boundary_zz };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::outside_D: return "outside_D";
    case Region::D_plus: return "D_plus";
    case Region::D_minus: return "D_minus";
    case Region::boundary_existence: return "boundary_existence";
    case Region::boundary_zz: return "boundary_zz";
  }
  return "unknown";
}

// Zig-zag discriminant, closed form for RGL.
inline double delta_zz_closed(Wavenumber kl) {
  return (1.0 - 3.0 * kl.q2()) * (1.0 - kl.q2());
}

inline Region classify(Wavenumber kl, double tol = 1e-9) {
  if (tol <= 0.0) fail(errc::parameter, "classify: tol must be positive");
  const double q2 = kl.q2();
  if (std::abs(q2 - 1.0) <= tol) return Region::boundary_existence;
  if (q2 > 1.0) return Region::outside_D;
  const double dzz = delta_zz_closed(kl);
  if (std::abs(dzz) <= tol) return Region::boundary_zz;
  return dzz < 0.0 ? Region::D_minus : Region::D_plus;
}

struct RollState {
  Wavenumber kl;
  Eigen::Vector2d u_hat;  // phase-normalized: u_hat = (sqrt(amp2), 0)
  double amp2 = 0.0;
  Vec8 Zhat0;                  // reduced state at theta = 0
  Vec8 Ztheta0, Zk0, Zl0;      // first derivatives at theta = 0
  Vec8 Zkk0, Zkl0, Zll0;       // second wavenumber derivatives at theta = 0
};

namespace detail {
inline Vec8 assemble_state(const Eigen::Vector2d& ub, const Eigen::Vector2d& pb,
                           const Eigen::Vector2d& rb) {
  Vec8 z = Vec8::Zero();
  z.segment<2>(0) = ub;
  z.segment<2>(2) = pb;
  z.segment<2>(4) = rb;
  return z;
}
}  // namespace detail

inline RollState solve_roll(Wavenumber kl) {
  const double amp2 = 1.0 - kl.q2();
  if (amp2 <= 0.0)
    fail(errc::outside_existence,
         "solve_roll: k^2 + l^2 >= 1, no roll at this wavenumber");
  const double k = kl.k, l = kl.l;
  const double a = std::sqrt(amp2);
  const Eigen::Matrix2d J2 = j2();

  const Eigen::Vector2d u(a, 0.0);
  const Eigen::Vector2d uk = -(k / amp2) * u;
  const Eigen::Vector2d ul = -(l / amp2) * u;
  const Eigen::Vector2d ukk(-1.0 / a - k * k / (a * amp2), 0.0);
  const Eigen::Vector2d ukl(-k * l / (a * amp2), 0.0);
  const Eigen::Vector2d ull(-1.0 / a - l * l / (a * amp2), 0.0);

  RollState st;
  st.kl = kl;
  st.u_hat = u;
  st.amp2 = amp2;
  st.Zhat0 = detail::assemble_state(u, k * (J2 * u), l * (J2 * u));
  st.Ztheta0 = rgl_spin() * st.Zhat0;
  st.Zk0 = detail::assemble_state(uk, J2 * u + k * (J2 * uk), l * (J2 * uk));
  st.Zl0 = detail::assemble_state(ul, k * (J2 * ul), J2 * u + l * (J2 * ul));
  st.Zkk0 = detail::assemble_state(ukk, 2.0 * (J2 * uk) + k * (J2 * ukk),
                                   l * (J2 * ukk));
  st.Zkl0 = detail::assemble_state(ukl, J2 * ul + k * (J2 * ukl),
                                   J2 * uk + l * (J2 * ukl));
  st.Zll0 = detail::assemble_state(ull, k * (J2 * ull),
                                   2.0 * (J2 * ul) + l * (J2 * ull));
  return st;
}

// Central finite differences of the closed-form first derivatives; shipped as
// an independent route for the second derivatives (the kappa solvability
// expression consumes them, so a derivation slip there must not go unnoticed).
struct RollSecondDerivsFD {
  Vec8 Zkk0, Zkl0, Zll0;
};

inline RollSecondDerivsFD roll_second_derivs_fd(Wavenumber kl, double h = 1e-5) {
  auto Zk_at = [](double k, double l) { return solve_roll({k, l}).Zk0; };
  auto Zl_at = [](double k, double l) { return solve_roll({k, l}).Zl0; };
  RollSecondDerivsFD out;
  out.Zkk0 = (Zk_at(kl.k + h, kl.l) - Zk_at(kl.k - h, kl.l)) / (2 * h);
  out.Zkl0 = (Zk_at(kl.k, kl.l + h) - Zk_at(kl.k, kl.l - h)) / (2 * h);
  out.Zll0 = (Zl_at(kl.k, kl.l + h) - Zl_at(kl.k, kl.l - h)) / (2 * h);
  return out;
}

// Samples G_theta * Zhat0 on the periodic theta grid.
inline LoopFunction roll_loop(const RollState& st, int n_theta = 32) {
  if (n_theta < 4 || (n_theta & (n_theta - 1)) != 0)
    fail(errc::configuration, "roll_loop: n_theta must be a power of two >= 4");
  Mat samples(n_theta, 8);
  for (int i = 0; i < n_theta; ++i)
    samples.row(i) = (rgl_rotation(2.0 * M_PI * i / n_theta) * st.Zhat0).transpose();
  return LoopFunction{samples};
}

// Loop of an arbitrary reduced vector carried around the group orbit.
inline LoopFunction orbit_loop(const Vec8& v0, int n_theta = 32) {
  Mat samples(n_theta, 8);
  for (int i = 0; i < n_theta; ++i)
    samples.row(i) = (rgl_rotation(2.0 * M_PI * i / n_theta) * v0).transpose();
  return LoopFunction{samples};
}

}  // namespace ccnlab
