#pragma once

// Reduction of the steady characteristic phase equation to KdV, the rescaling
// to standard form, the sech^2 solitary wave, and the map back to a localized
// two-dimensional phase field.  The steady equation
//     (-cxy) q_Y + kappa q q_X + curlyK q_XXX = 0,   q = phi_X,
// (-cxy is the phi_XY coefficient with the branch sign resolved) becomes
//     q_Y + a_nl q q_X + a_disp q_XXX = 0
// after dividing through, and the rescaling X = alpha Xt, Y = beta Yt,
// q = gamma qt sends it to qt_Yt + qt qt_Xt + qt_XtXtXt = 0.

#include <cmath>
#include <vector>

#include "ccnlab/chain.hpp"
#include "ccnlab/errors.hpp"
#include "ccnlab/spectral.hpp"

namespace ccnlab {

struct SteadyReduction {
  double a_nl = 0.0;    // kappa / (-cxy)
  double a_disp = 0.0;  // curlyK / (-cxy)
  bool degenerate = false;  // a_nl == 0: Airy-type reduction, no solitary wave
};

inline SteadyReduction steady_reduction(const CoeffBundle& b) {
  if (std::abs(b.cxy) < 1e-12)
    fail(errc::coalescing_characteristics,
         "steady_reduction: cxy vanishes, characteristics coalesce");
  SteadyReduction r;
  r.a_nl = b.kappa / (-b.cxy);
  r.a_disp = b.curlyK / (-b.cxy);
  r.degenerate = (r.a_nl == 0.0);
  return r;
}

struct KdVScaling {
  double alpha = 1.0, beta = 1.0, gamma = 1.0;
  double a_nl = 0.0, a_disp = 0.0;  // coefficients before scaling
};

// Matching conditions: gamma/beta = gamma^2 a_nl / alpha = gamma a_disp /
// alpha^3.  beta = alpha^3 / a_disp is forced, so sign(alpha) must equal
// sign(a_disp) to keep the slow Y axis uninverted; gamma then carries the
// remaining sign.  (alpha > 0 and beta > 0 cannot both hold when a_disp < 0.)
inline KdVScaling solve_scaling(double a_nl, double a_disp) {
  if (a_nl == 0.0 || a_disp == 0.0)
    fail(errc::degenerate_reduction,
         "solve_scaling: vanishing KdV coefficient");
  KdVScaling s;
  s.a_nl = a_nl;
  s.a_disp = a_disp;
  const double sgn = a_disp > 0.0 ? 1.0 : -1.0;
  s.alpha = sgn * std::sqrt(std::abs(a_disp));
  s.beta = s.alpha * s.alpha * s.alpha / a_disp;  // = sqrt(|a_disp|) > 0
  s.gamma = sgn / a_nl;
  return s;
}

inline double scaling_match_defect(const KdVScaling& s) {
  const double t0 = s.gamma / s.beta;
  const double t1 = s.gamma * s.gamma * s.a_nl / s.alpha;
  const double t2 = s.gamma * s.a_disp / (s.alpha * s.alpha * s.alpha);
  return std::max(std::abs(t0 - t1), std::abs(t0 - t2));
}

struct SolitonProfile {
  double c3 = 0.0;
  double half_width = 0.0;       // zeta-domain half width
  std::vector<double> zeta;      // n samples on [-W, W)
  std::vector<double> q;         // 3 c3 sech^2(sqrt(c3)/2 zeta)
};

inline double soliton_value(double c3, double zeta) {
  const double s = 1.0 / std::cosh(0.5 * std::sqrt(c3) * zeta);
  return 3.0 * c3 * s * s;
}

// Samples the solitary wave at Yt = 0 on a periodic zeta grid.  The default
// half width 30/sqrt(c3) puts the tails below 1e-12 relative to the peak.
inline SolitonProfile soliton(double c3, int n = 1024, double half_width = 0.0) {
  if (!(c3 > 0.0)) fail(errc::parameter, "soliton: c3 must be positive");
  if (n < 8) fail(errc::configuration, "soliton: grid too small");
  SolitonProfile p;
  p.c3 = c3;
  p.half_width = half_width > 0.0 ? half_width : 30.0 / std::sqrt(c3);
  p.zeta.resize(n);
  p.q.resize(n);
  for (int i = 0; i < n; ++i) {
    p.zeta[i] = -p.half_width + 2.0 * p.half_width * i / n;
    p.q[i] = soliton_value(c3, p.zeta[i]);
  }
  return p;
}

// Max-norm residual of -c3 q' + q q' + q''' with spectral derivatives on the
// profile's periodic grid.
inline double soliton_ode_residual(const SolitonProfile& p) {
  const int n = static_cast<int>(p.q.size());
  const double L = 2.0 * p.half_width;
  Fft1D fft(n);
  std::vector<cplx> hat(n);
  for (int i = 0; i < n; ++i) hat[i] = cplx(p.q[i], 0.0);
  fft.forward(hat);
  std::vector<cplx> d1(n), d3(n);
  for (int j = 0; j < n; ++j) {
    const int sj = j <= n / 2 ? j : j - n;
    const double mj = 2.0 * M_PI * sj / L;
    d1[j] = hat[j] * cplx(0.0, mj);
    d3[j] = hat[j] * cplx(0.0, -mj * mj * mj);
  }
  fft.backward(d1);
  fft.backward(d3);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r =
        -p.c3 * d1[i].real() + p.q[i] * d1[i].real() + d3[i].real();
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

struct MappedSoliton {
  Field2D phi;         // zero-mean spectral antiderivative of q in X
  Field2D q;           // wavenumber modulation field
  double mean_shift = 0.0;   // X-mean of q: secular wavenumber shift carried
                             // outside the periodic phi (phi_X = q - mean)
  double third_angle_slope = 0.0;  // crest line dY/dX = beta / (alpha c3)
  double residual = 0.0;           // steady-equation residual, max norm
  double tail = 0.0;               // max |q| at zeta-distance > 0.9 W
};

// Maps the solitary wave back to the slow plane on a tilted-periodic box:
// the crest wraps exactly once, so the sampled field is smooth on the torus
// (the profile is periodized over images; overlaps are far below roundoff).
// The residual is evaluated on the steady equation in q-form, which is the
// phi-form evaluated on the true (secular-including) phase.
inline MappedSoliton map_back(const SolitonProfile& profile,
                              const KdVScaling& s, const CoeffBundle& b,
                              int n = 512, double half_width = 0.0) {
  const double c3 = profile.c3;
  const double W = half_width > 0.0 ? half_width : 80.0 / std::sqrt(c3);
  PeriodicGrid2D g;
  g.nx = g.ny = n;
  g.Lx = 2.0 * W * std::abs(s.alpha);
  g.Ly = 2.0 * W * s.beta / c3;  // exactly one crest wrap
  g.dealias = 1.0;               // pure sampling; no nonlinear products here
  g.validate();

  MappedSoliton out;
  out.phi = Field2D::zeros(g, FieldKind::ccn_phi);
  out.q = Field2D::zeros(g, FieldKind::ccn_phi);
  out.third_angle_slope = s.beta / (s.alpha * c3);

  auto periodized = [&](double zeta) {
    double zw = std::fmod(zeta + W, 2.0 * W);
    if (zw < 0) zw += 2.0 * W;
    zw -= W;
    return soliton_value(c3, zw) + soliton_value(c3, zw - 2.0 * W) +
           soliton_value(c3, zw + 2.0 * W);
  };

  double tail = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double X = g.dx() * ix - g.Lx / 2.0;
      const double Y = g.dy() * iy;
      const double zeta = X / s.alpha - c3 * Y / s.beta;
      const double val = s.gamma * periodized(zeta);
      out.q.at(iy, ix) = cplx(val, 0.0);
      double zw = std::fmod(zeta + W, 2.0 * W);
      if (zw < 0) zw += 2.0 * W;
      zw -= W;
      if (std::abs(zw) > 0.9 * W) tail = std::max(tail, std::abs(val));
    }
  out.tail = tail;

  Fft2D fft(g.ny, g.nx);
  std::vector<cplx> qh = out.q.values;
  fft.forward(qh);

  // phi: zero-mean antiderivative in X; the m1 = 0 content of q is the
  // secular wavenumber shift and cannot live in a periodic phi.
  std::vector<cplx> ph(qh.size(), cplx(0, 0));
  double mean_shift = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const size_t i = static_cast<size_t>(iy) * g.nx + ix;
      const double m1 = g.mx(ix);
      if (ix != 0 && PeriodicGrid2D::sidx(ix, g.nx) != 0)
        ph[i] = qh[i] / cplx(0.0, m1);
    }
  mean_shift = qh[0].real() / g.size();  // row-mean is Y-independent here
  out.mean_shift = mean_shift;
  out.phi.values = ph;
  fft.backward(out.phi.values);
  for (cplx& v : out.phi.values) v = cplx(v.real(), 0.0);

  // steady residual: (-cxy) q_Y + kappa q q_X + curlyK q_XXX
  std::vector<cplx> qY = spectral_derivative(g, qh, 0, 1);
  std::vector<cplx> qX = spectral_derivative(g, qh, 1, 0);
  std::vector<cplx> qXXX = spectral_derivative(g, qh, 3, 0);
  fft.backward(qY);
  fft.backward(qX);
  fft.backward(qXXX);
  double worst = 0.0;
  for (size_t i = 0; i < qh.size(); ++i) {
    const double r = (-b.cxy) * qY[i].real() +
                     b.kappa * out.q.values[i].real() * qX[i].real() +
                     b.curlyK * qXXX[i].real();
    worst = std::max(worst, std::abs(r));
  }
  out.residual = worst;
  return out;
}

}  // namespace ccnlab
