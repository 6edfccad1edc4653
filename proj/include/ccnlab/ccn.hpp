#pragma once

// Evolver for the characteristic phase equation
//   tau phi_T = cxy phi_XY + kappa phi_X phi_XX + curlyK phi_XXXX.
// The Fourier multiplier (cxy (-m1 m2) + curlyK m1^4)/tau is handled exactly
// by the integrating factor; the nonlinearity enters as (kappa/2) (phi_X^2)_X
// under the 2/3 rule.  The T-multiplier grows linearly in m2 at fixed m1 --
// the asymptotics behind the equation assume O(1) slow wavenumbers -- so
// retained Y-modes are capped at m2_band and results are meaningful in that
// band only.  A positive curlyK makes the m1^4 growth unbounded; stepping is
// refused in that case unless a band limit is supplied.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ccnlab/chain.hpp"
#include "ccnlab/errors.hpp"
#include "ccnlab/rgl.hpp"
#include "ccnlab/spectral.hpp"

namespace ccnlab {

class CcnStepper {
 public:
  CcnStepper(const PeriodicGrid2D& grid, const CoeffBundle& bundle,
             const StepperConfig& cfg)
      : grid_(grid), bundle_(bundle), dt_(cfg.dt), fft_(grid.ny, grid.nx) {
    grid_.validate();
    if (bundle.curlyK > 0.0 && !cfg.m2_band.has_value())
      fail(errc::ill_posed,
           "ccn stepper: curlyK > 0 without a band limit is ill-posed");
    m2_band_ = cfg.m2_band.value_or(8);
    const size_t n = grid_.size();
    half_.resize(n);
    full_.resize(n);
    keep_.resize(n);
    band_.resize(n);
    mult_.resize(n);
    double max_growth = 0.0;
    for (int iy = 0; iy < grid_.ny; ++iy)
      for (int ix = 0; ix < grid_.nx; ++ix) {
        const size_t i = static_cast<size_t>(iy) * grid_.nx + ix;
        const double m1 = grid_.mx(ix), m2 = grid_.my(iy);
        const bool in_band =
            std::abs(PeriodicGrid2D::sidx(iy, grid_.ny)) <= m2_band_;
        const double lam =
            (bundle_.cxy * (-m1 * m2) + bundle_.curlyK * m1 * m1 * m1 * m1) /
            bundle_.tau;
        mult_[i] = lam;
        if (in_band) max_growth = std::max(max_growth, lam);
        half_[i] = std::exp(lam * dt_ / 2.0);
        full_[i] = half_[i] * half_[i];
        keep_[i] = grid_.kept(ix, iy) ? 1.0 : 0.0;
        band_[i] = in_band ? 1.0 : 0.0;
      }
    StepperConfig probe = cfg;
    probe.validate(max_growth);
    spec_.resize(n);
    work_.resize(n);
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    dx_.resize(n);
  }

  void init(const Field2D& phi0) {
    if (phi0.grid.nx != grid_.nx || phi0.grid.ny != grid_.ny)
      fail(errc::dimension_mismatch, "ccn stepper: grid mismatch");
    spec_ = phi0.values;
    fft_.forward(spec_);
    mask_state(spec_);
    t_ = 0.0;
  }

  void step() {
    nonlinear(spec_, k1_);
    for (size_t i = 0; i < spec_.size(); ++i)
      work_[i] = half_[i] * (spec_[i] + 0.5 * dt_ * k1_[i]);
    nonlinear(work_, k2_);
    for (size_t i = 0; i < spec_.size(); ++i)
      work_[i] = half_[i] * spec_[i] + 0.5 * dt_ * k2_[i];
    nonlinear(work_, k3_);
    for (size_t i = 0; i < spec_.size(); ++i)
      work_[i] = full_[i] * spec_[i] + dt_ * half_[i] * k3_[i];
    nonlinear(work_, k4_);
    for (size_t i = 0; i < spec_.size(); ++i)
      spec_[i] = full_[i] * spec_[i] +
                 dt_ / 6.0 *
                     (full_[i] * k1_[i] + 2.0 * half_[i] * (k2_[i] + k3_[i]) +
                      k4_[i]);
    mask_state(spec_);
    t_ += dt_;
  }

  double time() const { return t_; }
  double multiplier(int jx, int jy) const {
    const int ix = (jx % grid_.nx + grid_.nx) % grid_.nx;
    const int iy = (jy % grid_.ny + grid_.ny) % grid_.ny;
    return mult_[static_cast<size_t>(iy) * grid_.nx + ix];
  }
  cplx mode(int jx, int jy) const {
    const int ix = (jx % grid_.nx + grid_.nx) % grid_.nx;
    const int iy = (jy % grid_.ny + grid_.ny) % grid_.ny;
    return spec_[static_cast<size_t>(iy) * grid_.nx + ix] /
           (static_cast<double>(grid_.nx) * grid_.ny);
  }

  Field2D state() const {
    Field2D f = Field2D::zeros(grid_, FieldKind::ccn_phi);
    f.values = spec_;
    fft_.backward(f.values);
    for (cplx& v : f.values) v = cplx(v.real(), 0.0);  // phi is real
    return f;
  }

  bool finite() const {
    for (const cplx& v : spec_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  void mask_state(std::vector<cplx>& s) const {
    for (size_t i = 0; i < s.size(); ++i) s[i] *= band_[i];
  }

  // N(phi) = (kappa/(2 tau)) d/dX (phi_X^2), dealiased.
  void nonlinear(const std::vector<cplx>& in, std::vector<cplx>& out) {
    for (int iy = 0; iy < grid_.ny; ++iy)
      for (int ix = 0; ix < grid_.nx; ++ix) {
        const size_t i = static_cast<size_t>(iy) * grid_.nx + ix;
        dx_[i] = cplx(0.0, grid_.mx(ix)) * in[i];
      }
    fft_.backward(dx_);
    for (cplx& v : dx_) {
      const double px = v.real();
      v = cplx(px * px, 0.0);
    }
    fft_.forward(dx_);
    const double c = bundle_.kappa / (2.0 * bundle_.tau);
    for (int iy = 0; iy < grid_.ny; ++iy)
      for (int ix = 0; ix < grid_.nx; ++ix) {
        const size_t i = static_cast<size_t>(iy) * grid_.nx + ix;
        out[i] = c * cplx(0.0, grid_.mx(ix)) * dx_[i] * keep_[i] * band_[i];
      }
  }

  PeriodicGrid2D grid_;
  CoeffBundle bundle_;
  double dt_;
  double t_ = 0.0;
  int m2_band_ = 8;
  Fft2D fft_;
  std::vector<double> half_, full_, keep_, band_, mult_;
  std::vector<cplx> spec_, work_, k1_, k2_, k3_, k4_, dx_;
};

inline Field2D ccn_evolve(const Field2D& phi0, const CoeffBundle& bundle,
                          const StepperConfig& cfg) {
  CcnStepper stepper(phi0.grid, bundle, cfg);
  stepper.init(phi0);
  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  for (long n = 0; n < nsteps; ++n) {
    stepper.step();
    if (cfg.nan_check_every > 0 && (n + 1) % cfg.nan_check_every == 0 &&
        !stepper.finite())
      fail(errc::divergence,
           "ccn_evolve: NaN detected at t = " + std::to_string(stepper.time()));
  }
  if (!stepper.finite())
    fail(errc::divergence,
         "ccn_evolve: NaN detected at t = " + std::to_string(stepper.time()));
  return stepper.state();
}

}  // namespace ccnlab
