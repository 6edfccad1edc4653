#pragma once

// Pseudospectral integrating-factor (Lawson) RK4 evolver for the real
// Ginzburg-Landau equation  Psi_t = Laplacian Psi + Psi - |Psi|^2 Psi  on a
// periodic rectangle.  The linear multiplier 1 - |m|^2 is handled exactly by
// the integrating factor; the cubic term is evaluated pseudospectrally under
// a 1/2-rule mask (a cubic nonlinearity aliases under the 2/3 rule).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ccnlab/errors.hpp"
#include "ccnlab/spectral.hpp"

namespace ccnlab {

enum class Scheme { lawson_rk4 };

struct StepperConfig {
  double dt = 1e-2;
  double t_end = 1.0;
  Scheme scheme = Scheme::lawson_rk4;
  std::optional<int> m2_band;  // CCN only: cap on retained Y-mode index
  int nan_check_every = 50;

  void validate(double max_linear_growth) const {
    if (!(dt > 0.0)) fail(errc::configuration, "stepper: dt must be positive");
    if (t_end < 0.0) fail(errc::configuration, "stepper: t_end must be >= 0");
    // stability margin on the explicitly-seen growth scale
    if (dt * std::max(0.0, max_linear_growth) >= 0.5)
      fail(errc::configuration,
           "stepper: dt * max linear growth rate must stay below 0.5");
  }
};

class RglStepper {
 public:
  RglStepper(const PeriodicGrid2D& grid, double dt)
      : grid_(grid), dt_(dt), fft_(grid.ny, grid.nx) {
    grid_.validate();
    const size_t n = grid_.size();
    half_.resize(n);
    full_.resize(n);
    keep_.resize(n);
    double max_growth = 0.0;
    for (int iy = 0; iy < grid_.ny; ++iy)
      for (int ix = 0; ix < grid_.nx; ++ix) {
        const size_t i = static_cast<size_t>(iy) * grid_.nx + ix;
        const double lam =
            1.0 - (grid_.mx(ix) * grid_.mx(ix) + grid_.my(iy) * grid_.my(iy));
        max_growth = std::max(max_growth, lam);
        half_[i] = std::exp(lam * dt / 2.0);
        full_[i] = half_[i] * half_[i];
        keep_[i] = grid_.kept(ix, iy) ? 1.0 : 0.0;
      }
    StepperConfig probe;
    probe.dt = dt;
    probe.validate(max_growth);
    spec_.resize(n);
    work_.resize(n);
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
  }

  void init(const Field2D& psi0) {
    if (psi0.grid.nx != grid_.nx || psi0.grid.ny != grid_.ny)
      fail(errc::dimension_mismatch, "rgl stepper: grid mismatch");
    spec_ = psi0.values;
    fft_.forward(spec_);
    for (size_t i = 0; i < spec_.size(); ++i) spec_[i] *= keep_[i];
    t_ = 0.0;
  }

  // One Lawson-RK4 step.
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
    t_ += dt_;
  }

  double time() const { return t_; }

  // Normalized spectral coefficient of lab-frame mode (jx, jy); negative
  // indices wrap.
  cplx mode(int jx, int jy) const {
    const int ix = (jx % grid_.nx + grid_.nx) % grid_.nx;
    const int iy = (jy % grid_.ny + grid_.ny) % grid_.ny;
    return spec_[static_cast<size_t>(iy) * grid_.nx + ix] /
           (static_cast<double>(grid_.nx) * grid_.ny);
  }

  Field2D state() const {
    Field2D f = Field2D::zeros(grid_, FieldKind::rgl_psi);
    f.values = spec_;
    fft_.backward(f.values);
    return f;
  }

  bool finite() const {
    for (const cplx& v : spec_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  // N(Psi) = -|Psi|^2 Psi, dealiased.
  void nonlinear(const std::vector<cplx>& in, std::vector<cplx>& out) {
    out = in;
    fft_.backward(out);
    for (cplx& v : out) v = -std::norm(v) * v;
    fft_.forward(out);
    for (size_t i = 0; i < out.size(); ++i) out[i] *= keep_[i];
  }

  PeriodicGrid2D grid_;
  double dt_;
  double t_ = 0.0;
  Fft2D fft_;
  std::vector<double> half_, full_, keep_;
  std::vector<cplx> spec_, work_, k1_, k2_, k3_, k4_;
};

inline Field2D rgl_evolve(const Field2D& psi0, const StepperConfig& cfg) {
  PeriodicGrid2D g = psi0.grid;
  if (g.dealias > 0.5) g.dealias = 0.5;  // cubic term needs the 1/2 rule
  Field2D init = psi0;
  init.grid = g;
  RglStepper stepper(g, cfg.dt);
  stepper.init(init);
  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  for (long n = 0; n < nsteps; ++n) {
    stepper.step();
    if (cfg.nan_check_every > 0 && (n + 1) % cfg.nan_check_every == 0 &&
        !stepper.finite())
      fail(errc::divergence,
           "rgl_evolve: NaN detected at t = " + std::to_string(stepper.time()));
  }
  if (!stepper.finite())
    fail(errc::divergence,
         "rgl_evolve: NaN detected at t = " + std::to_string(stepper.time()));
  return stepper.state();
}

}  // namespace ccnlab
