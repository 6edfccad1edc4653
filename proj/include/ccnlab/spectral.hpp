#pragma once

// Periodic-grid spectral infrastructure shared by the RGL and CCN evolvers:
// grid metadata, complex fields, FFTW plan wrappers, signed-mode wavenumbers,
// spectral derivatives, and dealias masks.  Plans are created under a global
// mutex (the FFTW planner is not thread-safe); execution on distinct buffers
// is safe, so independent simulations may run in parallel.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <mutex>
#include <string>
#include <vector>

#include "ccnlab/errors.hpp"

namespace ccnlab {

struct PeriodicGrid2D {
  int nx = 0, ny = 0;      // power-of-two mode counts, >= 8
  double Lx = 0.0, Ly = 0.0;
  double dealias = 2.0 / 3.0;

  void validate() const {
    auto pow2 = [](int n) { return n >= 8 && (n & (n - 1)) == 0; };
    if (!pow2(nx) || !pow2(ny))
      fail(errc::configuration, "grid: nx, ny must be powers of two >= 8");
    if (!(Lx > 0.0) || !(Ly > 0.0))
      fail(errc::configuration, "grid: Lx, Ly must be positive");
    if (!(dealias > 0.0) || dealias > 1.0)
      fail(errc::configuration, "grid: dealias fraction must lie in (0, 1]");
  }
  double dx() const { return Lx / nx; }
  double dy() const { return Ly / ny; }
  // signed mode index for FFT bin j
  static int sidx(int j, int n) { return j <= n / 2 ? j : j - n; }
  double mx(int jx) const { return 2.0 * M_PI * sidx(jx, nx) / Lx; }
  double my(int jy) const { return 2.0 * M_PI * sidx(jy, ny) / Ly; }
  bool kept(int jx, int jy) const {
    return std::abs(sidx(jx, nx)) < nx * dealias / 2.0 &&
           std::abs(sidx(jy, ny)) < ny * dealias / 2.0;
  }
  size_t size() const { return static_cast<size_t>(nx) * ny; }
};

enum class FieldKind { rgl_psi, ccn_phi };

using cplx = std::complex<double>;

// Row-major ny x nx complex samples (row = y index).  ccn_phi fields are
// real-valued; the complex storage keeps one transform path for both kinds.
struct Field2D {
  PeriodicGrid2D grid;
  FieldKind kind = FieldKind::rgl_psi;
  std::vector<cplx> values;

  static Field2D zeros(const PeriodicGrid2D& g, FieldKind kind) {
    g.validate();
    return Field2D{g, kind, std::vector<cplx>(g.size(), cplx(0.0, 0.0))};
  }
  cplx& at(int iy, int ix) { return values[static_cast<size_t>(iy) * grid.nx + ix]; }
  const cplx& at(int iy, int ix) const {
    return values[static_cast<size_t>(iy) * grid.nx + ix];
  }
  bool finite() const {
    for (const cplx& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place 2D c2c transforms; backward is normalized by 1/(nx ny).
// FFTW_UNALIGNED lets one plan serve any std::vector buffer.
class Fft2D {
 public:
  Fft2D(int ny, int nx) : ny_(ny), nx_(nx) {
    std::vector<cplx> scratch(static_cast<size_t>(nx) * ny);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_2d(ny, nx, p, p, FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_2d(ny, nx, p, p, FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) fail(errc::configuration, "fftw plan creation failed");
  }
  ~Fft2D() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  void forward(std::vector<cplx>& v) const {
    auto* p = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(fwd_, p, p);
  }
  void backward(std::vector<cplx>& v) const {
    auto* p = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(bwd_, p, p);
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    for (cplx& z : v) z *= scale;
  }

 private:
  int ny_, nx_;
  fftw_plan fwd_, bwd_;
};

// 1D companion used by the profile diagnostics.
class Fft1D {
 public:
  explicit Fft1D(int n) : n_(n) {
    std::vector<cplx> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) fail(errc::configuration, "fftw plan creation failed");
  }
  ~Fft1D() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft1D(const Fft1D&) = delete;
  Fft1D& operator=(const Fft1D&) = delete;

  void forward(std::vector<cplx>& v) const {
    auto* p = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(fwd_, p, p);
  }
  void backward(std::vector<cplx>& v) const {
    auto* p = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(bwd_, p, p);
    const double scale = 1.0 / n_;
    for (cplx& z : v) z *= scale;
  }

 private:
  int n_;
  fftw_plan fwd_, bwd_;
};

// Spectrum-side helpers; spectra are FFTW-unnormalized forward transforms.
inline void apply_dealias(const PeriodicGrid2D& g, std::vector<cplx>& spec) {
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (!g.kept(ix, iy)) spec[static_cast<size_t>(iy) * g.nx + ix] = 0.0;
}

inline std::vector<cplx> spectral_derivative(const PeriodicGrid2D& g,
                                             const std::vector<cplx>& spec,
                                             int ox, int oy) {
  std::vector<cplx> out(spec.size());
  for (int iy = 0; iy < g.ny; ++iy) {
    const cplx fy = std::pow(cplx(0.0, g.my(iy)), oy);
    for (int ix = 0; ix < g.nx; ++ix) {
      const cplx fx = std::pow(cplx(0.0, g.mx(ix)), ox);
      out[static_cast<size_t>(iy) * g.nx + ix] =
          spec[static_cast<size_t>(iy) * g.nx + ix] * fx * fy;
    }
  }
  return out;
}

// Physical-space derivative of a field (transform, multiply, inverse).
inline Field2D field_derivative(const Field2D& f, int ox, int oy) {
  Fft2D fft(f.grid.ny, f.grid.nx);
  std::vector<cplx> spec = f.values;
  fft.forward(spec);
  spec = spectral_derivative(f.grid, spec, ox, oy);
  fft.backward(spec);
  return Field2D{f.grid, f.kind, std::move(spec)};
}

// Round-trip transform error; the Field2D invariant requires < 1e-12.
inline double spectral_roundtrip_error(const Field2D& f) {
  Fft2D fft(f.grid.ny, f.grid.nx);
  std::vector<cplx> w = f.values;
  fft.forward(w);
  fft.backward(w);
  double worst = 0.0;
  for (size_t i = 0; i < w.size(); ++i)
    worst = std::max(worst, std::abs(w[i] - f.values[i]));
  return worst;
}

// Snaps a wavenumber to the nearest grid-representable 2 pi j / L.
struct SnapResult {
  double value = 0.0;
  int index = 0;
  double shift = 0.0;  // snapped - requested
};

inline SnapResult snap_wavenumber(double target, double L, int n) {
  SnapResult s;
  s.index = static_cast<int>(std::lround(target * L / (2.0 * M_PI)));
  if (std::abs(s.index) > n / 2 - 1)
    fail(errc::configuration, "snap_wavenumber: target outside the resolvable band");
  s.value = 2.0 * M_PI * s.index / L;
  s.shift = s.value - target;
  return s;
}

}  // namespace ccnlab
