#pragma once

// Multisymplectic structure M Z_t + J Z_x + K Z_y = grad S(Z):
// structure matrices, loop functions over the phase circle, the loop-averaged
// inner product, and structural self-checks.  The shipped instantiation is the
// real Ginzburg-Landau equation in its 8-dimensional first-order form
// Z = (u, p, r, w) with p = u_x - w_y, r = u_y + w_x and the cross-derivative
// constraint p_y = r_x closing the system.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ccnlab/errors.hpp"

namespace ccnlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

struct SystemModel {
  int dim = 0;
  Mat M, J, K;
  std::function<double(const Vec&)> S;
  std::function<Vec(const Vec&)> gradS;
  std::function<Mat(const Vec&)> hessS;
  // Trilinear form D^3S(Z)[a,b], returned as a vector.
  std::function<Vec(const Vec&, const Vec&, const Vec&)> d3S;
};

// 2x2 symplectic unit.
inline Eigen::Matrix2d j2() {
  Eigen::Matrix2d J2;
  J2 << 0.0, -1.0, 1.0, 0.0;
  return J2;
}

// G_theta = R_theta applied to each of the four 2-blocks.
inline Mat8 rgl_rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat8 G = Mat8::Zero();
  for (int b = 0; b < 4; ++b) {
    G(2 * b, 2 * b) = c;
    G(2 * b, 2 * b + 1) = -s;
    G(2 * b + 1, 2 * b) = s;
    G(2 * b + 1, 2 * b + 1) = c;
  }
  return G;
}

// d/dtheta of the rotation action at theta = 0: blockdiag(J2, J2, J2, J2).
inline Mat8 rgl_spin() {
  Mat8 S = Mat8::Zero();
  for (int b = 0; b < 4; ++b) {
    S(2 * b, 2 * b + 1) = -1.0;
    S(2 * b + 1, 2 * b) = 1.0;
  }
  return S;
}

inline Mat8 rgl_J() {
  Mat8 J = Mat8::Zero();
  J.block<2, 2>(0, 2) = -Eigen::Matrix2d::Identity();
  J.block<2, 2>(2, 0) = Eigen::Matrix2d::Identity();
  J.block<2, 2>(4, 6) = Eigen::Matrix2d::Identity();
  J.block<2, 2>(6, 4) = -Eigen::Matrix2d::Identity();
  return J;
}

inline Mat8 rgl_K() {
  Mat8 K = Mat8::Zero();
  K.block<2, 2>(0, 4) = -Eigen::Matrix2d::Identity();
  K.block<2, 2>(2, 6) = -Eigen::Matrix2d::Identity();
  K.block<2, 2>(4, 0) = Eigen::Matrix2d::Identity();
  K.block<2, 2>(6, 2) = Eigen::Matrix2d::Identity();
  return K;
}

inline Mat8 rgl_M() {
  Mat8 M = Mat8::Zero();
  M(0, 0) = M(1, 1) = 1.0;
  return M;
}

// The RGL generalized Hamiltonian is
//   S(Z) = |u|^2/2 + |p|^2/2 + |r|^2/2 - quartic*|u|^4,
// with quartic = 1/4 so that grad_u S = u - |u|^2 u reproduces the RGL
// nonlinearity and the steady roll equation closes.  The coefficient is a
// constructor parameter solely so the validation suite can inject a corrupted
// value and demonstrate that the steady-residual gate catches it.
inline SystemModel build_rgl_system(double quartic = 0.25) {
  SystemModel sys;
  sys.dim = 8;
  sys.M = rgl_M();
  sys.J = rgl_J();
  sys.K = rgl_K();
  sys.S = [quartic](const Vec& Z) {
    const double u2 = Z.segment<2>(0).squaredNorm();
    return 0.5 * u2 + 0.5 * Z.segment<2>(2).squaredNorm() +
           0.5 * Z.segment<2>(4).squaredNorm() - quartic * u2 * u2;
  };
  sys.gradS = [quartic](const Vec& Z) {
    Vec g = Z;
    const Eigen::Vector2d u = Z.segment<2>(0);
    g.segment<2>(0) = u - 4.0 * quartic * u.squaredNorm() * u;
    g.segment<2>(6).setZero();
    return g;
  };
  sys.hessS = [quartic](const Vec& Z) {
    Mat H = Mat::Identity(8, 8);
    H(6, 6) = H(7, 7) = 0.0;
    const Eigen::Vector2d u = Z.segment<2>(0);
    H.block<2, 2>(0, 0) =
        Eigen::Matrix2d::Identity() -
        4.0 * quartic * (u.squaredNorm() * Eigen::Matrix2d::Identity() +
                         2.0 * u * u.transpose());
    return H;
  };
  sys.d3S = [quartic](const Vec& Z, const Vec& a, const Vec& b) {
    Vec out = Vec::Zero(8);
    const Eigen::Vector2d u = Z.segment<2>(0);
    const Eigen::Vector2d au = a.segment<2>(0);
    const Eigen::Vector2d bu = b.segment<2>(0);
    out.segment<2>(0) = -8.0 * quartic *
                        (au.dot(bu) * u + u.dot(bu) * au + u.dot(au) * bu);
    return out;
  };
  return sys;
}

// A loop of states sampled at n equispaced theta points on [0, 2pi); the
// sample after the last wraps to the first, no duplicated endpoint.
struct LoopFunction {
  Mat samples;  // n_theta x dim, row i at theta = 2 pi i / n
  int n_theta() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
};

// Spectral differentiation matrix on the periodic grid (even n).  Exact for
// trigonometric polynomials of degree < n/2; the RGL roll integrands have
// degree <= 4, so n = 32 leaves ample headroom.
inline Mat trig_diff_matrix(int n) {
  Mat D = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int d = i - j;
      const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
      D(i, j) = 0.5 * sgn / std::tan(M_PI * d / n);
    }
  return D;
}

inline LoopFunction loop_derivative(const LoopFunction& Z) {
  return LoopFunction{trig_diff_matrix(Z.n_theta()) * Z.samples};
}

// <<a,b>> = (1/2pi) \oint <a,b> dtheta, trapezoidal on the periodic grid
// (spectrally exact for band-limited integrands).
inline double loop_average_inner(const LoopFunction& a, const LoopFunction& b) {
  if (a.dim() != b.dim() || a.n_theta() != b.n_theta())
    fail(errc::dimension_mismatch, "loop_average_inner: incompatible loops");
  return a.samples.cwiseProduct(b.samples).sum() / a.n_theta();
}

// max over theta of |(kJ + lK) Z_theta - grad S(Z)|_inf, Z_theta spectral.
inline double steady_residual(const SystemModel& sys, const LoopFunction& Z,
                              double k, double l) {
  const LoopFunction Zt = loop_derivative(Z);
  const Mat JK = k * sys.J + l * sys.K;
  double worst = 0.0;
  for (int i = 0; i < Z.n_theta(); ++i) {
    const Vec res = JK * Zt.samples.row(i).transpose() -
                    sys.gradS(Z.samples.row(i).transpose());
    worst = std::max(worst, res.lpNorm<Eigen::Infinity>());
  }
  return worst;
}

struct StructureCheck {
  std::string name;
  bool pass = false;
  double error = 0.0;
  double tol = 0.0;
};

namespace detail {
// splitmix64: deterministic across platforms, good enough for test states.
inline uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
inline double unit_uniform(uint64_t& s) {
  return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}
inline Vec random_state(uint64_t& s, int dim, double max_norm) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = 2.0 * unit_uniform(s) - 1.0;
  const double target = max_norm * (0.25 + 0.75 * unit_uniform(s));
  return v * (target / v.norm());
}
}  // namespace detail

// Runs every SystemModel invariant and reports measured errors.  Failures are
// report entries, not exceptions.
inline std::vector<StructureCheck> check_structure(const SystemModel& sys,
                                                   uint64_t seed = 0x5eedULL) {
  std::vector<StructureCheck> out;
  auto push = [&out](const std::string& name, double err, double tol) {
    out.push_back({name, err < tol, err, tol});
  };

  push("J skew-symmetric", (sys.J + sys.J.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  push("K skew-symmetric", (sys.K + sys.K.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  push("M symmetric", (sys.M - sys.M.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(sys.M);
    push("M positive semi-definite", std::max(0.0, -es.eigenvalues().minCoeff()), 1e-12);
  }

  uint64_t s = seed;
  double egrad = 0.0, ehess_sym = 0.0, ehess = 0.0, ed3 = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const Vec Z = detail::random_state(s, sys.dim, 2.0);
    {
      const double h = 1e-6;
      const Vec g = sys.gradS(Z);
      Vec gfd(sys.dim);
      for (int i = 0; i < sys.dim; ++i) {
        Vec e = Vec::Zero(sys.dim);
        e[i] = h;
        gfd[i] = (sys.S(Z + e) - sys.S(Z - e)) / (2 * h);
      }
      egrad = std::max(egrad, (g - gfd).norm() / std::max(1.0, g.norm()));
    }
    {
      const double h = 1e-6;
      const Mat H = sys.hessS(Z);
      ehess_sym = std::max(ehess_sym, (H - H.transpose()).cwiseAbs().maxCoeff());
      Mat Hfd(sys.dim, sys.dim);
      for (int i = 0; i < sys.dim; ++i) {
        Vec e = Vec::Zero(sys.dim);
        e[i] = h;
        Hfd.col(i) = (sys.gradS(Z + e) - sys.gradS(Z - e)) / (2 * h);
      }
      ehess = std::max(ehess, (H - Hfd).cwiseAbs().maxCoeff() /
                                  std::max(1.0, H.cwiseAbs().maxCoeff()));
    }
    {
      const double h = 1e-4;
      const Vec a = detail::random_state(s, sys.dim, 1.0);
      const Vec b = detail::random_state(s, sys.dim, 1.0);
      const Vec t = sys.d3S(Z, a, b);
      const Vec tfd = (sys.hessS(Z + h * b) - sys.hessS(Z - h * b)) / (2 * h) * a;
      ed3 = std::max(ed3, (t - tfd).norm() / std::max(1.0, t.norm()));
    }
  }
  push("gradS vs FD(S)", egrad, 1e-6);
  push("hessS symmetric", ehess_sym, 1e-12);
  push("hessS vs FD(gradS)", ehess, 1e-6);
  push("d3S vs FD(hessS)", ed3, 1e-5);
  return out;
}

}  // namespace ccnlab
