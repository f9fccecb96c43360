#pragma once

// Embedded one-step schemes with error estimates. Each scheme exposes
//
//   bool attempt(f, t, y, h, y_new, err)
//
// where f(t, y) returns dy/dt, err receives the weighted RMS error of the
// step, and false signals a failed stage evaluation (treated as rejection).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

#include "digester/errors.hpp"

namespace digester::ode {

template <std::size_t N>
using Vector = std::array<double, N>;

template <std::size_t N>
double error_norm(const Vector<N>& err, const Vector<N>& y0, const Vector<N>& y1, double rtol,
                  double atol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(N));
}

/// Two-stage L-stable Rosenbrock pair of order 2(3) (Shampine & Reichelt).
/// The Jacobian is rebuilt by forward differences on every attempt; the
/// model RHS is autonomous between input breakpoints so df/dt is zero.
template <std::size_t N>
class Rosenbrock23 {
 public:
  static constexpr double kOrder = 2.0;

  Rosenbrock23(double rtol, double atol) : rtol_(rtol), atol_(atol) {}

  template <class F>
  bool attempt(F&& f, double t, const Vector<N>& y, double h, Vector<N>& y_new, double& err) {
    using Vec = Eigen::Matrix<double, static_cast<int>(N), 1>;
    using Mat = Eigen::Matrix<double, static_cast<int>(N), static_cast<int>(N)>;
    const double d = 1.0 / (2.0 + std::sqrt(2.0));
    const double e32 = 6.0 + std::sqrt(2.0);

    auto to_vec = [](const Vector<N>& a) {
      Vec v;
      for (std::size_t i = 0; i < N; ++i) v(static_cast<int>(i)) = a[i];
      return v;
    };
    auto eval = [&](double tt, const Vec& v, Vec& out) {
      Vector<N> a;
      for (std::size_t i = 0; i < N; ++i) a[i] = v(static_cast<int>(i));
      Vector<N> r;
      if (!f(tt, a, r)) return false;
      out = to_vec(r);
      return true;
    };

    const Vec y0 = to_vec(y);
    Vec F0;
    if (!eval(t, y0, F0)) return false;

    Mat J;
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    for (int j = 0; j < static_cast<int>(N); ++j) {
      const double delta = sqrt_eps * std::max(std::abs(y0(j)), atol_ / rtol_);
      Vec yp = y0;
      yp(j) += delta;
      Vec Fp;
      if (!eval(t, yp, Fp)) return false;
      J.col(j) = (Fp - F0) / delta;
    }

    const Mat W = Mat::Identity() - h * d * J;
    const Eigen::PartialPivLU<Mat> lu(W);

    const Vec k1 = lu.solve(F0);
    Vec F1;
    if (!eval(t + 0.5 * h, y0 + 0.5 * h * k1, F1)) return false;
    const Vec k2 = lu.solve(F1 - k1) + k1;
    const Vec y1 = y0 + h * k2;
    Vec F2;
    if (!eval(t + h, y1, F2)) return false;
    const Vec k3 = lu.solve(F2 - e32 * (k2 - F1) - 2.0 * (k1 - F0));
    const Vec e = (h / 6.0) * (k1 - 2.0 * k2 + k3);

    Vector<N> errv;
    for (std::size_t i = 0; i < N; ++i) {
      y_new[i] = y1(static_cast<int>(i));
      errv[i] = e(static_cast<int>(i));
      if (!std::isfinite(y_new[i]) || !std::isfinite(errv[i])) return false;
    }
    err = error_norm<N>(errv, y, y_new, rtol_, atol_);
    return true;
  }

 private:
  double rtol_;
  double atol_;
};

/// Dormand-Prince 5(4), propagating the fifth-order solution.
template <std::size_t N>
class DormandPrince54 {
 public:
  static constexpr double kOrder = 4.0;

  DormandPrince54(double rtol, double atol) : rtol_(rtol), atol_(atol) {}

  template <class F>
  bool attempt(F&& f, double t, const Vector<N>& y, double h, Vector<N>& y_new, double& err) {
    static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static constexpr double b5[7] = {35.0 / 384,     0.0, 500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784, 11.0 / 84, 0.0};
    static constexpr double b4[7] = {5179.0 / 57600,     0.0,           7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    std::array<Vector<N>, 7> k;
    for (int s = 0; s < 7; ++s) {
      Vector<N> ys = y;
      for (int j = 0; j < s; ++j) {
        for (std::size_t i = 0; i < N; ++i) ys[i] += h * a[s][j] * k[j][i];
      }
      if (!f(t + c[s] * h, ys, k[s])) return false;
    }
    Vector<N> errv;
    for (std::size_t i = 0; i < N; ++i) {
      double hi = 0.0;
      double lo = 0.0;
      for (int s = 0; s < 7; ++s) {
        hi += b5[s] * k[s][i];
        lo += b4[s] * k[s][i];
      }
      y_new[i] = y[i] + h * hi;
      errv[i] = h * (hi - lo);
      if (!std::isfinite(y_new[i]) || !std::isfinite(errv[i])) return false;
    }
    err = error_norm<N>(errv, y, y_new, rtol_, atol_);
    return true;
  }

 private:
  double rtol_;
  double atol_;
};

/// Step-size proposal after an attempt with weighted error err.
inline double next_step(double h, double err, double order) {
  constexpr double kSafety = 0.9;
  constexpr double kMinShrink = 0.2;
  constexpr double kMaxGrow = 5.0;
  if (err == 0.0) return h * kMaxGrow;
  const double factor = kSafety * std::pow(err, -1.0 / (order + 1.0));
  return h * std::clamp(factor, kMinShrink, kMaxGrow);
}

}  // namespace digester::ode
