// Test-only oracles, independent of the library code paths they check.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mlqm/deformation.hpp"
#include "mlqm/distribution.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// Truncated power series in s = sqrt(u), dense coefficient arrays. Used to
// rebuild the Jacobi partner g from f by series algebra alone.
// ---------------------------------------------------------------------------
struct Series {
  static constexpr std::size_t kOrder = 64;  // coefficients of s^0 .. s^63
  std::array<double, kOrder> c{};

  static Series constant(double v) {
    Series s;
    s.c[0] = v;
    return s;
  }
};

inline Series operator+(const Series& a, const Series& b) {
  Series r;
  for (std::size_t i = 0; i < Series::kOrder; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

inline Series operator-(const Series& a, const Series& b) {
  Series r;
  for (std::size_t i = 0; i < Series::kOrder; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

inline Series operator*(const Series& a, const Series& b) {
  Series r;
  for (std::size_t i = 0; i < Series::kOrder; ++i)
    for (std::size_t j = 0; i + j < Series::kOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

// a / b, requiring b.c[0] != 0.
inline Series operator/(const Series& a, const Series& b) {
  Series q;
  for (std::size_t n = 0; n < Series::kOrder; ++n) {
    double acc = a.c[n];
    for (std::size_t k = 0; k < n; ++k) acc -= q.c[k] * b.c[n - k];
    q.c[n] = acc / b.c[0];
  }
  return q;
}

// d/ds
inline Series derivative(const Series& a) {
  Series r;
  for (std::size_t i = 1; i < Series::kOrder; ++i) r.c[i - 1] = static_cast<double>(i) * a.c[i];
  return r;
}

struct SeriesValue {
  double value;
  double last_term;  // magnitude of the highest-order contribution kept
};

inline SeriesValue evaluate(const Series& a, double s) {
  double value = 0.0;
  double power = 1.0;
  double last = 0.0;
  for (std::size_t i = 0; i < Series::kOrder; ++i) {
    const double term = a.c[i] * power;
    value += term;
    if (a.c[i] != 0.0) last = std::abs(term);
    power *= s;
  }
  return {value, last};
}

// f as a series in s: 1 + c_half s + sum_k c_k s^{2k}.
inline Series f_series(const mlqm::DeformationModel& model) {
  Series f = Series::constant(1.0);
  f.c[1] = model.c_half();
  for (std::size_t k = 1; k < model.series_c().size(); ++k)
    if (2 * k < Series::kOrder) f.c[2 * k] = model.series_c()[k];
  return f;
}

// g rebuilt from the Jacobi constraint by series algebra:
// with A = s f'(s) / 2 (= u df/du) and B = A / f,
//   g = 2 B f / (1 - 2B).
inline Series g_series(const mlqm::DeformationModel& model) {
  const Series f = f_series(model);
  Series a = Series::constant(0.0);
  {
    const Series fp = derivative(f);
    // multiply by s/2
    for (std::size_t i = Series::kOrder; i-- > 1;) a.c[i] = 0.5 * fp.c[i - 1];
  }
  const Series b = a / f;
  const Series two_b = b + b;
  return (two_b * f) / (Series::constant(1.0) - two_b);
}

// Evaluates the series oracle for g at u; valid only where the reported
// last_term shows the truncation has converged.
inline SeriesValue g_series_at(const mlqm::DeformationModel& model, double u) {
  return evaluate(g_series(model), std::sqrt(u));
}

// ---------------------------------------------------------------------------
// Finite differences (reserved for tests; production derivatives are
// analytic).
// ---------------------------------------------------------------------------
template <typename F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// Golden-section minimizer on a plain linear bracket.
// ---------------------------------------------------------------------------
template <typename F>
double golden_section_argmin(F&& f, double lo, double hi, int iterations = 300) {
  const double golden = 0.6180339887498949;
  double x1 = hi - golden * (hi - lo);
  double x2 = lo + golden * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - golden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + golden * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// SU(2) <-> SO(3): a rotation by angle phi about unit axis n.
// ---------------------------------------------------------------------------
inline Eigen::Matrix2cd su2_rotation(const Eigen::Vector3d& axis, double phi) {
  using namespace std::complex_literals;
  const Eigen::Matrix2cd sx = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  const Eigen::Matrix2cd sy = (Eigen::Matrix2cd() << 0, -1i, 1i, 0).finished();
  const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  const Eigen::Matrix2cd n_sigma = axis.x() * sx + axis.y() * sy + axis.z() * sz;
  return std::cos(phi / 2.0) * Eigen::Matrix2cd::Identity() -
         1i * std::sin(phi / 2.0) * n_sigma;
}

inline Eigen::Matrix3d so3_rotation(const Eigen::Vector3d& axis, double phi) {
  return Eigen::AngleAxisd(phi, axis).toRotationMatrix();
}

// ---------------------------------------------------------------------------
// Deterministic random generators for property tests.
// ---------------------------------------------------------------------------
inline mlqm::DeformationModel random_model(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> beta(0.05, 2.0);
  switch (kind(rng)) {
    case 0: return mlqm::DeformationModel::linear(beta(rng));
    case 1: return mlqm::DeformationModel::quadratic(beta(rng));
    default: {
      std::uniform_int_distribution<int> order(1, 4);
      std::uniform_real_distribution<double> coeff(-0.2, 0.5);
      std::uniform_real_distribution<double> half(0.0, 0.5);
      std::vector<double> c{1.0};
      double fact = 1.0;
      const int k_max = order(rng);
      for (int k = 1; k <= k_max; ++k) {
        fact *= k;
        c.push_back(coeff(rng) / fact);
      }
      return mlqm::DeformationModel::custom_series(std::move(c), half(rng));
    }
  }
}

// n support points with u drawn inside the model's validity domain.
inline mlqm::MomentumDistribution random_distribution(std::mt19937_64& rng,
                                                      const mlqm::DeformationModel& model,
                                                      std::size_t n,
                                                      const mlqm::PhysicalConstants& pc = {}) {
  const double u_cap = 0.8 * std::min(model.u_max(), 1.0);
  std::uniform_real_distribution<double> u_draw(0.0, u_cap);
  std::uniform_real_distribution<double> w_draw(0.05, 1.0);
  std::vector<mlqm::MomentumDistribution::Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back({pc.m_p_GeV * std::sqrt(u_draw(rng)), w_draw(rng)});
  return mlqm::MomentumDistribution::from_points(std::move(pts));
}

}  // namespace oracles
