#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mlqm/constants.hpp"
#include "mlqm/errors.hpp"

namespace mlqm {

enum class DistributionKind { Monoenergetic, GaussianRadial, Custom };

/// Weighted set of momentum magnitudes |pi| (GeV) standing in for a beam or
/// wavepacket. Weights are probabilities (nonnegative, normalized to 1);
/// moments <|pi|^n> are exact sums over the set, so there is no quadrature
/// error in anything computed from it.
class MomentumDistribution {
 public:
  struct Point {
    double pi_GeV;
    double weight;
  };

  /// Beam at fixed kinetic energy: a single magnitude |pi| = sqrt(2 M E_kin).
  static MomentumDistribution monoenergetic(double M_GeV, double E_kin_GeV) {
    if (!(M_GeV > 0.0)) throw domain_error("monoenergetic: M_GeV must be positive");
    if (!(E_kin_GeV >= 0.0)) throw domain_error("monoenergetic: E_kin_GeV must be nonnegative");
    return MomentumDistribution({{std::sqrt(2.0 * M_GeV * E_kin_GeV), 1.0}}, DistributionKind::Monoenergetic);
  }

  /// Arbitrary weighted set; weights are normalized to sum to 1.
  static MomentumDistribution from_points(std::vector<Point> points,
                                          DistributionKind kind = DistributionKind::Custom) {
    return MomentumDistribution(std::move(points), kind);
  }

  /// Radial Gaussian wavepacket sampled on a uniform grid over
  /// [max(0, mean - 5 sigma), mean + 5 sigma] with normalized Gaussian weights.
  static MomentumDistribution gaussian_radial(double mean_GeV, double sigma_GeV, int n_points) {
    if (!(mean_GeV >= 0.0)) throw domain_error("gaussian_radial: mean_GeV must be nonnegative");
    if (!(sigma_GeV > 0.0)) throw domain_error("gaussian_radial: sigma_GeV must be positive");
    if (n_points < 1) throw domain_error("gaussian_radial: n_points must be >= 1");
    const double lo = std::max(0.0, mean_GeV - 5.0 * sigma_GeV);
    const double hi = mean_GeV + 5.0 * sigma_GeV;
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
      // midpoint rule
      const double p = lo + (hi - lo) * (i + 0.5) / n_points;
      const double z = (p - mean_GeV) / sigma_GeV;
      pts.push_back({p, std::exp(-0.5 * z * z)});
    }
    return MomentumDistribution(std::move(pts), DistributionKind::GaussianRadial);
  }

  DistributionKind kind() const { return kind_; }
  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// <|pi|^n> in GeV^n.
  double moment(int n) const {
    double acc = 0.0;
    for (const auto& pt : points_) acc += pt.weight * std::pow(pt.pi_GeV, n);
    return acc;
  }

  /// Dimensionless u_i = (pi_i / m_p)^2 for support point i.
  double u_of(std::size_t i, const PhysicalConstants& pc = {}) const {
    const double r = points_[i].pi_GeV / (pc.m_p_GeV * pc.c);
    return r * r;
  }

  std::vector<double> u_values(const PhysicalConstants& pc = {}) const {
    std::vector<double> u(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) u[i] = u_of(i, pc);
    return u;
  }

  double max_u(const PhysicalConstants& pc = {}) const {
    double m = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) m = std::max(m, u_of(i, pc));
    return m;
  }

 private:
  MomentumDistribution(std::vector<Point> points, DistributionKind kind)
      : points_(std::move(points)), kind_(kind) {
    if (points_.empty()) throw domain_error("MomentumDistribution: empty support");
    double sum = 0.0;
    for (const auto& pt : points_) {
      if (!(pt.pi_GeV >= 0.0) || !std::isfinite(pt.pi_GeV))
        throw domain_error("MomentumDistribution: momentum magnitudes must be finite and nonnegative");
      if (!(pt.weight >= 0.0) || !std::isfinite(pt.weight))
        throw domain_error("MomentumDistribution: weights must be finite and nonnegative");
      sum += pt.weight;
    }
    if (!(sum > 0.0)) throw domain_error("MomentumDistribution: weights must not all vanish");
    for (auto& pt : points_) pt.weight /= sum;
  }

  std::vector<Point> points_;
  DistributionKind kind_;
};

}  // namespace mlqm
