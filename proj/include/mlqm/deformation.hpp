#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mlqm/constants.hpp"
#include "mlqm/correction.hpp"
#include "mlqm/distribution.hpp"
#include "mlqm/errors.hpp"

namespace mlqm {

enum class ModelKind { Linear, Quadratic, CustomSeries };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Linear: return "linear";
    case ModelKind::Quadratic: return "quadratic";
    case ModelKind::CustomSeries: return "custom_series";
  }
  return "unknown";
}

/// Deformation function of the commutator algebra, as a finite series in the
/// dimensionless momentum variable u = pi^2 / (m_p c)^2:
///
///     f(u) = 1 + c_half sqrt(u) + sum_{k=1..K} c_k u^k,   K <= 8.
///
/// Linear means f = 1 + beta sqrt(u) (minimal length plus maximal momentum
/// family), Quadratic means f = 1 + beta u (leading-order minimal-length
/// family). The Jacobi identity fixes the partner function
///
///     g = 2 (log f)' u / (1 - 2 (log f)' u) * f,
///
/// with ' = d/du, which is finite only while the commutativity margin
/// 1 - 2 (log f)' u stays positive; u_max is the first point where the margin
/// vanishes or f itself reaches zero, and marks the model's validity cutoff.
class DeformationModel {
 public:
  static DeformationModel linear(double beta) {
    check_coefficient(beta, "beta");
    DeformationModel m;
    m.kind_ = ModelKind::Linear;
    m.beta_ = beta;
    m.c_half_ = beta;
    m.series_c_ = {1.0};
    m.u_max_ = (beta >= 0.0) ? std::numeric_limits<double>::infinity() : m.find_u_max();
    return m;
  }

  static DeformationModel quadratic(double beta) {
    check_coefficient(beta, "beta");
    DeformationModel m;
    m.kind_ = ModelKind::Quadratic;
    m.beta_ = beta;
    m.series_c_ = {1.0, beta};
    // 1 - 2 (log f)' u = (1 - beta u) / (1 + beta u): first root at 1/beta.
    if (beta > 0.0)
      m.u_max_ = 1.0 / beta;
    else if (beta == 0.0)
      m.u_max_ = std::numeric_limits<double>::infinity();
    else
      m.u_max_ = m.find_u_max();
    return m;
  }

  /// c[0] must be 1 (ordinary QM at u -> 0); c[k] multiplies u^k, c_half
  /// multiplies sqrt(u). u_max is located numerically when not supplied.
  static DeformationModel custom_series(std::vector<double> c, double c_half = 0.0,
                                        std::optional<double> u_max = std::nullopt) {
    if (c.empty() || c[0] != 1.0)
      throw domain_error("custom_series: c[0] must be exactly 1");
    if (c.size() > kMaxOrder + 1)
      throw domain_error("custom_series: series order K must be <= 8");
    for (double ck : c) check_coefficient(ck, "series coefficient");
    check_coefficient(c_half, "c_half");
    DeformationModel m;
    m.kind_ = ModelKind::CustomSeries;
    m.beta_ = 0.0;
    m.c_half_ = c_half;
    m.series_c_ = std::move(c);
    m.u_max_ = m.find_u_max();
    if (u_max) {
      if (!(*u_max > 0.0)) throw domain_error("custom_series: u_max must be positive");
      if (*u_max > m.u_max_)
        throw domain_error("custom_series: supplied u_max exceeds the commutativity cutoff");
      m.u_max_ = *u_max;
    }
    return m;
  }

  ModelKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double c_half() const { return c_half_; }
  const std::vector<double>& series_c() const { return series_c_; }
  double u_max() const { return u_max_; }

  /// f(u). Rejects u outside [0, u_max]: past u_max the algebra is inconsistent.
  double f(double u) const {
    require_in_domain(u);
    return 1.0 + f_tail(u);
  }

  /// f(u) - 1, summed from the non-constant series terms only. This is the
  /// quantity to use wherever f - 1 is far below one ulp of 1.
  double f_tail(double u) const {
    if (!(u >= 0.0)) throw domain_error("f_tail: u must be nonnegative");
    return tail_raw(u);
  }

  /// Jacobi partner g(u); g(0) = 0 exactly. Throws singularity_error where
  /// the commutativity margin is no longer positive.
  double g(double u) const {
    if (!(u >= 0.0)) throw domain_error("g: u must be nonnegative");
    const double fv = 1.0 + tail_raw(u);
    if (!(fv > 0.0)) throw domain_error("g: f(u) <= 0, model invalid at this u");
    const double margin = 1.0 - 2.0 * u_fprime_raw(u) / fv;
    if (!(margin > kMarginFloor))
      throw singularity_error("g: commutativity condition violated (2 (log f)' u -> 1)");
    return fv * (1.0 - margin) / margin;
  }

  /// 1 - 2 (log f)' u. Positive means the algebra is consistent at u; the
  /// smallest root is u_max. Pure evaluation, no domain cutoff.
  double commutativity_margin(double u) const {
    if (!(u >= 0.0)) throw domain_error("commutativity_margin: u must be nonnegative");
    return 1.0 - 2.0 * u_fprime_raw(u) / (1.0 + tail_raw(u));
  }

  /// Short printable tag, e.g. "quadratic(beta=1)".
  std::string id() const {
    std::ostringstream os;
    switch (kind_) {
      case ModelKind::Linear: os << "linear(beta=" << beta_ << ")"; break;
      case ModelKind::Quadratic: os << "quadratic(beta=" << beta_ << ")"; break;
      case ModelKind::CustomSeries: {
        os << "custom_series(c=[1";
        for (std::size_t k = 1; k < series_c_.size(); ++k) os << "," << series_c_[k];
        os << "]";
        if (c_half_ != 0.0) os << ",c_half=" << c_half_;
        os << ")";
        break;
      }
    }
    return os.str();
  }

 private:
  static constexpr std::size_t kMaxOrder = 8;
  // Guard just above the exact singularity so 1/margin stays representable.
  static constexpr double kMarginFloor = 1e-300;

  DeformationModel() = default;

  static void check_coefficient(double v, const char* what) {
    if (!std::isfinite(v)) throw domain_error(std::string("DeformationModel: nonfinite ") + what);
  }

  void require_in_domain(double u) const {
    if (!(u >= 0.0)) throw domain_error("f: u must be nonnegative");
    if (u > u_max_) throw domain_error("f: u exceeds the model validity cutoff u_max");
  }

  // sum of the non-constant terms of f
  double tail_raw(double u) const {
    double poly = 0.0;
    for (std::size_t k = series_c_.size(); k-- > 1;) poly = (poly + series_c_[k]) * u;
    return (c_half_ != 0.0) ? c_half_ * std::sqrt(u) + poly : poly;
  }

  // u f'(u) = c_half sqrt(u)/2 + sum k c_k u^k; finite at u = 0.
  double u_fprime_raw(double u) const {
    double poly = 0.0;
    for (std::size_t k = series_c_.size(); k-- > 1;)
      poly = poly * u + static_cast<double>(k) * series_c_[k];
    poly *= u;
    return (c_half_ != 0.0) ? 0.5 * c_half_ * std::sqrt(u) + poly : poly;
  }

  bool valid_at(double u) const {
    const double fv = 1.0 + tail_raw(u);
    if (!(fv > 0.0)) return false;
    return 1.0 - 2.0 * u_fprime_raw(u) / fv > 0.0;
  }

  // First u where the margin or f itself stops being positive: geometric scan
  // for a sign change, then bisection to 1e-12 relative.
  double find_u_max() const {
    const double kScanStart = 1e-18;
    const double kScanEnd = 1e30;
    double lo = 0.0;
    double hi = kScanStart;
    while (valid_at(hi)) {
      lo = hi;
      hi *= 1.5;
      if (hi > kScanEnd) return std::numeric_limits<double>::infinity();
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (valid_at(mid) ? lo : hi) = mid;
      if (hi - lo <= 1e-12 * hi) break;
    }
    return lo;
  }

  ModelKind kind_ = ModelKind::Quadratic;
  double beta_ = 0.0;
  double c_half_ = 0.0;
  std::vector<double> series_c_{1.0};
  double u_max_ = std::numeric_limits<double>::infinity();
};

/// Uncertainty-relation lower bound on Delta x for the quadratic model at
/// leading order:  (1 / 2 Delta_pi) [1 + 3 beta (Delta_pi / m_p)^2].
/// beta = 0 gives the Heisenberg limit; beta < 0 is rejected.
inline double gup_bound(double beta, double delta_pi_GeV, const PhysicalConstants& pc = {}) {
  pc.validate();
  if (!(beta >= 0.0)) throw domain_error("gup_bound: beta must be nonnegative");
  if (!(delta_pi_GeV > 0.0)) throw domain_error("gup_bound: delta_pi must be positive");
  const double r = delta_pi_GeV / pc.m_p_GeV;
  return (1.0 + 3.0 * beta * r * r) / (2.0 * delta_pi_GeV);
}

struct MinimalLength {
  double delta_pi_star_GeV;   // argmin of the bound
  double delta_x_min_GeVinv;  // global minimum: the minimal length
};

/// Locates the global minimum of gup_bound by golden-section search on
/// log(Delta_pi) and cross-checks the result against the closed forms
/// Delta_pi* = m_p / sqrt(3 beta), Delta_x_min = sqrt(3 beta) / m_p.
inline MinimalLength minimal_length(double beta, const PhysicalConstants& pc = {}) {
  pc.validate();
  if (!(beta > 0.0))
    throw domain_error("minimal_length: beta must be positive (the bound is monotone otherwise)");

  const auto h = [&](double t) { return gup_bound(beta, std::exp(t), pc); };
  const double kGolden = 0.6180339887498949;
  double a = std::log(pc.m_p_GeV) - 70.0;
  double b = std::log(pc.m_p_GeV) + 70.0;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = h(x1), f2 = h(x2);
  // Golden section only down to 1e-4: below that the bracketing comparisons
  // drown in roundoff. Two parabolic polish rounds then pin the vertex to
  // ~1e-10 relative, which the flat quadratic bottom cannot give directly.
  for (int it = 0; it < 200 && (b - a) > 1e-4; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = h(x2);
    }
  }
  double t_star = 0.5 * (a + b);
  for (double step : {1e-5, 3e-6}) {
    const double hm = h(t_star - step), h0 = h(t_star), hp = h(t_star + step);
    const double denom = hp - 2.0 * h0 + hm;
    if (denom > 0.0) t_star -= 0.5 * step * (hp - hm) / denom;
  }
  MinimalLength result{std::exp(t_star), h(t_star)};

  const double pi_closed = pc.m_p_GeV / std::sqrt(3.0 * beta);
  const double x_closed = std::sqrt(3.0 * beta) / pc.m_p_GeV;
  if (std::abs(result.delta_pi_star_GeV - pi_closed) > 1e-9 * pi_closed ||
      std::abs(result.delta_x_min_GeVinv - x_closed) > 1e-9 * x_closed)
    throw std::logic_error("minimal_length: numerical minimum disagrees with the closed form");
  return result;
}

/// <f^power> over the distribution, power 1 or 2, as a CorrectionValue with
/// base 1. The epsilon is accumulated from the series tail alone:
///   power 1:  eps = sum_i w_i t(u_i)
///   power 2:  eps = sum_i w_i (2 t(u_i) + t(u_i)^2),   t = f - 1,
/// so corrections of order 1e-40 never touch the constant term.
inline CorrectionValue expectation_f(const DeformationModel& model, const MomentumDistribution& dist,
                                     int power, const PhysicalConstants& pc = {}) {
  pc.validate();
  if (power != 1 && power != 2) throw domain_error("expectation_f: power must be 1 or 2");
  double eps = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double u = dist.u_of(i, pc);
    if (u > model.u_max())
      throw domain_error("expectation_f: distribution support exceeds the model validity cutoff");
    const double t = model.f_tail(u);
    eps += dist.points()[i].weight * (power == 1 ? t : 2.0 * t + t * t);
  }
  return CorrectionValue(1.0, eps);
}

}  // namespace mlqm
