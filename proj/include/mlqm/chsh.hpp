#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "mlqm/correction.hpp"
#include "mlqm/errors.hpp"
#include "mlqm/hilbert.hpp"

namespace mlqm {

/// Bloch-sphere measurement direction for one party. Planar settings lie in
/// the x-z plane: theta is measured from +z toward +x.
struct MeasurementSetting {
  enum class Party { A, B };

  Eigen::Vector3d axis;  // unit vector (n_x, n_y, n_z)
  Party party;

  MeasurementSetting(Eigen::Vector3d n, Party p) : axis(std::move(n)), party(p) {
    if (std::abs(axis.norm() - 1.0) >= 1e-12)
      throw domain_error("MeasurementSetting: axis must be a unit vector");
  }

  static MeasurementSetting planar(double theta, Party p) {
    return MeasurementSetting(Eigen::Vector3d(std::sin(theta), 0.0, std::cos(theta)), p);
  }
};

struct ChshSettings {
  MeasurementSetting a, a_prime, b, b_prime;

  static ChshSettings planar(double theta_a, double theta_a_prime, double theta_b,
                             double theta_b_prime) {
    using P = MeasurementSetting::Party;
    return {MeasurementSetting::planar(theta_a, P::A), MeasurementSetting::planar(theta_a_prime, P::A),
            MeasurementSetting::planar(theta_b, P::B), MeasurementSetting::planar(theta_b_prime, P::B)};
  }

  /// The settings that saturate 2*sqrt(2) on the singlet:
  /// a = z, a' = x, b = -(z+x)/sqrt(2), b' = (z-x)/sqrt(2).
  static ChshSettings maximal_violation() {
    constexpr double pi = std::numbers::pi;
    return planar(0.0, pi / 2.0, pi + pi / 4.0, -pi / 4.0);
  }
};

struct ChshResult {
  // Correlations with the deformation factor applied.
  double c_ab, c_ab_prime, c_a_prime_b, c_a_prime_b_prime;
  // base = undeformed |S|, epsilon = the <f^2> correction.
  CorrectionValue S;
  ChshSettings settings;
};

/// n . sigma on one party's qubit: eigenvalues exactly +/-1 (twice the spin
/// projection, so the correlator range is the dichotomous [-1, 1]).
inline OperatorRep dichotomous_observable(const MeasurementSetting& setting) {
  const Matrix m = setting.axis.x() * pauli_x() + setting.axis.y() * pauli_y() +
                   setting.axis.z() * pauli_z();
  const char* label = setting.party == MeasurementSetting::Party::A ? "A" : "B";
  return OperatorRep(HilbertSpace({{label, 2}}), m, true);
}

/// (|01> - |10>) / sqrt(2) on the two-qubit space.
inline QuantumState singlet() {
  Vector v(4);
  v << 0.0, 1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2, 0.0;
  return QuantumState(HilbertSpace::two_qubit(), std::move(v));
}

namespace detail {

inline double raw_correlation(const QuantumState& state, const MeasurementSetting& sa,
                              const MeasurementSetting& sb) {
  if (sa.party != MeasurementSetting::Party::A || sb.party != MeasurementSetting::Party::B)
    throw domain_error("chsh: correlation needs one A setting and one B setting");
  return real_expectation(state, kron(dichotomous_observable(sa), dichotomous_observable(sb)));
}

}  // namespace detail

/// S = |C(a,b) - C(a,b') + C(a',b) + C(a',b')| with C = correction * <A (x) B>.
/// The correction multiplies every correlator, so it factors out of S: S.base
/// is the undeformed combination and S.epsilon is the correction's epsilon.
inline ChshResult chsh_value(const QuantumState& state, const ChshSettings& s,
                             const CorrectionValue& correction = CorrectionValue::one()) {
  if (state.space().total_dim() != 4)
    throw space_mismatch("chsh_value: state must live on a two-qubit space");
  const double c_ab = detail::raw_correlation(state, s.a, s.b);
  const double c_abp = detail::raw_correlation(state, s.a, s.b_prime);
  const double c_apb = detail::raw_correlation(state, s.a_prime, s.b);
  const double c_apbp = detail::raw_correlation(state, s.a_prime, s.b_prime);
  const double base = std::abs(c_ab - c_abp + c_apb + c_apbp);
  const double scale = correction.value();
  return {scale * c_ab, scale * c_abp, scale * c_apb, scale * c_apbp,
          CorrectionValue(base, correction.epsilon()), s};
}

struct OptimizedSettings {
  std::array<double, 4> angles;  // theta_a, theta_a', theta_b, theta_b'
  ChshResult result;
  bool converged;
  int sweeps;
};

/// Maximizes undeformed |S| over four planar angles: a 24^4 grid pass seeds
/// multi-start coordinate ascent, where each coordinate update is the exact
/// one-angle maximizer (the objective is sinusoidal per angle). Restart
/// results merge deterministically by (value, then lexicographic angles).
inline OptimizedSettings optimize_settings(const QuantumState& state, int restarts = 8,
                                           double tol = 1e-9) {
  if (state.space().total_dim() != 4)
    throw space_mismatch("optimize_settings: state must live on a two-qubit space");
  if (restarts < 1) throw domain_error("optimize_settings: restarts must be >= 1");
  if (!(tol > 0.0)) throw domain_error("optimize_settings: tol must be positive");

  // Planar correlation matrix T(i,j) = <sigma_i (x) sigma_j>, i,j in {z, x}.
  using P = MeasurementSetting::Party;
  Eigen::Matrix2d T;
  const std::array<double, 2> basis_angles = {0.0, std::numbers::pi / 2.0};  // z, x
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      T(i, j) = detail::raw_correlation(state, MeasurementSetting::planar(basis_angles[i], P::A),
                                        MeasurementSetting::planar(basis_angles[j], P::B));

  const auto dir = [](double theta) { return Eigen::Vector2d(std::cos(theta), std::sin(theta)); };
  const auto signed_s = [&](const std::array<double, 4>& th) {
    const Eigen::Vector2d va = dir(th[0]), vap = dir(th[1]), vb = dir(th[2]), vbp = dir(th[3]);
    return va.dot(T * vb) - va.dot(T * vbp) + vap.dot(T * vb) + vap.dot(T * vbp);
  };

  // Grid pass: precompute the 24x24 planar correlation table, then rank the
  // 24^4 angle combinations and keep the best `restarts` seeds.
  constexpr int kGrid = 24;
  std::array<double, kGrid> grid;
  std::array<std::array<double, kGrid>, kGrid> corr{};
  for (int i = 0; i < kGrid; ++i) grid[i] = 2.0 * std::numbers::pi * i / kGrid;
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j) corr[i][j] = dir(grid[i]).dot(T * dir(grid[j]));
  std::vector<std::pair<double, std::array<double, 4>>> seeds;
  for (int ia = 0; ia < kGrid; ++ia)
    for (int iap = 0; iap < kGrid; ++iap)
      for (int ib = 0; ib < kGrid; ++ib)
        for (int ibp = 0; ibp < kGrid; ++ibp) {
          const double v =
              std::abs(corr[ia][ib] - corr[ia][ibp] + corr[iap][ib] + corr[iap][ibp]);
          if (seeds.size() == static_cast<std::size_t>(restarts) && v <= seeds.back().first)
            continue;
          const std::array<double, 4> th = {grid[ia], grid[iap], grid[ib], grid[ibp]};
          auto pos = std::upper_bound(seeds.begin(), seeds.end(), v,
                                      [](double x, const auto& e) { return x > e.first; });
          seeds.insert(pos, {v, th});
          if (seeds.size() > static_cast<std::size_t>(restarts)) seeds.pop_back();
        }

  std::array<double, 4> best_angles{};
  double best_value = -1.0;
  bool best_converged = false;
  int best_sweeps = 0;
  for (const auto& [seed_value, seed] : seeds) {
    std::array<double, 4> th = seed;
    const double sign = signed_s(th) >= 0.0 ? 1.0 : -1.0;
    double current = sign * signed_s(th);
    bool converged = false;
    int sweep = 0;
    for (; sweep < 200; ++sweep) {
      // Exact per-angle maximizers of sign * S.
      Eigen::Vector2d w;
      w = sign * T * (dir(th[2]) - dir(th[3]));
      th[0] = std::atan2(w.y(), w.x());
      w = sign * T * (dir(th[2]) + dir(th[3]));
      th[1] = std::atan2(w.y(), w.x());
      w = sign * T.transpose() * (dir(th[0]) + dir(th[1]));
      th[2] = std::atan2(w.y(), w.x());
      w = sign * T.transpose() * (dir(th[1]) - dir(th[0]));
      th[3] = std::atan2(w.y(), w.x());
      const double next = sign * signed_s(th);
      if (next - current < tol) {
        current = next;
        converged = true;
        break;
      }
      current = next;
    }
    if (current > best_value + 1e-15 ||
        (std::abs(current - best_value) <= 1e-15 && th < best_angles)) {
      best_value = current;
      best_angles = th;
      best_converged = converged;
      best_sweeps = sweep + 1;
    }
  }

  const ChshSettings settings =
      ChshSettings::planar(best_angles[0], best_angles[1], best_angles[2], best_angles[3]);
  return {best_angles, chsh_value(state, settings), best_converged, best_sweeps};
}

}  // namespace mlqm
