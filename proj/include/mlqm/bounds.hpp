#pragma once

#include <cmath>

#include "mlqm/constants.hpp"
#include "mlqm/correction.hpp"
#include "mlqm/deformation.hpp"
#include "mlqm/distribution.hpp"
#include "mlqm/errors.hpp"

namespace mlqm {

/// Non-relativistic beam: |pi| = sqrt(2 M E_kin). N_constituents and
/// alpha_scaling describe composite-system degradation of the deformation.
struct BeamSpec {
  double M_GeV;
  double E_kin_GeV;
  int N_constituents = 1;
  double alpha_scaling = 2.0;

  double momentum_GeV() const { return std::sqrt(2.0 * M_GeV * E_kin_GeV); }

  /// E_kin/M < 0.2; callers should warn when this fails.
  bool non_relativistic() const { return E_kin_GeV / M_GeV < 0.2; }

  void validate() const {
    if (!(M_GeV > 0.0)) throw domain_error("BeamSpec: M_GeV must be positive");
    if (!(E_kin_GeV >= 0.0)) throw domain_error("BeamSpec: E_kin_GeV must be nonnegative");
    if (N_constituents < 1) throw domain_error("BeamSpec: N_constituents must be >= 1");
    if (!(alpha_scaling >= 0.0)) throw domain_error("BeamSpec: alpha_scaling must be nonnegative");
  }

  MomentumDistribution distribution() const {
    validate();
    return MomentumDistribution::monoenergetic(M_GeV, E_kin_GeV);
  }
};

/// Relative correction (S_deformed - S) / S = <f^power> - 1 for the beam,
/// power 2 for the two-party CHSH, power 1 for the single-particle witness.
inline double delta_S(const DeformationModel& model, const BeamSpec& beam, int witness_power,
                      const PhysicalConstants& pc = {}) {
  return expectation_f(model, beam.distribution(), witness_power, pc).epsilon();
}

struct BoundReport {
  ModelKind kind;
  int witness_power;
  double delta_precision;   // assumed achievable witness precision
  double beta_bound;        // largest beta compatible with delta_precision
  double epsilon_at_bound;  // delta_S at beta_bound (= delta to first order)
};

/// Inverts <f^power> - 1 <= delta for beta at first order:
///   Linear:    beta <= delta m_p / (power sqrt(2 M E_kin))
///   Quadratic: beta <= delta m_p^2 / (power 2 M E_kin)
inline BoundReport invert_bound(ModelKind kind, const BeamSpec& beam, int witness_power,
                                double delta_precision, const PhysicalConstants& pc = {}) {
  pc.validate();
  beam.validate();
  if (witness_power != 1 && witness_power != 2)
    throw domain_error("invert_bound: witness_power must be 1 or 2");
  if (!(delta_precision > 0.0)) throw domain_error("invert_bound: delta_precision must be positive");

  const double p = beam.momentum_GeV();
  if (!(p > 0.0)) throw domain_error("invert_bound: beam momentum vanishes");
  double beta = 0.0;
  switch (kind) {
    case ModelKind::Linear:
      beta = delta_precision * pc.m_p_GeV / (witness_power * p);
      break;
    case ModelKind::Quadratic:
      beta = delta_precision * pc.m_p_GeV * pc.m_p_GeV / (witness_power * p * p);
      break;
    case ModelKind::CustomSeries:
      throw domain_error("invert_bound: only the linear and quadratic kinds invert in closed form");
  }
  // The bound can sit exactly on the model's validity cutoff (quadratic kind,
  // delta = 1 puts beta u = 1), so the epsilon echo is taken from the series
  // tail directly instead of the domain-checked expectation.
  const DeformationModel model =
      kind == ModelKind::Linear ? DeformationModel::linear(beta) : DeformationModel::quadratic(beta);
  const double t = model.f_tail(beam.momentum_GeV() * beam.momentum_GeV() /
                                (pc.m_p_GeV * pc.m_p_GeV));
  const double eps = witness_power == 1 ? t : 2.0 * t + t * t;
  return {kind, witness_power, delta_precision, beta, eps};
}

/// Composite-system degradation: an N-constituent system behaves with the
/// effective parameter beta / N^alpha.
inline double composite_scaling(double beta, int N, double alpha) {
  if (N < 1) throw domain_error("composite_scaling: N must be >= 1");
  if (!(alpha >= 0.0)) throw domain_error("composite_scaling: alpha must be nonnegative");
  return beta / std::pow(static_cast<double>(N), alpha);
}

}  // namespace mlqm
