#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

#include "mlqm/correction.hpp"
#include "mlqm/errors.hpp"
#include "mlqm/hilbert.hpp"

namespace mlqm {

/// Scalar visibility v in (0, 1], multiplying every correlation E(alpha, chi).
/// Stands in for the overall dephasing/depolarization of the beam.
struct NoiseModel {
  double visibility = 1.0;

  void validate() const {
    if (!(visibility > 0.0) || !(visibility <= 1.0))
      throw domain_error("NoiseModel: visibility must lie in (0, 1]");
  }
};

/// Contrast is lost classically once S' exceeds 2v.
inline double classical_threshold(const NoiseModel& noise) {
  noise.validate();
  return 2.0 * noise.visibility;
}

enum class BeamElement {
  Polarizer,
  PiHalfFlipper,
  MwpEntangler,
  SpinPhaseCoil,
  PhaseCrystal,
  MwpDisentangler,
  Analyzer,
};

/// Fixed element order of the beamline; the flipper appears before the
/// entangling stage and again before the analyzer.
inline constexpr std::array<BeamElement, 8> beamline_sequence() {
  return {BeamElement::Polarizer,      BeamElement::PiHalfFlipper, BeamElement::MwpEntangler,
          BeamElement::SpinPhaseCoil,  BeamElement::PhaseCrystal,  BeamElement::MwpDisentangler,
          BeamElement::PiHalfFlipper,  BeamElement::Analyzer};
}

struct BeamlineConfig {
  double alpha = 0.0;  // spin phase (coil), rad, in [-pi, pi]
  double chi = 0.0;    // path phase (crystal), rad, in [-pi, pi]
  double entanglement_length_delta_m = 0.0;  // path separation, metadata only
  double beam_M_GeV = 1.0;
  double beam_E_kin_GeV = 0.01;
  NoiseModel noise;

  void validate() const {
    constexpr double pi = std::numbers::pi;
    if (!(alpha >= -pi && alpha <= pi) || !(chi >= -pi && chi <= pi))
      throw domain_error("BeamlineConfig: phases must lie in [-pi, pi]");
    if (!(beam_M_GeV > 0.0) || !(beam_E_kin_GeV >= 0.0))
      throw domain_error("BeamlineConfig: invalid beam kinematics");
    noise.validate();
  }
};

/// The state at the four tracked stages of the beamline, on the 4-dimensional
/// spin (x) path space with basis |up,r>, |up,b>, |down,r>, |down,b> and the
/// common input path |g> identified with |r>.
struct StagedStates {
  QuantumState psi_in;  // (|up> + |down>)/sqrt(2) (x) |g>
  QuantumState psi1;    // (|up,r> + |down,b>)/sqrt(2)
  QuantumState psi2;    // (|up,r> + e^{i(alpha+chi)} |down,b>)/sqrt(2)
  QuantumState psi3;    // (|up> + e^{i(alpha+chi)} |down>)/sqrt(2) (x) |g>
};

namespace detail {

// |up><up| (x) 1 + |down><down| (x) sigma_x: splits/merges the paths by spin.
inline Matrix mwp_matrix() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1.0;  // spin up: path unchanged
  m(2, 3) = m(3, 2) = 1.0;  // spin down: r <-> b
  return m;
}

inline Matrix spin_phase_matrix(double alpha) {
  Matrix m = Matrix::Identity(4, 4);
  m(2, 2) = m(3, 3) = std::exp(Complex(0.0, alpha));
  return m;
}

inline Matrix path_phase_matrix(double chi) {
  Matrix m = Matrix::Identity(4, 4);
  m(1, 1) = m(3, 3) = std::exp(Complex(0.0, chi));
  return m;
}

}  // namespace detail

/// Runs the state through the beamline elements and returns the four stages.
inline StagedStates propagate(const BeamlineConfig& config) {
  config.validate();
  const HilbertSpace space = HilbertSpace::spin_path();
  Vector in(4);
  in << 1.0 / std::numbers::sqrt2, 0.0, 1.0 / std::numbers::sqrt2, 0.0;
  const Vector v1 = detail::mwp_matrix() * in;
  const Vector v2 =
      detail::path_phase_matrix(config.chi) * (detail::spin_phase_matrix(config.alpha) * v1);
  const Vector v3 = detail::mwp_matrix() * v2;
  return {QuantumState(space, in), QuantumState(space, v1), QuantumState(space, v2),
          QuantumState(space, v3)};
}

/// E(alpha, chi) = v <psi1| sigma^s_alpha (x) sigma^p_chi |psi1> with
/// sigma^s_alpha = sigma_x cos(alpha) + sigma_y sin(alpha) on the spin factor
/// and sigma^p_chi the same combination on the path factor. Equals
/// v cos(alpha + chi).
inline double exact_expectation(double alpha, double chi, const NoiseModel& noise = {}) {
  noise.validate();
  const QuantumState psi1 = propagate({}).psi1;
  const OperatorRep spin_op(HilbertSpace::spin(),
                            std::cos(alpha) * pauli_x() + std::sin(alpha) * pauli_y(), true);
  const OperatorRep path_op(HilbertSpace({{"path", 2}}),
                            std::cos(chi) * pauli_x() + std::sin(chi) * pauli_y(), true);
  return noise.visibility * real_expectation(psi1, kron(spin_op, path_op));
}

/// The four phase settings of the contextual witness.
struct WitnessSettings {
  double alpha1, alpha2, chi1, chi2;

  /// alpha1 = 0, alpha2 = pi/2, chi1 = -pi/4, chi2 = pi/4: saturates 2 sqrt(2).
  static WitnessSettings maximal_violation() {
    constexpr double pi = std::numbers::pi;
    return {0.0, pi / 2.0, -pi / 4.0, pi / 4.0};
  }

  void validate() const {
    constexpr double pi = std::numbers::pi;
    for (double phase : {alpha1, alpha2, chi1, chi2})
      if (!(phase >= -pi && phase <= pi))
        throw domain_error("WitnessSettings: phases must lie in [-pi, pi]");
  }
};

struct WitnessResult {
  // E at (alpha1,chi1), (alpha1,chi2), (alpha2,chi1), (alpha2,chi2).
  std::array<double, 4> E;
  // base = undeformed S', epsilon = the <f> correction (power 1: the
  // correction enters each spin operator once, not squared).
  CorrectionValue s_prime;
  double std_err = 0.0;  // statistical, nonzero only for count-based results
};

/// S' = |E(a1,c1) + E(a1,c2) + E(a2,c1) - E(a2,c2)|, scaled by the <f>
/// correction through the CorrectionValue pair.
inline WitnessResult witness(const WitnessSettings& settings, const NoiseModel& noise = {},
                             const CorrectionValue& correction = CorrectionValue::one()) {
  settings.validate();
  const std::array<double, 4> e = {exact_expectation(settings.alpha1, settings.chi1, noise),
                                   exact_expectation(settings.alpha1, settings.chi2, noise),
                                   exact_expectation(settings.alpha2, settings.chi1, noise),
                                   exact_expectation(settings.alpha2, settings.chi2, noise)};
  const double base = std::abs(e[0] + e[1] + e[2] - e[3]);
  return {e, CorrectionValue(base, correction.epsilon()), 0.0};
}

/// Detector counts for the four sign combinations at each witness setting
/// pair: counts[0] = N(alpha, chi), counts[1] = N(alpha, chi+pi),
/// counts[2] = N(alpha+pi, chi), counts[3] = N(alpha+pi, chi+pi).
struct CountTable {
  struct Entry {
    double alpha;
    double chi;
    std::array<std::uint64_t, 4> counts;

    std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  };

  std::vector<Entry> entries;
  std::uint64_t shots_per_setting = 0;
  std::uint64_t rng_seed = 0;

  std::uint64_t total_counts() const {
    std::uint64_t t = 0;
    for (const auto& e : entries) t += e.total();
    return t;
  }

  const Entry& find(double alpha, double chi) const {
    for (const auto& e : entries)
      if (std::abs(e.alpha - alpha) <= 1e-12 && std::abs(e.chi - chi) <= 1e-12) return e;
    throw domain_error("CountTable: no entry for the requested settings");
  }
};

namespace detail {

// Counter-style generator: identical sequences on every platform.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 0x632BE59BD9B4E019ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// One independently seeded chunk of shots at a fixed setting pair. The joint
// +/-1 outcome model with correlation E and unbiased marginals assigns
// p(+,+) = p(-,-) = (1+E)/4 and p(+,-) = (-,+) = (1-E)/4.
inline void sample_chunk(double E, std::uint64_t stream_seed, std::uint64_t n,
                         std::array<std::uint64_t, 4>& counts) {
  const double c0 = (1.0 + E) / 4.0;
  const double c1 = 0.5;
  const double c2 = 0.5 + (1.0 - E) / 4.0;
  SplitMix64 rng{stream_seed};
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = rng.next_double();
    const int cell = x < c1 ? (x < c0 ? 0 : 1) : (x < c2 ? 2 : 3);
    ++counts[static_cast<std::size_t>(cell)];
  }
}

}  // namespace detail

/// Draws counts for the four witness setting pairs from the minimal joint
/// outcome model. Shots are sampled in fixed 2^16-shot chunks, each with its
/// own seed derived from (seed, pair, chunk); workers split the chunk list,
/// so the merged table is byte-identical for every worker count.
inline CountTable simulate_counts(const WitnessSettings& settings, const NoiseModel& noise,
                                  std::uint64_t shots_per_setting, std::uint64_t seed,
                                  int n_workers = 1) {
  settings.validate();
  noise.validate();
  if (shots_per_setting < 1) throw domain_error("simulate_counts: shots must be >= 1");
  if (n_workers < 1) throw domain_error("simulate_counts: n_workers must be >= 1");

  constexpr std::uint64_t kChunk = 1ull << 16;
  const std::array<std::pair<double, double>, 4> pairs = {
      std::pair{settings.alpha1, settings.chi1}, std::pair{settings.alpha1, settings.chi2},
      std::pair{settings.alpha2, settings.chi1}, std::pair{settings.alpha2, settings.chi2}};
  std::array<double, 4> e{};
  for (std::size_t p = 0; p < 4; ++p) e[p] = exact_expectation(pairs[p].first, pairs[p].second, noise);

  const std::uint64_t chunks_per_pair = (shots_per_setting + kChunk - 1) / kChunk;
  const std::uint64_t n_items = 4 * chunks_per_pair;

  const auto run_items = [&](std::uint64_t first, std::uint64_t stride,
                             std::array<std::array<std::uint64_t, 4>, 4>& acc) {
    for (std::uint64_t item = first; item < n_items; item += stride) {
      const std::size_t pair = static_cast<std::size_t>(item / chunks_per_pair);
      const std::uint64_t chunk = item % chunks_per_pair;
      const std::uint64_t begin = chunk * kChunk;
      const std::uint64_t n = std::min(kChunk, shots_per_setting - begin);
      const std::uint64_t stream = detail::mix_seed(detail::mix_seed(seed, pair), chunk);
      detail::sample_chunk(e[pair], stream, n, acc[pair]);
    }
  };

  std::vector<std::array<std::array<std::uint64_t, 4>, 4>> acc(
      static_cast<std::size_t>(n_workers));
  if (n_workers == 1) {
    run_items(0, 1, acc[0]);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w)
      workers.emplace_back(run_items, static_cast<std::uint64_t>(w),
                           static_cast<std::uint64_t>(n_workers),
                           std::ref(acc[static_cast<std::size_t>(w)]));
    for (auto& t : workers) t.join();
  }

  CountTable table;
  table.shots_per_setting = shots_per_setting;
  table.rng_seed = seed;
  for (std::size_t p = 0; p < 4; ++p) {
    CountTable::Entry entry{pairs[p].first, pairs[p].second, {0, 0, 0, 0}};
    for (int w = 0; w < n_workers; ++w)
      for (std::size_t c = 0; c < 4; ++c) entry.counts[c] += acc[static_cast<std::size_t>(w)][p][c];
    table.entries.push_back(entry);
  }
  return table;
}

struct EstimatedE {
  double value;
  double std_err;
};

inline EstimatedE estimate_from_counts(const std::array<std::uint64_t, 4>& counts) {
  const double n0 = static_cast<double>(counts[0]);
  const double n1 = static_cast<double>(counts[1]);
  const double n2 = static_cast<double>(counts[2]);
  const double n3 = static_cast<double>(counts[3]);
  const double total = n0 + n1 + n2 + n3;
  if (!(total > 0.0)) throw domain_error("estimate_E: zero total counts for the setting");
  const double e_hat = (n0 - n1 - n2 + n3) / total;
  const double var = std::max(0.0, (1.0 - e_hat * e_hat) / total);
  return {e_hat, std::sqrt(var)};
}

/// E_hat = [N(a,c) - N(a,c+pi) - N(a+pi,c) + N(a+pi,c+pi)] / (sum of the
/// four), with binomial error propagation.
inline EstimatedE estimate_E(const CountTable& table, double alpha, double chi) {
  return estimate_from_counts(table.find(alpha, chi).counts);
}

/// Count-based witness: S' from the four estimated E values, standard error
/// combined in quadrature.
inline WitnessResult witness_from_counts(const CountTable& table, const WitnessSettings& settings,
                                         const CorrectionValue& correction = CorrectionValue::one()) {
  std::array<double, 4> e{};
  double var = 0.0;
  const std::array<std::pair<double, double>, 4> pairs = {
      std::pair{settings.alpha1, settings.chi1}, std::pair{settings.alpha1, settings.chi2},
      std::pair{settings.alpha2, settings.chi1}, std::pair{settings.alpha2, settings.chi2}};
  for (std::size_t p = 0; p < 4; ++p) {
    const EstimatedE est = estimate_E(table, pairs[p].first, pairs[p].second);
    e[p] = est.value;
    var += est.std_err * est.std_err;
  }
  const double base = std::abs(e[0] + e[1] + e[2] - e[3]);
  return {e, CorrectionValue(base, correction.epsilon()), std::sqrt(var)};
}

}  // namespace mlqm
