#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "mlqm/deformation.hpp"
#include "mlqm/interferometer.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace mlqm;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
}  // namespace

TEST_CASE("staged states through the beamline", "[interferometer]") {
  const auto sequence = beamline_sequence();
  CHECK(sequence.front() == BeamElement::Polarizer);
  CHECK(sequence.back() == BeamElement::Analyzer);
  CHECK(sequence[2] == BeamElement::MwpEntangler);
  CHECK(sequence[5] == BeamElement::MwpDisentangler);

  BeamlineConfig cfg;
  cfg.alpha = 0.0;
  cfg.chi = 0.0;
  const auto zero_phase = propagate(cfg);
  CHECK((zero_phase.psi2.amplitudes() - zero_phase.psi1.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

  // alpha + chi = pi flips the spin superposition sign
  cfg.alpha = kPi / 2.0;
  cfg.chi = kPi / 2.0;
  const auto flipped = propagate(cfg);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  CHECK_THAT(flipped.psi3.amplitudes()(0).real(), WithinAbs(inv_sqrt2, 1e-12));
  CHECK_THAT(flipped.psi3.amplitudes()(2).real(), WithinAbs(-inv_sqrt2, 1e-12));
  CHECK(std::abs(flipped.psi3.amplitudes()(1)) < 1e-12);
  CHECK(std::abs(flipped.psi3.amplitudes()(3)) < 1e-12);

  // psi1 is the maximally entangled spin-path state
  CHECK_THAT(flipped.psi1.amplitudes()(0).real(), WithinAbs(inv_sqrt2, 1e-15));
  CHECK_THAT(flipped.psi1.amplitudes()(3).real(), WithinAbs(inv_sqrt2, 1e-15));

  // overlap <psi1|psi2> = (1 + e^{i(alpha+chi)}) / 2, against direct 4-vector
  // arithmetic
  std::mt19937_64 rng(0x5eed3001);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    BeamlineConfig c;
    c.alpha = phase(rng) / 2.0;
    c.chi = phase(rng) / 2.0;
    const auto staged = propagate(c);
    Complex overlap = 0.0;
    for (int k = 0; k < 4; ++k)
      overlap += std::conj(staged.psi1.amplitudes()(k)) * staged.psi2.amplitudes()(k);
    const Complex expected = (1.0 + std::exp(Complex(0.0, c.alpha + c.chi))) / 2.0;
    CHECK(std::abs(overlap - expected) < 1e-14);
  }

  BeamlineConfig bad;
  bad.alpha = 4.0;
  CHECK_THROWS_AS(propagate(bad), domain_error);
}

TEST_CASE("exact expectation equals v cos(alpha + chi)", "[interferometer]") {
  CHECK_THAT(exact_expectation(0.0, 0.0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(exact_expectation(0.0, -kPi / 4.0), WithinAbs(std::numbers::sqrt2 / 2.0, 1e-12));
  CHECK_THAT(exact_expectation(kPi / 2.0, kPi / 4.0), WithinAbs(-std::numbers::sqrt2 / 2.0, 1e-12));

  // oracle identity over random phases and visibilities: the matrix-element
  // route must reproduce the closed form
  std::mt19937_64 rng(0x5eed3002);
  std::uniform_real_distribution<double> phase(-10.0, 10.0);
  std::uniform_real_distribution<double> vis(0.05, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = phase(rng), c = phase(rng), v = vis(rng);
    CHECK_THAT(exact_expectation(a, c, {v}), WithinAbs(v * std::cos(a + c), 1e-12));
  }

  CHECK_THROWS_AS(exact_expectation(0.0, 0.0, {0.0}), domain_error);
  CHECK_THROWS_AS(exact_expectation(0.0, 0.0, {1.5}), domain_error);
}

TEST_CASE("witness values at the standard settings", "[interferometer]") {
  const auto settings = WitnessSettings::maximal_violation();

  const auto ideal = witness(settings);
  CHECK_THAT(ideal.s_prime.base(), WithinAbs(kTsirelson, 1e-12));
  CHECK(ideal.s_prime.epsilon() == 0.0);
  CHECK(ideal.std_err == 0.0);

  const auto noisy = witness(settings, {0.78});
  CHECK_THAT(noisy.s_prime.base(), WithinAbs(2.2061731573020283, 1e-12));
  CHECK_THAT(noisy.s_prime.base(), WithinAbs(2.20, 0.01));

  const auto calibrated = witness(settings, {0.778});
  CHECK_THAT(calibrated.s_prime.base(), WithinAbs(2.20, 0.01));
  CHECK_THAT(classical_threshold({0.778}), WithinAbs(1.56, 0.01));
  CHECK(classical_threshold({0.78}) == 1.56);

  const CorrectionValue correction(1.0, 3.663013010999827e-21);
  const auto deformed = witness(settings, {1.0}, correction);
  CHECK_THAT(deformed.s_prime.base(), WithinAbs(kTsirelson, 1e-12));
  CHECK(deformed.s_prime.epsilon() == 3.663013010999827e-21);
}

TEST_CASE("witness correction is linear in <f>, CHSH quadratic in <f^2>", "[interferometer]") {
  const auto model = DeformationModel::linear(1.0);
  const auto beam = MomentumDistribution::monoenergetic(0.1, 0.01);
  const double eps_witness = expectation_f(model, beam, 1).epsilon();
  const double eps_chsh = expectation_f(model, beam, 2).epsilon();
  CHECK(eps_chsh > eps_witness);
  CHECK_THAT(eps_chsh / eps_witness, WithinRel(2.0, 1e-15));  // first-order regime
}

TEST_CASE("witness maximum is 2 sqrt(2) v over random settings", "[interferometer]") {
  std::mt19937_64 rng(0x5eed3003);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  const NoiseModel noise{0.9};
  const double cap = kTsirelson * noise.visibility;
  double best = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const WitnessSettings s{phase(rng), phase(rng), phase(rng), phase(rng)};
    best = std::max(best, witness(s, noise).s_prime.base());
  }
  CHECK(best <= cap + 1e-9);
  CHECK_THAT(witness(WitnessSettings::maximal_violation(), noise).s_prime.base(),
             WithinAbs(cap, 1e-9));
}

TEST_CASE("count simulation: exact correlation limits", "[interferometer]") {
  // E(0, 0) = 1: no anticorrelated counts at all
  const WitnessSettings s{0.0, kPi / 2.0, 0.0, kPi / 2.0};
  const auto table = simulate_counts(s, {1.0}, 1000, 7);
  CHECK(table.shots_per_setting == 1000);
  CHECK(table.rng_seed == 7);
  const auto& perfect = table.find(0.0, 0.0);
  CHECK(perfect.counts[1] == 0);
  CHECK(perfect.counts[2] == 0);
  CHECK(perfect.counts[0] + perfect.counts[3] == 1000);

  // E(0, pi/2) = 0: all four cells near 250 within 4 binomial sigmas
  const auto& flat = table.find(0.0, kPi / 2.0);
  for (const auto count : flat.counts) {
    CHECK(static_cast<double>(count) > 250.0 - 4.0 * 13.7);
    CHECK(static_cast<double>(count) < 250.0 + 4.0 * 13.7);
  }
  CHECK(flat.total() == 1000);

  CHECK_THROWS_AS(simulate_counts(s, {1.0}, 0, 7), domain_error);
  CHECK_THROWS_AS(simulate_counts(s, {1.0}, 10, 7, 0), domain_error);
  CHECK_THROWS_AS(table.find(0.5, 0.5), domain_error);
}

TEST_CASE("estimator arithmetic and standard error", "[interferometer]") {
  CHECK(estimate_from_counts({500, 0, 0, 500}).value == 1.0);
  CHECK(estimate_from_counts({500, 0, 0, 500}).std_err == 0.0);
  CHECK(estimate_from_counts({250, 250, 250, 250}).value == 0.0);

  const auto est = estimate_from_counts({427, 73, 73, 427});
  CHECK_THAT(est.value, WithinRel(0.708, 1e-12));
  CHECK_THAT(est.std_err, WithinRel(0.02233239799036369, 1e-12));
  CHECK_THAT(est.value, WithinAbs(std::cos(kPi / 4.0), 3.0 * est.std_err));

  CHECK_THROWS_AS(estimate_from_counts({0, 0, 0, 0}), domain_error);
}

TEST_CASE("estimated E converges to the exact value", "[interferometer]") {
  const auto settings = WitnessSettings::maximal_violation();
  const NoiseModel noise{0.78};
  int within = 0;
  const int trials = 20;
  for (int seed = 0; seed < trials; ++seed) {
    const auto table = simulate_counts(settings, noise, 100000, 1000 + seed);
    const auto est = estimate_E(table, settings.alpha1, settings.chi1);
    const double exact = exact_expectation(settings.alpha1, settings.chi1, noise);
    if (std::abs(est.value - exact) <= 3.0 * est.std_err) ++within;

    // visibility caps the estimated correlation up to statistical noise
    const auto counted = witness_from_counts(table, settings);
    for (double e : counted.E)
      CHECK(std::abs(e) <= noise.visibility + 5.0 * est.std_err);
    CHECK(counted.s_prime.base() <= 2.0 * std::numbers::sqrt2 * noise.visibility + 5.0 * counted.std_err);
  }
  CHECK(within >= trials - 1);
}

TEST_CASE("count table is independent of the worker count and seed-stable", "[interferometer]") {
  const auto settings = WitnessSettings::maximal_violation();
  const NoiseModel noise{0.9};
  const auto serial = simulate_counts(settings, noise, 200000, 99, 1);
  const auto threaded = simulate_counts(settings, noise, 200000, 99, 3);
  const auto wide = simulate_counts(settings, noise, 200000, 99, 7);
  REQUIRE(serial.entries.size() == 4);
  for (std::size_t p = 0; p < 4; ++p) {
    CHECK(serial.entries[p].counts == threaded.entries[p].counts);
    CHECK(serial.entries[p].counts == wide.entries[p].counts);
  }

  const auto again = simulate_counts(settings, noise, 200000, 99, 1);
  for (std::size_t p = 0; p < 4; ++p) CHECK(serial.entries[p].counts == again.entries[p].counts);

  const auto other = simulate_counts(settings, noise, 200000, 100, 1);
  bool all_equal = true;
  for (std::size_t p = 0; p < 4; ++p)
    if (serial.entries[p].counts != other.entries[p].counts) all_equal = false;
  CHECK_FALSE(all_equal);
}

TEST_CASE("count-based witness", "[interferometer]") {
  const auto settings = WitnessSettings::maximal_violation();
  const NoiseModel noise{0.78};
  const auto table = simulate_counts(settings, noise, 1000000, 4242);
  const auto counted = witness_from_counts(table, settings);
  const auto exact = witness(settings, noise);
  CHECK(counted.std_err > 0.0);
  CHECK_THAT(counted.std_err, WithinRel(2.0 * std::sqrt((1 - 0.78 * 0.78 / 2) / 1e6), 0.2));
  CHECK_THAT(counted.s_prime.base(), WithinAbs(exact.s_prime.base(), 5.0 * counted.std_err));

  const CorrectionValue correction(1.0, 1e-21);
  CHECK(witness_from_counts(table, settings, correction).s_prime.epsilon() == 1e-21);
}
