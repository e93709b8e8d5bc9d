#include <catch_amalgamated.hpp>

#include <cmath>

#include "mlqm/bounds.hpp"

using Catch::Matchers::WithinRel;
using namespace mlqm;

namespace {
const BeamSpec kMuon{0.1, 0.01, 1, 2.0};
const BeamSpec kNeutron{1.0, 0.01, 3, 2.0};
}  // namespace

TEST_CASE("delta_S reproduces the worked correction magnitudes", "[bounds]") {
  const auto lin = DeformationModel::linear(1.0);
  const auto quad = DeformationModel::quadratic(1.0);

  const double lin2 = delta_S(lin, kMuon, 2);
  CHECK_THAT(lin2, WithinRel(7.326026021999655e-21, 1e-12));
  CHECK(lin2 >= 1e-21);
  CHECK(lin2 <= 1e-20);

  const double quad2 = delta_S(quad, kMuon, 2);
  CHECK_THAT(quad2, WithinRel(2.683532863750804e-41, 1e-12));
  CHECK(quad2 >= 1e-42);
  CHECK(quad2 <= 1e-40);

  CHECK(delta_S(DeformationModel::linear(0.0), kMuon, 2) == 0.0);
  CHECK(delta_S(DeformationModel::quadratic(0.0), kMuon, 1) == 0.0);
}

TEST_CASE("delta_S never collapses to zero for positive beta", "[bounds]") {
  for (double beta : {1e-30, 1e-10, 1e-3}) {
    CHECK(delta_S(DeformationModel::linear(beta), kMuon, 1) > 0.0);
    CHECK(delta_S(DeformationModel::quadratic(beta), kMuon, 2) > 0.0);
  }
}

TEST_CASE("delta_S is monotone in energy, mass and beta", "[bounds]") {
  const auto lin = DeformationModel::linear(1.0);
  const auto quad = DeformationModel::quadratic(1.0);
  double prev_lin = 0.0, prev_quad = 0.0;
  for (double e = 0.001; e <= 0.02; e += 0.001) {
    const BeamSpec beam{1.0, e, 1, 2.0};
    const double dl = delta_S(lin, beam, 2);
    const double dq = delta_S(quad, beam, 2);
    CHECK(dl > prev_lin);
    CHECK(dq > prev_quad);
    prev_lin = dl;
    prev_quad = dq;
  }
  CHECK(delta_S(lin, BeamSpec{2.0, 0.01}, 2) > delta_S(lin, BeamSpec{1.0, 0.01}, 2));
  CHECK(delta_S(DeformationModel::linear(2.0), kMuon, 2) > delta_S(lin, kMuon, 2));
}

TEST_CASE("bound inversion reproduces the published orders", "[bounds]") {
  const auto lin = invert_bound(ModelKind::Linear, kNeutron, 1, 1.0);
  CHECK_THAT(lin.beta_bound, WithinRel(8.63299598082844e19, 1e-12));
  CHECK(lin.beta_bound >= 1e19);
  CHECK(lin.beta_bound <= 1e20);
  CHECK(lin.delta_precision == 1.0);
  CHECK(lin.witness_power == 1);
  CHECK_THAT(lin.epsilon_at_bound, WithinRel(1.0, 1e-12));  // saturates delta to first order

  const auto quad = invert_bound(ModelKind::Quadratic, kNeutron, 1, 1.0);
  CHECK_THAT(quad.beta_bound, WithinRel(7.4528619605e39, 1e-10));
  CHECK(quad.beta_bound >= 1e39);
  CHECK(quad.beta_bound <= 1e40);

  // exact linearity in delta
  const auto half = invert_bound(ModelKind::Linear, kNeutron, 1, 0.5);
  CHECK(half.beta_bound == 0.5 * lin.beta_bound);

  CHECK_THROWS_AS(invert_bound(ModelKind::CustomSeries, kNeutron, 1, 1.0), domain_error);
  CHECK_THROWS_AS(invert_bound(ModelKind::Linear, kNeutron, 1, 0.0), domain_error);
  CHECK_THROWS_AS(invert_bound(ModelKind::Linear, kNeutron, 3, 1.0), domain_error);
  CHECK_THROWS_AS(invert_bound(ModelKind::Linear, BeamSpec{1.0, 0.0}, 1, 1.0), domain_error);
}

TEST_CASE("invert_bound recovers beta from its own delta_S", "[bounds]") {
  for (double beta0 : {0.5, 1.0, 3.0}) {
    for (int power : {1, 2}) {
      const double d_lin = delta_S(DeformationModel::linear(beta0), kNeutron, power);
      CHECK_THAT(invert_bound(ModelKind::Linear, kNeutron, power, d_lin).beta_bound,
                 WithinRel(beta0, 1e-9));
      const double d_quad = delta_S(DeformationModel::quadratic(beta0), kNeutron, power);
      CHECK_THAT(invert_bound(ModelKind::Quadratic, kNeutron, power, d_quad).beta_bound,
                 WithinRel(beta0, 1e-9));
    }
  }
}

TEST_CASE("composite scaling", "[bounds]") {
  CHECK(composite_scaling(1.0, 1, 2.0) == 1.0);
  CHECK_THAT(composite_scaling(1.0, 3, 2.0), WithinRel(1.0 / 9.0, 1e-15));
  CHECK_THAT(composite_scaling(1e40, 10, 2.0), WithinRel(1e38, 1e-15));
  CHECK(composite_scaling(5.0, 4, 0.0) == 5.0);
  CHECK_THROWS_AS(composite_scaling(1.0, 0, 2.0), domain_error);
  CHECK_THROWS_AS(composite_scaling(1.0, 3, -1.0), domain_error);
}

TEST_CASE("beam kinematics and validation", "[bounds]") {
  CHECK_THAT(kNeutron.momentum_GeV(), WithinRel(std::sqrt(0.02), 1e-15));
  CHECK(kNeutron.non_relativistic());
  CHECK_FALSE(BeamSpec{1.0, 0.3}.non_relativistic());
  CHECK_THROWS_AS((BeamSpec{0.0, 0.01}.validate()), domain_error);
  CHECK_THROWS_AS((BeamSpec{1.0, 0.01, 0, 2.0}).validate(), domain_error);
  CHECK_THROWS_AS((BeamSpec{1.0, 0.01, 1, -2.0}).validate(), domain_error);

  // beam outside the model validity domain is a domain error
  const auto tight = DeformationModel::custom_series({1.0, 1.0}, 0.0, 1e-50);
  CHECK_THROWS_AS(delta_S(tight, kNeutron, 1), domain_error);
}
