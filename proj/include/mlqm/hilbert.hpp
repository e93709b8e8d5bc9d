#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mlqm/constants.hpp"
#include "mlqm/deformation.hpp"
#include "mlqm/distribution.hpp"
#include "mlqm/errors.hpp"

namespace mlqm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Ordered tensor product of labeled finite-dimensional factors.
class HilbertSpace {
 public:
  struct Factor {
    std::string label;
    Eigen::Index dim;
  };

  explicit HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
    Eigen::Index total = 1;
    for (const auto& f : factors_) {
      if (f.dim <= 0) throw domain_error("HilbertSpace: factor dimensions must be positive");
      for (const auto& g : factors_)
        if (&f != &g && f.label == g.label)
          throw domain_error("HilbertSpace: factor labels must be unique");
      total *= f.dim;
      if (total > kMaxDim) throw domain_error("HilbertSpace: total dimension exceeds 2^14");
    }
    total_dim_ = total;
  }

  static HilbertSpace spin() { return HilbertSpace({{"spin", 2}}); }
  static HilbertSpace momentum(Eigen::Index n) { return HilbertSpace({{"momentum", n}}); }
  static HilbertSpace spin_momentum(Eigen::Index n) {
    return HilbertSpace({{"spin", 2}, {"momentum", n}});
  }
  static HilbertSpace spin_path() { return HilbertSpace({{"spin", 2}, {"path", 2}}); }
  static HilbertSpace two_qubit() { return HilbertSpace({{"A", 2}, {"B", 2}}); }

  const std::vector<Factor>& factors() const { return factors_; }
  Eigen::Index total_dim() const { return total_dim_; }

  friend bool operator==(const HilbertSpace& a, const HilbertSpace& b) {
    if (a.factors_.size() != b.factors_.size()) return false;
    for (std::size_t i = 0; i < a.factors_.size(); ++i)
      if (a.factors_[i].label != b.factors_[i].label || a.factors_[i].dim != b.factors_[i].dim)
        return false;
    return true;
  }
  friend bool operator!=(const HilbertSpace& a, const HilbertSpace& b) { return !(a == b); }

 private:
  static constexpr Eigen::Index kMaxDim = 1 << 14;

  std::vector<Factor> factors_;
  Eigen::Index total_dim_ = 1;
};

/// Dense operator on a HilbertSpace. When constructed as Hermitian the matrix
/// is checked against its adjoint to 1e-12 in the max norm.
class OperatorRep {
 public:
  OperatorRep(HilbertSpace space, Matrix matrix, bool hermitian)
      : space_(std::move(space)), matrix_(std::move(matrix)), hermitian_(hermitian) {
    if (matrix_.rows() != space_.total_dim() || matrix_.cols() != space_.total_dim())
      throw space_mismatch("OperatorRep: matrix dimension does not match the space");
    if (hermitian_) {
      const double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
      if (dev >= 1e-12) throw domain_error("OperatorRep: matrix fails the Hermiticity check");
    }
  }

  static OperatorRep identity(const HilbertSpace& space) {
    return OperatorRep(space, Matrix::Identity(space.total_dim(), space.total_dim()), true);
  }

  const HilbertSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  bool is_hermitian() const { return hermitian_; }

 private:
  HilbertSpace space_;
  Matrix matrix_;
  bool hermitian_;
};

/// Normalized state vector; the norm is checked to 1e-12 at construction.
class QuantumState {
 public:
  QuantumState(HilbertSpace space, Vector amplitudes)
      : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != space_.total_dim())
      throw space_mismatch("QuantumState: amplitude count does not match the space");
    if (std::abs(amplitudes_.norm() - 1.0) >= 1e-12)
      throw domain_error("QuantumState: state is not normalized");
  }

  /// Normalizes the amplitudes first; rejects (near-)zero vectors.
  static QuantumState normalized(HilbertSpace space, Vector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 1e-300)) throw domain_error("QuantumState: cannot normalize the zero vector");
    return QuantumState(std::move(space), amplitudes / n);
  }

  const HilbertSpace& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  HilbertSpace space_;
  Vector amplitudes_;
};

inline Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }
inline Matrix pauli_y() {
  return (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
}
inline Matrix pauli_z() { return (Matrix(2, 2) << 1, 0, 0, -1).finished(); }

enum class Axis { X = 0, Y = 1, Z = 2 };

inline Matrix pauli(Axis axis) {
  switch (axis) {
    case Axis::X: return pauli_x();
    case Axis::Y: return pauli_y();
    case Axis::Z: return pauli_z();
  }
  throw domain_error("pauli: invalid axis");
}

struct SpinOperators {
  OperatorRep x, y, z;

  const OperatorRep& axis(Axis a) const {
    switch (a) {
      case Axis::X: return x;
      case Axis::Y: return y;
      case Axis::Z: return z;
    }
    throw domain_error("SpinOperators: invalid axis");
  }
};

/// Spin-1/2 operators S_i = sigma_i / 2 on the plain spin space.
inline SpinOperators spin_operators(int dim = 2) {
  if (dim != 2) throw domain_error("spin_operators: only spin-1/2 (dim = 2) is supported");
  const HilbertSpace space = HilbertSpace::spin();
  return {OperatorRep(space, 0.5 * pauli_x(), true), OperatorRep(space, 0.5 * pauli_y(), true),
          OperatorRep(space, 0.5 * pauli_z(), true)};
}

/// Tensor product; the result lives on the concatenation of the factor lists.
inline OperatorRep kron(const OperatorRep& a, const OperatorRep& b) {
  std::vector<HilbertSpace::Factor> factors = a.space().factors();
  for (const auto& f : b.space().factors()) factors.push_back(f);
  HilbertSpace space(std::move(factors));
  Matrix m(space.total_dim(), space.total_dim());
  const Eigen::Index nb = b.space().total_dim();
  for (Eigen::Index i = 0; i < a.space().total_dim(); ++i)
    for (Eigen::Index j = 0; j < a.space().total_dim(); ++j)
      m.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
  return OperatorRep(std::move(space), std::move(m), a.is_hermitian() && b.is_hermitian());
}

inline QuantumState kron(const QuantumState& a, const QuantumState& b) {
  std::vector<HilbertSpace::Factor> factors = a.space().factors();
  for (const auto& f : b.space().factors()) factors.push_back(f);
  HilbertSpace space(std::move(factors));
  Vector v(space.total_dim());
  const Eigen::Index nb = b.space().total_dim();
  for (Eigen::Index i = 0; i < a.space().total_dim(); ++i)
    v.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
  return QuantumState(std::move(space), std::move(v));
}

/// AB - BA. Hermiticity is not claimed for the result ([A,B] of Hermitian
/// operators is anti-Hermitian).
inline OperatorRep commutator(const OperatorRep& a, const OperatorRep& b) {
  if (a.space() != b.space()) throw space_mismatch("commutator: operators on different spaces");
  return OperatorRep(a.space(), a.matrix() * b.matrix() - b.matrix() * a.matrix(), false);
}

/// <psi|A|psi>.
inline Complex expectation(const QuantumState& state, const OperatorRep& op) {
  if (state.space() != op.space()) throw space_mismatch("expectation: state and operator spaces differ");
  return state.amplitudes().dot(op.matrix() * state.amplitudes());
}

/// <psi|A|psi> for Hermitian A; enforces the 1e-12 bound on the imaginary part.
inline double real_expectation(const QuantumState& state, const OperatorRep& op) {
  const Complex v = expectation(state, op);
  if (op.is_hermitian() && std::abs(v.imag()) >= 1e-12)
    throw std::logic_error("real_expectation: Hermitian expectation has a nonreal part");
  return v.real();
}

namespace detail {

inline std::vector<double> f_values(const DeformationModel& model, const MomentumDistribution& dist,
                                    const PhysicalConstants& pc) {
  std::vector<double> f(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) f[i] = model.f(dist.u_of(i, pc));
  return f;
}

}  // namespace detail

/// diag(f(u_1), ..., f(u_N)) on the momentum factor.
inline OperatorRep f_diagonal(const DeformationModel& model, const MomentumDistribution& dist,
                              const PhysicalConstants& pc = {}) {
  const auto f = detail::f_values(model, dist, pc);
  const Eigen::Index n = static_cast<Eigen::Index>(dist.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m(k, k) = f[static_cast<std::size_t>(k)];
  return OperatorRep(HilbertSpace::momentum(n), std::move(m), true);
}

/// Momentum-dependent spin operator S_axis (x) diag(f(u_1), ..., f(u_N)) on
/// the spin (x) momentum space. Acting on a product state multiplies the
/// momentum component by f pointwise while S_axis acts on the spin part.
inline OperatorRep deformed_spin(const DeformationModel& model, const MomentumDistribution& dist,
                                 Axis axis, const PhysicalConstants& pc = {}) {
  const HilbertSpace spin = HilbertSpace::spin();
  return kron(OperatorRep(spin, 0.5 * pauli(axis), true), f_diagonal(model, dist, pc));
}

/// 1 (x) diag(f(u_1), ..., f(u_N)) on the spin (x) momentum space.
inline OperatorRep deformation_factor_operator(const DeformationModel& model,
                                               const MomentumDistribution& dist,
                                               const PhysicalConstants& pc = {}) {
  return kron(OperatorRep::identity(HilbertSpace::spin()), f_diagonal(model, dist, pc));
}

/// Physical momentum magnitude diag(pi_1, ..., pi_N) on the momentum factor.
inline OperatorRep physical_momentum(const MomentumDistribution& dist) {
  const Eigen::Index n = static_cast<Eigen::Index>(dist.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) m(k, k) = dist.points()[static_cast<std::size_t>(k)].pi_GeV;
  return OperatorRep(HilbertSpace::momentum(n), std::move(m), true);
}

/// Canonical momentum diag(pi_n / f(u_n)) on the momentum factor; multiplying
/// back by diag(f) recovers the physical momentum exactly.
inline OperatorRep canonical_momentum(const DeformationModel& model, const MomentumDistribution& dist,
                                      const PhysicalConstants& pc = {}) {
  const auto f = detail::f_values(model, dist, pc);
  const Eigen::Index n = static_cast<Eigen::Index>(dist.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    if (f[i] == 0.0) throw domain_error("canonical_momentum: f vanishes on the support");
    m(k, k) = dist.points()[i].pi_GeV / f[i];
  }
  return OperatorRep(HilbertSpace::momentum(n), std::move(m), true);
}

}  // namespace mlqm
