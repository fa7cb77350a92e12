// Dense complex-matrix kernel: tensor products, Schatten p-norms via
// Hermitian eigendecomposition, and density-matrix validity checks.
//
// Basis convention used throughout the library: each qubit is ordered
// (|1>, |0>) with the excited state first, and qubit 0 is the most
// significant Kronecker factor. For two qubits the basis is therefore
// (|11>, |10>, |01>, |00>); the all-excited state |1...1> is index 0 and
// the ground state |0...0> is the last index.
#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "qsl/config.hpp"
#include "qsl/errors.hpp"

namespace qsl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class SchattenP { one, two, inf };

// --- basis helpers -------------------------------------------------------

// Index of a computational basis label such as "011" (qubit 0 first).
// With the (|1>, |0>) per-qubit ordering a '1' contributes bit 0 and a
// '0' contributes bit 1 at that qubit's position.
Eigen::Index basis_index(std::string_view label);

// Number of excited qubits in basis state `index` of an n-qubit register.
int excitation_count(Eigen::Index index, int n_qubits);

// 2x2 identity.
ComplexMatrix identity2();

// --- core operations ------------------------------------------------------

// Kronecker product with the qubit-0-most-significant convention.
// Throws CapacityError if the product dimension exceeds limits::max_dim.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Singular values in descending order, computed from the Hermitian
// eigendecomposition of A^dag A. Throws NumericError on non-finite input.
RealVector singular_values(const ComplexMatrix& a);

// Schatten p-norm for p in {1, 2, inf}: sum, root-sum-square, or max of
// the singular values.
double schatten_norm(const ComplexMatrix& a, SchattenP p);

// All three Schatten norms from one decomposition (order: 1, 2, inf).
struct SchattenNorms {
  double one;
  double two;
  double inf;
};
SchattenNorms schatten_norms(const ComplexMatrix& a);

// --- validated wrapper types ----------------------------------------------

// Hermitian, unit-trace, positive-semidefinite matrix. Construct through
// validate_density(); the wrapped matrix is immutable afterwards.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  friend DensityMatrix validate_density(const ComplexMatrix& m);

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

// Checks hermiticity, unit trace, and positivity; each violation is
// reported with the offending magnitude.
DensityMatrix validate_density(const ComplexMatrix& m);

// Normalized amplitude vector over n qubits.
class PureState {
 public:
  // Validates length 2^n and unit norm.
  PureState(int n_qubits, ComplexVector amplitudes);

  int n_qubits() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  const ComplexVector& amplitudes() const noexcept { return amps_; }

  // Rank-one projector |phi><phi| as a validated density matrix.
  DensityMatrix projector() const;

 private:
  int n_;
  ComplexVector amps_;
};

}  // namespace qsl
