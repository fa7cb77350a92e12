// Shared helpers for the test suites: random matrices and states, and the
// brute-force oracles the implementation is checked against. Everything here
// deliberately avoids the library's site-map evolution path.
#pragma once

#include <complex>
#include <random>

#include "qsl/dynamics.hpp"
#include "qsl/matcore.hpp"

namespace qsl::testutil {

inline ComplexMatrix random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex{normal(rng), normal(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
  ComplexMatrix m = random_matrix(dim, rng);
  return ComplexMatrix(0.5 * (m + m.adjoint()));
}

// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal
// phases divided out.
inline ComplexMatrix haar_unitary(int dim, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex{1.0, 0.0};
  }
  return q;
}

inline PureState random_pure_state(int n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexVector v(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = Complex{normal(rng), normal(rng)};
  v /= std::sqrt(v.squaredNorm());
  return PureState(n_qubits, std::move(v));
}

// Reference evolution: explicit sum over all 2^n Kraus index tuples,
// assembled with tensor products. Exponential in n; fine for n <= 3.
inline ComplexMatrix brute_force_channel(const DecoherenceModel& model,
                                         const ComplexMatrix& rho0, double t,
                                         int n_qubits) {
  const KrausPair pair = kraus_pair(coherence(model, t));
  const Eigen::Index dim = rho0.rows();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int tuple = 0; tuple < (1 << n_qubits); ++tuple) {
    ComplexMatrix op = ComplexMatrix::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
      const bool second = (tuple >> (n_qubits - 1 - q)) & 1;
      op = tensor_product(op, second ? pair.m1 : pair.m0);
    }
    out += op * rho0 * op.adjoint();
  }
  return out;
}

// Central finite difference of the channel output.
inline ComplexMatrix channel_derivative_fd(const DecoherenceModel& model,
                                           const DensityMatrix& rho0, double t,
                                           int n_qubits, double h) {
  const ComplexMatrix hi =
      apply_channel(model, rho0, t + h, n_qubits).matrix();
  const ComplexMatrix lo =
      apply_channel(model, rho0, t - h, n_qubits).matrix();
  return ComplexMatrix((hi - lo) / (2.0 * h));
}

inline double max_abs(const ComplexMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace qsl::testutil
