#include "qsl/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsl {

Eigen::Index basis_index(std::string_view label) {
  if (label.empty() || label.size() > static_cast<size_t>(limits::max_qubits))
    throw DomainError("basis label must name between 1 and " +
                      std::to_string(limits::max_qubits) + " qubits");
  Eigen::Index idx = 0;
  for (char ch : label) {
    if (ch != '0' && ch != '1')
      throw DomainError("basis label may contain only '0' and '1'");
    idx = (idx << 1) | (ch == '1' ? 0 : 1);
  }
  return idx;
}

int excitation_count(Eigen::Index index, int n_qubits) {
  int count = 0;
  for (int q = 0; q < n_qubits; ++q)
    if (((index >> q) & 1) == 0) ++count;
  return count;
}

ComplexMatrix identity2() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols();
  const Eigen::Index br = b.rows(), bc = b.cols();
  if (ar * br > limits::max_dim || ac * bc > limits::max_dim) {
    std::ostringstream os;
    os << "tensor product dimension " << ar * br << " x " << ac * bc
       << " exceeds the configured cap of " << limits::max_dim << " ("
       << limits::max_qubits << " qubits)";
    throw CapacityError(os.str());
  }
  ComplexMatrix out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

RealVector singular_values(const ComplexMatrix& a) {
  if (!a.allFinite())
    throw NumericError("singular values requested for a matrix with "
                       "non-finite entries");
  if (a.rows() != a.cols())
    throw DomainError("Schatten norms are defined here for square matrices");
  // Spectra of A^dag A; tiny negative rounding is clamped before the root.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  solver.compute(a.adjoint() * a, Eigen::EigenvaluesOnly);
  RealVector ev = solver.eigenvalues();
  RealVector sv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    sv(ev.size() - 1 - i) = std::sqrt(std::max(0.0, ev(i)));
  return sv;
}

double schatten_norm(const ComplexMatrix& a, SchattenP p) {
  const RealVector sv = singular_values(a);
  switch (p) {
    case SchattenP::one:
      return sv.sum();
    case SchattenP::two:
      return std::sqrt(sv.squaredNorm());
    case SchattenP::inf:
      return sv.size() > 0 ? sv(0) : 0.0;
  }
  throw DomainError("unknown Schatten index");
}

SchattenNorms schatten_norms(const ComplexMatrix& a) {
  const RealVector sv = singular_values(a);
  return SchattenNorms{sv.sum(), std::sqrt(sv.squaredNorm()),
                       sv.size() > 0 ? sv(0) : 0.0};
}

DensityMatrix validate_density(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw DomainError("density matrix must be square");
  if (!m.allFinite())
    throw NumericError("density matrix has non-finite entries");

  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::hermiticity) {
    std::ostringstream os;
    os << "hermiticity violation: max |A - A^dag| = " << herm
       << " exceeds " << tol::hermiticity;
    throw ValidationError(ValidationError::Kind::hermiticity, os.str());
  }

  const double trace_err = std::abs(m.trace() - Complex{1.0, 0.0});
  if (trace_err > tol::trace_unit) {
    std::ostringstream os;
    os << "trace violation: |tr - 1| = " << trace_err << " exceeds "
       << tol::trace_unit;
    throw ValidationError(ValidationError::Kind::trace, os.str());
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  solver.compute(m, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < tol::psd_floor) {
    std::ostringstream os;
    os << "positivity violation: min eigenvalue = " << min_eig
       << " is below " << tol::psd_floor;
    throw ValidationError(ValidationError::Kind::positivity, os.str());
  }

  return DensityMatrix(m);
}

PureState::PureState(int n_qubits, ComplexVector amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_ < 1 || n_ > limits::max_qubits)
    throw CapacityError("pure state requires between 1 and " +
                        std::to_string(limits::max_qubits) + " qubits");
  if (amps_.size() != (Eigen::Index{1} << n_))
    throw DomainError("amplitude vector length must be 2^n");
  if (!amps_.allFinite())
    throw NumericError("pure state has non-finite amplitudes");
  const double norm_err = std::abs(amps_.squaredNorm() - 1.0);
  if (norm_err > tol::unit_norm) {
    std::ostringstream os;
    os << "pure state is not normalized: |sum |a|^2 - 1| = " << norm_err;
    throw DomainError(os.str());
  }
}

DensityMatrix PureState::projector() const {
  ComplexMatrix m = amps_ * amps_.adjoint();
  return validate_density(m);
}

}  // namespace qsl
