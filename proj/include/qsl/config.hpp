// Global numeric tolerances and capacity limits shared across the library.
// Keeping them in one place gives every validity check a uniform surface.
#pragma once

#include <cstddef>

namespace qsl {
namespace tol {

// Density-matrix validity.
inline constexpr double hermiticity = 1e-12;   // max entrywise |A - A^dag|
inline constexpr double trace_unit  = 1e-12;   // |tr(rho) - 1|
inline constexpr double psd_floor   = -1e-10;  // min Hermitian eigenvalue

// Pure states and weights.
inline constexpr double unit_norm = 1e-12;

// Kraus completeness  ||M0^dag M0 + M1^dag M1 - I||_inf.
inline constexpr double kraus_completeness = 1e-12;

// Coherence magnitude below which the time-local rates delta_t, gamma_t
// are treated as singular.
inline constexpr double coherence_floor = 1e-12;

// Relative quadrature error (Richardson half-grid estimate) above which
// an averaged norm rate is rejected as non-convergent.
inline constexpr double quadrature_rel = 1e-4;

}  // namespace tol

namespace limits {

// Dense 2^n x 2^n matrices; 10 qubits (1024 x 1024) is the default cap.
inline constexpr int max_qubits = 10;
inline constexpr std::ptrdiff_t max_dim = std::ptrdiff_t{1} << max_qubits;

}  // namespace limits
}  // namespace qsl
