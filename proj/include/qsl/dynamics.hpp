// Decoherence models and the induced N-qubit open-system evolution.
//
// Each qubit damps independently through the single-qubit map
//
//   rho_t = [ rho_ee |c_t|^2        rho_eg c_t            ]
//           [ rho_ge conj(c_t)      rho_gg + rho_ee (1 - |c_t|^2) ]
//
// in the (|1>, |0>) basis, where c_t is the coherence function of the
// bath and P_t = |c_t|^2 the excited-state population. The matching
// time-local generator is
//
//   L_t rho = i delta_t [n, rho] + gamma_t (n rho + rho n - 2 s- rho s+),
//
// with n = s+ s-, delta_t = Im(cdot/c) and gamma_t = Re(cdot/c). Note the
// sign convention: gamma_t is negative during decay. The generator form is
// singular where c_t crosses zero; the channel-derivative route below stays
// finite there and is the one used by the QSL engine.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qsl/matcore.hpp"

namespace qsl {

// --- bath models ------------------------------------------------------------

// Canonical memoryless profile: c_t = exp(-rate * t / 2).
struct MemorylessExponential {
  double rate;  // > 0, in units of the qubit frequency
};

// Damped-cavity coherence
//   c_t = exp(-lambda t / 2) [ cosh(d t / 2) + (lambda / d) sinh(d t / 2) ],
// with d^2 = lambda^2 - 2 gamma0 lambda. For gamma0 > lambda/2 the root is
// imaginary and c_t oscillates through zero (memory regime); the evaluation
// goes through complex d so both regimes share one code path.
struct Lorentzian {
  double gamma0;  // coupling strength, > 0
  double lambda;  // spectral width, > 0
};

// Sampled coherence on an ascending time grid starting at 0, interpolated
// with a monotone (Fritsch-Carlson) cubic so memory classification is not
// corrupted by interpolation overshoot.
struct Tabulated {
  // Validates the grid (ascending from 0, c(0) = 1, |c| <= 1) and
  // precomputes the Hermite slopes of the interpolant.
  Tabulated(std::vector<double> times, std::vector<Complex> c_values);

  std::vector<double> times;
  std::vector<Complex> c_values;
  std::vector<Complex> slopes;
};

using DecoherenceModel =
    std::variant<MemorylessExponential, Lorentzian, Tabulated>;

// Validates parameter positivity, c(0) = 1, |c| <= 1 at samples, grid
// ordering. Throws DomainError on violation.
void validate_model(const DecoherenceModel& model);

// Loads a Tabulated model from CSV rows `t, c_real[, c_imag]`.
Tabulated load_tabulated_csv(const std::string& path);

// --- scalar dynamics --------------------------------------------------------

// Coherence c_t. Throws DomainError for t < 0 and for Tabulated queries
// outside the sampled range.
Complex coherence(const DecoherenceModel& model, double t);

// Analytic derivative dc/dt (interpolant derivative for Tabulated).
Complex coherence_rate(const DecoherenceModel& model, double t);

// Excited-state population P_t = |c_t|^2 and its derivative.
double population(const DecoherenceModel& model, double t);
double population_rate(const DecoherenceModel& model, double t);

// Lamb shift delta_t = Im(cdot/c) and decay rate gamma_t = Re(cdot/c).
// Throws SingularityError when |c_t| is below tol::coherence_floor.
struct DecayRates {
  double delta;
  double gamma;
};
DecayRates decay_rates(const DecoherenceModel& model, double t);

enum class MemoryRegime { memoryless, memory };

// Lorentzian: memory iff gamma0 > lambda/2. MemorylessExponential is always
// memoryless. Tabulated models are classified empirically from the sign of
// the population rate over their grid.
MemoryRegime memory_regime(const DecoherenceModel& model);

// --- Kraus form --------------------------------------------------------------

// Amplitude-damping pair  m0 = [[c, 0], [0, 1]],  m1 = [[0, 0], [w, 0]] with
// w = sqrt(1 - |c|^2), satisfying m0^dag m0 + m1^dag m1 = I.
struct KrausPair {
  ComplexMatrix m0;
  ComplexMatrix m1;
};
KrausPair kraus_pair(Complex c_t);

// --- N-qubit maps -------------------------------------------------------------

// Applies the product channel (per-qubit damping map on every site) to rho0.
// Equals the sum over all Kraus index tuples (M_i1 x ... x M_in) rho0 (.)^dag.
DensityMatrix apply_channel(const DecoherenceModel& model,
                            const DensityMatrix& rho0, double t, int n_qubits);

// L_t rho_t from the generator form above, summed over sites. `rho_t` is the
// state at time t. Hermitian and traceless; singular near c_t = 0.
ComplexMatrix liouvillian_superop(const DecoherenceModel& model,
                                  const DensityMatrix& rho_t, double t,
                                  int n_qubits);

// d/dt of the channel output at time t, assembled from the analytic cdot and
// Pdot by the product rule across sites (no finite differencing). Finite for
// all t >= 0, including c_t = 0; this is the route the QSL engine integrates.
ComplexMatrix liouvillian_from_derivative(const DecoherenceModel& model,
                                          const DensityMatrix& rho0, double t,
                                          int n_qubits);

}  // namespace qsl
