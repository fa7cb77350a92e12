// Random two-qubit pure states, concurrence, and the concurrence-vs-ratio
// Monte Carlo scan. Samples are drawn uniformly on the amplitude sphere
// (the sampling measure is an assumption; see README) from independent
// per-index substreams, so the scan is reproducible at any thread count.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qsl/qsl_engine.hpp"

namespace qsl {

enum class AmplitudeMode { real_amplitudes, complex_amplitudes };

struct McConfig {
  int n_samples = 20000;
  std::uint64_t seed = 0;
  AmplitudeMode amplitudes = AmplitudeMode::real_amplitudes;
  DecoherenceModel model = MemorylessExponential{1.0};
  double p_tau = 0.1;  // target population, in (0, 1)
};
void validate_mc_config(const McConfig& config);

struct ScanRecord {
  int sample_index;
  double concurrence;
  double ratio;
  std::array<Complex, 4> amplitudes;  // ordered (|11>, |10>, |01>, |00>)
};

// Deterministic sample `index` of the configured ensemble. Real mode draws
// four standard normals and normalizes; complex mode draws eight.
PureState sample_pure_state(const McConfig& config, int index);

// Pure two-qubit concurrence C = 2 |a1 a4 - a2 a3| with amplitudes ordered
// (|11>, |10>, |01>, |00>).
double concurrence(const PureState& state);

// Wootters spin-flip concurrence for a general two-qubit density matrix;
// reduces to the pure-state formula on rank-one inputs.
double concurrence_mixed(const DensityMatrix& rho);

// Evolves every sample to the tau reaching config.p_tau and records its
// concurrence and ratio. Requires a memoryless model. Only grid.steps is
// used; the driving time is recomputed from config.p_tau. Records are
// ordered by sample_index regardless of the execution schedule;
// n_threads = 0 picks the hardware concurrency.
std::vector<ScanRecord> mc_scan(const McConfig& config, const TimeGrid& grid,
                                int n_threads = 0);

// The psi2 alpha solving C = 2 alpha sqrt(1 - alpha^2): the low-alpha branch
// (weakly excited) or the high-alpha branch (near |11>).
double psi2_alpha_for_concurrence(double c, bool low_branch);

}  // namespace qsl
