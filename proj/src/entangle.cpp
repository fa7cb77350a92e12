#include "qsl/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace qsl {

namespace {

// SplitMix64: finalizer and stream step. Each sample owns an independent
// substream whose start state is a scrambled (seed, index) mix, so draws
// never depend on scheduling order.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct SubStream {
  std::uint64_t state;

  SubStream(std::uint64_t seed, std::uint64_t index)
      : state(mix64(seed + mix64((index + 1) * 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
  }

  // Uniform in (0, 1].
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Box-Muller pair of standard normals.
  void next_normal_pair(double& a, double& b) {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    a = r * std::cos(2.0 * std::numbers::pi * u2);
    b = r * std::sin(2.0 * std::numbers::pi * u2);
  }
};

ComplexMatrix spin_flip_operator() {
  // sigma_y x sigma_y in the excited-first basis; sigma_y = [[0, i], [-i, 0]].
  ComplexMatrix sy = ComplexMatrix::Zero(2, 2);
  sy(0, 1) = Complex{0.0, 1.0};
  sy(1, 0) = Complex{0.0, -1.0};
  return tensor_product(sy, sy);
}

}  // namespace

void validate_mc_config(const McConfig& config) {
  if (config.n_samples < 1)
    throw DomainError("Monte Carlo scan needs at least one sample");
  if (!(config.p_tau > 0.0 && config.p_tau < 1.0))
    throw DomainError("Monte Carlo target population must lie in (0, 1)");
  validate_model(config.model);
}

PureState sample_pure_state(const McConfig& config, int index) {
  if (index < 0 || index >= config.n_samples)
    throw DomainError("sample index outside [0, n_samples)");
  SubStream stream(config.seed, static_cast<std::uint64_t>(index));
  ComplexVector amps(4);
  while (true) {
    if (config.amplitudes == AmplitudeMode::real_amplitudes) {
      double g[4];
      stream.next_normal_pair(g[0], g[1]);
      stream.next_normal_pair(g[2], g[3]);
      for (int i = 0; i < 4; ++i) amps(i) = Complex{g[i], 0.0};
    } else {
      double g[8];
      for (int i = 0; i < 8; i += 2) stream.next_normal_pair(g[i], g[i + 1]);
      for (int i = 0; i < 4; ++i) amps(i) = Complex{g[2 * i], g[2 * i + 1]};
    }
    const double norm = std::sqrt(amps.squaredNorm());
    if (norm > 1e-6) {
      amps /= norm;
      break;
    }
  }
  return PureState(2, std::move(amps));
}

double concurrence(const PureState& state) {
  if (state.n_qubits() != 2)
    throw DomainError("concurrence is implemented for two qubits");
  const ComplexVector& a = state.amplitudes();
  return 2.0 * std::abs(a(0) * a(3) - a(1) * a(2));
}

double concurrence_mixed(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw DomainError("concurrence is implemented for two qubits");
  const ComplexMatrix flip = spin_flip_operator();
  const ComplexMatrix r = rho.matrix() * flip * rho.matrix().conjugate() * flip;
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(r, false);
  std::array<double, 4> roots{};
  for (int i = 0; i < 4; ++i)
    roots[i] = std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

std::vector<ScanRecord> mc_scan(const McConfig& config, const TimeGrid& grid,
                                int n_threads) {
  validate_mc_config(config);
  if (memory_regime(config.model) != MemoryRegime::memoryless)
    throw DomainError("the Monte Carlo scan requires a memoryless model");
  const double tau = target_time_for_population(config.model, config.p_tau);
  const TimeGrid scan_grid{tau, grid.steps};
  validate_grid(scan_grid);

  std::vector<ScanRecord> records(config.n_samples);
  int workers = n_threads > 0
                    ? n_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, config.n_samples);

  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto run_slice = [&](int start) {
    try {
      for (int idx = start; idx < config.n_samples; idx += workers) {
        const PureState state = sample_pure_state(config, idx);
        const StateFamily family = Custom{state};
        const QslResult res = qsl_compute(config.model, family, scan_grid);
        ScanRecord rec;
        rec.sample_index = idx;
        rec.concurrence = concurrence(state);
        rec.ratio = res.ratio;
        for (int i = 0; i < 4; ++i) rec.amplitudes[i] = state.amplitudes()(i);
        records[idx] = rec;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers == 1) {
    run_slice(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_slice, w);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

double psi2_alpha_for_concurrence(double c, bool low_branch) {
  if (!(c >= 0.0 && c <= 1.0))
    throw DomainError("concurrence must lie in [0, 1]");
  const double root = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double alpha_sq = low_branch ? 0.5 * (1.0 - root) : 0.5 * (1.0 + root);
  return std::sqrt(alpha_sq);
}

}  // namespace qsl
