#include "qsl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qsl {

namespace {

// ---- monotone cubic (Fritsch-Carlson) slopes for one real component ------

std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const size_t n = x.size();
  std::vector<double> m(n, 0.0);
  if (n == 2) {
    m[0] = m[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return m;
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0)
      s = 0.0;
    else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
      s = 3.0 * d0;
    return s;
  };
  m[0] = endpoint(h[0], h[1], delta[0], delta[1]);
  m[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return m;
}

// Hermite evaluation on the interval that contains t.
struct HermitePoint {
  Complex value;
  Complex slope;
};

HermitePoint eval_tabulated(const Tabulated& tab, double t) {
  const auto& x = tab.times;
  if (t < x.front() || t > x.back()) {
    std::ostringstream os;
    os << "t = " << t << " is outside the tabulated range [" << x.front()
       << ", " << x.back() << "]";
    throw DomainError(os.str());
  }
  size_t i = static_cast<size_t>(
      std::upper_bound(x.begin(), x.end(), t) - x.begin());
  if (i > 0) --i;
  if (i + 1 >= x.size()) i = x.size() - 2;
  const double h = x[i + 1] - x[i];
  const double s = (t - x[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double g00 = (6 * s2 - 6 * s) / h, g10 = (3 * s2 - 4 * s + 1) / h;
  const double g01 = (-6 * s2 + 6 * s) / h, g11 = (3 * s2 - 2 * s) / h;
  const Complex y0 = tab.c_values[i], y1 = tab.c_values[i + 1];
  const Complex m0 = tab.slopes[i] * h, m1 = tab.slopes[i + 1] * h;
  return {h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1,
          g00 * y0 + g10 * m0 + g01 * y1 + g11 * m1};
}

// ---- Lorentzian closed form ------------------------------------------------
//
// c_t = exp(-lambda t/2) [cosh(d t/2) + (lambda/d) sinh(d t/2)],
// cdot = -exp(-lambda t/2) sinh(d t/2) gamma0 lambda / d,
// with d^2 = lambda^2 - 2 gamma0 lambda, so gamma0 > lambda/2 makes d
// imaginary and c_t oscillates through zero. The derivative coefficient
// follows from (d^2 - lambda^2)/2 = -gamma0 lambda and is checked against
// finite differences in the tests. Both pieces are even in d; near d = 0
// (gamma0 = lambda/2) they are evaluated from their series in d^2 to avoid
// the 0/0.

struct CoherencePair {
  Complex c;
  Complex cdot;
};

CoherencePair lorentzian_coherence(const Lorentzian& lor, double t) {
  const double lambda = lor.lambda;
  const double d2 = lambda * lambda - 2.0 * lor.gamma0 * lambda;
  const double damp = std::exp(-0.5 * lambda * t);
  const double z2 = 0.25 * d2 * t * t;  // (d t / 2)^2, either sign
  Complex g, shc;                       // g as above, shc = sinh(dt/2)/(dt/2)
  if (std::abs(z2) < 1e-6) {
    const double ch = 1.0 + z2 / 2.0 + z2 * z2 / 24.0 + z2 * z2 * z2 / 720.0;
    const double sh = 1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0;
    g = ch + 0.5 * lambda * t * sh;
    shc = sh;
  } else {
    const Complex d = std::sqrt(Complex{d2, 0.0});
    const Complex z = 0.5 * d * t;
    g = std::cosh(z) + (lambda / d) * std::sinh(z);
    shc = std::sinh(z) / z;
  }
  const Complex c = damp * g;
  const Complex cdot = damp * (0.5 * t * shc) * (-lor.gamma0 * lambda);
  return {c, cdot};
}

void check_nonnegative_time(double t) {
  if (!(t >= 0.0)) {
    std::ostringstream os;
    os << "time t = " << t << " must be nonnegative";
    throw DomainError(os.str());
  }
}

CoherencePair coherence_pair(const DecoherenceModel& model, double t) {
  check_nonnegative_time(t);
  return std::visit(
      [t](const auto& m) -> CoherencePair {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MemorylessExponential>) {
          if (!(m.rate > 0.0))
            throw DomainError("memoryless exponential rate must be positive");
          const double c = std::exp(-0.5 * m.rate * t);
          return {Complex{c, 0.0}, Complex{-0.5 * m.rate * c, 0.0}};
        } else if constexpr (std::is_same_v<T, Lorentzian>) {
          if (!(m.gamma0 > 0.0) || !(m.lambda > 0.0))
            throw DomainError("Lorentzian gamma0 and lambda must be positive");
          return lorentzian_coherence(m, t);
        } else {
          const HermitePoint p = eval_tabulated(m, t);
          return {p.value, p.slope};
        }
      },
      model);
}

// ---- single-site maps --------------------------------------------------------
//
// Each map acts on the 2x2 block structure picked out by one qubit's bit.
// Rows/columns with the site bit clear are the excited slots. All three maps
// below only mix entries within a (row-bit, col-bit) quadruple, so they are
// applied in place; the gg update runs first because it reads the old ee
// entry.

void apply_site_channel(ComplexMatrix& m, int n_qubits, int qubit, Complex c,
                        double p) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index mask = Eigen::Index{1} << (n_qubits - 1 - qubit);
  const Complex cbar = std::conj(c);
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & mask) continue;
    const Eigen::Index r1 = r | mask;
    for (Eigen::Index col = 0; col < dim; ++col) {
      if (col & mask) continue;
      const Eigen::Index c1 = col | mask;
      m(r1, c1) += (1.0 - p) * m(r, col);
      m(r, col) *= p;
      m(r, c1) *= c;
      m(r1, col) *= cbar;
    }
  }
}

void apply_site_derivative(ComplexMatrix& m, int n_qubits, int qubit,
                           Complex cdot, double pdot) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index mask = Eigen::Index{1} << (n_qubits - 1 - qubit);
  const Complex cdot_bar = std::conj(cdot);
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & mask) continue;
    const Eigen::Index r1 = r | mask;
    for (Eigen::Index col = 0; col < dim; ++col) {
      if (col & mask) continue;
      const Eigen::Index c1 = col | mask;
      m(r1, c1) = -pdot * m(r, col);
      m(r, col) *= pdot;
      m(r, c1) *= cdot;
      m(r1, col) *= cdot_bar;
    }
  }
}

void add_site_generator(const ComplexMatrix& rho, ComplexMatrix& out,
                        int n_qubits, int qubit, const DecayRates& rates) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index mask = Eigen::Index{1} << (n_qubits - 1 - qubit);
  const Complex eg{rates.gamma, rates.delta};
  const Complex ge{rates.gamma, -rates.delta};
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & mask) continue;
    const Eigen::Index r1 = r | mask;
    for (Eigen::Index col = 0; col < dim; ++col) {
      if (col & mask) continue;
      const Eigen::Index c1 = col | mask;
      out(r, col) += 2.0 * rates.gamma * rho(r, col);
      out(r1, c1) -= 2.0 * rates.gamma * rho(r, col);
      out(r, c1) += eg * rho(r, c1);
      out(r1, col) += ge * rho(r1, col);
    }
  }
}

void check_register(const ComplexMatrix& rho, int n_qubits,
                    const char* op_name) {
  if (n_qubits < 1 || n_qubits > limits::max_qubits)
    throw CapacityError(std::string(op_name) + ": qubit count outside [1, " +
                        std::to_string(limits::max_qubits) + "]");
  if (rho.rows() != (Eigen::Index{1} << n_qubits))
    throw DomainError(std::string(op_name) +
                      ": state dimension does not match 2^n");
}

}  // namespace

// ---- model validation ---------------------------------------------------------

Tabulated::Tabulated(std::vector<double> t, std::vector<Complex> c)
    : times(std::move(t)), c_values(std::move(c)) {
  if (times.size() < 2 || times.size() != c_values.size())
    throw DomainError("tabulated model needs >= 2 samples with matching "
                      "time and value counts");
  if (std::abs(times.front()) > 0.0)
    throw DomainError("tabulated grid must start at t = 0");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw DomainError("tabulated grid must be strictly ascending");
  if (std::abs(c_values.front() - Complex{1.0, 0.0}) > tol::unit_norm)
    throw DomainError("tabulated coherence must satisfy c(0) = 1");
  for (const Complex& v : c_values)
    if (std::abs(v) > 1.0 + tol::unit_norm)
      throw DomainError("tabulated coherence magnitude exceeds 1");

  std::vector<double> re(c_values.size()), im(c_values.size());
  for (size_t i = 0; i < c_values.size(); ++i) {
    re[i] = c_values[i].real();
    im[i] = c_values[i].imag();
  }
  const std::vector<double> mre = pchip_slopes(times, re);
  const std::vector<double> mim = pchip_slopes(times, im);
  slopes.resize(c_values.size());
  for (size_t i = 0; i < c_values.size(); ++i)
    slopes[i] = Complex{mre[i], mim[i]};
}

void validate_model(const DecoherenceModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MemorylessExponential>) {
          if (!(m.rate > 0.0))
            throw DomainError("memoryless exponential rate must be positive");
        } else if constexpr (std::is_same_v<T, Lorentzian>) {
          if (!(m.gamma0 > 0.0) || !(m.lambda > 0.0))
            throw DomainError("Lorentzian gamma0 and lambda must be positive");
        } else {
          // Invariants were enforced by the constructor; re-check the pieces
          // that could be broken by direct member mutation.
          if (m.slopes.size() != m.times.size())
            throw DomainError("tabulated model is missing interpolant slopes");
        }
      },
      model);
}

Tabulated load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tabulated-coherence file: " + path);
  std::vector<double> times;
  std::vector<Complex> values;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, re, im = 0.0;
    if (!(ls >> t >> re)) {
      // Tolerate a header row on the first data line only.
      if (times.empty()) continue;
      throw DomainError("malformed row " + std::to_string(line_no) + " in " +
                        path);
    }
    ls >> im;
    times.push_back(t);
    values.emplace_back(re, im);
  }
  if (times.size() < 2)
    throw DomainError("tabulated-coherence file has fewer than 2 samples: " +
                      path);
  return Tabulated(std::move(times), std::move(values));
}

// ---- scalar dynamics -------------------------------------------------------------

Complex coherence(const DecoherenceModel& model, double t) {
  return coherence_pair(model, t).c;
}

Complex coherence_rate(const DecoherenceModel& model, double t) {
  return coherence_pair(model, t).cdot;
}

double population(const DecoherenceModel& model, double t) {
  return std::norm(coherence_pair(model, t).c);
}

double population_rate(const DecoherenceModel& model, double t) {
  const CoherencePair p = coherence_pair(model, t);
  return 2.0 * std::real(std::conj(p.c) * p.cdot);
}

DecayRates decay_rates(const DecoherenceModel& model, double t) {
  const CoherencePair p = coherence_pair(model, t);
  if (std::abs(p.c) <= tol::coherence_floor) {
    std::ostringstream os;
    os << "decay rates are singular at t = " << t
       << ": |c_t| = " << std::abs(p.c) << " is below "
       << tol::coherence_floor;
    throw SingularityError(os.str());
  }
  const Complex ratio = p.cdot / p.c;
  return DecayRates{ratio.imag(), ratio.real()};
}

MemoryRegime memory_regime(const DecoherenceModel& model) {
  validate_model(model);
  return std::visit(
      [&model](const auto& m) -> MemoryRegime {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MemorylessExponential>) {
          return MemoryRegime::memoryless;
        } else if constexpr (std::is_same_v<T, Lorentzian>) {
          return m.gamma0 > 0.5 * m.lambda ? MemoryRegime::memory
                                           : MemoryRegime::memoryless;
        } else {
          // Empirical: any population backflow on the sampled grid counts
          // as memory. Midpoints are probed as well as nodes.
          for (size_t i = 0; i < m.times.size(); ++i) {
            if (population_rate(model, m.times[i]) > 1e-10)
              return MemoryRegime::memory;
            if (i + 1 < m.times.size()) {
              const double mid = 0.5 * (m.times[i] + m.times[i + 1]);
              if (population_rate(model, mid) > 1e-10)
                return MemoryRegime::memory;
            }
          }
          return MemoryRegime::memoryless;
        }
      },
      model);
}

// ---- Kraus form -------------------------------------------------------------------

KrausPair kraus_pair(Complex c_t) {
  const double p = std::norm(c_t);
  if (p > 1.0 + tol::unit_norm)
    throw DomainError("coherence magnitude exceeds 1; no Kraus form");
  const double w = std::sqrt(std::max(0.0, 1.0 - p));
  ComplexMatrix m0 = ComplexMatrix::Zero(2, 2);
  m0(0, 0) = c_t;
  m0(1, 1) = 1.0;
  ComplexMatrix m1 = ComplexMatrix::Zero(2, 2);
  m1(1, 0) = w;
  return KrausPair{std::move(m0), std::move(m1)};
}

// ---- N-qubit maps -----------------------------------------------------------------

DensityMatrix apply_channel(const DecoherenceModel& model,
                            const DensityMatrix& rho0, double t,
                            int n_qubits) {
  check_register(rho0.matrix(), n_qubits, "apply_channel");
  const CoherencePair cp = coherence_pair(model, t);
  const double p = std::norm(cp.c);
  ComplexMatrix m = rho0.matrix();
  for (int q = 0; q < n_qubits; ++q) apply_site_channel(m, n_qubits, q, cp.c, p);
  return validate_density(m);
}

ComplexMatrix liouvillian_superop(const DecoherenceModel& model,
                                  const DensityMatrix& rho_t, double t,
                                  int n_qubits) {
  check_register(rho_t.matrix(), n_qubits, "liouvillian_superop");
  const DecayRates rates = decay_rates(model, t);
  ComplexMatrix out = ComplexMatrix::Zero(rho_t.dim(), rho_t.dim());
  for (int q = 0; q < n_qubits; ++q)
    add_site_generator(rho_t.matrix(), out, n_qubits, q, rates);
  return out;
}

ComplexMatrix liouvillian_from_derivative(const DecoherenceModel& model,
                                          const DensityMatrix& rho0, double t,
                                          int n_qubits) {
  check_register(rho0.matrix(), n_qubits, "liouvillian_from_derivative");
  const CoherencePair cp = coherence_pair(model, t);
  const double p = std::norm(cp.c);
  const double pdot = 2.0 * std::real(std::conj(cp.c) * cp.cdot);
  // Product rule across sites: one term per qubit, with the derivative map
  // at that site and the plain channel everywhere else. The per-site
  // derivative map already combines M1-dot with M1, so the sqrt(1-P)
  // singularity of the raw Kraus derivative never appears.
  ComplexMatrix out = ComplexMatrix::Zero(rho0.dim(), rho0.dim());
  ComplexMatrix tmp(rho0.dim(), rho0.dim());
  for (int q = 0; q < n_qubits; ++q) {
    tmp = rho0.matrix();
    for (int s = 0; s < n_qubits; ++s) {
      if (s == q)
        apply_site_derivative(tmp, n_qubits, s, cp.cdot, pdot);
      else
        apply_site_channel(tmp, n_qubits, s, cp.c, p);
    }
    out += tmp;
  }
  return out;
}

}  // namespace qsl
