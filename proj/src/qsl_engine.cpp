#include "qsl/qsl_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsl {

namespace {

double pairwise_sum(const double* v, size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

// Composite trapezoid, used only as a conservative half-grid fallback when
// the half grid has an odd subinterval count.
double trapezoid(const std::vector<double>& values, double h) {
  std::vector<double> w(values);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return h * pairwise_sum(w.data(), w.size());
}

struct QuadratureEstimate {
  double value;
  double rel_error;
};

// Simpson value plus a Richardson-style comparison against the grid with
// every other sample removed.
QuadratureEstimate simpson_with_estimate(const std::vector<double>& values,
                                         double h) {
  const size_t steps = values.size() - 1;
  const double full = simpson(values, h);
  double half;
  bool halved_is_simpson = (steps / 2) % 2 == 0;
  std::vector<double> coarse;
  coarse.reserve(steps / 2 + 1);
  for (size_t i = 0; i < values.size(); i += 2) coarse.push_back(values[i]);
  if (halved_is_simpson)
    half = simpson(coarse, 2.0 * h);
  else
    half = trapezoid(coarse, 2.0 * h);
  const double scale = std::max(std::abs(full), 1e-300);
  const double est = halved_is_simpson ? std::abs(full - half) / 15.0
                                       : std::abs(full - half);
  return {full, std::abs(full) == 0.0 && est == 0.0 ? 0.0 : est / scale};
}

void check_quadrature(const QuadratureEstimate& q, const TimeGrid& grid) {
  if (q.rel_error > tol::quadrature_rel) {
    std::ostringstream os;
    os << "quadrature did not converge: relative error estimate "
       << q.rel_error << " after one refinement exceeds "
       << tol::quadrature_rel << "; rerun with more than " << grid.steps
       << " grid steps";
    throw AccuracyError(os.str());
  }
}

struct RatesAll {
  AveragedRate e1;
  AveragedRate e2;
  AveragedRate einf;
};

// Evaluates ||d rho_t/dt||_p on the grid for p = 1, 2, inf in one sweep.
// The generator is Hermitian, so the singular values are the absolute
// eigenvalues; the direct Hermitian decomposition is used here and is
// cross-checked against the general A^dag A route in the test suite.
RatesAll averaged_rates(const DecoherenceModel& model, const PureState& phi,
                        const TimeGrid& grid) {
  validate_grid(grid);
  const int n = phi.n_qubits();
  const DensityMatrix rho0 = phi.projector();
  const double h = grid.tau / grid.steps;

  std::vector<double> f1(grid.steps + 1), f2(grid.steps + 1),
      finf(grid.steps + 1);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;
  for (int i = 0; i <= grid.steps; ++i) {
    const double t = grid.tau * static_cast<double>(i) / grid.steps;
    const ComplexMatrix gen = liouvillian_from_derivative(model, rho0, t, n);
    solver.compute(gen, Eigen::EigenvaluesOnly);
    const RealVector& ev = solver.eigenvalues();
    double sum = 0.0, sumsq = 0.0, top = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      const double a = std::abs(ev(k));
      sum += a;
      sumsq += a * a;
      top = std::max(top, a);
    }
    f1[i] = sum;
    f2[i] = std::sqrt(sumsq);
    finf[i] = top;
  }

  const QuadratureEstimate q1 = simpson_with_estimate(f1, h);
  const QuadratureEstimate q2 = simpson_with_estimate(f2, h);
  const QuadratureEstimate qinf = simpson_with_estimate(finf, h);
  check_quadrature(q1, grid);
  check_quadrature(q2, grid);
  check_quadrature(qinf, grid);
  return RatesAll{{q1.value / grid.tau, q1.rel_error},
                  {q2.value / grid.tau, q2.rel_error},
                  {qinf.value / grid.tau, qinf.rel_error}};
}

// Simpson integral of a scalar function of time over the grid.
template <typename F>
QuadratureEstimate integrate_scalar(F&& f, const TimeGrid& grid) {
  validate_grid(grid);
  const double h = grid.tau / grid.steps;
  std::vector<double> values(grid.steps + 1);
  for (int i = 0; i <= grid.steps; ++i)
    values[i] = f(grid.tau * static_cast<double>(i) / grid.steps);
  return simpson_with_estimate(values, h);
}

double checked_alpha(double alpha, const char* family) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError(std::string(family) + ": alpha must lie in [0, 1]");
  return alpha;
}

}  // namespace

double simpson(const std::vector<double>& values, double h) {
  const size_t n = values.size() - 1;
  if (values.size() < 3 || n % 2 != 0)
    throw DomainError("Simpson quadrature needs an even number of "
                      "subintervals (odd sample count >= 3)");
  std::vector<double> w(values);
  for (size_t i = 1; i < n; ++i) w[i] *= (i % 2 == 1) ? 4.0 : 2.0;
  return h / 3.0 * pairwise_sum(w.data(), w.size());
}

void validate_grid(const TimeGrid& grid) {
  if (!(grid.tau > 0.0)) throw DomainError("grid tau must be positive");
  if (grid.steps < 8 || grid.steps % 2 != 0)
    throw DomainError("grid steps must be an even integer >= 8");
}

// --- state families --------------------------------------------------------

PureState family_state(const StateFamily& family) {
  return std::visit(
      [](const auto& f) -> PureState {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Psi1>) {
          const double a = checked_alpha(f.alpha, "psi1");
          ComplexVector v = ComplexVector::Zero(4);
          v(basis_index("01")) = a;
          v(basis_index("10")) = std::sqrt(1.0 - a * a);
          return PureState(2, std::move(v));
        } else if constexpr (std::is_same_v<T, Psi2>) {
          const double a = checked_alpha(f.alpha, "psi2");
          ComplexVector v = ComplexVector::Zero(4);
          v(basis_index("11")) = a;
          v(basis_index("00")) = std::sqrt(1.0 - a * a);
          return PureState(2, std::move(v));
        } else if constexpr (std::is_same_v<T, W3>) {
          const double a = checked_alpha(f.alpha, "w3");
          const double b = checked_alpha(f.beta, "w3");
          const double rest = 1.0 - a * a - b * b;
          if (rest < -tol::unit_norm)
            throw DomainError("w3: alpha^2 + beta^2 must not exceed 1");
          ComplexVector v = ComplexVector::Zero(8);
          v(basis_index("001")) = a;
          v(basis_index("010")) = b;
          v(basis_index("100")) = std::sqrt(std::max(0.0, rest));
          return PureState(3, std::move(v));
        } else if constexpr (std::is_same_v<T, Ghz3>) {
          const double a = checked_alpha(f.alpha, "ghz3");
          ComplexVector v = ComplexVector::Zero(8);
          v(basis_index("111")) = a;
          v(basis_index("000")) = std::sqrt(1.0 - a * a);
          return PureState(3, std::move(v));
        } else if constexpr (std::is_same_v<T, AllOnes>) {
          if (f.n < 1 || f.n > limits::max_qubits)
            throw CapacityError("ones: qubit count outside [1, " +
                                std::to_string(limits::max_qubits) + "]");
          ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << f.n);
          v(0) = 1.0;  // |1...1> is index 0 in the excited-first ordering
          return PureState(f.n, std::move(v));
        } else if constexpr (std::is_same_v<T, SingleExcitation>) {
          if (f.n < 1 || f.n > limits::max_qubits)
            throw CapacityError("single_excitation: qubit count outside [1, " +
                                std::to_string(limits::max_qubits) + "]");
          if (static_cast<int>(f.weights.size()) != f.n)
            throw DomainError("single_excitation: need one weight per qubit");
          ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << f.n);
          const Eigen::Index ground = (Eigen::Index{1} << f.n) - 1;
          for (int q = 0; q < f.n; ++q)
            v(ground ^ (Eigen::Index{1} << (f.n - 1 - q))) = f.weights[q];
          return PureState(f.n, std::move(v));
        } else {
          return f.state;
        }
      },
      family);
}

int family_qubits(const StateFamily& family) {
  return std::visit(
      [](const auto& f) -> int {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Psi1> || std::is_same_v<T, Psi2>)
          return 2;
        else if constexpr (std::is_same_v<T, W3> || std::is_same_v<T, Ghz3>)
          return 3;
        else if constexpr (std::is_same_v<T, AllOnes> ||
                           std::is_same_v<T, SingleExcitation>)
          return f.n;
        else
          return f.state.n_qubits();
      },
      family);
}

std::string family_name(const StateFamily& family) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Psi1>) return "psi1";
        if constexpr (std::is_same_v<T, Psi2>) return "psi2";
        if constexpr (std::is_same_v<T, W3>) return "w3";
        if constexpr (std::is_same_v<T, Ghz3>) return "ghz3";
        if constexpr (std::is_same_v<T, AllOnes>) return "ones";
        if constexpr (std::is_same_v<T, SingleExcitation>)
          return "single_excitation";
        return "custom";
      },
      family);
}

// --- engine ------------------------------------------------------------------

double bures_angle(const PureState& phi, const DensityMatrix& rho_tau) {
  if (phi.dim() != rho_tau.dim())
    throw DomainError("bures_angle: state dimensions do not match");
  const Complex raw =
      (phi.amplitudes().adjoint() * rho_tau.matrix() * phi.amplitudes())(0);
  const double overlap = std::clamp(raw.real(), 0.0, 1.0);
  return std::acos(std::sqrt(overlap));
}

AveragedRate averaged_norm_rate(const DecoherenceModel& model,
                                const PureState& phi, const TimeGrid& grid,
                                SchattenP p) {
  const RatesAll all = averaged_rates(model, phi, grid);
  switch (p) {
    case SchattenP::one:
      return all.e1;
    case SchattenP::two:
      return all.e2;
    case SchattenP::inf:
      return all.einf;
  }
  throw DomainError("unknown Schatten index");
}

QslResult qsl_compute(const DecoherenceModel& model, const StateFamily& family,
                      const TimeGrid& grid) {
  validate_grid(grid);
  const PureState phi = family_state(family);
  const int n = phi.n_qubits();
  const DensityMatrix rho_tau =
      apply_channel(model, phi.projector(), grid.tau, n);

  const Complex raw =
      (phi.amplitudes().adjoint() * rho_tau.matrix() * phi.amplitudes())(0);
  const double overlap = std::clamp(raw.real(), 0.0, 1.0);
  const double sin2b = 1.0 - overlap;
  const double bures = std::asin(std::sqrt(sin2b));

  const RatesAll rates = averaged_rates(model, phi, grid);
  const double scale = std::max(rates.e1.rate, 1e-300);
  if (rates.einf.rate > rates.e2.rate + 1e-10 * scale ||
      rates.e2.rate > rates.e1.rate + 1e-10 * scale)
    throw NumericError("Schatten ordering of the averaged rates failed; "
                       "the quadrature is inconsistent");
  const double min_rate =
      std::min({rates.e1.rate, rates.e2.rate, rates.einf.rate});
  if (min_rate <= 0.0)
    throw DomainError("the generator vanishes over [0, tau]; the bound is "
                      "undefined for a frozen evolution");
  if (sin2b <= 0.0)
    throw DomainError("the state returned to itself at tau; the bound is "
                      "undefined for a closed loop");

  QslResult r;
  r.tau = grid.tau;
  r.tau_qsl = sin2b / min_rate;
  r.ratio = grid.tau / r.tau_qsl;
  r.e1 = rates.e1.rate;
  r.e2 = rates.e2.rate;
  r.einf = rates.einf.rate;
  r.bures = bures;
  r.grid_error = rates.einf.grid_error;
  return r;
}

double analytic_ratio(const StateFamily& family, double p_tau) {
  if (!(p_tau > 0.0 && p_tau <= 1.0))
    throw DomainError("analytic_ratio: p_tau must lie in (0, 1]");
  return std::visit(
      [p_tau](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Psi1>) {
          checked_alpha(f.alpha, "psi1");
          return 1.0;
        } else if constexpr (std::is_same_v<T, W3>) {
          checked_alpha(f.alpha, "w3");
          checked_alpha(f.beta, "w3");
          return 1.0;
        } else if constexpr (std::is_same_v<T, Psi2>) {
          const double a = checked_alpha(f.alpha, "psi2");
          if (a == 0.0)
            throw DomainError("psi2 closed form is undefined at alpha = 0");
          if (p_tau >= 0.5)
            return (1.0 + a * p_tau) / (a * (1.0 + p_tau));
          return (2.0 * (1.0 - p_tau) * (1.0 - a * p_tau) + a) /
                 (2.0 * a * (1.0 - p_tau * p_tau));
        } else if constexpr (std::is_same_v<T, Ghz3>) {
          const double a = checked_alpha(f.alpha, "ghz3");
          if (std::abs(a - 1.0) > 1e-12)
            throw UnsupportedFamilyError(
                "ghz3 has a closed form only at alpha = 1; use qsl_compute "
                "(a reported general-alpha expression is available as "
                "ghz3_reported_ratio, for comparison only)");
          if (p_tau >= 0.5) return 1.0;
          const double q = 1.0 - p_tau;
          return (q * q * q + 0.75) / (1.0 - p_tau * p_tau * p_tau);
        } else if constexpr (std::is_same_v<T, AllOnes>) {
          if (f.n < 1) throw DomainError("ones: need at least one qubit");
          if (p_tau >= 0.5) return 1.0;
          const double decayed = std::pow(1.0 - p_tau, f.n);
          return (decayed + 1.0 - std::ldexp(1.0, 1 - f.n)) /
                 (1.0 - std::pow(p_tau, f.n));
        } else {
          throw UnsupportedFamilyError(
              "no closed-form ratio for this family; use qsl_compute");
        }
      },
      family);
}

double max_speedup(int n) {
  if (n < 1) throw DomainError("max_speedup: need at least one qubit");
  return (std::ldexp(1.0, n) - 1.0) / std::ldexp(1.0, n - 1);
}

double target_time_for_population(const DecoherenceModel& model,
                                  double p_tau) {
  if (!(p_tau > 0.0 && p_tau <= 1.0))
    throw DomainError("target population must lie in (0, 1]");
  if (memory_regime(model) != MemoryRegime::memoryless)
    throw AmbiguityError(
        "population is nonmonotone for this model, so the target time is "
        "ambiguous; supply tau directly");
  if (p_tau == 1.0) return 0.0;

  double lo = 0.0, hi = 1.0;
  if (const auto* tab = std::get_if<Tabulated>(&model)) {
    hi = tab->times.back();
    if (population(model, hi) > p_tau)
      throw DomainError("target population is not reached within the "
                        "tabulated range");
  } else {
    int doublings = 0;
    while (population(model, hi) > p_tau) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 200)
        throw NumericError("target population was not reached; the model "
                           "appears not to decay");
    }
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (population(model, mid) > p_tau)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// --- reported-formula comparators ----------------------------------------------

double psi2_paper_eq6_ratio(const DecoherenceModel& model, double alpha,
                            const TimeGrid& grid) {
  const double a = checked_alpha(alpha, "psi2");
  if (a == 0.0)
    throw DomainError("psi2 reported form is undefined at alpha = 0");
  const PureState phi = family_state(Psi2{a});
  const DensityMatrix rho_tau =
      apply_channel(model, phi.projector(), grid.tau, 2);
  const Complex raw =
      (phi.amplitudes().adjoint() * rho_tau.matrix() * phi.amplitudes())(0);
  const double sin2b = 1.0 - std::clamp(raw.real(), 0.0, 1.0);
  if (sin2b <= 0.0)
    throw DomainError("psi2 reported form is undefined for a frozen state");

  // Printed integrand: max over signs of |Pdot (2 alpha P - alpha +- 1)|,
  // which collapses to |Pdot| (alpha |2P - 1| + 1).
  const QuadratureEstimate num = integrate_scalar(
      [&model, a](double t) {
        const double p = population(model, t);
        return std::abs(population_rate(model, t)) *
               (a * std::abs(2.0 * p - 1.0) + 1.0);
      },
      grid);
  return num.value / sin2b;
}

double ghz3_reported_ratio(double alpha, double p_tau) {
  const double a = checked_alpha(alpha, "ghz3");
  if (!(p_tau > 0.0 && p_tau < 1.0))
    throw DomainError("ghz3 reported form needs p_tau in (0, 1)");
  // Printed numerator under the memoryless substitution |Pdot| = -Pdot,
  // integrated in the population variable u from p_tau to 1.
  const int steps = 2000;
  std::vector<double> values(steps + 1);
  const double h = (1.0 - p_tau) / steps;
  for (int i = 0; i <= steps; ++i) {
    const double u = p_tau + (1.0 - p_tau) * static_cast<double>(i) / steps;
    const double radicand = 4.0 * a * a * u * u * u * u -
                            8.0 * a * a * u * u * u + 8.0 * a * a * u * u -
                            5.0 * a * a * u + u + a * a;
    const double x = std::sqrt(std::max(0.0, radicand));
    values[i] = 1.5 * x + std::abs(3.0 * a * u - 1.5 * a);
  }
  const double num = simpson(values, h);
  const double sp = std::sqrt(p_tau);
  const double den = a + a * (1.0 - a * a) * p_tau * (3.0 - 2.0 * sp - 3.0 * p_tau) +
                     a * (2.0 * a * a - 1.0) * p_tau * p_tau * p_tau;
  return num / den;
}

}  // namespace qsl
