#include "qsl/cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace qsl {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file for writing: " + path);
  return out;
}

// Coherence magnitude scan used to flag rows whose generator-form rates are
// singular inside [0, tau].
bool coherence_crosses_zero(const DecoherenceModel& model,
                            const TimeGrid& grid) {
  for (int i = 0; i <= grid.steps; ++i) {
    const double t = grid.tau * static_cast<double>(i) / grid.steps;
    if (std::abs(coherence(model, t)) < 1e-6) return true;
  }
  return false;
}

std::vector<double> linspace(double from, double to, int points) {
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = from;
    return v;
  }
  for (int i = 0; i < points; ++i)
    v[i] = from + (to - from) * static_cast<double>(i) / (points - 1);
  return v;
}

PureState load_state_file(const std::string& path, int n_qubits) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file: " + path);
  std::vector<Complex> amps;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double re, im = 0.0;
    if (!(ls >> re)) throw DomainError("malformed amplitude line in " + path);
    ls >> im;
    amps.emplace_back(re, im);
  }
  if (amps.size() != (size_t{1} << n_qubits))
    throw DomainError("state file must hold exactly 2^n amplitudes (n = " +
                      std::to_string(n_qubits) + ")");
  ComplexVector v(amps.size());
  for (size_t i = 0; i < amps.size(); ++i) v(i) = amps[i];
  const double norm = std::sqrt(v.squaredNorm());
  if (norm <= 0.0) throw DomainError("state file holds a zero vector");
  v /= norm;
  return PureState(n_qubits, std::move(v));
}

}  // namespace

std::string csv_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

DecoherenceModel make_model(const ModelOptions& opt) {
  if (opt.kind == "exp") return MemorylessExponential{opt.gamma};
  if (opt.kind == "lorentzian") return Lorentzian{opt.gamma0, opt.lambda};
  if (opt.kind == "table") {
    if (opt.table_file.empty())
      throw DomainError("--model table requires --table-file");
    return load_tabulated_csv(opt.table_file);
  }
  throw DomainError("unknown model '" + opt.kind +
                    "' (expected exp, lorentzian, or table)");
}

StateFamily make_family(const FamilyOptions& opt) {
  if (opt.name == "psi1") return Psi1{opt.alpha};
  if (opt.name == "psi2") return Psi2{opt.alpha};
  if (opt.name == "w3") return W3{opt.alpha, opt.beta};
  if (opt.name == "ghz3") return Ghz3{opt.alpha};
  if (opt.name == "ones") return AllOnes{opt.n};
  if (opt.name == "single") {
    std::vector<double> w = opt.weights;
    if (w.empty()) w.assign(opt.n, 1.0 / std::sqrt(double(opt.n)));
    if (static_cast<int>(w.size()) != opt.n)
      throw DomainError("--weights must list one weight per qubit");
    double norm = 0.0;
    for (double x : w) norm += x * x;
    if (norm <= 0.0) throw DomainError("--weights must not be all zero");
    for (double& x : w) x /= std::sqrt(norm);
    return SingleExcitation{opt.n, std::move(w)};
  }
  if (opt.name == "custom") {
    if (opt.state_file.empty())
      throw DomainError("--family custom requires --state-file");
    return Custom{load_state_file(opt.state_file, opt.n)};
  }
  throw DomainError("unknown family '" + opt.name + "'");
}

// --- fig1 ------------------------------------------------------------------

void cmd_fig1(const Fig1Options& opt) {
  const DecoherenceModel model = MemorylessExponential{opt.gamma};
  validate_model(model);
  std::ofstream out = open_output(opt.out_path);
  out << "p_tau,ratio_psi1,ratio_ones2,ratio_bell,ratio_bell_paperEq6\n";
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 1; i <= 99; ++i) {
    const double p = static_cast<double>(i) / 100.0;
    const double tau = target_time_for_population(model, p);
    const TimeGrid grid{tau, opt.grid_steps};
    const double r_psi1 = qsl_compute(model, Psi1{inv_sqrt2}, grid).ratio;
    const double r_ones2 = qsl_compute(model, AllOnes{2}, grid).ratio;
    const double r_bell = qsl_compute(model, Psi2{inv_sqrt2}, grid).ratio;
    const double r_paper = psi2_paper_eq6_ratio(model, inv_sqrt2, grid);
    out << csv_number(p) << ',' << csv_number(r_psi1) << ','
        << csv_number(r_ones2) << ',' << csv_number(r_bell) << ','
        << csv_number(r_paper) << '\n';
  }
  if (!out) throw IoError("failed while writing " + opt.out_path);
}

// --- fig2 ------------------------------------------------------------------

void cmd_fig2(const Fig2Options& opt) {
  if (!(opt.gamma0_min > 0.0) || !(opt.gamma0_min < opt.gamma0_max))
    throw DomainError("need 0 < gamma0-min < gamma0-max");
  if (opt.points < 2) throw DomainError("need at least 2 sweep points");
  if (!(opt.tau > 0.0)) throw DomainError("tau must be positive");
  std::ofstream out = open_output(opt.out_path);
  out << "gamma0,ratio_psi1,ratio_ones2,ratio_bell,ratio_bell_paperEq6,"
         "singular_flag\n";
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const TimeGrid grid{opt.tau, opt.grid_steps};
  for (double g0 : linspace(opt.gamma0_min, opt.gamma0_max, opt.points)) {
    const DecoherenceModel model = Lorentzian{g0, opt.lambda};
    const bool singular = coherence_crosses_zero(model, grid);
    const double r_psi1 = qsl_compute(model, Psi1{inv_sqrt2}, grid).ratio;
    const double r_ones2 = qsl_compute(model, AllOnes{2}, grid).ratio;
    const double r_bell = qsl_compute(model, Psi2{inv_sqrt2}, grid).ratio;
    const double r_paper = psi2_paper_eq6_ratio(model, inv_sqrt2, grid);
    out << csv_number(g0) << ',' << csv_number(r_psi1) << ','
        << csv_number(r_ones2) << ',' << csv_number(r_bell) << ','
        << csv_number(r_paper) << ',' << (singular ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("failed while writing " + opt.out_path);
}

// --- fig3 ------------------------------------------------------------------

void cmd_fig3(const Fig3Options& opt) {
  McConfig config;
  config.n_samples = opt.samples;
  config.seed = opt.seed;
  config.amplitudes = AmplitudeMode::real_amplitudes;
  config.model = MemorylessExponential{opt.gamma};
  config.p_tau = opt.p_tau;
  const TimeGrid grid{1.0, opt.grid_steps};

  const std::vector<ScanRecord> records = mc_scan(config, grid, opt.threads);

  std::ofstream out = open_output(opt.out_path);
  out << "index,a1,a2,a3,a4,concurrence,ratio,family\n";
  for (const ScanRecord& rec : records) {
    out << rec.sample_index;
    for (const Complex& a : rec.amplitudes) out << ',' << csv_number(a.real());
    out << ',' << csv_number(rec.concurrence) << ',' << csv_number(rec.ratio)
        << ",mc\n";
  }

  // Benchmark-family sweeps appended for the overlay curves.
  const double tau = target_time_for_population(config.model, config.p_tau);
  const TimeGrid family_grid{tau, opt.grid_steps};
  int index = opt.samples;
  auto emit_family = [&](const StateFamily& family, const char* tag) {
    const PureState state = family_state(family);
    const QslResult res = qsl_compute(config.model, family, family_grid);
    out << index++;
    for (int i = 0; i < 4; ++i)
      out << ',' << csv_number(state.amplitudes()(i).real());
    out << ',' << csv_number(concurrence(state)) << ','
        << csv_number(res.ratio) << ',' << tag << '\n';
  };
  for (int i = 0; i <= 100; ++i)
    emit_family(Psi1{static_cast<double>(i) / 100.0}, "psi1");
  for (int i = 1; i <= 200; ++i)
    emit_family(Psi2{static_cast<double>(i) / 200.0}, "psi2");
  if (!out) throw IoError("failed while writing " + opt.out_path);
}

// --- qsl -------------------------------------------------------------------

void cmd_qsl(const QslOptions& opt, std::ostream& out) {
  const bool has_p = opt.p_tau >= 0.0;
  const bool has_tau = opt.tau >= 0.0;
  if (has_p == has_tau)
    throw DomainError("supply exactly one of --p-tau or --tau");

  const DecoherenceModel model = make_model(opt.model);
  validate_model(model);
  const StateFamily family = make_family(opt.family);

  const double tau =
      has_p ? target_time_for_population(model, opt.p_tau) : opt.tau;
  if (!(tau > 0.0))
    throw DomainError("the driving time must be positive; p_tau = 1 or "
                      "tau = 0 leaves the state unevolved");
  const TimeGrid grid{tau, opt.grid_steps};
  const QslResult res = qsl_compute(model, family, grid);
  const double p_at_tau = population(model, tau);
  const MemoryRegime regime = memory_regime(model);

  std::optional<double> analytic;
  if (regime == MemoryRegime::memoryless) {
    try {
      analytic = analytic_ratio(family, p_at_tau);
    } catch (const UnsupportedFamilyError&) {
    }
  }
  std::optional<double> paper_eq6;
  if (const auto* psi2 = std::get_if<Psi2>(&family)) {
    if (psi2->alpha < 1.0 && psi2->alpha > 0.0)
      paper_eq6 = psi2_paper_eq6_ratio(model, psi2->alpha, grid);
  }
  std::optional<double> ghz3_reported;
  if (const auto* ghz3 = std::get_if<Ghz3>(&family)) {
    if (std::abs(ghz3->alpha - 1.0) > 1e-12 &&
        regime == MemoryRegime::memoryless && p_at_tau < 1.0)
      ghz3_reported = ghz3_reported_ratio(ghz3->alpha, p_at_tau);
  }

  const char* regime_name =
      regime == MemoryRegime::memoryless ? "memoryless" : "memory";
  if (opt.json) {
    nlohmann::json j;
    j["family"] = family_name(family);
    j["n_qubits"] = family_qubits(family);
    j["model"] = opt.model.kind;
    j["memory_regime"] = regime_name;
    j["tau"] = res.tau;
    j["p_tau"] = p_at_tau;
    j["bures_angle"] = res.bures;
    j["e1"] = res.e1;
    j["e2"] = res.e2;
    j["einf"] = res.einf;
    j["grid_error"] = res.grid_error;
    j["tau_qsl"] = res.tau_qsl;
    j["ratio"] = res.ratio;
    if (analytic) {
      j["analytic_ratio"] = *analytic;
      j["analytic_residual"] = res.ratio - *analytic;
    }
    if (paper_eq6) j["ratio_paperEq6"] = *paper_eq6;
    if (ghz3_reported) j["ghz3_reported_ratio"] = *ghz3_reported;
    out << j.dump(2) << '\n';
  } else {
    out << "family = " << family_name(family) << '\n'
        << "n_qubits = " << family_qubits(family) << '\n'
        << "model = " << opt.model.kind << '\n'
        << "memory_regime = " << regime_name << '\n'
        << "tau = " << csv_number(res.tau) << '\n'
        << "p_tau = " << csv_number(p_at_tau) << '\n'
        << "bures_angle = " << csv_number(res.bures) << '\n'
        << "e1 = " << csv_number(res.e1) << '\n'
        << "e2 = " << csv_number(res.e2) << '\n'
        << "einf = " << csv_number(res.einf) << '\n'
        << "grid_error = " << csv_number(res.grid_error) << '\n'
        << "tau_qsl = " << csv_number(res.tau_qsl) << '\n'
        << "ratio = " << csv_number(res.ratio) << '\n';
    if (analytic) {
      out << "analytic_ratio = " << csv_number(*analytic) << '\n'
          << "analytic_residual = " << csv_number(res.ratio - *analytic)
          << '\n';
    }
    if (paper_eq6)
      out << "ratio_paperEq6 = " << csv_number(*paper_eq6) << '\n';
    if (ghz3_reported)
      out << "ghz3_reported_ratio = " << csv_number(*ghz3_reported) << '\n';
  }
}

// --- sweep -----------------------------------------------------------------

void cmd_sweep(const SweepOptions& opt) {
  if (opt.points < 1) throw DomainError("need at least 1 sweep point");
  static const std::vector<std::string> known = {"p-tau", "tau", "gamma0",
                                                 "alpha"};
  if (std::find(known.begin(), known.end(), opt.param) == known.end())
    throw DomainError("unknown sweep parameter '" + opt.param +
                      "' (expected p-tau, tau, gamma0, or alpha)");
  if (opt.param == "gamma0" && opt.base.model.kind != "lorentzian")
    throw DomainError("sweeping gamma0 requires --model lorentzian");

  std::ofstream out = open_output(opt.out_path);
  out << "sweep_param,sweep_value,tau,p_tau,ratio,tau_qsl,e1,e2,einf,bures,"
         "grid_error\n";
  for (double value : linspace(opt.from, opt.to, opt.points)) {
    QslOptions point = opt.base;
    if (opt.param == "p-tau") {
      point.p_tau = value;
      point.tau = -1.0;
    } else if (opt.param == "tau") {
      point.tau = value;
      point.p_tau = -1.0;
    } else if (opt.param == "gamma0") {
      point.model.gamma0 = value;
    } else {
      point.family.alpha = value;
    }

    const DecoherenceModel model = make_model(point.model);
    const StateFamily family = make_family(point.family);
    const bool has_p = point.p_tau >= 0.0;
    if (has_p == (point.tau >= 0.0))
      throw DomainError("supply exactly one of --p-tau or --tau");
    const double tau =
        has_p ? target_time_for_population(model, point.p_tau) : point.tau;
    const TimeGrid grid{tau, point.grid_steps};
    const QslResult res = qsl_compute(model, family, grid);
    out << opt.param << ',' << csv_number(value) << ',' << csv_number(res.tau)
        << ',' << csv_number(population(model, tau)) << ','
        << csv_number(res.ratio) << ',' << csv_number(res.tau_qsl) << ','
        << csv_number(res.e1) << ',' << csv_number(res.e2) << ','
        << csv_number(res.einf) << ',' << csv_number(res.bures) << ','
        << csv_number(res.grid_error) << '\n';
  }
  if (!out) throw IoError("failed while writing " + opt.out_path);
}

// --- dispatcher --------------------------------------------------------------

namespace {

void add_model_options(CLI::App* sc, ModelOptions& m) {
  sc->add_option("--model", m.kind, "bath model: exp | lorentzian | table")
      ->check(CLI::IsMember({"exp", "lorentzian", "table"}));
  sc->add_option("--gamma", m.gamma, "exp model decay rate (omega0 units)");
  sc->add_option("--gamma0", m.gamma0,
                 "lorentzian coupling strength (omega0 units)");
  sc->add_option("--lambda", m.lambda,
                 "lorentzian spectral width (omega0 units)");
  sc->add_option("--table-file", m.table_file,
                 "CSV of t,c_real[,c_imag] samples for --model table");
}

void add_family_options(CLI::App* sc, FamilyOptions& f) {
  sc->add_option("--family", f.name,
                 "initial state: psi1 | psi2 | w3 | ghz3 | ones | single | "
                 "custom")
      ->check(CLI::IsMember(
          {"psi1", "psi2", "w3", "ghz3", "ones", "single", "custom"}));
  sc->add_option("--alpha", f.alpha, "family amplitude parameter in [0,1]");
  sc->add_option("--beta", f.beta, "second w3 amplitude");
  sc->add_option("--n", f.n, "qubit count for ones/single/custom");
  sc->add_option("--weights", f.weights,
                 "single-excitation weights (one per qubit)");
  sc->add_option("--state-file", f.state_file,
                 "custom amplitudes, one 're [im]' line per basis state");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "qslcli: quantum-speed-limit times and ratios for N-qubit systems "
      "under local amplitude damping.\n"
      "Units: all rates are quoted in units of the qubit transition "
      "frequency (omega0 = 1); times are in 1/omega0."};
  app.require_subcommand(1);

  Fig1Options fig1;
  CLI::App* sc1 = app.add_subcommand(
      "fig1", "ratio vs target population for two-qubit benchmark states "
              "(memoryless bath), as CSV");
  sc1->add_option("--out", fig1.out_path, "output CSV path")->required();
  sc1->add_option("--gamma", fig1.gamma, "memoryless backend decay rate");
  sc1->add_option("--grid-steps", fig1.grid_steps, "quadrature subintervals");
  sc1->set_config("--config");
  sc1->callback([&fig1] { cmd_fig1(fig1); });

  Fig2Options fig2;
  CLI::App* sc2 = app.add_subcommand(
      "fig2", "ratio vs coupling strength for the damped-cavity bath at "
              "fixed driving time, as CSV");
  sc2->add_option("--out", fig2.out_path, "output CSV path")->required();
  sc2->add_option("--gamma0-min", fig2.gamma0_min, "sweep start");
  sc2->add_option("--gamma0-max", fig2.gamma0_max, "sweep end");
  sc2->add_option("--points", fig2.points, "sweep point count");
  sc2->add_option("--lambda", fig2.lambda, "spectral width");
  sc2->add_option("--tau", fig2.tau, "driving time");
  sc2->add_option("--grid-steps", fig2.grid_steps, "quadrature subintervals");
  sc2->set_config("--config");
  sc2->callback([&fig2] { cmd_fig2(fig2); });

  Fig3Options fig3;
  CLI::App* sc3 = app.add_subcommand(
      "fig3", "concurrence vs ratio for seeded random two-qubit states "
              "(memoryless bath), as CSV");
  sc3->add_option("--out", fig3.out_path, "output CSV path")->required();
  sc3->add_option("--samples", fig3.samples, "number of random states");
  sc3->add_option("--seed", fig3.seed, "RNG seed");
  sc3->add_option("--p-tau", fig3.p_tau, "target population in (0,1)");
  sc3->add_option("--gamma", fig3.gamma, "memoryless backend decay rate");
  sc3->add_option("--grid-steps", fig3.grid_steps, "quadrature subintervals");
  sc3->add_option("--threads", fig3.threads, "worker threads (0 = auto)");
  sc3->set_config("--config");
  sc3->callback([&fig3] { cmd_fig3(fig3); });

  QslOptions qsl_opt;
  std::string qsl_out;
  CLI::App* scq = app.add_subcommand(
      "qsl", "single-point speed-limit report for one model and state");
  add_model_options(scq, qsl_opt.model);
  add_family_options(scq, qsl_opt.family);
  scq->add_option("--p-tau", qsl_opt.p_tau,
                  "target population (alternative to --tau)");
  scq->add_option("--tau", qsl_opt.tau, "driving time");
  scq->add_option("--grid-steps", qsl_opt.grid_steps,
                  "quadrature subintervals");
  scq->add_flag("--json", qsl_opt.json, "emit a JSON object");
  scq->add_option("--out", qsl_out, "write the report here instead of stdout");
  scq->set_config("--config");
  scq->callback([&qsl_opt, &qsl_out] {
    if (qsl_out.empty()) {
      cmd_qsl(qsl_opt, std::cout);
    } else {
      std::ofstream out = open_output(qsl_out);
      cmd_qsl(qsl_opt, out);
      if (!out) throw IoError("failed while writing " + qsl_out);
    }
  });

  SweepOptions sweep;
  CLI::App* scs = app.add_subcommand(
      "sweep", "sweep one parameter and tabulate the bound, as CSV");
  add_model_options(scs, sweep.base.model);
  add_family_options(scs, sweep.base.family);
  scs->add_option("--param", sweep.param,
                  "swept parameter: p-tau | tau | gamma0 | alpha")
      ->check(CLI::IsMember({"p-tau", "tau", "gamma0", "alpha"}));
  scs->add_option("--from", sweep.from, "sweep start")->required();
  scs->add_option("--to", sweep.to, "sweep end")->required();
  scs->add_option("--points", sweep.points, "sweep point count");
  scs->add_option("--p-tau", sweep.base.p_tau,
                  "fixed target population (when not swept)");
  scs->add_option("--tau", sweep.base.tau, "fixed driving time");
  scs->add_option("--grid-steps", sweep.base.grid_steps,
                  "quadrature subintervals");
  scs->add_option("--out", sweep.out_path, "output CSV path")->required();
  scs->set_config("--config");
  scs->callback([&sweep] { cmd_sweep(sweep); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorCategory::usage);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qsl
