// Command implementations behind the qslcli front end. Each cmd_* function
// does the work for one subcommand and throws qsl::Error on failure; the
// run_cli dispatcher maps errors to exit codes (see ErrorCategory).
//
// CSV contract: UTF-8, '\n' line endings, one header row, numeric cells
// with 12 significant digits.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsl/entangle.hpp"
#include "qsl/qsl_engine.hpp"

namespace qsl {

// 12-significant-digit decimal used for every CSV numeric cell.
std::string csv_number(double v);

// --- figure-data commands -----------------------------------------------------

// Ratio vs target population for the two-qubit benchmark states under the
// canonical memoryless bath. Columns:
//   p_tau,ratio_psi1,ratio_ones2,ratio_bell,ratio_bell_paperEq6
// with p_tau on {0.01, ..., 0.99}. The paperEq6 column carries the reported
// closed-form variant for comparison; it is not a bound-obeying ratio.
struct Fig1Options {
  std::string out_path;
  double gamma = 1.0;  // memoryless backend rate (units of omega0)
  int grid_steps = 2000;
};
void cmd_fig1(const Fig1Options& opt);

// Ratio vs coupling strength for the damped-cavity bath at fixed driving
// time. Columns:
//   gamma0,ratio_psi1,ratio_ones2,ratio_bell,ratio_bell_paperEq6,singular_flag
// singular_flag = 1 marks rows whose coherence crosses ~0 inside [0, tau]
// (the generator-form rates blow up there; the derivative route used for
// the ratios stays finite).
struct Fig2Options {
  std::string out_path;
  double gamma0_min = 1.0;
  double gamma0_max = 100.0;
  int points = 100;
  double lambda = 50.0;
  double tau = 1.0;
  int grid_steps = 2000;
};
void cmd_fig2(const Fig2Options& opt);

// Concurrence vs ratio scatter for seeded random two-qubit pure states, with
// psi1/psi2 sweep rows appended. Columns:
//   index,a1,a2,a3,a4,concurrence,ratio,family
struct Fig3Options {
  std::string out_path;
  int samples = 20000;
  std::uint64_t seed = 20000;
  double p_tau = 0.1;
  double gamma = 1.0;
  int grid_steps = 2000;
  int threads = 0;  // 0 = hardware concurrency
};
void cmd_fig3(const Fig3Options& opt);

// --- single-point query and sweeps ----------------------------------------------

struct ModelOptions {
  std::string kind = "exp";  // exp | lorentzian | table
  double gamma = 1.0;        // exp decay rate
  double gamma0 = 1.0;       // lorentzian coupling
  double lambda = 50.0;      // lorentzian spectral width
  std::string table_file;
};
DecoherenceModel make_model(const ModelOptions& opt);

struct FamilyOptions {
  std::string name = "ones";  // psi1 | psi2 | w3 | ghz3 | ones | single | custom
  double alpha = 1.0;
  double beta = 0.0;
  int n = 2;
  std::vector<double> weights;  // single-excitation weights; empty = uniform
  std::string state_file;       // custom amplitudes, one "re [im]" per line
};
StateFamily make_family(const FamilyOptions& opt);

struct QslOptions {
  ModelOptions model;
  FamilyOptions family;
  double p_tau = -1.0;  // exactly one of p_tau / tau must be set
  double tau = -1.0;
  int grid_steps = 2000;
  bool json = false;
};
// Prints the report (key = value lines, or a JSON object with --json).
void cmd_qsl(const QslOptions& opt, std::ostream& out);

struct SweepOptions {
  QslOptions base;
  std::string param = "p-tau";  // p-tau | tau | gamma0 | alpha
  double from = 0.05;
  double to = 0.95;
  int points = 19;
  std::string out_path;
};
void cmd_sweep(const SweepOptions& opt);

// Parses argv, dispatches, and maps failures to category exit codes.
int run_cli(int argc, const char* const* argv);

}  // namespace qsl
