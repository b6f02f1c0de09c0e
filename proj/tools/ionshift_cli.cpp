// ionshift command-line tool: spectrum | shift | fidelity | table.
// Emits CSV to --out or stdout. Frequencies on the command line are linear
// (Hz); angular conversion happens once inside the command layer.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ionshift/commands.hpp"

namespace {

void add_common(CLI::App* cmd, ionshift::RunConfig& cfg, std::string& out_path) {
  cmd->add_option("--eta", [&cfg](const CLI::results_t& r) {
    cfg.eta = std::stod(r[0]);
    return true;
  }, "Lamb-Dicke parameter (alternative to --mass-u/--wavelength-nm)");
  cmd->add_option("--mass-u", [&cfg](const CLI::results_t& r) {
    cfg.mass_u = std::stod(r[0]);
    return true;
  }, "ion mass in unified atomic mass units");
  cmd->add_option("--wavelength-nm", [&cfg](const CLI::results_t& r) {
    cfg.wavelength_nm = std::stod(r[0]);
    return true;
  }, "driving laser wavelength in nm");
  cmd->add_option("--omega-t-hz", cfg.omega_t_hz, "trap frequency / 2 pi in Hz");
  cmd->add_option("--omega-r-hz", cfg.omega_r_hz, "Rabi frequency / 2 pi in Hz");
  cmd->add_option("--n0", cfg.n0, "initial vibrational quantum number")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--pulse", cfg.pulse, "pulse duration: pi | pi2 | seconds:<x>");
  cmd->add_option("--ramsey-t", [&cfg](const CLI::results_t& r) {
    cfg.ramsey_t = r[0];
    return true;
  }, "Ramsey free time: seconds:<x> | multiple:<k> (T = k tau); selects the Ramsey scheme");
  cmd->add_option("--grid", [&cfg](const CLI::results_t& r) {
    cfg.grid = ionshift::parse_grid(r[0]);
    return true;
  }, "sweep grid <lo:hi:n>");
  cmd->add_option("--n-max", cfg.n_max, "Fock truncation override");
  cmd->add_option("--out", out_path, "output CSV path (default: stdout)");
}

void emit(const std::string& csv, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trapped-ion carrier-shift simulator"};
  app.require_subcommand(1);

  ionshift::RunConfig cfg;
  std::string out_path;
  std::string table_which = "clock";
  std::string sweep = "tau";

  auto* spectrum = app.add_subcommand("spectrum", "excited-state probability vs detuning");
  add_common(spectrum, cfg, out_path);

  auto* shift = app.add_subcommand("shift", "carrier shift vs tau / Omega_R / T");
  add_common(shift, cfg, out_path);
  shift->add_option("--sweep", sweep, "x axis for Ramsey runs: omega-r | t-free");
  shift->add_flag("--ld", cfg.numeric_ld, "use the first-order (Lamb-Dicke) Hamiltonian");

  auto* fidelity = app.add_subcommand("fidelity", "pi/2 fidelity vs alpha");
  fidelity->add_option("--eta", cfg.eta_list, "Lamb-Dicke parameter, repeatable")
      ->required();
  fidelity->add_option("--grid", [&cfg](const CLI::results_t& r) {
    cfg.grid = ionshift::parse_grid(r[0]);
    return true;
  }, "alpha grid <lo:hi:n>");
  fidelity->add_option("--n-max", cfg.n_max, "Fock truncation override");
  fidelity->add_option("--out", out_path, "output CSV path (default: stdout)");

  auto* table = app.add_subcommand("table", "shift estimates for representative ions");
  table->add_option("which", table_which, "clock | logic | ramsey_sr");
  table->add_option("--out", out_path, "output CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*spectrum) {
      emit(ionshift::cmd_spectrum(cfg), out_path);
    } else if (*shift) {
      if (sweep == "omega-r") cfg.sweep = ionshift::ShiftSweep::omega_r;
      else if (sweep == "t-free") cfg.sweep = ionshift::ShiftSweep::t_free;
      else if (sweep != "tau") throw ionshift::config_error("sweep: expected tau | omega-r | t-free");
      emit(ionshift::cmd_shift(cfg), out_path);
    } else if (*fidelity) {
      if (cfg.grid.n == 0) cfg.grid = ionshift::parse_grid("0.05:0.5:181");
      emit(ionshift::cmd_fidelity(cfg), out_path);
    } else if (*table) {
      emit(ionshift::cmd_table(table_which), out_path);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
