// Command layer behind the CLI: every command is a pure function from a
// validated RunConfig to a CSV string, so the surface is testable without a
// process boundary. Frequencies cross this boundary in linear Hz and are
// converted to angular units exactly once, here.
#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ionshift/shift.hpp"
#include "ionshift/tables.hpp"

namespace ionshift {

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;

  std::vector<double> points() const {
    std::vector<double> xs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      xs[size_t(i)] = n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
    return xs;
  }
};

// "lo:hi:n"
inline GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char rest = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.n, &rest) != 3 || g.n < 1)
    throw config_error("grid: expected <lo:hi:n> with n >= 1, got '" + text + "'");
  if (g.n > 1 && !(g.hi > g.lo)) throw config_error("grid: require hi > lo");
  return g;
}

// Pulse duration: "pi" | "pi2" | "seconds:<x>"
inline double parse_pulse(const std::string& text, double omega_r) {
  if (text == "pi") return pi / omega_r;
  if (text == "pi2") return 0.5 * pi / omega_r;
  double secs = 0.0;
  char rest = 0;
  if (std::sscanf(text.c_str(), "seconds:%lf%c", &secs, &rest) == 1 && secs > 0.0)
    return secs;
  throw config_error("pulse: expected pi | pi2 | seconds:<x>, got '" + text + "'");
}

// Ramsey free time: "seconds:<x>" | "multiple:<k>" (T = k tau)
inline double parse_ramsey_t(const std::string& text, double tau) {
  double v = 0.0;
  char rest = 0;
  if (std::sscanf(text.c_str(), "seconds:%lf%c", &v, &rest) == 1 && v >= 0.0) return v;
  if (std::sscanf(text.c_str(), "multiple:%lf%c", &v, &rest) == 1 && v >= 0.0)
    return v * tau;
  throw config_error("ramsey-t: expected seconds:<x> | multiple:<k>, got '" + text + "'");
}

enum class ShiftSweep { tau, omega_r, t_free };

struct RunConfig {
  std::optional<double> eta;
  std::optional<double> mass_u;
  std::optional<double> wavelength_nm;
  double omega_t_hz = 0.0;
  double omega_r_hz = 0.0;
  int n0 = 0;
  std::string pulse = "pi";
  std::optional<std::string> ramsey_t;
  GridSpec grid;
  int n_max = 0;  // 0 -> default truncation n0 + 8
  std::vector<double> eta_list;  // fidelity series
  ShiftSweep sweep = ShiftSweep::tau;
  bool numeric_ld = false;

  double resolve_eta() const {
    const bool has_mass = mass_u.has_value() || wavelength_nm.has_value();
    if (eta.has_value() && has_mass)
      throw config_error("eta: give either --eta or --mass-u/--wavelength-nm, not both");
    if (eta.has_value()) return *eta;
    if (mass_u.has_value() && wavelength_nm.has_value())
      return lamb_dicke_parameter(*mass_u * atomic_mass_unit_si, *wavelength_nm * 1e-9,
                                  2.0 * pi * omega_t_hz);
    throw config_error("eta: need --eta or both --mass-u and --wavelength-nm");
  }

  PhysicalParams params(double delta = 0.0) const {
    if (!(omega_t_hz > 0.0)) throw config_error("omega-t-hz: must be > 0");
    if (!(omega_r_hz > 0.0)) throw config_error("omega-r-hz: must be > 0");
    return make_params(resolve_eta(), 2.0 * pi * omega_t_hz, 2.0 * pi * omega_r_hz, delta);
  }

  BasisSpec basis() const {
    return n_max > 0 ? BasisSpec(n_max, n0) : BasisSpec::for_initial(n0);
  }
};

// 17 significant digits: enough for exact double round-trip.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// short form for header labels
inline std::string csv_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Excited-state probability versus detuning (line-shape data).
inline std::string cmd_spectrum(const RunConfig& cfg) {
  const PhysicalParams base = cfg.params();
  const BasisSpec basis = cfg.basis();
  const double tau = parse_pulse(cfg.pulse, base.omega_r);
  const bool ramsey = cfg.ramsey_t.has_value();
  const double t_free = ramsey ? parse_ramsey_t(*cfg.ramsey_t, tau) : 0.0;
  const auto xs = cfg.grid.points();  // detuning grid, Hz

  std::vector<SpectrumPoint> pts(xs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(xs.size()); ++i) {
    const PhysicalParams p = base.with_delta(2.0 * pi * xs[size_t(i)]);
    pts[size_t(i)] = ramsey ? ramsey_sequence(p, basis, tau, t_free)
                            : rabi_pulse(p, basis, tau, cfg.numeric_ld);
  }

  std::ostringstream os;
  os << "delta_over_2pi_hz,p_e_total,p_e_red,p_e_carrier,p_e_blue\n";
  for (size_t i = 0; i < xs.size(); ++i)
    os << csv_num(xs[i]) << ',' << csv_num(pts[i].p_e_total) << ','
       << csv_num(pts[i].p_red()) << ',' << csv_num(pts[i].p_carrier()) << ','
       << csv_num(pts[i].p_blue()) << '\n';
  return os.str();
}

// Carrier shift versus pulse duration (Rabi) or versus Rabi frequency /
// free time (Ramsey), with closed-form and bound columns.
inline std::string cmd_shift(const RunConfig& cfg) {
  const PhysicalParams base = cfg.params();
  const BasisSpec basis = cfg.basis();
  std::ostringstream os;
  if (!cfg.ramsey_t.has_value()) {
    const auto taus = cfg.grid.points();  // seconds
    const auto curve = shift_curve_rabi(base, basis, taus,
                                        cfg.numeric_ld ? ShiftSource::ld_numeric
                                                       : ShiftSource::full_numeric);
    os << "tau_s,delta_numeric_hz,delta_analytic_hz,bound_upper_hz,bound_lower_hz,"
          "delta_vrwa_hz\n";
    for (const auto& s : curve)
      os << csv_num(s.tau) << ',' << csv_num(s.numeric.delta / (2.0 * pi)) << ','
         << csv_num(s.analytic / (2.0 * pi)) << ',' << csv_num(s.bound_upper / (2.0 * pi))
         << ',' << csv_num(s.bound_lower / (2.0 * pi)) << ','
         << csv_num(s.vrwa / (2.0 * pi)) << '\n';
    return os.str();
  }

  if (cfg.sweep == ShiftSweep::omega_r) {
    double multiple = 0.0;
    char rest = 0;
    if (std::sscanf(cfg.ramsey_t->c_str(), "multiple:%lf%c", &multiple, &rest) != 1)
      throw config_error("shift: an omega-r sweep needs --ramsey-t multiple:<k>");
    std::vector<double> wr_grid;  // grid is Omega_R / 2 pi in Hz
    for (double hz : cfg.grid.points()) wr_grid.push_back(2.0 * pi * hz);
    const auto curve = shift_curve_ramsey_vs_omega_r(base, basis, wr_grid, multiple);
    os << "omega_r_over_2pi_hz,delta_numeric_hz,delta_analytic_hz,bound_upper_hz,"
          "bound_lower_hz\n";
    for (const auto& s : curve)
      os << csv_num(s.x / (2.0 * pi)) << ',' << csv_num(s.numeric.delta / (2.0 * pi))
         << ',' << csv_num(s.analytic / (2.0 * pi)) << ','
         << csv_num(s.bound_upper / (2.0 * pi)) << ','
         << csv_num(s.bound_lower / (2.0 * pi)) << '\n';
    return os.str();
  }

  const auto t_grid = cfg.grid.points();  // seconds
  const auto curve = shift_curve_ramsey(base, basis, t_grid);
  os << "T_s,delta_numeric_hz,delta_analytic_hz,bound_upper_hz,bound_lower_hz\n";
  for (const auto& s : curve)
    os << csv_num(s.x) << ',' << csv_num(s.numeric.delta / (2.0 * pi)) << ','
       << csv_num(s.analytic / (2.0 * pi)) << ',' << csv_num(s.bound_upper / (2.0 * pi))
       << ',' << csv_num(s.bound_lower / (2.0 * pi)) << '\n';
  return os.str();
}

// Pi/2-pulse fidelity versus alpha, one column per Lamb-Dicke parameter,
// with a marker column flagging alpha = 1/(4n+1).
inline std::string cmd_fidelity(const RunConfig& cfg) {
  if (cfg.eta_list.empty()) throw config_error("fidelity: need at least one --eta");
  const auto alphas = cfg.grid.points();
  const double step = alphas.size() > 1 ? alphas[1] - alphas[0] : 1.0;
  const int n_max = cfg.n_max > 0 ? cfg.n_max : 10;

  std::vector<std::vector<double>> series(cfg.eta_list.size(),
                                          std::vector<double>(alphas.size()));
  for (size_t j = 0; j < cfg.eta_list.size(); ++j) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(alphas.size()); ++i) {
      const PhysicalParams p = make_params(cfg.eta_list[j], 1.0, alphas[size_t(i)], 0.0);
      series[j][size_t(i)] = fidelity_pi_half(p, BasisSpec(n_max, 0));
    }
  }

  std::ostringstream os;
  os << "alpha";
  for (double eta : cfg.eta_list) os << ",fidelity_eta_" << csv_label(eta);
  os << ",is_marker\n";
  for (size_t i = 0; i < alphas.size(); ++i) {
    os << csv_num(alphas[i]);
    for (size_t j = 0; j < cfg.eta_list.size(); ++j) os << ',' << csv_num(series[j][i]);
    bool marker = false;
    for (int n = 0; n < 64; ++n) {
      const double m = 1.0 / (4.0 * n + 1.0);
      if (std::abs(alphas[i] - m) <= 0.5 * step) marker = true;
    }
    os << ',' << (marker ? 1 : 0) << '\n';
  }
  return os.str();
}

// Shift-estimate tables for representative ions.
inline std::string cmd_table(const std::string& which) {
  std::ostringstream os;
  if (which == "clock" || which == "logic") {
    const auto ests =
        rabi_table_estimates(which == "clock" ? clock_table_rows() : logic_table_rows());
    os << "ion,mass_u,wavelength_nm,omega_t_hz,eta,omega_r_lo_hz,omega_r_hi_hz,"
          "shift_lo_hz,shift_hi_hz\n";
    for (const auto& e : ests)
      os << e.row.ion << ',' << csv_num(e.row.mass_u) << ',' << csv_num(e.row.wavelength_nm)
         << ',' << csv_num(e.row.omega_t_hz) << ',' << csv_num(e.eta) << ','
         << csv_num(e.row.omega_r_lo_hz) << ',' << csv_num(e.row.omega_r_hi_hz) << ','
         << csv_num(e.shift_lo_hz) << ',' << csv_num(e.shift_hi_hz) << '\n';
    return os.str();
  }
  if (which == "ramsey_sr") {
    const auto e = ramsey_sr_estimate();
    os << "ion,mass_u,wavelength_nm,omega_t_hz,eta,omega_r_hz,t_over_tau,shift_bound_hz\n";
    os << e.row.ion << ',' << csv_num(e.row.mass_u) << ',' << csv_num(e.row.wavelength_nm)
       << ',' << csv_num(e.row.omega_t_hz) << ',' << csv_num(e.eta) << ','
       << csv_num(e.omega_r_hz) << ',' << csv_num(e.t_over_tau) << ','
       << csv_num(e.shift_bound_hz) << '\n';
    return os.str();
  }
  throw config_error("table: expected clock | logic | ramsey_sr, got '" + which + "'");
}

}  // namespace ionshift
