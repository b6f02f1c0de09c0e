// Built-in ion parameter sets for the shift-estimate tables. Masses are
// isotopic (AME2020), wavelengths are the nominal transition values; both
// can be overridden from the CLI.
#pragma once

#include <string>
#include <vector>

#include "ionshift/analytic.hpp"
#include "ionshift/types.hpp"

namespace ionshift {

struct IonRow {
  std::string ion;
  double mass_u;
  double wavelength_nm;
  double omega_t_hz;      // trap frequency / 2 pi
  double omega_r_lo_hz;   // Rabi frequency range / 2 pi
  double omega_r_hi_hz;
};

// Single-pulse operation, clock / frequency-standard conditions.
inline std::vector<IonRow> clock_table_rows() {
  return {
      {"40Ca+", 39.9625909, 729.0, 1.0e6, 10.0, 100.0},
      {"199Hg+", 198.9682799, 282.0, 1.0e7, 10.0, 20.0},
      {"88Sr+", 87.9056122, 674.0, 2.5e6, 250.0, 500.0},
  };
}

// Single-pulse operation, quantum-logic conditions (faster drives).
inline std::vector<IonRow> logic_table_rows() {
  return {
      {"138Ba+", 137.9052470, 650.0, 5.0e4, 1.5e3, 1.5e4},
      {"40Ca+", 39.9625909, 729.0, 2.0e6, 5.0e3, 5.0e3},
  };
}

inline double derived_eta(const IonRow& row) {
  return lamb_dicke_parameter(row.mass_u * atomic_mass_unit_si,
                              row.wavelength_nm * 1e-9, 2.0 * pi * row.omega_t_hz);
}

// Envelope magnitude Omega_R eta^2 alpha^2 of the single-pulse shift (the
// oscillation factor is O(1) away from its nodes), in Hz.
inline double rabi_envelope_scale_hz(double eta, double omega_t_hz, double omega_r_hz) {
  const double alpha = omega_r_hz / omega_t_hz;
  return omega_r_hz * eta * eta * alpha * alpha;
}

struct TableEstimate {
  IonRow row;
  double eta;
  double shift_lo_hz;
  double shift_hi_hz;
};

inline std::vector<TableEstimate> rabi_table_estimates(const std::vector<IonRow>& rows) {
  std::vector<TableEstimate> out;
  for (const auto& row : rows) {
    TableEstimate e{row, derived_eta(row), 0.0, 0.0};
    e.shift_lo_hz = rabi_envelope_scale_hz(e.eta, row.omega_t_hz, row.omega_r_lo_hz);
    e.shift_hi_hz = rabi_envelope_scale_hz(e.eta, row.omega_t_hz, row.omega_r_hi_hz);
    out.push_back(e);
  }
  return out;
}

// Sr+ Ramsey operating point: 2 MHz trap, 16 kHz drive, T = tau.
struct RamseyEstimate {
  IonRow row;
  double eta;
  double omega_r_hz;
  double t_over_tau;
  double shift_bound_hz;
};

inline RamseyEstimate ramsey_sr_estimate() {
  IonRow row{"88Sr+", 87.9056122, 674.0, 2.0e6, 16.0e3, 16.0e3};
  RamseyEstimate e{row, derived_eta(row), 16.0e3, 1.0, 0.0};
  const PhysicalParams p = make_params(e.eta, 2.0 * pi * row.omega_t_hz,
                                       2.0 * pi * e.omega_r_hz, 0.0);
  const double tau = 0.5 * pi / p.omega_r;
  e.shift_bound_hz = ramsey_shift_bound(p, e.t_over_tau * tau) / (2.0 * pi);
  return e;
}

}  // namespace ionshift
