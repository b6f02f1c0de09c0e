// Core value types: physical parameters, truncated bare basis, state vectors
// and pulse schedules. Everything downstream is a pure function of these.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ionshift {

using cxd = std::complex<double>;
using HermitianOperator = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi_v<double>;

// CODATA 2018
inline constexpr double hbar_si = 1.054571817e-34;           // J s
inline constexpr double atomic_mass_unit_si = 1.66053906660e-27;  // kg

class rabi_resonance_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class bracketing_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ambiguity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// eta = sqrt(hbar k^2 / (2 m omega_T)), k = 2 pi / wavelength.
inline double lamb_dicke_parameter(double mass_kg, double wavelength_m,
                                   double trap_freq_rad) {
  if (!(mass_kg > 0.0) || !(wavelength_m > 0.0) || !(trap_freq_rad > 0.0))
    throw std::domain_error("lamb_dicke_parameter: inputs must be positive");
  const double k = 2.0 * pi / wavelength_m;
  return std::sqrt(hbar_si * k * k / (2.0 * mass_kg * trap_freq_rad));
}

// One operating point: Lamb-Dicke parameter, trap frequency, Rabi frequency
// and laser detuning. Frequencies are angular; any consistent unit works
// since every result scales. alpha and the effective Rabi frequency are
// derived on demand, never stored.
struct PhysicalParams {
  double eta = 0.0;
  double omega_t = 1.0;
  double omega_r = 0.0;
  double delta = 0.0;

  double alpha() const { return omega_r / omega_t; }
  double omega_eff() const { return std::hypot(omega_r, delta); }

  PhysicalParams with_delta(double d) const {
    PhysicalParams p = *this;
    p.delta = d;
    return p;
  }
  PhysicalParams with_omega_r(double wr) const {
    PhysicalParams p = *this;
    p.omega_r = wr;
    return p;
  }
};

inline PhysicalParams make_params(double eta, double omega_t, double omega_r,
                                  double delta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("make_params: eta must be >= 0");
  if (!(omega_t > 0.0)) throw std::invalid_argument("make_params: omega_t must be > 0");
  if (!(omega_r >= 0.0)) throw std::invalid_argument("make_params: omega_r must be >= 0");
  if (!std::isfinite(delta)) throw std::invalid_argument("make_params: delta must be finite");
  return PhysicalParams{eta, omega_t, omega_r, delta};
}

enum class Internal { g, e };

// Flat layout of the bare basis: index = 2 n + (0 for g, 1 for e).
struct BareIndex {
  Internal internal = Internal::g;
  int n = 0;

  int flat() const { return 2 * n + (internal == Internal::e ? 1 : 0); }
  static BareIndex from_flat(int idx) {
    return BareIndex{idx % 2 == 0 ? Internal::g : Internal::e, idx / 2};
  }
};

// Fock truncation at n_max with the populated level n0 kept at least four
// levels below the edge.
struct BasisSpec {
  int n_max = 8;
  int n0 = 0;

  BasisSpec(int n_max_, int n0_) : n_max(n_max_), n0(n0_) {
    if (n0 < 0 || n0 > n_max - 4)
      throw std::invalid_argument("BasisSpec: require 0 <= n0 <= n_max - 4");
  }
  static BasisSpec for_initial(int n0, int buffer = 8) {
    return BasisSpec(n0 + buffer, n0);
  }

  int dimension() const { return 2 * (n_max + 1); }
};

struct StateVector {
  Eigen::VectorXcd amplitudes;

  static StateVector ground(const BasisSpec& basis, int n0) {
    StateVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(basis.dimension());
    psi.amplitudes[2 * n0] = 1.0;
    return psi;
  }

  int size() const { return static_cast<int>(amplitudes.size()); }
  cxd g(int n) const { return amplitudes[2 * n]; }
  cxd e(int n) const { return amplitudes[2 * n + 1]; }
  double norm() const { return amplitudes.norm(); }
  double excited_population() const {
    double s = 0.0;
    for (int i = 1; i < size(); i += 2) s += std::norm(amplitudes[i]);
    return s;
  }
};

enum class Scheme { rabi, ramsey };

// Single-pulse duration tau, or two pulses of duration tau separated by a
// free-evolution time t_free. Times in seconds (1/unit of the frequencies).
struct PulseSchedule {
  Scheme scheme = Scheme::rabi;
  double tau = 0.0;
  double t_free = 0.0;

  double t_total() const { return 2.0 * tau + t_free; }

  static PulseSchedule rabi(double tau) {
    check(tau, 0.0);
    return PulseSchedule{Scheme::rabi, tau, 0.0};
  }
  static PulseSchedule ramsey(double tau, double t_free) {
    check(tau, t_free);
    return PulseSchedule{Scheme::ramsey, tau, t_free};
  }

 private:
  static void check(double tau, double t_free) {
    if (!(tau > 0.0)) throw std::invalid_argument("PulseSchedule: tau must be > 0");
    if (!(t_free >= 0.0)) throw std::invalid_argument("PulseSchedule: t_free must be >= 0");
  }
};

}  // namespace ionshift
