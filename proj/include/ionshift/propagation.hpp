// Exact time evolution by dense Hermitian eigendecomposition, single-pulse
// and two-pulse sequences, excited-state probabilities and pulse fidelity.
// The Hamiltonian is time independent, so spectral propagation is exact to
// machine precision; no integrator error enters the shift measurements.
#pragma once

#include <vector>

#include "ionshift/hamiltonian.hpp"
#include "ionshift/types.hpp"

namespace ionshift {

struct EigenDecomposition {
  Eigen::VectorXd energies;   // ascending, internal units
  Eigen::MatrixXcd states;    // orthonormal columns over the flat bare basis
};

inline EigenDecomposition decompose(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("decompose: eigensolver failed");
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

// Holds one decomposition so repeated pulse times at a fixed operating point
// (fixed detuning) reuse it.
class Propagator {
 public:
  explicit Propagator(const HermitianOperator& h) : dec_(decompose(h)) {}
  explicit Propagator(EigenDecomposition dec) : dec_(std::move(dec)) {}

  // psi(t) = sum_a exp(-i eps_a t) |a><a|psi0>, t in units of 1/omega_T.
  StateVector operator()(const StateVector& psi0, double t) const {
    if (psi0.size() != dec_.states.rows())
      throw std::invalid_argument("Propagator: dimension mismatch");
    Eigen::VectorXcd proj = dec_.states.adjoint() * psi0.amplitudes;
    for (int a = 0; a < proj.size(); ++a)
      proj[a] *= std::exp(cxd(0.0, -dec_.energies[a] * t));
    return StateVector{dec_.states * proj};
  }

  const EigenDecomposition& decomposition() const { return dec_; }

 private:
  EigenDecomposition dec_;
};

inline StateVector evolve(const HermitianOperator& h, const StateVector& psi0, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("evolve: t must be >= 0");
  return Propagator(h)(psi0, t);
}

// Probabilities after a pulse: the full excited-state population plus the
// partials P_{e,n} on the window [max(0, n0-2), n0+2].
struct SpectrumPoint {
  double delta = 0.0;      // caller units
  double p_e_total = 0.0;  // full-basis sum
  int n0 = 0;
  int window_begin = 0;
  std::vector<double> p_e_window;

  double p_e(int n) const {
    const int i = n - window_begin;
    return (i >= 0 && i < int(p_e_window.size())) ? p_e_window[size_t(i)] : 0.0;
  }
  double p_red() const { return n0 > 0 ? p_e(n0 - 1) : 0.0; }
  double p_carrier() const { return p_e(n0); }
  double p_blue() const { return p_e(n0 + 1); }
};

namespace detail {

inline SpectrumPoint extract_point(const PhysicalParams& p, const BasisSpec& basis,
                                   const StateVector& psi) {
  SpectrumPoint pt;
  pt.delta = p.delta;
  pt.n0 = basis.n0;
  pt.p_e_total = psi.excited_population();
  pt.window_begin = std::max(0, basis.n0 - 2);
  const int window_end = std::min(basis.n_max, basis.n0 + 2);
  for (int n = pt.window_begin; n <= window_end; ++n)
    pt.p_e_window.push_back(std::norm(psi.e(n)));
  return pt;
}

}  // namespace detail

// Ion prepared in |g,n0>, illuminated for a time tau (seconds).
inline SpectrumPoint rabi_pulse(const PhysicalParams& p, const BasisSpec& basis,
                                double tau, bool lamb_dicke_order = false) {
  const HermitianOperator h =
      lamb_dicke_order ? ld_hamiltonian(p, basis) : full_hamiltonian(p, basis);
  const StateVector psi =
      Propagator(h)(StateVector::ground(basis, basis.n0), tau * p.omega_t);
  return detail::extract_point(p, basis, psi);
}

// Two pulses of duration tau separated by free evolution for T under the
// bare Hamiltonian (diagonal, so the free segment is a pure phase map).
inline SpectrumPoint ramsey_sequence(const PhysicalParams& p, const BasisSpec& basis,
                                     double tau, double t_free) {
  if (!(t_free >= 0.0)) throw std::invalid_argument("ramsey_sequence: T must be >= 0");
  const Propagator pulse(full_hamiltonian(p, basis));
  StateVector psi = pulse(StateVector::ground(basis, basis.n0), tau * p.omega_t);
  const Eigen::VectorXd eps = bare_levels(p, basis);
  for (int i = 0; i < psi.size(); ++i)
    psi.amplitudes[i] *= std::exp(cxd(0.0, -eps[i] * t_free * p.omega_t));
  psi = pulse(psi, tau * p.omega_t);
  return detail::extract_point(p, basis, psi);
}

// Probability of finding the state a resonant pi/2 pulse would produce on a
// point-like ion, (|g> - i|e>)/sqrt(2), motional state traced out.
inline double fidelity_pi_half(const PhysicalParams& p, const BasisSpec& basis) {
  if (p.delta != 0.0)
    throw std::invalid_argument("fidelity_pi_half: requires resonant drive (delta = 0)");
  if (!(p.omega_r > 0.0))
    throw std::invalid_argument("fidelity_pi_half: requires omega_r > 0");
  const double tau = 0.5 * pi / p.omega_r;
  const StateVector psi = Propagator(full_hamiltonian(p, basis))(
      StateVector::ground(basis, basis.n0), tau * p.omega_t);
  double f = 0.0;
  for (int n = 0; n <= basis.n_max; ++n)
    f += 0.5 * std::norm(psi.g(n) + cxd(0.0, 1.0) * psi.e(n));
  return f;
}

}  // namespace ionshift
