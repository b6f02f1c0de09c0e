// Closed-form probabilities and carrier-shift formulas: the six-state
// perturbative model, the vibrational-RWA two-level models, the exact
// four-state model for a ground-state-cooled ion, semidressed states with
// first-order corrections, and the Rabi/Ramsey shift expressions.
//
// The probability formulas are templated on the scalar so they can be
// evaluated at complex detuning; the peak locator uses that for
// complex-step derivatives (exact to machine precision).
#pragma once

#include <array>
#include <functional>

#include "ionshift/hamiltonian.hpp"
#include "ionshift/types.hpp"

namespace ionshift {

struct RabiProbTriple {
  double p_red = 0.0;
  double p_car = 0.0;
  double p_blue = 0.0;
  double total() const { return p_red + p_car + p_blue; }
};

namespace detail {

template <class S>
struct TripleT {
  S red, car, blue;
  S total() const { return red + car + blue; }
};

// Six-state first-order probabilities after a pulse of duration tau.
template <class S>
TripleT<S> sixstate_probs(double eta, double wt, double wr, S delta, int n0, double tau) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const S om = sqrt(wr * wr + delta * delta);
  const S pref = eta * eta * wr * wr / (om * om * (wt * wt - om * om) * (wt * wt - om * om));
  const S co = cos(om * tau / 2.0), so = sin(om * tau / 2.0);
  const double ct = std::cos(wt * tau / 2.0), st = std::sin(wt * tau / 2.0);
  TripleT<S> t;
  {
    const S amp = (delta - wt) * om * co * st + (om * om - delta * wt) * so * ct;
    t.red = double(n0) * pref * amp * amp;
  }
  {
    const S interference = sin(wt * tau - om * tau / 2.0) / ((wt - om) * (wt - om)) -
                           sin(wt * tau + om * tau / 2.0) / ((wt + om) * (wt + om));
    t.car = (wr / om) * (wr / om) * so * so +
            eta * eta * wr * wr * wr * wr / (4.0 * om * om) * double(2 * n0 + 1) * so * interference;
  }
  {
    const S amp = (delta + wt) * om * co * st - (om * om + delta * wt) * so * ct;
    t.blue = double(n0 + 1) * pref * amp * amp;
  }
  return t;
}

// One vibrational-RWA two-level model: carrier (k=0) or k-th sideband.
template <class S>
S vrwa_probability(double eta, double wt, double wr, S delta, int n, int k, double tau) {
  using std::sin;
  using std::sqrt;
  const double coupling = std::abs(wr * displacement_element(n, n + k, eta));
  if (coupling == 0.0) return S(0.0);  // decoupled transition, any detuning
  const S f = sqrt((delta - double(k) * wt) * (delta - double(k) * wt) + coupling * coupling);
  const S s = sin(f * tau / 2.0);
  return (coupling / f) * (coupling / f) * s * s;
}

// Exact four-state probabilities for an ion starting in |g,0>.
template <class S>
std::pair<S, S> fourstate_probs(double eta, double wt, double wr, S delta, double tau) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const S om = sqrt(wr * wr + delta * delta);
  const S nup = sqrt((wt + om) * (wt + om) + eta * eta * wr * wr);
  const S num = sqrt((wt - om) * (wt - om) + eta * eta * wr * wr);
  const S cp = cos(nup * tau / 2.0), sp = sin(nup * tau / 2.0);
  const S cm = cos(num * tau / 2.0), sm = sin(num * tau / 2.0);
  const S a = cp - cm;
  const S b = (wt + om) / nup * sp - (wt - om) / num * sm;
  const S pe0 = (wr / (2.0 * om)) * (wr / (2.0 * om)) * (a * a + b * b);
  const S c = (om - delta) / nup * sp + (om + delta) / num * sm;
  const S pe1 = (eta * wr / (2.0 * om)) * (eta * wr / (2.0 * om)) * c * c;
  return {pe0, pe1};
}

// Near-resonance Ramsey window probabilities (red, carrier, blue) for two
// pulses of duration tau separated by T.
template <class S>
TripleT<S> ramsey_window_probs(double eta, double wt, double wr, S delta, int n0,
                               double tau, double t_free) {
  const double al = wr / wt;
  const double tt = 2.0 * tau + t_free;
  const double c = std::cos(wt * tt / 2.0);
  const double s = std::sin(wt * t_free / 2.0);
  const double a2 = (al * al * c + al * s) * (al * al * c + al * s);
  const S cross = al * delta / wt * (2.0 + t_free * wr) * (c + al * s) * (al * c + s);
  const double pref = eta * eta / ((1.0 - al * al) * (1.0 - al * al));
  TripleT<S> t;
  t.red = double(n0) * pref * (a2 - cross);
  t.blue = double(n0 + 1) * pref * (a2 + cross);
  t.car = 1.0 - (1.0 / (wr * wr) + t_free / wr + t_free * t_free / 4.0) * delta * delta;
  return t;
}

inline void require_off_rabi_resonance(const PhysicalParams& p, const char* who) {
  if (std::abs(p.omega_eff() - p.omega_t) < 1e-6 * p.omega_t)
    throw rabi_resonance_error(std::string(who) +
                               ": effective Rabi frequency within the guard band of the trap "
                               "frequency; use four_state_model, which stays regular there");
}

}  // namespace detail

// Six-state probabilities (red sideband, carrier, blue sideband). Singular
// when the effective Rabi frequency crosses the trap frequency.
inline RabiProbTriple rabi_probs_sixstate(const PhysicalParams& p, int n0, double tau) {
  detail::require_off_rabi_resonance(p, "rabi_probs_sixstate");
  const auto t = detail::sixstate_probs(p.eta, p.omega_t, p.omega_r, p.delta, n0, tau);
  return RabiProbTriple{t.red, t.car, t.blue};
}

// Vibrational-RWA probability of the |g,n> -> |e,n+k> transition.
inline double vrwa_prob(const PhysicalParams& p, int n, int k, double tau) {
  if (n < 0 || n + k < 0) throw std::domain_error("vrwa_prob: negative Fock index");
  return detail::vrwa_probability(p.eta, p.omega_t, p.omega_r, p.delta, n, k, tau);
}

// Dimensionless oscillation factor of the single-pulse shift,
// f(xi) = sin(xi) / (xi sin(xi) - 4 sin^2(xi/2)).
// Removable 0/0 points at xi = 2 pi k are evaluated by series; at a genuine
// pole (denominator zero, numerator not) IEEE division yields +-inf.
inline double rabi_shift_factor(double xi) {
  if (!(xi > 0.0)) throw std::domain_error("rabi_shift_factor: xi must be > 0");
  const double k = std::round(xi / (2.0 * pi));
  const double eps = xi - 2.0 * pi * k;
  if (k >= 1.0 && std::abs(eps) < 1e-4)
    return (1.0 + eps * eps * eps / (24.0 * pi * k)) / (2.0 * pi * k);
  const double s = std::sin(xi), sh = std::sin(xi / 2.0);
  return s / (xi * s - 4.0 * sh * sh);
}

// delta(tau) = Omega_R eta^2 alpha^2 f(Omega_R tau) sin(omega_T tau)
inline double rabi_shift(const PhysicalParams& p, double tau) {
  const double al = p.alpha();
  return p.omega_r * p.eta * p.eta * al * al * rabi_shift_factor(p.omega_r * tau) *
         std::sin(p.omega_t * tau);
}

// Envelope obtained by replacing the fast sin(omega_T tau) with +-1.
inline std::pair<double, double> rabi_shift_bounds(const PhysicalParams& p, double tau) {
  const double al = p.alpha();
  const double mag =
      std::abs(p.omega_r * p.eta * p.eta * al * al * rabi_shift_factor(p.omega_r * tau));
  return {-mag, mag};
}

// At a pi pulse the alpha^2 term has a node and the next order survives as a
// pulling (non-negative) shift: Omega_R eta^2 alpha^3 cos^2(omega_T tau_pi / 2).
inline double rabi_shift_pi_pulse(const PhysicalParams& p) {
  const double al = p.alpha();
  const double c = std::cos(0.5 * p.omega_t * pi / p.omega_r);
  return p.omega_r * p.eta * p.eta * al * al * al * c * c;
}

// Ramsey carrier shift for two pi/2 pulses of duration tau separated by T.
inline double ramsey_shift(const PhysicalParams& p, double tau, double t_free) {
  const double al = p.alpha();
  const double tt = 2.0 * tau + t_free;
  const double c = std::cos(0.5 * p.omega_t * tt);
  const double s = std::sin(0.5 * p.omega_t * t_free);
  return p.omega_r * p.eta * p.eta * al * al * (2.0 / (2.0 + p.omega_r * t_free)) *
         (c * s + al * (c * c + s * s));
}

// Leading order in alpha of ramsey_shift.
inline double ramsey_shift_leading(const PhysicalParams& p, double tau, double t_free) {
  const double al = p.alpha();
  const double tt = 2.0 * tau + t_free;
  return 2.0 * p.omega_r * p.eta * p.eta * al * al / (2.0 + p.omega_r * t_free) *
         std::cos(0.5 * p.omega_t * tt) * std::sin(0.5 * p.omega_t * t_free);
}

// Envelope magnitude 2 Omega_R eta^2 alpha^2 / (2 + Omega_R T).
inline double ramsey_shift_bound(const PhysicalParams& p, double t_free) {
  const double al = p.alpha();
  return 2.0 * p.omega_r * p.eta * p.eta * al * al / (2.0 + p.omega_r * t_free);
}

// Ramsey shift with the full (1 - alpha^2)^-2 prefactor kept, before the
// small-alpha reduction.
inline double ramsey_shift_full(const PhysicalParams& p, double tau, double t_free) {
  const double al = p.alpha();
  const double tt = 2.0 * tau + t_free;
  const double c = std::cos(0.5 * p.omega_t * tt);
  const double s = std::sin(0.5 * p.omega_t * t_free);
  return p.omega_r * p.eta * p.eta * al * al / ((1.0 - al * al) * (1.0 - al * al)) *
         (2.0 / (2.0 + t_free * p.omega_r)) * (c + al * s) * (al * c + s);
}

// Near-resonance Ramsey window probabilities; the carrier prefactor N is n0
// for the red and n0+1 for the blue sideband, and cancels in the shift.
inline RabiProbTriple ramsey_probs_near_resonance(const PhysicalParams& p, int n0,
                                                  double tau, double t_free) {
  const auto t =
      detail::ramsey_window_probs(p.eta, p.omega_t, p.omega_r, p.delta, n0, tau, t_free);
  return RabiProbTriple{t.red, t.car, t.blue};
}

// ---------------------------------------------------------------------------
// Semidressed states |eps0_{n,+-}> = (((Delta +- Omega)/Omega_R)|g,n> + |e,n>)
// / sqrt(N_+-) and their first-order corrections under the sideband coupling.
// The energies carry no first-order correction: the coupling has no diagonal
// elements in this basis.
// ---------------------------------------------------------------------------

struct SemidressedCorrection {
  int n = 0;
  double energy_plus = 0.0, energy_minus = 0.0;  // E_n +- Omega/2, zeroth order
  double norm_plus = 0.0, norm_minus = 0.0;      // N_+- = 2 Omega (Omega +- Delta) / Omega_R^2
  // Coefficient of |eps0_{n-1,-s}> and |eps0_{n+1,-s}> mixed into |eps_{n,s}>.
  cxd mix_lower_plus, mix_upper_plus;
  cxd mix_lower_minus, mix_upper_minus;
  double energy_correction_first_order = 0.0;    // identically zero
};

inline SemidressedCorrection semidressed_states(const PhysicalParams& p, int n) {
  if (n < 0) throw std::domain_error("semidressed_states: n must be >= 0");
  if (!(p.omega_r > 0.0))
    throw std::invalid_argument("semidressed_states: requires omega_r > 0");
  detail::require_off_rabi_resonance(p, "semidressed_states");
  const double om = p.omega_eff();
  SemidressedCorrection sc;
  sc.n = n;
  sc.energy_plus = p.omega_t * (n + 0.5) + 0.5 * om;
  sc.energy_minus = p.omega_t * (n + 0.5) - 0.5 * om;
  sc.norm_plus = 2.0 * om * (om + p.delta) / (p.omega_r * p.omega_r);
  sc.norm_minus = 2.0 * om * (om - p.delta) / (p.omega_r * p.omega_r);
  const double g = 0.5 * p.eta * p.omega_r;  // coupling matrix elements are i s' g sqrt(n')
  sc.mix_lower_plus = cxd(0.0, +g * std::sqrt(double(n)) / (p.omega_t + om));
  sc.mix_upper_plus = cxd(0.0, +g * std::sqrt(double(n + 1)) / (-p.omega_t + om));
  sc.mix_lower_minus = cxd(0.0, -g * std::sqrt(double(n)) / (p.omega_t - om));
  sc.mix_upper_minus = cxd(0.0, -g * std::sqrt(double(n + 1)) / (-p.omega_t - om));
  return sc;
}

// Zeroth-order semidressed state as a basis vector (sign = +1 or -1).
inline StateVector semidressed_state(const PhysicalParams& p, const BasisSpec& basis,
                                     int n, int sign) {
  const double om = p.omega_eff();
  const double npm = 2.0 * om * (om + sign * p.delta) / (p.omega_r * p.omega_r);
  StateVector v;
  v.amplitudes = Eigen::VectorXcd::Zero(basis.dimension());
  v.amplitudes[2 * n] = (p.delta + sign * om) / p.omega_r / std::sqrt(npm);
  v.amplitudes[2 * n + 1] = 1.0 / std::sqrt(npm);
  return v;
}

// First-order-corrected semidressed state, normalized.
inline StateVector semidressed_state_corrected(const PhysicalParams& p,
                                               const BasisSpec& basis, int n, int sign) {
  const SemidressedCorrection sc = semidressed_states(p, n);
  StateVector v = semidressed_state(p, basis, n, sign);
  const cxd c_lower = sign > 0 ? sc.mix_lower_plus : sc.mix_lower_minus;
  const cxd c_upper = sign > 0 ? sc.mix_upper_plus : sc.mix_upper_minus;
  if (n >= 1)
    v.amplitudes += c_lower * semidressed_state(p, basis, n - 1, -sign).amplitudes;
  if (n + 1 <= basis.n_max)
    v.amplitudes += c_upper * semidressed_state(p, basis, n + 1, -sign).amplitudes;
  v.amplitudes /= v.amplitudes.norm();
  return v;
}

// ---------------------------------------------------------------------------
// Four-state model: ion cooled to |g,0>, space {|g,0>,|g,1>,|e,0>,|e,1>}.
// Exact within the first-order coupling, valid at arbitrary laser intensity,
// in particular at the Rabi resonance Omega_R = omega_T.
// ---------------------------------------------------------------------------

struct FourStateSpectrum {
  double nu_plus = 0.0, nu_minus = 0.0;
  // Index order (s, s') = (+,+), (+,-), (-,+), (-,-); energy = omega_T + s nu_{s'} / 2.
  std::array<double, 4> energies{};
  Eigen::Matrix4cd states;        // normalized columns over (g0, g1, e0, e1)
  std::array<double, 4> norms{};  // squared norms of the unnormalized forms
};

struct FourStateResult {
  FourStateSpectrum spectrum;
  double p_e0 = 0.0;
  double p_e1 = 0.0;
};

inline FourStateResult four_state_model(const PhysicalParams& p, double tau) {
  const double om = p.omega_eff();
  const double nup = std::sqrt((p.omega_t + om) * (p.omega_t + om) + p.eta * p.eta * p.omega_r * p.omega_r);
  const double num = std::sqrt((p.omega_t - om) * (p.omega_t - om) + p.eta * p.eta * p.omega_r * p.omega_r);
  if (!(num > 0.0))
    throw std::domain_error("four_state_model: nu_minus vanished (needs eta > 0 or "
                            "omega_eff != omega_t)");
  FourStateResult r;
  r.spectrum.nu_plus = nup;
  r.spectrum.nu_minus = num;
  int col = 0;
  for (const int s : {+1, -1})
    for (const int sp : {+1, -1}) {
      const double nu = sp > 0 ? nup : num;
      r.spectrum.energies[size_t(col)] = p.omega_t + 0.5 * s * nu;
      const double a = p.omega_t + sp * om - s * nu;
      Eigen::Vector4cd v;
      v << cxd(0.0, a / p.omega_r),
          cxd(p.eta * p.omega_r / (sp * om - p.delta), 0.0),
          cxd(0.0, -a / (sp * om - p.delta)),
          cxd(p.eta, 0.0);
      r.spectrum.norms[size_t(col)] = v.squaredNorm();
      r.spectrum.states.col(col) = v / v.norm();
      ++col;
    }
  const auto [pe0, pe1] = detail::fourstate_probs(p.eta, p.omega_t, p.omega_r, p.delta, tau);
  r.p_e0 = pe0;
  r.p_e1 = pe1;
  return r;
}

// Leading-order expansions in eta of the four-state probabilities. The P_e0
// expansion contains cot(Omega t / 2) and is only exposed away from its
// singular points.
inline double four_state_pe0_expanded(const PhysicalParams& p, double t) {
  const double om = p.omega_eff();
  const double s = std::sin(0.5 * om * t);
  if (std::abs(s) < 1e-8)
    throw std::domain_error("four_state_pe0_expanded: cot singularity at Omega t = 2 pi k");
  const double ratio = p.omega_r / om;
  return ratio * ratio * s * s *
         (1.0 - (0.5 * om * t) * p.eta * p.eta * p.omega_r * p.omega_r /
                    (p.omega_t * p.omega_t) * std::cos(0.5 * om * t) / s);
}

inline double four_state_pe1_expanded(const PhysicalParams& p, double t) {
  const double om = p.omega_eff();
  const double ap = (om - p.delta) / (p.omega_t + om);
  const double am = (om + p.delta) / (p.omega_t - om);
  const double amp = ap * std::sin(0.5 * (p.omega_t + om) * t) +
                     am * std::sin(0.5 * (p.omega_t - om) * t);
  const double pref = 0.5 * p.eta * p.omega_r / om;
  return pref * pref * amp * amp;
}

inline std::pair<double, double> four_state_pi_pulse_probs(const PhysicalParams& p) {
  const double om = p.omega_eff();
  const double tau_pi = pi / p.omega_r;
  const double ap = (om - p.delta) / (p.omega_t + om);
  const double am = (om + p.delta) / (p.omega_t - om);
  const double c = std::cos(0.5 * p.omega_t * tau_pi);
  const double pe0 = (p.omega_r / om) * (p.omega_r / om);
  const double pref = 0.5 * p.eta * p.omega_r / om;
  return {pe0, pref * pref * (ap - am) * (ap - am) * c * c};
}

// At Omega_R = omega_T the nominally off-resonant sideband term becomes
// resonant and P_e1 reduces to a slow full-contrast oscillation.
inline double rabi_resonance_pe1(const PhysicalParams& p, double t) {
  const double s = std::sin(0.5 * p.eta * p.omega_r * t);
  return 0.25 * s * s;
}

// ---------------------------------------------------------------------------
// Probability-vs-detuning sources for the analytic-derivative peak locator.
// Each returns total P_e in the carrier window as a function of complex
// detuning, holding everything else fixed.
// ---------------------------------------------------------------------------

using ComplexProbabilityFn = std::function<cxd(cxd)>;

inline ComplexProbabilityFn sixstate_total_source(const PhysicalParams& p, int n0, double tau) {
  return [=](cxd z) { return detail::sixstate_probs(p.eta, p.omega_t, p.omega_r, z, n0, tau).total(); };
}

inline ComplexProbabilityFn fourstate_total_source(const PhysicalParams& p, double tau) {
  return [=](cxd z) {
    const auto [pe0, pe1] = detail::fourstate_probs(p.eta, p.omega_t, p.omega_r, z, tau);
    return pe0 + pe1;
  };
}

inline ComplexProbabilityFn vrwa_total_source(const PhysicalParams& p, int n0, double tau) {
  return [=](cxd z) {
    cxd tot = 0.0;
    for (int k = -1; k <= 1; ++k) {
      if (n0 + k < 0) continue;
      tot += detail::vrwa_probability(p.eta, p.omega_t, p.omega_r, z, n0, k, tau);
    }
    return tot;
  };
}

inline ComplexProbabilityFn ramsey_window_source(const PhysicalParams& p, int n0,
                                                 double tau, double t_free) {
  return [=](cxd z) {
    return detail::ramsey_window_probs(p.eta, p.omega_t, p.omega_r, z, n0, tau, t_free).total();
  };
}

}  // namespace ionshift
