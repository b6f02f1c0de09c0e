// Carrier-peak location. The shift is the detuning at which the total
// excited-state probability is maximal. Two tiers:
//
//  - locate_carrier_peak: 101-point coarse grid + golden-section refinement
//    on any probability curve, followed by a bisection on the central-
//    difference derivative. The derivative step is wide enough that the
//    finite difference averages out the eigensolver noise floor, which sits
//    well above the curvature signal for shifts below ~1e-7 Omega_R.
//
//  - locate_peak_analytic_derivative: root of dP/dDelta for closed-form
//    sources, with the derivative computed by complex step (exact), good to
//    ~1e-14 Omega_R. Required for the alpha^3 pi-pulse regime where the
//    probability peak is too flat for maximization in double precision.
#pragma once

#include <functional>
#include <vector>

#include "ionshift/analytic.hpp"
#include "ionshift/propagation.hpp"
#include "ionshift/types.hpp"

namespace ionshift {

enum class ShiftSource {
  full_numeric,
  ld_numeric,
  sixstate_analytic,
  fourstate_analytic,
  ramsey_numeric,
  ramsey_analytic,
};

struct ShiftResult {
  double delta = 0.0;               // located peak detuning, caller units
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  ShiftSource source = ShiftSource::full_numeric;
  double residual_derivative = 0.0;  // dP_e/dDelta at delta, central difference
  bool symmetric_tie = false;
};

struct PeakOptions {
  double tol = 1e-9;        // golden-section bracket width, relative to scale
  double scale = 0.0;       // detuning scale (Omega_R); 0 -> bracket width
  int coarse_points = 101;
  double fd_step_rel = 1e-3;  // derivative step, relative to scale
  bool polish = true;
};

using ProbabilityFn = std::function<double(double)>;

namespace detail {

struct GoldenResult {
  double a, b;
  int iterations;
};

inline GoldenResult golden_section_max(const ProbabilityFn& p, double a, double b,
                                       double width_tol) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = p(c), fd = p(d);
  int it = 0;
  while (b - a > width_tol && it < 400) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = p(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = p(d);
    }
    ++it;
  }
  return {a, b, it};
}

}  // namespace detail

// Locates the single interior maximum of p on [lo, hi]. Throws
// bracketing_error when the coarse grid sees no interior maximum and
// ambiguity_error when it sees more than one (distinct) maximum; two equal
// maxima (symmetric curve) resolve to their midpoint, flagged.
inline ShiftResult locate_carrier_peak(const ProbabilityFn& p, double lo, double hi,
                                       PeakOptions opts = {},
                                       ShiftSource tag = ShiftSource::full_numeric) {
  if (!(hi > lo)) throw std::invalid_argument("locate_carrier_peak: empty bracket");
  const double scale = opts.scale > 0.0 ? opts.scale : hi - lo;
  const int n = std::max(opts.coarse_points, 5);
  std::vector<double> xs(static_cast<size_t>(n));
  std::vector<double> ps(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[size_t(i)] = lo + (hi - lo) * i / (n - 1);
    ps[size_t(i)] = p(xs[size_t(i)]);
  }

  std::vector<int> maxima;
  for (int i = 1; i + 1 < n; ++i)
    if (ps[size_t(i)] > ps[size_t(i - 1)] && ps[size_t(i)] >= ps[size_t(i + 1)])
      maxima.push_back(i);
  if (maxima.empty())
    throw bracketing_error("locate_carrier_peak: no interior maximum on the coarse grid");

  ShiftResult res;
  res.source = tag;
  int ipk = maxima.front();
  if (maxima.size() > 1) {
    double vmax = ps[size_t(maxima.front())];
    for (int i : maxima) vmax = std::max(vmax, ps[size_t(i)]);
    std::vector<int> tied;
    for (int i : maxima)
      if (ps[size_t(i)] >= vmax - 1e-12 * std::abs(vmax)) tied.push_back(i);
    if (tied.size() == 2) {
      // symmetric line: report the midpoint of the two equal maxima
      res.symmetric_tie = true;
      res.delta = 0.5 * (xs[size_t(tied[0])] + xs[size_t(tied[1])]);
      res.bracket_lo = xs[size_t(tied[0] - 1)];
      res.bracket_hi = xs[size_t(tied[1] + 1)];
      const double h = opts.fd_step_rel * scale;
      res.residual_derivative = (p(res.delta + h) - p(res.delta - h)) / (2.0 * h);
      res.iterations = n;
      return res;
    }
    if (tied.size() > 2 || maxima.size() > tied.size()) {
      std::string msg = "locate_carrier_peak: multiple maxima on the coarse grid at x =";
      for (int i : maxima) msg += " " + std::to_string(xs[size_t(i)]);
      throw ambiguity_error(msg);
    }
    ipk = tied.front();
  }

  double a = xs[size_t(ipk - 1)], b = xs[size_t(ipk + 1)];
  const auto gr = detail::golden_section_max(p, a, b, opts.tol * scale);
  res.iterations = n + gr.iterations;
  double delta = 0.5 * (gr.a + gr.b);
  res.bracket_lo = gr.a;
  res.bracket_hi = gr.b;

  const double h = opts.fd_step_rel * scale;
  if (opts.polish) {
    // Bisection on the wide-step central difference of p around the golden
    // estimate; the step averages out probability noise that golden-section
    // comparisons cannot resolve.
    const auto g = [&](double x) { return p(x + h) - p(x - h); };
    double ra = delta - 2.0 * h, rb = delta + 2.0 * h;
    ra = std::max(ra, xs[size_t(ipk - 1)] - 2.0 * h);
    rb = std::min(rb, xs[size_t(ipk + 1)] + 2.0 * h);
    double ga = g(ra), gb = g(rb);
    int expand = 0;
    while (ga * gb > 0.0 && expand < 8 && (ra > lo || rb < hi)) {
      const double w = rb - ra;
      ra = std::max(ra - w, lo);
      rb = std::min(rb + w, hi);
      ga = g(ra);
      gb = g(rb);
      ++expand;
    }
    if (ga * gb <= 0.0) {
      int it = 0;
      while (rb - ra > 1e-16 * scale && it < 90) {
        const double m = 0.5 * (ra + rb);
        const double gm = g(m);
        if (gm == 0.0) {
          ra = rb = m;
          break;
        }
        if (ga * gm < 0.0) {
          rb = m;
          gb = gm;
        } else {
          ra = m;
          ga = gm;
        }
        ++it;
      }
      res.iterations += it;
      delta = 0.5 * (ra + rb);
      if (ra < delta && delta < rb) {
        res.bracket_lo = ra;
        res.bracket_hi = rb;
      } else {
        res.bracket_lo = delta - h;
        res.bracket_hi = delta + h;
      }
    }
  }
  res.delta = delta;
  res.residual_derivative = (p(delta + h) - p(delta - h)) / (2.0 * h);
  if (!(res.bracket_lo < res.delta && res.delta < res.bracket_hi)) {
    res.bracket_lo = std::nextafter(res.delta, -1e308);
    res.bracket_hi = std::nextafter(res.delta, 1e308);
  }
  return res;
}

// Root of dP/dDelta for a closed-form source, derivative by complex step.
inline ShiftResult locate_peak_analytic_derivative(const ComplexProbabilityFn& src,
                                                   double lo, double hi,
                                                   ShiftSource tag,
                                                   int coarse_points = 65) {
  if (!(hi > lo))
    throw std::invalid_argument("locate_peak_analytic_derivative: empty bracket");
  const double h = 1e-100 * (hi - lo);
  const auto dp = [&](double x) { return src(cxd(x, h)).imag() / h; };

  // bracket the downward zero crossing of the derivative (the maximum)
  double a = 0.0, b = 0.0, ga = 0.0, gb = 0.0;
  bool found = false;
  double best_p = -1.0;
  double prev_x = lo, prev_g = dp(lo);
  for (int i = 1; i < coarse_points; ++i) {
    const double x = lo + (hi - lo) * i / (coarse_points - 1);
    const double gx = dp(x);
    if (prev_g > 0.0 && gx <= 0.0) {
      const double pmid = src(cxd(0.5 * (prev_x + x), 0.0)).real();
      if (pmid > best_p) {
        best_p = pmid;
        a = prev_x;
        b = x;
        ga = prev_g;
        gb = gx;
        found = true;
      }
    }
    prev_x = x;
    prev_g = gx;
  }
  if (!found)
    throw bracketing_error(
        "locate_peak_analytic_derivative: derivative root not bracketed");

  int it = 0;
  while (it < 200) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double gm = dp(m);
    if (gm == 0.0) {
      a = b = m;
      break;
    }
    if (ga * gm < 0.0) {
      b = m;
      gb = gm;
    } else {
      a = m;
      ga = gm;
    }
    ++it;
  }
  ShiftResult res;
  res.delta = 0.5 * (a + b);
  res.bracket_lo = a;
  res.bracket_hi = b;
  if (!(res.bracket_lo < res.delta && res.delta < res.bracket_hi)) {
    res.bracket_lo = std::nextafter(res.delta, -1e308);
    res.bracket_hi = std::nextafter(res.delta, 1e308);
  }
  res.iterations = coarse_points + it;
  res.source = tag;
  res.residual_derivative = dp(res.delta);
  return res;
}

// ---------------------------------------------------------------------------
// Shift curves
// ---------------------------------------------------------------------------

namespace detail {

inline ProbabilityFn rabi_probability_source(const PhysicalParams& p, const BasisSpec& basis,
                                             double tau, ShiftSource source) {
  const bool ld = source == ShiftSource::ld_numeric;
  return [=](double d) { return rabi_pulse(p.with_delta(d), basis, tau, ld).p_e_total; };
}

inline ShiftResult numeric_rabi_shift(const PhysicalParams& p, const BasisSpec& basis,
                                      double tau, ShiftSource source) {
  if (source == ShiftSource::sixstate_analytic)
    return locate_peak_analytic_derivative(sixstate_total_source(p, basis.n0, tau),
                                           -0.25 * p.omega_r, 0.25 * p.omega_r, source);
  if (source == ShiftSource::fourstate_analytic)
    return locate_peak_analytic_derivative(fourstate_total_source(p, tau),
                                           -0.25 * p.omega_r, 0.25 * p.omega_r, source);
  PeakOptions opts;
  opts.scale = p.omega_r;
  return locate_carrier_peak(rabi_probability_source(p, basis, tau, source),
                             -0.25 * p.omega_r, 0.25 * p.omega_r, opts, source);
}

}  // namespace detail

struct RabiShiftSample {
  double tau = 0.0;
  ShiftResult numeric;
  double analytic = 0.0;      // oscillating closed form
  double bound_lower = 0.0, bound_upper = 0.0;
  double vrwa = 0.0;          // shift of the vibrational-RWA probabilities
};

inline std::vector<RabiShiftSample> shift_curve_rabi(const PhysicalParams& p,
                                                     const BasisSpec& basis,
                                                     const std::vector<double>& tau_grid,
                                                     ShiftSource source = ShiftSource::full_numeric) {
  std::vector<RabiShiftSample> out(tau_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(tau_grid.size()); ++i) {
    const double tau = tau_grid[size_t(i)];
    RabiShiftSample s;
    s.tau = tau;
    s.numeric = detail::numeric_rabi_shift(p, basis, tau, source);
    s.analytic = rabi_shift(p, tau);
    std::tie(s.bound_lower, s.bound_upper) = rabi_shift_bounds(p, tau);
    s.vrwa = locate_peak_analytic_derivative(vrwa_total_source(p, basis.n0, tau),
                                             -0.25 * p.omega_r, 0.25 * p.omega_r,
                                             ShiftSource::sixstate_analytic)
                 .delta;
    out[size_t(i)] = s;
  }
  return out;
}

struct RamseyShiftSample {
  double x = 0.0;  // swept value: T (seconds) or Omega_R (rad/s)
  ShiftResult numeric;
  double analytic = 0.0;
  double bound_lower = 0.0, bound_upper = 0.0;
};

namespace detail {

// Keep the search bracket inside the central Ramsey fringe: neighbouring
// fringe maxima sit 2 pi / T_t away in detuning.
inline double ramsey_bracket_half_width(double omega_r, double t_total) {
  return std::min(0.25 * omega_r, 0.9 * pi / t_total);
}

}  // namespace detail

// Sweep of the free-evolution time at fixed Omega_R; tau is the pi/2 time.
inline std::vector<RamseyShiftSample> shift_curve_ramsey(const PhysicalParams& p,
                                                         const BasisSpec& basis,
                                                         const std::vector<double>& t_grid) {
  std::vector<RamseyShiftSample> out(t_grid.size());
  const double tau = 0.5 * pi / p.omega_r;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(t_grid.size()); ++i) {
    const double t_free = t_grid[size_t(i)];
    RamseyShiftSample s;
    s.x = t_free;
    PeakOptions opts;
    opts.scale = p.omega_r;
    const double half = detail::ramsey_bracket_half_width(p.omega_r, 2.0 * tau + t_free);
    s.numeric = locate_carrier_peak(
        [&](double d) { return ramsey_sequence(p.with_delta(d), basis, tau, t_free).p_e_total; },
        -half, half, opts, ShiftSource::ramsey_numeric);
    s.analytic = ramsey_shift(p, tau, t_free);
    s.bound_upper = ramsey_shift_bound(p, t_free);
    s.bound_lower = -s.bound_upper;
    out[size_t(i)] = s;
  }
  return out;
}

// Sweep of the Rabi frequency with the free time tied to the pulse duration,
// T = t_multiple * tau.
inline std::vector<RamseyShiftSample> shift_curve_ramsey_vs_omega_r(
    const PhysicalParams& p, const BasisSpec& basis,
    const std::vector<double>& omega_r_grid, double t_multiple) {
  std::vector<RamseyShiftSample> out(omega_r_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(omega_r_grid.size()); ++i) {
    const PhysicalParams pw = p.with_omega_r(omega_r_grid[size_t(i)]);
    const double tau = 0.5 * pi / pw.omega_r;
    const double t_free = t_multiple * tau;
    RamseyShiftSample s;
    s.x = pw.omega_r;
    PeakOptions opts;
    opts.scale = pw.omega_r;
    const double half = detail::ramsey_bracket_half_width(pw.omega_r, 2.0 * tau + t_free);
    s.numeric = locate_carrier_peak(
        [&](double d) { return ramsey_sequence(pw.with_delta(d), basis, tau, t_free).p_e_total; },
        -half, half, opts, ShiftSource::ramsey_numeric);
    s.analytic = ramsey_shift(pw, tau, t_free);
    s.bound_upper = ramsey_shift_bound(pw, t_free);
    s.bound_lower = -s.bound_upper;
    out[size_t(i)] = s;
  }
  return out;
}

// Full-numeric shift for each n0; returns the maximum pairwise deviation
// relative to the smallest magnitude. All-zero shifts count as zero
// deviation.
inline double n0_independence_check(const PhysicalParams& p, const PulseSchedule& sched,
                                    const std::vector<int>& n0_list) {
  if (n0_list.size() < 2) return 0.0;
  std::vector<double> shifts(n0_list.size());
  for (size_t i = 0; i < n0_list.size(); ++i) {
    const BasisSpec basis = BasisSpec::for_initial(n0_list[i]);
    PeakOptions opts;
    opts.scale = p.omega_r;
    const auto probe = [&](double d) {
      return sched.scheme == Scheme::rabi
                 ? rabi_pulse(p.with_delta(d), basis, sched.tau).p_e_total
                 : ramsey_sequence(p.with_delta(d), basis, sched.tau, sched.t_free).p_e_total;
    };
    shifts[i] = locate_carrier_peak(probe, -0.25 * p.omega_r, 0.25 * p.omega_r, opts,
                                    sched.scheme == Scheme::rabi ? ShiftSource::full_numeric
                                                                 : ShiftSource::ramsey_numeric)
                    .delta;
  }
  double min_abs = std::abs(shifts[0]), max_abs = 0.0, max_pair = 0.0;
  for (double s : shifts) {
    min_abs = std::min(min_abs, std::abs(s));
    max_abs = std::max(max_abs, std::abs(s));
  }
  for (size_t i = 0; i < shifts.size(); ++i)
    for (size_t j = i + 1; j < shifts.size(); ++j)
      max_pair = std::max(max_pair, std::abs(shifts[i] - shifts[j]));
  // below the locator noise floor every shift counts as zero
  if (max_abs < 1e-10 * p.omega_r) return 0.0;
  return max_pair / min_abs;
}

}  // namespace ionshift
