// Hamiltonian assembly over the truncated bare basis. All matrices are in
// internal units (hbar = 1, energies in multiples of omega_T) so that the
// conditioning of the eigenproblem does not depend on the physical scale.
#pragma once

#include <utility>
#include <vector>

#include "ionshift/types.hpp"

namespace ionshift {

// <n|exp(i eta (a + a^dag))|m> evaluated in closed form with an associated
// Laguerre polynomial and log-factorial ratio. Exact for any truncation,
// symmetric in (n, m).
inline cxd displacement_element(int n, int m, double eta) {
  if (n < 0 || m < 0)
    throw std::domain_error("displacement_element: negative Fock index");
  const int lo = std::min(n, m), hi = std::max(n, m);
  const int k = hi - lo;
  const double x = eta * eta;
  const double mag = std::exp(-0.5 * x + 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0))) *
                     std::pow(eta, k) *
                     std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(k), x);
  static constexpr cxd ik[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // i^k
  return ik[k % 4] * mag;
}

// Full displacement matrix on levels 0..n_levels-1.
inline Eigen::MatrixXcd displacement_matrix(int n_levels, double eta) {
  Eigen::MatrixXcd d(n_levels, n_levels);
  for (int n = 0; n < n_levels; ++n)
    for (int m = 0; m <= n; ++m) {
      d(n, m) = displacement_element(n, m, eta);
      d(m, n) = d(n, m);
    }
  return d;
}

// Bare energies (omega_r = 0), flat order: eps_{g,n} = E_n + Delta/2,
// eps_{e,n} = E_n - Delta/2 with E_n = omega_T (n + 1/2).
inline Eigen::VectorXd bare_levels(const PhysicalParams& p, const BasisSpec& basis) {
  const double d = p.delta / p.omega_t;
  Eigen::VectorXd eps(basis.dimension());
  for (int n = 0; n <= basis.n_max; ++n) {
    const double en = n + 0.5;
    eps[2 * n] = en + 0.5 * d;
    eps[2 * n + 1] = en - 0.5 * d;
  }
  return eps;
}

namespace detail {

inline Eigen::MatrixXcd diagonal_part(const PhysicalParams& p, const BasisSpec& basis) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension());
  h.diagonal() = bare_levels(p, basis).cast<cxd>();
  return h;
}

}  // namespace detail

// H = omega_T (a^dag a + 1/2) - (Delta/2) sigma_z
//     + (Omega_R/2) [D(eta) sigma_+ + h.c.]
inline HermitianOperator full_hamiltonian(const PhysicalParams& p, const BasisSpec& basis) {
  Eigen::MatrixXcd h = detail::diagonal_part(p, basis);
  const double g = 0.5 * p.omega_r / p.omega_t;
  for (int n = 0; n <= basis.n_max; ++n)
    for (int m = 0; m <= basis.n_max; ++m) {
      const cxd c = g * displacement_element(n, m, p.eta);
      h(2 * n + 1, 2 * m) += c;
      h(2 * m, 2 * n + 1) += std::conj(c);
    }
  return h;
}

// Expansion of the displacement to first order in eta: the coupling becomes
// (Omega_R/2) [(1 + i eta a + i eta a^dag) sigma_+ + h.c.], which only links
// consecutive motional levels.
inline HermitianOperator ld_hamiltonian(const PhysicalParams& p, const BasisSpec& basis) {
  Eigen::MatrixXcd h = detail::diagonal_part(p, basis);
  const double g = 0.5 * p.omega_r / p.omega_t;
  for (int m = 0; m <= basis.n_max; ++m) {
    h(2 * m + 1, 2 * m) += g;
    h(2 * m, 2 * m + 1) += g;
    if (m >= 1) {
      const cxd c = cxd(0.0, g * p.eta * std::sqrt(double(m)));
      h(2 * (m - 1) + 1, 2 * m) += c;
      h(2 * m, 2 * (m - 1) + 1) += std::conj(c);
    }
    if (m + 1 <= basis.n_max) {
      const cxd c = cxd(0.0, g * p.eta * std::sqrt(double(m + 1)));
      h(2 * (m + 1) + 1, 2 * m) += c;
      h(2 * m, 2 * (m + 1) + 1) += std::conj(c);
    }
  }
  return h;
}

// Split of the first-order Hamiltonian into a semidressed part (laser
// coupling, no intermode terms) and the eta-linear sideband coupling V, with
// H_SD + V identical to ld_hamiltonian.
inline std::pair<HermitianOperator, HermitianOperator> semidressed_split(
    const PhysicalParams& p, const BasisSpec& basis) {
  Eigen::MatrixXcd h_sd = detail::diagonal_part(p, basis);
  const double g = 0.5 * p.omega_r / p.omega_t;
  for (int m = 0; m <= basis.n_max; ++m) {
    h_sd(2 * m + 1, 2 * m) += g;
    h_sd(2 * m, 2 * m + 1) += g;
  }
  Eigen::MatrixXcd v = ld_hamiltonian(p, basis) - h_sd;
  return {std::move(h_sd), std::move(v)};
}

// Sorted (ascending) eigenvalues of the full Hamiltonian on a detuning grid.
inline std::vector<Eigen::VectorXd> energy_levels(const PhysicalParams& p,
                                                  const BasisSpec& basis,
                                                  const std::vector<double>& delta_grid) {
  std::vector<Eigen::VectorXd> out(delta_grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(delta_grid.size()); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        full_hamiltonian(p.with_delta(delta_grid[i]), basis), Eigen::EigenvaluesOnly);
    out[i] = solver.eigenvalues();
  }
  return out;
}

}  // namespace ionshift
