#include <catch2/catch_amalgamated.hpp>

#include "ionshift/hamiltonian.hpp"

using namespace ionshift;

namespace {

// Independent oracle for the displacement elements: diagonalize the
// truncated Hermitian matrix eta (a + a^dag) and exponentiate. Truncation
// corrupts the top rows, so only interior elements are compared.
Eigen::MatrixXcd displacement_oracle(int dim, double eta) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    x(n, n + 1) = eta * std::sqrt(n + 1.0);
    x(n + 1, n) = x(n, n + 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  Eigen::VectorXcd phases(dim);
  for (int i = 0; i < dim; ++i) phases[i] = std::exp(cxd(0.0, es.eigenvalues()[i]));
  return es.eigenvectors().cast<cxd>() * phases.asDiagonal() *
         es.eigenvectors().transpose().cast<cxd>();
}

double hermiticity_defect(const HermitianOperator& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("displacement element closed form") {
  // eta = 0: identity
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 5; ++m)
      CHECK(std::abs(displacement_element(n, m, 0.0) - (n == m ? 1.0 : 0.0)) < 1e-15);

  for (double eta : {0.05, 0.3, 0.5}) {
    CHECK(std::abs(displacement_element(0, 0, eta) - std::exp(-eta * eta / 2.0)) < 1e-14);
    const cxd d01 = displacement_element(0, 1, eta);
    CHECK(std::abs(d01 - cxd(0.0, eta * std::exp(-eta * eta / 2.0))) < 1e-14);
    CHECK(std::abs(displacement_element(1, 0, eta) - d01) < 1e-16);  // symmetric
  }
  CHECK_THROWS_AS(displacement_element(-1, 0, 0.1), std::domain_error);
}

TEST_CASE("displacement elements match the matrix-exponential oracle") {
  for (double eta : {0.1, 0.25, 0.5}) {
    const Eigen::MatrixXcd oracle = displacement_oracle(64, eta);
    double worst = 0.0;
    for (int n = 0; n <= 20; ++n)
      for (int m = 0; m <= 20; ++m)
        worst = std::max(worst, std::abs(displacement_element(n, m, eta) - oracle(n, m)));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("displacement matrix is unitary on the interior block") {
  const int n_levels = 41;  // interior <= 20, buffer 20 against the truncation tail
  for (double eta : {0.1, 0.5}) {
    const Eigen::MatrixXcd d = displacement_matrix(n_levels, eta);
    const Eigen::MatrixXcd g = d.adjoint() * d;
    double worst = 0.0;
    for (int n = 0; n <= 20; ++n)
      for (int m = 0; m <= 20; ++m)
        worst = std::max(worst, std::abs(g(n, m) - (n == m ? 1.0 : 0.0)));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("bare levels") {
  const auto p = make_params(0.1, 1.0, 0.0, 0.34);
  const BasisSpec basis(8, 0);
  const auto eps = bare_levels(p, basis);
  for (int n = 0; n <= 8; ++n) {
    CHECK(eps[2 * n] - eps[2 * n + 1] == Catch::Approx(0.34).epsilon(1e-14));
    CHECK(0.5 * (eps[2 * n] + eps[2 * n + 1]) == Catch::Approx(n + 0.5).epsilon(1e-14));
  }
}

TEST_CASE("full hamiltonian limits") {
  const BasisSpec basis(8, 0);

  // Omega_R = 0: diagonal, equal to the bare levels
  {
    const auto p = make_params(0.3, 1.0, 0.0, 0.21);
    const auto h = full_hamiltonian(p, basis);
    const auto eps = bare_levels(p, basis);
    CHECK((h - Eigen::MatrixXcd(eps.cast<cxd>().asDiagonal())).cwiseAbs().maxCoeff() <
          1e-15);
  }

  // eta = 0: block diagonal in n, off-diagonal Omega_R / 2
  {
    const auto p = make_params(0.0, 1.0, 0.25, 0.1);
    const auto h = full_hamiltonian(p, basis);
    for (int n = 0; n <= 8; ++n) {
      CHECK(std::abs(h(2 * n + 1, 2 * n) - cxd(0.125, 0.0)) < 1e-15);
      for (int m = 0; m <= 8; ++m)
        if (m != n) CHECK(std::abs(h(2 * n + 1, 2 * m)) < 1e-15);
    }
  }

  for (double eta : {0.0, 0.1, 0.4}) {
    const auto p = make_params(eta, 1.0, 0.3, -0.4);
    CHECK(hermiticity_defect(full_hamiltonian(p, basis)) < 1e-12);
    CHECK(hermiticity_defect(ld_hamiltonian(p, basis)) < 1e-12);
  }
}

TEST_CASE("lamb-dicke hamiltonian") {
  const BasisSpec basis(10, 2);

  // eta = 0: identical to the full build
  {
    const auto p = make_params(0.0, 1.0, 0.3, 0.17);
    CHECK((ld_hamiltonian(p, basis) - full_hamiltonian(p, basis)).cwiseAbs().maxCoeff() <
          1e-15);
  }

  // first-order coupling element <e,n+1|H|g,n> = i eta Omega_R sqrt(n+1) / 2
  {
    const auto p = make_params(0.07, 1.0, 0.3, 0.0);
    const auto h = ld_hamiltonian(p, basis);
    for (int n = 0; n < 10; ++n) {
      const cxd expect(0.0, 0.5 * 0.07 * 0.3 * std::sqrt(n + 1.0));
      CHECK(std::abs(h(2 * (n + 1) + 1, 2 * n) - expect) < 1e-15);
    }
  }

  // deviation from the full Hamiltonian is O(eta^2): halving eta divides the
  // defect by four
  {
    const auto p1 = make_params(0.04, 1.0, 0.3, 0.17);
    const auto p2 = make_params(0.02, 1.0, 0.3, 0.17);
    const double d1 =
        (ld_hamiltonian(p1, basis) - full_hamiltonian(p1, basis)).cwiseAbs().maxCoeff();
    const double d2 =
        (ld_hamiltonian(p2, basis) - full_hamiltonian(p2, basis)).cwiseAbs().maxCoeff();
    CHECK(d1 / d2 == Catch::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("semidressed split") {
  const BasisSpec basis(10, 2);
  const auto p = make_params(0.08, 1.0, 0.3, 0.12);
  const auto [h_sd, v] = semidressed_split(p, basis);

  // exact sum identity
  CHECK((h_sd + v - ld_hamiltonian(p, basis)).cwiseAbs().maxCoeff() < 1e-14);

  // V(0) = 0
  const auto p0 = make_params(0.0, 1.0, 0.3, 0.12);
  CHECK(semidressed_split(p0, basis).second.cwiseAbs().maxCoeff() < 1e-15);

  // V has only eta-linear sideband terms: no diagonal, no carrier coupling
  for (int i = 0; i < basis.dimension(); ++i) CHECK(std::abs(v(i, i)) < 1e-15);
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(v(2 * n + 1, 2 * n)) < 1e-15);
}

TEST_CASE("energy levels") {
  const BasisSpec basis(10, 0);

  // Omega_R = 0, Delta = 0: degenerate g/e pairs
  {
    const auto p = make_params(0.2, 1.0, 0.0, 0.0);
    const auto levels = energy_levels(p, basis, {0.0});
    for (int n = 0; n <= 10; ++n)
      CHECK(levels[0][2 * n + 1] - levels[0][2 * n] < 1e-14);
  }

  // Omega_R = 0: eigenvalue collisions exactly at Delta = +- k omega_T
  {
    const auto p = make_params(0.2, 1.0, 0.0, 0.0);
    for (int k = 0; k <= 2; ++k)
      for (double sign : {1.0, -1.0}) {
        const auto levels = energy_levels(p, basis, {sign * k});
        double min_gap = 1e300;
        for (int i = 0; i + 1 < basis.dimension(); ++i)
          min_gap = std::min(min_gap, levels[0][i + 1] - levels[0][i]);
        CHECK(min_gap < 1e-12);
      }
  }

  // eta = 0, Delta = 0, Omega_R > 0: pair splitting exactly Omega_R
  {
    const auto p = make_params(0.0, 1.0, 0.22, 0.0);
    const auto levels = energy_levels(p, basis, {0.0});
    for (int n = 0; n <= 10; ++n) {
      CHECK(levels[0][2 * n] == Catch::Approx(n + 0.5 - 0.11).epsilon(1e-12));
      CHECK(levels[0][2 * n + 1] == Catch::Approx(n + 0.5 + 0.11).epsilon(1e-12));
    }
  }

  // avoided crossings: with the laser on, the minimum gap near Delta = +-
  // omega_T stays open
  {
    const auto p = make_params(0.4, 1.0, 0.3, 0.0);
    std::vector<double> grid;
    for (int i = 0; i <= 80; ++i) grid.push_back(0.8 + 0.4 * i / 80.0);
    const auto levels = energy_levels(p, basis, grid);
    double min_gap = 1e300;
    for (const auto& ev : levels)
      for (int i = 0; i + 1 < basis.dimension(); ++i)
        min_gap = std::min(min_gap, ev[i + 1] - ev[i]);
    CHECK(min_gap > 0.05);  // measured ~0.10 for these parameters
  }
}
