#include <doctest.h>

#include "honeylat/slice.hpp"

using namespace honeylat;

TEST_CASE("free zigzag slice parabolas") {
  auto [V, W] = builtin_potentials();
  FourierPotential zero{V.lattice, {}};
  EdgeFrame zz = edge_frame(V.lattice, 1, 0);
  const double q = V.lattice.q;
  const double E0 = high_symmetry_points(V.lattice).K.squaredNorm();

  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 40.0);  // 0 .. 1/2
  auto curves = dispersion_slice(zero, zz, grid, 3, 6);
  for (size_t i = 0; i < grid.size(); ++i) {
    double lam = grid[i];
    auto mu = mu0_roots(lam, q);
    // Bands 1 and 2 are the lower two distinguished parabolas on the whole
    // slice; the third parabola is band 3 only until the folded branch
    // |K + (lambda - 1) k2 - k1 ...|^2 = E0 + q^2 (lambda-1)^2 dips below it
    // at lambda = 1/3.
    CHECK(curves[0].energies[i] - E0 == doctest::Approx(mu[0]).epsilon(1e-12));
    CHECK(curves[1].energies[i] - E0 == doctest::Approx(mu[1]).epsilon(1e-12));
    double third = std::min(mu[2], q * q * (lam - 1.0) * (lam - 1.0));
    CHECK(curves[2].energies[i] - E0 == doctest::Approx(third).epsilon(1e-12));
  }
  // lambda = 1/2 values of the three distinguished parabolas
  auto mu_half = mu0_roots(0.5, q);
  CHECK(mu_half[0] == doctest::Approx(-q * q / 4));
  CHECK(mu_half[1] == doctest::Approx(q * q / 4));
  CHECK(mu_half[2] == doctest::Approx(3 * q * q / 4));
  size_t last = grid.size() - 1;
  CHECK(curves[0].energies[last] - E0 == doctest::Approx(-q * q / 4));
  CHECK(curves[1].energies[last] - E0 == doctest::Approx(q * q / 4));
}

TEST_CASE("slice time-reversal: sorted triple equal at +-lambda") {
  auto [V, W] = builtin_potentials();
  FourierPotential Ve = V.scaled(0.7);
  EdgeFrame zz = edge_frame(V.lattice, 1, 0);
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  for (double lam : {0.11, 0.37}) {
    VecX a = eigvals_hermitian(assemble_fiber(Ve, hs.K + lam * zz.frak_K2, 8).H);
    VecX b = eigvals_hermitian(assemble_fiber(Ve, -(hs.K + lam * zz.frak_K2), 8).H);
    CHECK((a.head(3) - b.head(3)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("reduced matrix: structure and free eigenvalues") {
  auto [V, W] = builtin_potentials();
  const double q = V.lattice.q;

  ReducedMatrix rm = m_approx(0.13, 0.004, 0.21, V, W);
  CHECK((rm.total - rm.total.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(rm.J(0, 0)) == 0.0);
  // J eigenvalues are exactly {-q^2, 0, q^2}
  VecX jeig = eigvals_hermitian(rm.J);
  CHECK(jeig(0) == doctest::Approx(-q * q).epsilon(1e-12));
  CHECK(std::abs(jeig(1)) < 1e-10);
  CHECK(jeig(2) == doctest::Approx(q * q).epsilon(1e-12));
  // 2 Re alpha = -q^2
  CHECK(2.0 * rm.J(0, 1).real() == doctest::Approx(-q * q).epsilon(1e-12));

  // free branches match the closed forms on both signs of lambda
  for (double lam : {-0.41, -0.2, 0.05, 0.33, 0.5}) {
    VecX ev = eigvals_hermitian(m_approx(0.0, 0.0, lam, V, W).total);
    auto mu = mu0_roots(lam, q);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(ev(j) - mu[j]) < 1e-10);
  }

  // non-odd W data rejected
  FourierPotential Wbad{V.lattice, {}};
  Wbad.set({1, 0}, 0.5);
  Wbad.set({-1, 0}, 0.5);
  CHECK_THROWS_AS(m_approx(0.1, 0.01, 0.1, V, Wbad), std::invalid_argument);
}

TEST_CASE("det M^approx vs -pi") {
  auto [V, W] = builtin_potentials();
  // |W01 + W10 - W11|^2 = 1/4 for the builtin W
  Complex wsum = W.coeff({0, 1}) + W.coeff({1, 0}) - W.coeff({1, 1});
  CHECK(std::norm(wsum) == doctest::Approx(0.25));

  // pi(eps, 0, 0) = 0 and det(eps, 0, 0) = 0 structurally
  DetVsPi d0 = det_vs_pi(0.08, 0.0, 0.0, V, W);
  CHECK(std::abs(d0.pi) < 1e-15);
  CHECK(std::abs(d0.det_approx) < 1e-12);

  // scaled residual decays under eps-halving
  std::vector<double> epss{0.2, 0.1, 0.05, 0.025}, res;
  for (double eps : epss) {
    double lam = 0.25 * std::sqrt(eps), del = 0.5 * eps * eps;
    DetVsPi d = det_vs_pi(eps, del, lam, V, W);
    CHECK(d.in_region);
    res.push_back(d.residual / ((lam * lam + eps) * (lam * lam + del * del)));
  }
  for (size_t i = 1; i < res.size(); ++i) CHECK(res[i] < res[i - 1]);

  // out-of-region flag
  CHECK_FALSE(det_vs_pi(0.01, 0.5, 0.45, V, W).in_region);
}

TEST_CASE("fold crossing: pi root, bracket, and slice oracle") {
  auto [V, W] = builtin_potentials();
  const double q = V.lattice.q;
  FourierPotential Vneg = V.scaled(-1.0);  // V11 = -1/2 -> eps V11 < 0 at eps > 0

  double eps = 0.1;
  // delta = 0 root of pi: q^2 lam^2 = -eps V11
  double lam_pi = std::sqrt(eps * 0.5) / q;
  double root = find_fold_crossing(eps, 0.0, Vneg, W);
  CHECK(root == doctest::Approx(lam_pi).epsilon(5e-2));

  double zeta0 = std::sqrt(0.25) / q, theta0 = std::sqrt(1.0) / q;
  CHECK(root > zeta0 * std::sqrt(eps));
  CHECK(root < theta0 * std::sqrt(eps));

  // oracle: dense slice scan of the full fiber
  EdgeFrame zz = edge_frame(V.lattice, 1, 0);
  DiracOptions opt;
  opt.M = 8;
  FourierPotential Ve = V.scaled(-eps);
  DiracPointData dp = find_dirac_point(Ve, opt);
  double cross = slice_crossing(Ve, zz, dp, 8, 0.5 * root, 2.0 * root);
  CHECK(std::abs(root - cross) < 0.15 * eps + 2e-3);

  CHECK_THROWS_AS(find_fold_crossing(eps, 0.0, V, W), std::invalid_argument);
}

TEST_CASE("no-fold verdicts at eps = +-0.2 and armchair") {
  auto [V, W] = builtin_potentials();
  EdgeFrame zz = edge_frame(V.lattice, 1, 0);
  EdgeFrame ac = edge_frame(V.lattice, 1, 1);
  DiracOptions opt;
  opt.M = 8;

  FourierPotential Vp = V.scaled(0.2);
  DiracPointData dpp = find_dirac_point(Vp, opt);
  NoFoldReport pass = no_fold_check(Vp, zz, dpp, 0.01, 1.0, 8, 257);
  CHECK(pass.pass);
  CHECK(pass.c1 > 0.0);

  FourierPotential Vm = V.scaled(-0.2);
  DiracPointData dpm = find_dirac_point(Vm, opt);
  NoFoldReport fail = no_fold_check(Vm, zz, dpm, 0.01, 1.0, 8, 257);
  CHECK_FALSE(fail.pass);
  REQUIRE(fail.witness_lambda);

  NoFoldReport arm = no_fold_check(Vp, ac, dpp, 0.01, 1.0, 8, 257);
  CHECK_FALSE(arm.pass);
  REQUIRE(arm.witness_lambda);
  CHECK(std::abs(std::abs(*arm.witness_lambda) - 1.0 / 3.0) < 5e-3);
  CHECK(arm.min_pm < 1e-6);
}
