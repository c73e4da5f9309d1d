#include <doctest.h>

#include <random>

#include "honeylat/bloch.hpp"

using namespace honeylat;

namespace {
std::pair<FourierPotential, FourierPotential> VW() { return builtin_potentials(); }
}  // namespace

TEST_CASE("free fiber is diagonal; triple degeneracy at K") {
  auto [V, W] = VW();
  FourierPotential zero{V.lattice, {}};
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);

  BlochFiber f = assemble_fiber(zero, hs.K, 3);
  CHECK((f.H - MatXc(f.H.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

  BandSolution s = solve_fiber(f, 4);
  double E0 = hs.K.squaredNorm();
  CHECK(s.energies(0) == doctest::Approx(E0).epsilon(1e-13));
  CHECK(s.energies(1) == doctest::Approx(E0).epsilon(1e-13));
  CHECK(s.energies(2) == doctest::Approx(E0).epsilon(1e-13));
  CHECK(s.energies(3) > E0 + 1.0);
  CHECK(E0 == doctest::Approx(16.0 * kPi * kPi / 9.0));  // |K| = 4 pi / 3
}

TEST_CASE("fiber assembly: Hermiticity and coupling pattern") {
  auto [V, W] = VW();
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  BlochFiber f = assemble_fiber(V, hs.K, 1);
  CHECK((f.H - f.H.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  // off-diagonal entries 1/2 exactly at stored index differences
  for (int i = 0; i < f.window.size(); ++i)
    for (int j = 0; j < f.window.size(); ++j) {
      if (i == j) continue;
      IndexPair d{f.window.indices[i][0] - f.window.indices[j][0],
                  f.window.indices[i][1] - f.window.indices[j][1]};
      Complex want = V.coeff(d);
      CHECK(std::abs(f.H(i, j) - want) < 1e-15);
    }
}

TEST_CASE("dual-lattice periodicity of the spectrum") {
  auto [V, W] = VW();
  FourierPotential Ve = V.scaled(1.3);
  Vec2 k = 0.21 * V.lattice.k1 + 0.17 * V.lattice.k2;
  VecX a = solve_fiber(assemble_fiber(Ve, k, 8), 5).energies;
  VecX b = solve_fiber(assemble_fiber(Ve, k + V.lattice.k1, 8), 5).energies;
  // same fiber after re-centering the truncation window
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("time-reversal and rotation invariance of bands") {
  auto [V, W] = VW();
  FourierPotential Ve = V.scaled(2.0);
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  for (int t = 0; t < 4; ++t) {
    Vec2 k = uni(rng) * V.lattice.k1 + uni(rng) * V.lattice.k2;
    VecX e1 = solve_fiber(assemble_fiber(Ve, k, 8), 4).energies;
    VecX e2 = solve_fiber(assemble_fiber(Ve, -k, 8), 4).energies;
    CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-9);
    // rotation with a ball window (rotation-closed truncation)
    double rad = 5.5 * V.lattice.q;
    VecX r1 = eigvals_hermitian(
        assemble_fiber_window(Ve, k, IndexWindow::ball(V.lattice, k, rad)).H);
    VecX r2 = eigvals_hermitian(
        assemble_fiber_window(Ve, Vec2(hs.R * k), IndexWindow::ball(V.lattice, Vec2(hs.R * k), rad)).H);
    CHECK((r1.head(5) - r2.head(5)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("truncation convergence at eps = 10") {
  auto [V, W] = VW();
  FourierPotential Ve = V.scaled(10.0);
  Vec2 k = 0.13 * V.lattice.k1 - 0.29 * V.lattice.k2;
  VecX e8 = solve_fiber(assemble_fiber(Ve, k, 8), 5).energies;
  VecX e10 = solve_fiber(assemble_fiber(Ve, k, 10), 5).energies;
  CHECK((e8 - e10).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sector decomposition at K") {
  auto [V, W] = VW();
  FourierPotential Ve = V.scaled(10.0);
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  SectorSolution sec = sector_decompose(Ve, hs.K, 8);

  // block-diagonalization: no cross-sector coupling
  CHECK(sec.max_cross_coupling < 1e-10);

  // dimensions partition the rotation-closed window
  int total = 0;
  for (int s = 0; s < 3; ++s) total += static_cast<int>(sec.energies[s].size());
  CHECK(total == sec.sectors.window.size());

  // sector spectra reproduce the fiber spectrum
  BlochFiber f = assemble_fiber_window(Ve, hs.K, sec.sectors.window);
  VecX full = eigvals_hermitian(f.H);
  std::vector<double> merged;
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < sec.energies[s].size(); ++i) merged.push_back(sec.energies[s](i));
  std::sort(merged.begin(), merged.end());
  for (int i = 0; i < 8; ++i) CHECK(merged[i] == doctest::Approx(full(i)).epsilon(1e-10));

  // explicit sigma-combination for the orbit of m = (0,0)
  auto i00 = sec.sectors.window.find({0, 0});
  auto i01 = sec.sectors.window.find({0, 1});
  auto im10 = sec.sectors.window.find({-1, 0});
  REQUIRE(i00);
  REQUIRE(i01);
  REQUIRE(im10);
  // the orbit containing (0,0) must cycle (0,0) -> (0,1) -> (-1,0)
  bool found = false;
  for (auto& orb : sec.sectors.orbits)
    for (int r = 0; r < 3; ++r)
      if (orb[r] == *i00) {
        CHECK(orb[(r + 1) % 3] == *i01);
        CHECK(orb[(r + 2) % 3] == *im10);
        found = true;
      }
  CHECK(found);
}

TEST_CASE("Dirac point at eps = +-10 and error paths") {
  auto [V, W] = VW();
  DiracOptions opt;
  opt.M = 8;

  DiracPointData dp = find_dirac_point(V.scaled(10.0), opt);
  CHECK(dp.b_star == 1);
  CHECK(dp.E_star < high_symmetry_points(V.lattice).K.squaredNorm());
  CHECK(std::abs(dp.phi1.dot(dp.phi1)) == doctest::Approx(1.0));
  // phi2 = entrywise conjugate, orthogonal to phi1
  CHECK(std::abs(dp.phi1.dot(dp.phi2)) < 1e-10);

  DiracPointData dm = find_dirac_point(V.scaled(-10.0), opt);
  CHECK(dm.b_star == 2);

  FourierPotential zero{V.lattice, {}};
  CHECK_THROWS_AS(find_dirac_point(zero, opt), NumericError);  // triple degeneracy
}

TEST_CASE("cone slope: finite differences match the Fourier sum") {
  auto [V, W] = VW();
  DiracOptions opt;
  opt.M = 8;
  for (double eps : {0.3, 10.0}) {
    DiracPointData dp = find_dirac_point(V.scaled(eps), opt);
    ConeSlope cs = lambda_sharp(dp, V.scaled(eps), 8);
    CHECK(cs.anisotropy < 0.01);
    CHECK(cs.slope == doctest::Approx(cs.fourier_sum).epsilon(2e-3));
  }
  // free limit of the Fourier sum is |K| = q / sqrt(3)
  DiracPointData dp = find_dirac_point(V.scaled(0.01), opt);
  CHECK(std::abs(dp.lambda_sharp_sum) ==
        doctest::Approx(V.lattice.q / std::sqrt(3.0)).epsilon(1e-4));
}

TEST_CASE("theta_sharp: small-eps limit and matrix elements") {
  auto [V, W] = VW();
  DiracOptions opt;
  opt.M = 8;
  DiracPointData dp = find_dirac_point(V.scaled(0.02), opt);
  double th = theta_sharp(dp, W);
  CHECK(th == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-3));

  // <Phi_1, W Phi_2> = 0 and <Phi_2, W Phi_2> = -theta
  CHECK(std::abs(w_matrix_element(dp, W, 1, 2)) < 1e-10);
  CHECK(w_matrix_element(dp, W, 2, 2).real() == doctest::Approx(-th).epsilon(1e-10));

  FourierPotential zero{V.lattice, {}};
  CHECK(theta_sharp(dp, zero) == 0.0);
}

TEST_CASE("edge-adapted pair: derivative and W inner products") {
  auto [V, W] = VW();
  EdgeFrame zz = edge_frame(V.lattice, 1, 0);
  DiracOptions opt;
  opt.M = 8;
  DiracPointData dp = find_dirac_point(V.scaled(0.4), opt);
  auto [plus, minus] = phi_pm(dp, zz.frak_K2);

  auto grad = [&](const VecXc& c) {
    VecXc g(dp.window.size());
    for (int i = 0; i < dp.window.size(); ++i) {
      Vec2 mom = dp.K + V.lattice.dual(dp.window.indices[i]);
      g(i) = Complex(0, zz.frak_K2.dot(mom)) * c(i);
    }
    return g;
  };
  const double lam = std::abs(dp.lambda_sharp_sum);
  const double z2 = zz.frak_K2.norm();
  Complex dpp = 2.0 * plus.dot(grad(plus));
  Complex dmm = 2.0 * minus.dot(grad(minus));
  Complex dpm = plus.dot(grad(minus));
  CHECK(std::abs(dpp - Complex(0, lam * z2)) < 1e-6 * lam * z2);
  CHECK(std::abs(dmm + Complex(0, lam * z2)) < 1e-6 * lam * z2);
  CHECK(std::abs(dpm) < 1e-8);

  // <Phi_+, W Phi_+> = <Phi_-, W Phi_-> = 0 and <Phi_+, W Phi_-> = theta real
  auto wme = [&](const VecXc& a, const VecXc& b) {
    Complex acc(0, 0);
    for (int j = 0; j < dp.window.size(); ++j) {
      const IndexPair& mj = dp.window.indices[j];
      if (std::abs(b(j)) == 0.0) continue;
      for (auto& [w, v] : W.coeffs)
        if (auto i = dp.window.find({mj[0] + w[0], mj[1] + w[1]}))
          acc += std::conj(a(*i)) * v * b(j);
    }
    return acc;
  };
  double th = theta_sharp(dp, W);
  CHECK(std::abs(wme(plus, plus)) < 1e-10);
  CHECK(std::abs(wme(minus, minus)) < 1e-10);
  Complex cross = wme(plus, minus);
  CHECK(std::abs(cross.imag()) < 1e-10);
  CHECK(cross.real() == doctest::Approx(th).epsilon(1e-8));
}

TEST_CASE("perturbative expansions: first-order coefficients and gap") {
  auto [V, W] = VW();
  PerturbativeCheck pc = perturbative_check(V, {0.02, 0.04, 0.08}, 8);
  CHECK(pc.fit_E_star_slope == doctest::Approx(-0.5).epsilon(2e-3));
  CHECK(pc.fit_E_tilde_slope == doctest::Approx(1.0).epsilon(2e-3));
  // gap Etilde - E* -> 3 eps V11
  for (auto& r : pc.rows)
    CHECK((r.E_tilde - r.E_star) / r.eps == doctest::Approx(1.5).epsilon(0.05));

  // constant shift: V = c exactly shifts E*
  FourierPotential Vc{V.lattice, {}};
  Vc.set({0, 0}, 0.7);
  DiracOptions opt;
  opt.M = 6;
  // constant potential keeps the free triple degeneracy -> not a Dirac point
  CHECK_THROWS(find_dirac_point(Vc, opt));
}

TEST_CASE("band surface sampling") {
  auto [V, W] = VW();
  auto samples = band_surface(V.scaled(10.0), 6, 2, 6);
  CHECK(samples.size() == 6 * 6 * 2);
  for (auto& s : samples) CHECK(s.E > -10.0);
}
