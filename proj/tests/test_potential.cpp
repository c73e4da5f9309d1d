#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "honeylat/potential.hpp"

using namespace honeylat;

TEST_CASE("builtin potentials: coefficients and validation") {
  auto [V, W] = builtin_potentials();
  CHECK(V.coeff({1, 1}).real() == doctest::Approx(0.5));
  CHECK(std::abs(V.coeff({0, 0})) == 0.0);
  CHECK((W.coeff({1, 0}) == Complex(0, -0.5)));
  CHECK((W.coeff({-1, 0}) == Complex(0, 0.5)));

  HoneycombReport hv = validate_honeycomb(V);
  CHECK(hv.pass());

  WReport hw = validate_W(W);
  CHECK(hw.pass());
  CHECK(std::abs(hw.proxy - Complex(0, -0.5)) < 1e-14);
}

TEST_CASE("validation failures") {
  TriangularLattice lat = make_lattice(1.0);
  SUBCASE("single coefficient fails rotation invariance") {
    FourierPotential P{lat, {}};
    P.set({1, 0}, 1.0);
    P.set({-1, 0}, 1.0);
    HoneycombReport rep = validate_honeycomb(P);
    CHECK(rep.real.pass);
    CHECK_FALSE(rep.rot.pass);
  }
  SUBCASE("imaginary V_{1,1} fails realness/evenness") {
    FourierPotential P{lat, {}};
    P.set({1, 1}, Complex(0, 1));
    HoneycombReport rep = validate_honeycomb(P);
    CHECK_FALSE((rep.real.pass || rep.even.pass));
  }
  SUBCASE("zero W fails nondegeneracy") {
    FourierPotential P{lat, {}};
    WReport rep = validate_W(P);
    CHECK_FALSE(rep.nondegenerate);
  }
  SUBCASE("odd W with cancelling proxy fails nondegeneracy") {
    FourierPotential P{lat, {}};
    P.set({1, 0}, Complex(0, -0.5));
    P.set({-1, 0}, Complex(0, 0.5));
    P.set({0, 1}, Complex(0, 0.5));
    P.set({0, -1}, Complex(0, -0.5));
    WReport rep = validate_W(P);
    CHECK(rep.odd.pass);
    CHECK_FALSE(rep.nondegenerate);
  }
}

TEST_CASE("grid synthesis: point values and symmetries") {
  auto [V, W] = builtin_potentials();
  CHECK(eval_at(V, Vec2(0, 0)).real() == doctest::Approx(3.0));
  CHECK(std::abs(eval_at(W, Vec2(0, 0))) < 1e-14);

  // V(R^T x) = V(x), V(-x) = V(x), W(-x) = -W(x) at random points.
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    Vec2 x(uni(rng), uni(rng));
    Complex v = eval_at(V, x);
    CHECK(std::abs(eval_at(V, Vec2(hs.R.transpose() * x)) - v) < 1e-10);
    CHECK(std::abs(eval_at(V, Vec2(-x)) - v) < 1e-10);
    CHECK(std::abs(eval_at(W, Vec2(-x)) + eval_at(W, x)) < 1e-12);
  }

  auto samples = eval_on_grid(V, 16);
  CHECK(samples.size() == 256);
  CHECK(samples[0] == doctest::Approx(3.0));

  FourierPotential bad{V.lattice, {}};
  bad.set({1, 0}, Complex(0.3, 0.4));  // not conjugate-closed
  CHECK_THROWS(eval_on_grid(bad, 8));
}

TEST_CASE("domain walls: profiles, integrals, moments") {
  DomainWall w = make_wall_tanh(1.0, 1.0);
  CHECK(w(0.0) == doctest::Approx(0.0));
  CHECK(w(30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w(-30.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(w.integral(3.0) == doctest::Approx(std::log(std::cosh(3.0))));

  WallMoments m = wall_moments(w, 2.6);
  CHECK(m.converged);
  CHECK(m.m1 > 0.0);
  CHECK(m.m2 > 0.0);

  DomainWall d = make_wall_deformed(3.0);
  CHECK(d(30.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(d(-30.0) == doctest::Approx(-1.0).epsilon(1e-10));
  // numeric cumulative integral agrees with direct quadrature
  double direct = 0.0;
  int n = 20000;
  for (int i = 0; i < n; ++i) {
    double z0 = 5.0 * i / n, z1 = 5.0 * (i + 1) / n;
    direct += 0.5 * (d(z0) + d(z1)) * (z1 - z0);
  }
  CHECK(d.integral(5.0) == doctest::Approx(direct).epsilon(1e-6));

  DomainWall mid = blend_walls(w, d, 0.5);
  CHECK(mid(0.7) == doctest::Approx(0.5 * w(0.7) + 0.5 * d(0.7)));
}

TEST_CASE("v11 scan: signs and poisson-vs-quadrature") {
  std::vector<double> as{0.6, 1.0};
  BumpSpec g = make_gaussian_bump(0.4, BumpSpec::Structure::triangular);
  auto scan = v11_scan(g, as);
  for (auto& s : scan) {
    CHECK(s.v11_poisson > 0.0);  // positive Gaussian transform
    CHECK(s.v11_quadrature == doctest::Approx(s.v11_poisson).epsilon(1e-6));
  }
  BumpSpec gh = make_gaussian_bump(0.4, BumpSpec::Structure::honeycomb);
  auto scanh = v11_scan(gh, as);
  for (auto& s : scanh) CHECK(s.v11_poisson < 0.0);
}

TEST_CASE("potential JSON round-trip and conjugate closure") {
  auto [V, W] = builtin_potentials();
  std::string path = "test_potential_roundtrip.json";
  save_potential_json(V, path);
  FourierPotential back = load_potential_json(path);
  CHECK(back.lattice.a == doctest::Approx(V.lattice.a));
  for (auto& [m, v] : V.coeffs) CHECK(std::abs(back.coeff(m) - v) < 1e-15);

  // a file with only half the coefficients gets closed automatically
  {
    std::ofstream out(path);
    out << R"({"lattice_scale": 1.0, "coeffs": [[1, 0, 0.0, -0.5]]})";
  }
  FourierPotential closed = load_potential_json(path);
  CHECK((closed.coeff({-1, 0}) == Complex(0, 0.5)));
  std::remove(path.c_str());
}
