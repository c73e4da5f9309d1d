#include <doctest.h>

#include <numeric>

#include "honeylat/geometry.hpp"

using namespace honeylat;

TEST_CASE("lattice constants at a = 1") {
  TriangularLattice lat = make_lattice(1.0);
  CHECK(lat.q == doctest::Approx(4.0 * kPi / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(lat.cell_area == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  CHECK(lat.v1.norm() == doctest::Approx(1.0));
  CHECK(lat.v2.norm() == doctest::Approx(1.0));
  CHECK(lat.v1.dot(lat.v2) == doctest::Approx(0.5));
  CHECK(lat.k1.norm() == doctest::Approx(lat.q));
  CHECK(lat.k1.dot(lat.k2) == doctest::Approx(-0.5 * lat.q * lat.q));
  // biorthogonality
  CHECK(std::abs(lat.k1.dot(lat.v1) - 2.0 * kPi) < 1e-14 * 2.0 * kPi);
  CHECK(std::abs(lat.k2.dot(lat.v2) - 2.0 * kPi) < 1e-14 * 2.0 * kPi);
  CHECK(std::abs(lat.k1.dot(lat.v2)) < 1e-13);
  CHECK(std::abs(lat.k2.dot(lat.v1)) < 1e-13);
}

TEST_CASE("scaling law: a = 2 halves q") {
  TriangularLattice lat = make_lattice(2.0);
  CHECK(lat.q == doctest::Approx(2.0 * kPi / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(lat.cell_area == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(make_lattice(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(-1.0), std::invalid_argument);
}

TEST_CASE("high-symmetry points and rotation") {
  TriangularLattice lat = make_lattice(1.0);
  HighSymmetryPoints hs = high_symmetry_points(lat);
  CHECK((hs.K - (lat.k1 - lat.k2) / 3.0).norm() < 1e-14);
  CHECK((hs.Kprime + hs.K).norm() < 1e-14);
  CHECK((hs.R * hs.R * hs.R - Mat2::Identity()).norm() < 1e-14);
  // R K = K + k2
  CHECK((hs.R * hs.K - (hs.K + lat.k2)).norm() < 1e-13);
  // R k1 = k2
  CHECK((hs.R * lat.k1 - lat.k2).norm() < 1e-13);
}

TEST_CASE("edge frames: zigzag and armchair") {
  TriangularLattice lat = make_lattice(1.0);
  EdgeFrame zz = edge_frame(lat, 1, 0);
  CHECK((zz.frak_K1 - lat.k1).norm() < 1e-14);
  CHECK((zz.frak_K2 - lat.k2).norm() < 1e-14);
  CHECK(zz.kpar_at_K == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-13));

  EdgeFrame ac = edge_frame(lat, 1, 1);
  CHECK((ac.frak_K2 - (lat.k2 - lat.k1)).norm() < 1e-13);
  // K . v1_frak = 0 mod 2 pi for the armchair
  double kp = std::fmod(ac.kpar_at_K, 2.0 * kPi);
  CHECK(std::min(kp, 2.0 * kPi - kp) < 1e-12);

  CHECK_THROWS_AS(edge_frame(lat, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(edge_frame(lat, 0, 0), std::invalid_argument);
}

TEST_CASE("edge frames: biorthogonality and unimodularity over coprime pairs") {
  TriangularLattice lat = make_lattice(1.0);
  for (int a1 = -20; a1 <= 20; ++a1)
    for (int b1 = -20; b1 <= 20; ++b1) {
      if ((a1 == 0 && b1 == 0) || std::gcd(a1, b1) != 1) continue;
      EdgeFrame ef = edge_frame(lat, a1, b1);
      CHECK(ef.a1 * ef.b2 - ef.a2 * ef.b1 == 1);
      double s = 2.0 * kPi;
      CHECK(std::abs(ef.frak_K1.dot(ef.frak_v1) - s) < 1e-13 * s);
      CHECK(std::abs(ef.frak_K2.dot(ef.frak_v2) - s) < 1e-13 * s);
      CHECK(std::abs(ef.frak_K1.dot(ef.frak_v2)) < 1e-11);
      CHECK(std::abs(ef.frak_K2.dot(ef.frak_v1)) < 1e-11);
    }
}

TEST_CASE("rotate_index orbits") {
  CHECK((rotate_index({1, 0}) == IndexPair{0, 1}));
  CHECK((rotate_index({0, 0}) == IndexPair{0, 0}));
  // (1,1) -> (-1,0) -> (0,-1) -> (1,1)
  IndexPair m{1, 1};
  IndexPair m2 = rotate_index(m);
  CHECK((m2 == IndexPair{-1, 0}));
  IndexPair m3 = rotate_index(m2);
  CHECK((m3 == IndexPair{0, -1}));
  CHECK((rotate_index(m3) == m));

  // every nonzero index has orbit of length exactly three
  for (int m1 = -6; m1 <= 6; ++m1)
    for (int mm2 = -6; mm2 <= 6; ++mm2) {
      if (m1 == 0 && mm2 == 0) continue;
      IndexPair a{m1, mm2};
      IndexPair b = rotate_index(a);
      IndexPair cc = rotate_index(b);
      CHECK((a != b));
      CHECK((a != cc));
      CHECK((rotate_index(cc) == a));
    }
}
