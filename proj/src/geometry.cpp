#include "honeylat/geometry.hpp"

#include <cmath>
#include <numeric>

namespace honeylat {

TriangularLattice make_lattice(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("make_lattice: a must be positive");
  TriangularLattice lat;
  lat.a = a;
  const double s3 = std::sqrt(3.0);
  lat.v1 = a * Vec2(s3 / 2.0, 0.5);
  lat.v2 = a * Vec2(s3 / 2.0, -0.5);
  lat.q = 4.0 * kPi / (s3 * a);
  lat.k1 = lat.q * Vec2(0.5, s3 / 2.0);
  lat.k2 = lat.q * Vec2(0.5, -s3 / 2.0);
  lat.cell_area = std::abs(lat.v1.x() * lat.v2.y() - lat.v1.y() * lat.v2.x());
  return lat;
}

EdgeFrame edge_frame(const TriangularLattice& lat, int a1, int b1) {
  if (a1 == 0 && b1 == 0) throw std::invalid_argument("edge_frame: (0,0) is not a direction");
  if (std::gcd(a1, b1) != 1) throw std::invalid_argument("edge_frame: a1, b1 must be coprime");

  // Any Bezout pair works; pick the canonical one with minimal |a2|+|b2|,
  // ties broken by a2 >= 0, so frames are reproducible.
  long best_a2 = 0, best_b2 = 0;
  bool found = false;
  for (long a2 = -64; a2 <= 64; ++a2) {
    for (long b2 = -64; b2 <= 64; ++b2) {
      if (static_cast<long>(a1) * b2 - a2 * static_cast<long>(b1) != 1) continue;
      if (!found || std::abs(a2) + std::abs(b2) < std::abs(best_a2) + std::abs(best_b2) ||
          (std::abs(a2) + std::abs(b2) == std::abs(best_a2) + std::abs(best_b2) && a2 > best_a2)) {
        best_a2 = a2;
        best_b2 = b2;
        found = true;
      }
    }
  }
  if (!found) throw std::invalid_argument("edge_frame: Bezout completion failed");

  EdgeFrame ef;
  ef.a1 = a1;
  ef.b1 = b1;
  ef.a2 = static_cast<int>(best_a2);
  ef.b2 = static_cast<int>(best_b2);
  ef.frak_v1 = a1 * lat.v1 + b1 * lat.v2;
  ef.frak_v2 = ef.a2 * lat.v1 + ef.b2 * lat.v2;
  ef.frak_K1 = ef.b2 * lat.k1 - ef.a2 * lat.k2;
  ef.frak_K2 = -b1 * lat.k1 + a1 * lat.k2;

  const Vec2 K = (lat.k1 - lat.k2) / 3.0;
  double kp = std::fmod(K.dot(ef.frak_v1), 2.0 * kPi);
  if (kp < 0) kp += 2.0 * kPi;
  ef.kpar_at_K = kp;
  return ef;
}

HighSymmetryPoints high_symmetry_points(const TriangularLattice& lat) {
  HighSymmetryPoints hs;
  hs.K = (lat.k1 - lat.k2) / 3.0;
  hs.Kprime = -hs.K;
  const double s3 = std::sqrt(3.0);
  hs.R << -0.5, s3 / 2.0, -s3 / 2.0, -0.5;
  return hs;
}

}  // namespace honeylat
