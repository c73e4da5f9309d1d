#pragma once

#include <array>
#include <utility>

#include "honeylat/common.hpp"

namespace honeylat {

using IndexPair = std::array<int, 2>;  // coefficients (m1, m2) of m1*k1 + m2*k2

/// Equilateral triangular lattice with spacing a, direct basis v1, v2 and
/// dual basis k1, k2 (k_i . v_j = 2 pi delta_ij).
struct TriangularLattice {
  double a = 1.0;
  Vec2 v1, v2;
  Vec2 k1, k2;
  double q = 0.0;          // |k1| = |k2| = 4 pi / (sqrt(3) a)
  double cell_area = 0.0;  // |v1 ^ v2| = sqrt(3) a^2 / 2

  Vec2 dual(const IndexPair& m) const { return m[0] * k1 + m[1] * k2; }
  Vec2 direct(int n1, int n2) const { return n1 * v1 + n2 * v2; }
};

TriangularLattice make_lattice(double a);

/// Rational edge frame: v1_frak = a1 v1 + b1 v2 with gcd(a1,b1)=1, completed
/// with v2_frak = a2 v1 + b2 v2 so that a1 b2 - a2 b1 = 1, plus the dual pair
/// K1_frak = b2 k1 - a2 k2, K2_frak = -b1 k1 + a1 k2.
struct EdgeFrame {
  int a1 = 1, b1 = 0;
  int a2 = 0, b2 = 1;
  Vec2 frak_v1, frak_v2;
  Vec2 frak_K1, frak_K2;
  double kpar_at_K = 0.0;  // K . v1_frak mod 2 pi

  /// Integer coordinates of m1*k1 + m2*k2 in the (K1_frak, K2_frak) basis.
  IndexPair dual_index(const IndexPair& m) const {
    return {a1 * m[0] + b1 * m[1], a2 * m[0] + b2 * m[1]};
  }
};

EdgeFrame edge_frame(const TriangularLattice& lat, int a1, int b1);

/// Brillouin-zone vertices K = (k1 - k2)/3, K' = -K, and the clockwise
/// 2 pi/3 rotation R with R^3 = I, R K = K + k2.
struct HighSymmetryPoints {
  Vec2 K, Kprime;
  Mat2 R;
};

HighSymmetryPoints high_symmetry_points(const TriangularLattice& lat);

/// Index action of the 2 pi/3 rotation on Fourier coefficients:
/// (m1, m2) -> (-m2, m1 - m2); every nonzero index has orbit length 3.
inline IndexPair rotate_index(const IndexPair& m) {
  return {-m[1], m[0] - m[1]};
}

/// Index action of R on K-pseudo-periodic plane waves: the plane wave with
/// momentum K + m.k maps to the one with momentum R(K + m.k), whose index is
/// rotate_index(m) + (0, 1).
inline IndexPair rotate_index_at_K(const IndexPair& m) {
  IndexPair r = rotate_index(m);
  return {r[0], r[1] + 1};
}

}  // namespace honeylat
