#pragma once

#include <array>
#include <optional>
#include <vector>

#include "honeylat/eigsolve.hpp"
#include "honeylat/potential.hpp"

namespace honeylat {

/// Plane-wave index window for a Bloch fiber. The default is the square
/// max(|m1|,|m2|) <= M; a momentum ball |k0 + m.k| <= radius is closed under
/// the lattice rotation and is used by the symmetry-adapted paths.
struct IndexWindow {
  std::vector<IndexPair> indices;

  static IndexWindow square(int M);
  static IndexWindow ball(const TriangularLattice& lat, const Vec2& center, double radius);
  static IndexWindow custom(std::vector<IndexPair> idx);

  int size() const { return static_cast<int>(indices.size()); }
  std::optional<int> find(const IndexPair& m) const;  // linear-free lookup

  void build_lookup();

 private:
  std::map<IndexPair, int> lookup_;
};

/// One truncated Floquet-Bloch fiber H(k) = -(grad + ik)^2 + V in the
/// plane-wave basis exp(i (k + m.k) . x) / sqrt(|cell|).
struct BlochFiber {
  Vec2 k;
  int M = 0;               // square-window parameter (0 for custom windows)
  IndexWindow window;
  const TriangularLattice* lattice = nullptr;
  MatXc H;
};

BlochFiber assemble_fiber(const FourierPotential& V, const Vec2& k, int M);
BlochFiber assemble_fiber_window(const FourierPotential& V, const Vec2& k, IndexWindow win);

struct BandSolution {
  Vec2 k;
  int M = 0;
  IndexWindow window;
  VecX energies;   // ascending
  MatXc vectors;   // columns are Fourier coefficient arrays, orthonormal
};

BandSolution solve_fiber(const BlochFiber& fiber, int n_bands);

/// Rotation-sector split of the fiber at a Brillouin-zone vertex. Basis
/// indices are grouped into orbits of m -> rotate_index(m) + (0,1); the
/// three symmetrized combinations (1, conj(s), s)/sqrt(3) per orbit carry
/// the R-eigenvalues s = 1, tau, conj(tau).
struct SectorBasis {
  IndexWindow window;                         // rotation-closed window
  std::vector<std::array<int, 3>> orbits;     // positions in window
  std::array<MatXc, 3> basis;                 // columns: sector vectors (1, tau, taubar)
};

SectorBasis sector_basis(const TriangularLattice& lat, const Vec2& K_vertex, int M);

struct SectorSolution {
  SectorBasis sectors;
  std::array<VecX, 3> energies;      // per sector, ascending
  std::array<MatXc, 3> vectors;      // sector-coordinate eigenvectors
  double max_cross_coupling = 0.0;   // worst |<u_s, H u_s'>| across sectors
};

SectorSolution sector_decompose(const FourierPotential& V, const Vec2& K_vertex, int M);

/// A two-fold degeneracy of the tau/taubar sectors at a vertex, with the
/// mode pair, cone slope and edge-coupling data.
struct DiracPointData {
  Vec2 K;
  double E_star = 0.0;
  int b_star = 0;                 // touching bands are b_star, b_star+1 (1-based)
  IndexWindow window;             // rotation-closed window the modes live in
  VecXc phi1;                     // tau-sector Fourier coefficients, unit norm
  VecXc phi2;                     // = conj(phi1) entrywise (inversion image)
  Complex lambda_sharp_sum{0, 0}; // sum_m c(m)^2 (1,i).(K + m.k), unit-L2 c
  double lambda_sharp_abs = 0.0;  // cone slope per unit |k - K| (finite differences)
  double slope_anisotropy = 0.0;  // relative spread across probe directions
  double theta_sharp = 0.0;       // <Phi_1, W Phi_1>, filled by theta_sharp()
  double gap_to_next = 0.0;       // distance to the nearest other band at K
};

struct DiracOptions {
  int M = 10;
  double degeneracy_tol_rel = 1e-8;  // * max(1, |E|)
  std::vector<double> fd_steps;      // defaults {1e-2, 5e-3, 2.5e-3} * q
  int fd_directions = 4;
};

/// Locate the Dirac pair of V at the vertex K. Throws NumericError when the
/// tau/taubar eigenvalues do not coincide (not-a-Dirac-point) or when the
/// trivial sector collides with them (ambiguous multiplicity).
DiracPointData find_dirac_point(const FourierPotential& V, const DiracOptions& opt = {});

/// Cone slope |lambda_sharp| by Richardson-extrapolated directional finite
/// differences, plus anisotropy across directions. Throws when the spread
/// exceeds 2%. Also returns the Fourier-sum cross-check value.
struct ConeSlope {
  double slope = 0.0;          // mean over directions
  double anisotropy = 0.0;     // (max-min)/mean
  double fourier_sum = 0.0;    // |sum c(m)^2 (1,i).(K+m.k)|
};

ConeSlope lambda_sharp(const DiracPointData& dp, const FourierPotential& V, int M);

/// theta_sharp = <Phi_1, W Phi_1> as a Fourier-side bilinear form. Throws
/// when the imaginary part exceeds 1e-10 (W fails the symmetry assumptions).
double theta_sharp(const DiracPointData& dp, const FourierPotential& W);

/// <Phi_a, W Phi_b> for a,b in {1,2}.
Complex w_matrix_element(const DiracPointData& dp, const FourierPotential& W, int a, int b);

/// The edge-adapted combinations Phi_pm = (e^{i theta} Phi_1 +- Phi_2)/sqrt2
/// with e^{i theta} = conj(lambda_sharp) z2 / (|lambda_sharp| |z2|).
std::pair<VecXc, VecXc> phi_pm(const DiracPointData& dp, const Vec2& frak_K2);

struct PerturbativeRow {
  double eps = 0.0;
  double E_star = 0.0;
  double E_tilde = 0.0;
  double slope = 0.0;  // cone slope at this eps
};

/// Small-eps table of the vertex eigenvalues and cone slopes for eps in
/// eps_list, plus linear fits of (E - |K|^2)/eps extrapolated to eps -> 0.
struct PerturbativeCheck {
  std::vector<PerturbativeRow> rows;
  double fit_E_star_slope = 0.0;   // -> V_00 - V_11
  double fit_E_tilde_slope = 0.0;  // -> V_00 + 2 V_11
  double slope_limit = 0.0;        // cone slope extrapolated to eps -> 0
};

PerturbativeCheck perturbative_check(const FourierPotential& V,
                                     const std::vector<double>& eps_list, int M);

struct BandSurfaceSample {
  double k1_frac, k2_frac;
  int b;
  double E;
};

/// Dispersion surfaces over a BZ grid; k = f1 k1 + f2 k2, f in [-1/2, 1/2).
std::vector<BandSurfaceSample> band_surface(const FourierPotential& V, int n_grid, int n_bands,
                                            int M);

}  // namespace honeylat
