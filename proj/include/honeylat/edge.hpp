#pragma once

#include "honeylat/effective.hpp"
#include "honeylat/slice.hpp"

namespace honeylat {

/// Transverse supercell for the cylinder eigenvalue problem: N cells along
/// v2_frak, plane waves exp(i [ (k_par/2pi + m1) K1 + (j/N) K2 ] . x) with
/// |m1| <= M1 and |j| <= round(N*M2). The domain wall is periodized as
/// kappa(N delta sin(theta/N)), theta = K2.x, which matches kappa(delta
/// K2.x) at the wall and places the mirror wall half a supercell away.
struct SupercellConfig {
  EdgeFrame edge;
  int N = 24;
  int M1 = 4;
  double M2 = 3.0;
  double k_par = 2.0 * kPi / 3.0;
  double eps = 10.0;
  double delta = 0.3;
  DomainWall wall;

  int J() const { return static_cast<int>(std::lround(N * M2)); }
  int dim() const { return (2 * M1 + 1) * (2 * J() + 1); }
  int index_of(int m1, int j) const { return (m1 + M1) * (2 * J() + 1) + (j + J()); }
  Vec2 momentum(int m1, int j) const {
    return (k_par / (2.0 * kPi) + m1) * edge.frak_K1 + (double(j) / N) * edge.frak_K2;
  }
  /// Wall-width separation check: 2 pi N delta >= 20 * width (in zeta units).
  bool walls_separated() const { return 2.0 * kPi * N * delta >= 20.0 * wall.width; }
};

/// Fourier coefficients c_p of the periodized wall factor as a function of
/// phi = theta/N on [0, 2pi): kappa_per = sum_p c_p e^{i p phi}. The list is
/// truncated where |c_p| < tail * kappa_inf and returned as (p, c_p) pairs.
std::vector<std::pair<int, Complex>> wall_harmonics(const DomainWall& wall, int N, double delta,
                                                    double tail = 1e-10);

/// Dense Hermitian supercell Hamiltonian -Delta + eps V + delta kappa_per W.
MatXc assemble_edge(const FourierPotential& V, const FourierPotential& W,
                    const SupercellConfig& cfg);

struct EdgeState {
  double E = 0.0;
  VecXc coeffs;               // (m1, j) plane-wave coordinates
  double transverse_center = 0.0;  // cell units
  double decay_rate = 0.0;    // amplitude rate per unit physical length
  double decay_r2 = 0.0;      // R^2 of the log-linear fit
  double ipr = 0.0;           // inverse participation ratio over cells
  bool is_localized = false;  // ipr >= 4/N and R^2 > 0.95
  std::vector<double> cell_mass;
};

/// Localization metrics from the transverse marginal density.
EdgeState classify_state(const SupercellConfig& cfg, double E, const VecXc& coeffs);

/// Eigenpairs nearest E_target by shift-invert Lanczos on the dense matrix.
std::vector<EdgeState> solve_near(const MatXc& Hedge, const SupercellConfig& cfg,
                                  double E_target, int n_eigs);

struct SweepPoint {
  double axis_value = 0.0;
  std::vector<EdgeState> states;
};

struct SpectrumSweep {
  enum class Axis { delta, k_par } axis = Axis::delta;
  std::vector<SweepPoint> points;
};

SpectrumSweep sweep_delta(const FourierPotential& V, const FourierPotential& W,
                          const std::vector<double>& delta_grid, SupercellConfig cfg,
                          double E_target, int n_eigs);

SpectrumSweep sweep_kpar(const FourierPotential& V, const FourierPotential& W,
                         const std::vector<double>& kpar_grid, SupercellConfig cfg,
                         double E_target, int n_eigs);

struct MultiscaleReport {
  double overlap_defect = 0.0;    // 1 - |projection|^2 onto the doublet span
  double decay_rate_measured = 0.0;
  double decay_rate_predicted = 0.0;  // theta kappa_inf delta / |lambda_sharp|
};

/// Compare a localized doublet against the slow-modulation ansatz
/// alpha_star(delta K2.x) Phi_pm(x) on the half-cylinder around one wall.
MultiscaleReport compare_multiscale(const std::vector<EdgeState>& doublet,
                                    const DiracPointData& dp, const SupercellConfig& cfg,
                                    const FourierPotential& V);

/// ---- Cylinder Floquet-Bloch frame ----------------------------------------

/// Bulk fiber in edge-frame coordinates at quasimomentum
/// k(l) = (k_par/2pi) K1 + (l/N) K2, with frame index window |m1| <= M1,
/// |m2| <= M2c. Bands are fiber eigenpairs.
struct FrameFiber {
  int l = 0;                  // lambda = l/N
  VecX energies;
  MatXc vectors;              // (2M1+1)(2M2c+1) x B
};

struct CylinderFrame {
  SupercellConfig cfg;
  int M2c = 3;                // frame m2 cutoff
  int B = 8;                  // bands kept per fiber
  std::vector<FrameFiber> fibers;  // l = -N/2 .. N/2-1 (restricted to lam_cut)
  std::vector<int> fiber_l;
  int frame_dim() const { return (2 * cfg.M1 + 1) * (2 * M2c + 1); }
};

/// Solve all bulk fibers of the cylinder at eps V (no wall).
CylinderFrame build_cylinder_frame(const FourierPotential& V, const SupercellConfig& cfg,
                                   int M2c, int B, double lam_cut = 0.5);

/// Floquet-Bloch analysis of a supercell coefficient vector: amplitudes
/// f_b(l) = <Phi_b(l), f>; synthesis is the adjoint. Both are exact
/// isometries onto the band-limited subspace.
MatXc cylinder_bloch_analyze(const CylinderFrame& fr, const VecXc& f);
VecXc cylinder_bloch_synthesize(const CylinderFrame& fr, const MatXc& amplitudes);

/// Reduced edge Hamiltonian in the cylinder Bloch frame: bulk band energies
/// on the diagonal plus the wall coupling. Production path for large-N,
/// small-eps configurations; validated against assemble_edge.
MatXc assemble_edge_bloch_frame(const CylinderFrame& fr, const FourierPotential& W);

/// Eigenpairs near E_target in the Bloch frame, reconstructed to plane-wave
/// supercell coordinates (J window taken large enough to hold the frame).
std::vector<EdgeState> solve_near_bloch_frame(const CylinderFrame& fr, const FourierPotential& W,
                                              double E_target, int n_eigs);

}  // namespace honeylat
