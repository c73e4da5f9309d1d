#pragma once

#include "honeylat/bloch.hpp"
#include "honeylat/geometry.hpp"
#include "honeylat/potential.hpp"

namespace honeylat {

/// 1D Dirac operator D = -i vF sigma3 d/dzeta + theta kappa(zeta) sigma1 on a
/// periodized grid. The wall is periodized with its mirror image half a
/// period away so kappa is smooth on the circle.
struct DiracOperator1D {
  double vF = 1.0;      // |lambda_sharp| |K2_frak|
  double theta = 1.0;   // theta_sharp
  DomainWall wall;
  double L = 40.0;      // domain is [-L, L)
  int n = 513;          // grid points (odd for the spectral scheme)
  enum class Scheme { fourier_spectral, central_difference } scheme = Scheme::fourier_spectral;

  std::vector<double> grid() const;
  /// Periodized wall sample: kappa((2L/pi) * ... ) via the sine substitution,
  /// which matches kappa near zeta = 0 and places the mirror wall at +-L.
  double kappa_periodized(double zeta) const;
};

/// Dense 2n x 2n Hermitian discretization; ordering is (spinor up, spinor dn)
/// per grid point blocked as [up; dn].
MatXc dirac_matrix(const DiracOperator1D& D);

struct ZeroMode {
  std::vector<double> zeta;
  VecXc alpha_plus;
  VecXc alpha_minus;
  double beta = 0.0;  // asymptotic decay rate theta kappa_inf / vF
};

/// Closed-form zero mode alpha = gamma (1, -i)^T exp(-(theta/vF) int_0^z kappa),
/// L2-normalized on the grid of D (gamma real positive). For theta < 0 the
/// spinor is flipped to (1, +i)^T with the decaying exponential.
ZeroMode zero_mode_exact(const DiracOperator1D& D);

struct DiracSpectrum {
  VecX energies;              // eigenvalues nearest zero, ascending by |E|
  MatXc vectors;              // 2n-coordinate eigenvectors
  std::vector<bool> spurious; // high-frequency (doubling) flags, central differences only
};

DiracSpectrum dirac_spectrum(const DiracOperator1D& D, int n_eigs);

/// Solve D alpha = G + E alpha_star on the orthogonal complement of the zero
/// mode; returns E = -<alpha_star, G> and the minimal-norm correction.
struct InhomogeneousSolution {
  double E = 0.0;
  VecXc alpha;      // 2n coordinates
  double residual = 0.0;
};

InhomogeneousSolution solve_inhomogeneous_dirac(const DiracOperator1D& D, const VecXc& G);

/// Second-order energy coefficient of the edge-state branch: builds the
/// first-order corrector through the x-side resolvent at the Dirac energy and
/// evaluates E2 = -<alpha_star, G2>.
struct E2Result {
  double E2 = 0.0;
  double imag_part = 0.0;   // |Im| diagnostic, must be ~0
  double vF = 0.0;
  double theta = 0.0;
};

E2Result e2_coefficient(const DiracPointData& dp, const FourierPotential& V,
                        const FourierPotential& W, const EdgeFrame& edge, const DomainWall& wall,
                        double zeta_span = 0.0, int zeta_n = 0);

/// Effective band-edge Schroedinger model H = -(1/2m) d^2/dz^2 + Q(z),
/// Q = a kappa' + b (kappa_inf^2 - kappa^2).
struct EffectiveSchrodinger {
  double m_eff = 1.0;
  double a_coef = 1.0, b_coef = 1.0;
  DomainWall wall;
  double L = 150.0;   // shallow gap states decay slowly; keep the box large
  int n = 1200;
};

/// Directional effective mass from centered second differences of the tilde
/// band along K2_frak: 1/m = d^2/dt^2 E_tilde(K + t K2_frak).
double effective_mass(const FourierPotential& V, const EdgeFrame& edge, int M, double h = 1e-3);

/// Q_eff samples on the operator grid.
std::vector<double> q_eff_samples(const EffectiveSchrodinger& H);

/// Discrete eigenvalues split off the essential spectrum on the gap side:
/// above 0 for m_eff < 0, below 0 for m_eff > 0. Dirichlet ends.
std::vector<double> bound_states(const EffectiveSchrodinger& H, double margin = 1e-6);

struct HomotopyTrace {
  std::vector<double> theta_grid;
  std::vector<double> dirac_E0;           // Dirac eigenvalue nearest zero per theta
  std::vector<int> schrodinger_count;     // bound states near the band edge per theta
  std::optional<double> theta_star;       // first theta with no bound state
};

/// Trace the Dirac zero mode and the Schroedinger gap eigenvalue along the
/// wall homotopy (1-theta) kappa + theta kappa_flat.
HomotopyTrace protection_homotopy(const DomainWall& kappa, const DomainWall& kappa_flat,
                                  const std::vector<double>& theta_grid,
                                  const DiracOperator1D& dirac_template,
                                  const EffectiveSchrodinger& schrod_template);

}  // namespace honeylat
