#pragma once

#include "honeylat/bloch.hpp"

namespace honeylat {

/// One band along the dual slice lambda -> E_b(K + lambda K2_frak).
struct SliceCurve {
  EdgeFrame edge;
  int b = 1;  // 1-based band index
  std::vector<double> lambdas;
  std::vector<double> energies;
};

std::vector<SliceCurve> dispersion_slice(const FourierPotential& V, const EdgeFrame& edge,
                                         const std::vector<double>& lambda_grid, int n_bands,
                                         int M);

/// Uniform grid of n points on [-1/2, 1/2].
std::vector<double> uniform_lambda_grid(int n = 513);

struct NoFoldReport {
  bool pass = false;
  double a_param = 0.0;   // window parameter: inner cutoff is a_param^nu
  double nu = 1.0;
  double c1 = 0.0;        // min |E_pm - E*| / omega(a^nu), omega(a) = a^2
  double c2 = 0.0;        // min over other bands of |E_b - E*| / (1+b)
  double min_pm = 0.0;    // min over window of |E_pm - E*|
  double min_pm_over_lambda2 = 0.0;  // min over window of |E_pm - E*| / lambda^2
  std::optional<double> witness_lambda;  // where a touching band returns to E*
  std::vector<double> witnesses;  // every refined crossing found in the window
};

/// Certify the no-fold condition for the given edge at the Dirac point:
/// the touching bands must stay c1 * (a^nu)^2 away from E* for
/// a^nu <= |lambda| <= 1/2, and every other band (1+b)-proportionally far.
/// On failure the witness lambda of the closest return is reported.
NoFoldReport no_fold_check(const FourierPotential& V, const EdgeFrame& edge,
                           const DiracPointData& dp, double a_param, double nu, int M,
                           int grid_n = 513);

/// 3x3 reduction of the zigzag fiber near the vertex; entries follow the
/// small-parameter expansion with the rotation-sector basis (1, tau, taubar).
struct ReducedMatrix {
  double eps = 0.0, delta = 0.0, lam = 0.0;
  Eigen::Matrix3cd M0approx, MV, MW, J;
  Eigen::Matrix3cd total;
};

/// Builds M^approx(eps, delta, lambda) for potentials V, W given through
/// their distinguished coefficients. Throws if the W data are not odd/pure
/// imaginary (w_ij must come out real).
ReducedMatrix m_approx(double eps, double delta, double lam, const FourierPotential& V,
                       const FourierPotential& W);

/// Closed-form free roots mu_j(lambda), ascending, valid on either sign.
std::array<double, 3> mu0_roots(double lam, double q);

struct DetVsPi {
  double det_approx = 0.0;  // det M^approx (real up to roundoff)
  double pi = 0.0;          // (q^2 l^2 + eps V11)(q^4 l^2 + delta^2 |Wsum|^2)
  double residual = 0.0;    // |det + pi|
  bool in_region = true;    // |lam| <= C_flat sqrt(eps), |delta| <= c_flat eps^2
};

DetVsPi det_vs_pi(double eps, double delta, double lam, const FourierPotential& V,
                  const FourierPotential& W, double C_flat = 0.0, double c_flat = 1.0);

/// Root of det M^approx(eps, delta, . , 0) in the bracket
/// (zeta0 sqrt(eps), theta0 sqrt(eps)); requires eps V11 < 0.
double find_fold_crossing(double eps, double delta, const FourierPotential& V,
                          const FourierPotential& W, double tol = 1e-10);

/// Dense-scan slice crossing: lambda > 0 minimizing |E_b(K + lambda k2) - E*|
/// over the touching bands, refined by golden-section. Used as the oracle
/// for find_fold_crossing.
double slice_crossing(const FourierPotential& V, const EdgeFrame& edge, const DiracPointData& dp,
                      int M, double lo, double hi);

}  // namespace honeylat
