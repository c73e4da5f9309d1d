#include "honeylat/effective.hpp"

#include <algorithm>
#include <cmath>

namespace honeylat {

std::vector<double> DiracOperator1D::grid() const {
  std::vector<double> z(n);
  const double h = 2.0 * L / n;
  for (int j = 0; j < n; ++j) z[j] = -L + j * h;
  return z;
}

double DiracOperator1D::kappa_periodized(double zeta) const {
  // Reflection periodization: kappa itself on |zeta| <= L/2, the mirrored
  // profile beyond, so the anti-wall sits at +-L. Undistorted at the wall;
  // the derivative kink at +-L/2 is O(kappa'(L/2)), beyond machine epsilon
  // once the profile has saturated.
  double z = std::fmod(zeta + L, 2.0 * L);
  if (z < 0) z += 2.0 * L;
  z -= L;  // now in [-L, L)
  if (std::abs(z) <= 0.5 * L) return wall.profile(z);
  return z > 0 ? wall.profile(L - z) : wall.profile(-L - z);
}

MatXc dirac_matrix(const DiracOperator1D& D) {
  const int n = D.n;
  MatX D1 = MatX::Zero(n, n);
  const double h = 2.0 * D.L / n;
  if (D.scheme == DiracOperator1D::Scheme::fourier_spectral) {
    // Odd grids only: the even-grid spectral derivative annihilates the
    // Nyquist sawtooth, which shows up as a spurious wall-localized pair.
    if (n % 2 != 1) throw std::invalid_argument("dirac_matrix: spectral scheme needs odd n");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        int d = j - k;
        double sgn = (d % 2 == 0) ? 1.0 : -1.0;
        D1(j, k) = (kPi / (2.0 * D.L)) * sgn / std::sin(kPi * d / n);
      }
  } else {
    for (int j = 0; j < n; ++j) {
      D1(j, (j + 1) % n) = 1.0 / (2.0 * h);
      D1((j + 1) % n, j) = -1.0 / (2.0 * h);
    }
  }

  auto z = D.grid();
  MatXc H = MatXc::Zero(2 * n, 2 * n);
  H.topLeftCorner(n, n) = Complex(0, -D.vF) * D1;
  H.bottomRightCorner(n, n) = Complex(0, D.vF) * D1;
  for (int j = 0; j < n; ++j) {
    Complex c = D.theta * D.kappa_periodized(z[j]);
    H(j, n + j) = c;
    H(n + j, j) = c;
  }
  return H;
}

ZeroMode zero_mode_exact(const DiracOperator1D& D) {
  if (D.theta == 0.0) throw NumericError("zero_mode_exact: theta_sharp = 0 (degenerate coupling)");
  ZeroMode zm;
  zm.zeta = D.grid();
  const int n = D.n;
  zm.alpha_plus.resize(n);
  zm.alpha_minus.resize(n);
  // The decaying branch is (1,-i) exp(-(theta/vF) int kappa) when
  // theta * kappa(+inf) > 0, and the (1,+i) branch with the opposite
  // exponential otherwise (descending walls flip it).
  const double wall_sign = D.wall.profile(1e6) > 0 ? 1.0 : -1.0;
  const double srate = D.theta / D.vF;  // signed
  const bool minus_branch = D.theta * wall_sign > 0;
  zm.beta = std::abs(srate) * D.wall.kappa_inf;
  const Complex lower = minus_branch ? Complex(0, -1) : Complex(0, 1);
  const double expo_sign = minus_branch ? -1.0 : 1.0;
  for (int j = 0; j < n; ++j) {
    double B = expo_sign * srate * D.wall.integral(zm.zeta[j]);
    if (B > 700.0) B = 700.0;  // underflow guard
    double env = std::exp(B);
    zm.alpha_plus(j) = env;
    zm.alpha_minus(j) = lower * env;
  }
  double h = 2.0 * D.L / n;
  double nrm = std::sqrt(h * (zm.alpha_plus.squaredNorm() + zm.alpha_minus.squaredNorm()));
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw NumericError("zero_mode_exact: mode not normalizable on this domain");
  // Non-sign-changing walls give a non-normalizable profile; catch the case
  // where the envelope does not decay across the domain.
  double edge_env = std::abs(zm.alpha_plus(0));
  double peak = zm.alpha_plus.cwiseAbs().maxCoeff();
  if (edge_env > 0.5 * peak)
    throw NumericError("zero_mode_exact: profile does not decay (no domain wall)");
  zm.alpha_plus /= nrm;
  zm.alpha_minus /= nrm;
  return zm;
}

namespace {

/// Sparse build of the central-difference operator (3 entries per row).
SparseXc dirac_matrix_sparse_central(const DiracOperator1D& D) {
  const int n = D.n;
  const double h = 2.0 * D.L / n;
  auto z = D.grid();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(6 * n);
  for (int j = 0; j < n; ++j) {
    int jp = (j + 1) % n, jm = (j - 1 + n) % n;
    trip.emplace_back(j, jp, Complex(0, -D.vF) / (2.0 * h));
    trip.emplace_back(j, jm, Complex(0, D.vF) / (2.0 * h));
    trip.emplace_back(n + j, n + jp, Complex(0, D.vF) / (2.0 * h));
    trip.emplace_back(n + j, n + jm, Complex(0, -D.vF) / (2.0 * h));
    Complex c = D.theta * D.kappa_periodized(z[j]);
    trip.emplace_back(j, n + j, c);
    trip.emplace_back(n + j, j, c);
  }
  SparseXc H(2 * n, 2 * n);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

}  // namespace

DiracSpectrum dirac_spectrum(const DiracOperator1D& D, int n_eigs) {
  std::vector<EigPair> pairs;
  if (D.scheme == DiracOperator1D::Scheme::central_difference) {
    pairs = eig_near(dirac_matrix_sparse_central(D), 0.0, n_eigs);
  } else {
    pairs = eig_near_dense(dirac_matrix(D), 0.0, n_eigs);
  }
  DiracSpectrum out;
  out.energies.resize(pairs.size());
  out.vectors.resize(2 * D.n, pairs.size());
  out.spurious.resize(pairs.size(), false);
  const int n = D.n;
  for (size_t i = 0; i < pairs.size(); ++i) {
    out.energies(i) = pairs[i].value;
    out.vectors.col(i) = pairs[i].vector;
    if (D.scheme == DiracOperator1D::Scheme::central_difference) {
      // Fermion-doubling detector: grid-scale oscillation carries most of
      // the discrete-gradient mass.
      double osc = 0.0, tot = 0.0;
      for (int j = 0; j < n; ++j) {
        int jp = (j + 1) % n;
        osc += std::norm(pairs[i].vector(jp) - pairs[i].vector(j)) +
               std::norm(pairs[i].vector(n + jp) - pairs[i].vector(n + j));
        tot += std::norm(pairs[i].vector(j)) + std::norm(pairs[i].vector(n + j));
      }
      out.spurious[i] = osc > 2.0 * tot;
    }
  }
  return out;
}

InhomogeneousSolution solve_inhomogeneous_dirac(const DiracOperator1D& D, const VecXc& G) {
  MatXc H = dirac_matrix(D);
  auto [vals, vecs] = eig_hermitian(H);
  const int N = static_cast<int>(vals.size());
  int k0 = 0;
  for (int i = 1; i < N; ++i)
    if (std::abs(vals(i)) < std::abs(vals(k0))) k0 = i;
  const VecXc astar = vecs.col(k0);

  // The periodized double wall carries a near-kernel pair (one mode per
  // wall); the whole near-kernel subspace is deflated, not just astar.
  const double kernel_tol = 1e-8 * std::max(1.0, std::abs(D.theta) * D.wall.kappa_inf);

  InhomogeneousSolution sol;
  Complex Ec = -astar.dot(G);
  sol.E = Ec.real();
  VecXc rhs = G + Ec * astar;
  sol.alpha = VecXc::Zero(N);
  VecXc rhs_range = VecXc::Zero(N);
  for (int i = 0; i < N; ++i) {
    if (std::abs(vals(i)) < kernel_tol) continue;
    Complex ci = vecs.col(i).dot(rhs);
    sol.alpha += vecs.col(i) * (ci / vals(i));
    rhs_range += vecs.col(i) * ci;
  }
  sol.residual = (H * sol.alpha - rhs_range).norm();
  if (sol.residual > 1e-8 * (1.0 + rhs.norm()))
    throw NumericError("solve_inhomogeneous_dirac: residual out of tolerance");
  return sol;
}

E2Result e2_coefficient(const DiracPointData& dp, const FourierPotential& V,
                        const FourierPotential& W, const EdgeFrame& edge, const DomainWall& wall,
                        double zeta_span, int zeta_n) {
  E2Result out;
  const Vec2 K2 = edge.frak_K2;
  const double absK2 = K2.norm();
  out.vF = std::abs(dp.lambda_sharp_sum) * absK2;
  out.theta = theta_sharp(dp, W);
  const double beta = std::abs(out.theta) * wall.kappa_inf / out.vF;

  // x-side machinery on the rotation-closed window of the Dirac data.
  BlochFiber fiber = assemble_fiber_window(V, dp.K, dp.window);
  auto [vals, vecs] = eig_hermitian(fiber.H);
  const int n = dp.window.size();

  auto [phip, phim] = phi_pm(dp, K2);
  std::array<VecXc, 2> phis{phip, phim};

  auto grad_K2 = [&](const VecXc& c) {
    VecXc g(n);
    for (int i = 0; i < n; ++i) {
      Vec2 mom = dp.K + V.lattice.dual(dp.window.indices[i]);
      g(i) = Complex(0, K2.dot(mom)) * c(i);
    }
    return g;
  };
  auto mul_W = [&](const VecXc& c) {
    VecXc g = VecXc::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (std::abs(c(j)) == 0.0) continue;
      const IndexPair& mj = dp.window.indices[j];
      for (auto& [w, v] : W.coeffs)
        if (auto i = dp.window.find({mj[0] + w[0], mj[1] + w[1]})) g(*i) += v * c(j);
    }
    return g;
  };
  // Resolvent on the complement of the Dirac pair.
  const double kernel_cut = std::max(1e-6, 1e-6 * std::abs(dp.E_star));
  auto resolvent = [&](const VecXc& g) {
    VecXc r = VecXc::Zero(n);
    for (int b = 0; b < n; ++b) {
      double d = vals(b) - dp.E_star;
      if (std::abs(d) < kernel_cut) continue;
      r += vecs.col(b) * (vecs.col(b).dot(g) / d);
    }
    return r;
  };

  // Separable first-order source: G1 = sum_i f_i(zeta) g_i(x).
  std::array<VecXc, 4> g;
  g[0] = grad_K2(phis[0]);
  g[1] = grad_K2(phis[1]);
  g[2] = mul_W(phis[0]);
  g[3] = mul_W(phis[1]);
  std::array<VecXc, 4> Rg;
  for (int i = 0; i < 4; ++i) Rg[i] = resolvent(g[i]);

  // Scalar couplings <Phi_pm, (K2.grad) R g_i> and <Phi_pm, W R g_i>.
  Complex A[2][4], B[2][4];
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 4; ++i) {
      A[s][i] = phis[s].dot(grad_K2(Rg[i]));
      B[s][i] = phis[s].dot(mul_W(Rg[i]));
    }

  // zeta-side quadrature with the exact zero-mode envelope. The decaying
  // branch depends on the sign of theta * kappa(+inf): descending walls use
  // the (1,+i) spinor with the opposite exponential.
  const double span = zeta_span > 0 ? zeta_span : 30.0 / beta;
  const int nz = zeta_n > 0 ? zeta_n : std::max(20001, static_cast<int>(8.0 * span));
  const double hz = 2.0 * span / (nz - 1);
  const double wall_sign = wall.profile(1e6) > 0 ? 1.0 : -1.0;
  const bool minus_branch = out.theta * wall_sign > 0;
  const double expo = (minus_branch ? -1.0 : 1.0) * out.theta / out.vF;
  const Complex lower = minus_branch ? Complex(0, -1) : Complex(0, 1);

  // Normalize the envelope in L2(R).
  double nrm2 = 0.0;
  for (int j = 0; j < nz; ++j) {
    double z = -span + j * hz;
    double wgt = (j == 0 || j == nz - 1) ? 0.5 : 1.0;
    double B0 = std::min(expo * wall.integral(z), 700.0);
    nrm2 += wgt * hz * 2.0 * std::exp(2.0 * B0);
  }
  const double gamma = 1.0 / std::sqrt(nrm2);

  Complex acc(0, 0);
  for (int j = 0; j < nz; ++j) {
    double z = -span + j * hz;
    double wgt = (j == 0 || j == nz - 1) ? 0.5 : 1.0;
    double kap = wall.profile(z);
    double kapp = (wall.profile(z + 1e-5) - wall.profile(z - 1e-5)) / 2e-5;
    double B0 = std::min(expo * wall.integral(z), 700.0);
    double env = gamma * std::exp(B0);

    Complex ap = env, am = lower * env;
    Complex apd = expo * kap * ap, amd = expo * kap * am;
    Complex apdd = (expo * kapp + expo * expo * kap * kap) * ap;
    Complex amdd = (expo * kapp + expo * expo * kap * kap) * am;

    Complex f[4] = {2.0 * apd, 2.0 * amd, -kap * ap, -kap * am};
    Complex fd[4] = {2.0 * apdd, 2.0 * amdd, -kapp * ap - kap * apd, -kapp * am - kap * amd};

    Complex G2[2];
    for (int s = 0; s < 2; ++s) {
      G2[s] = Complex(0, 0);
      for (int i = 0; i < 4; ++i) G2[s] += 2.0 * fd[i] * A[s][i] - kap * f[i] * B[s][i];
    }
    G2[0] += absK2 * absK2 * apdd;
    G2[1] += absK2 * absK2 * amdd;

    acc += wgt * hz * (std::conj(ap) * G2[0] + std::conj(am) * G2[1]);
  }

  Complex E2 = -acc;
  out.E2 = E2.real();
  out.imag_part = std::abs(E2.imag());
  if (out.imag_part > 1e-8 * (1.0 + std::abs(out.E2)))
    throw NumericError("e2_coefficient: imaginary part out of tolerance");
  return out;
}

double effective_mass(const FourierPotential& V, const EdgeFrame& edge, int M, double h) {
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  SectorSolution sec = sector_decompose(V, hs.K, M);
  const double E_tilde = sec.energies[0](0);

  VecX e0 = eigvals_hermitian(assemble_fiber(V, hs.K, M).H);
  int b = -1;
  for (int i = 0; i < e0.size(); ++i)
    if (std::abs(e0(i) - E_tilde) < 1e-6 * std::max(1.0, std::abs(E_tilde))) {
      b = i;
      break;
    }
  if (b < 0) throw NumericError("effective_mass: tilde band not found in fiber spectrum");

  VecX ep = eigvals_hermitian(assemble_fiber(V, hs.K + h * edge.frak_K2, M).H);
  VecX em = eigvals_hermitian(assemble_fiber(V, hs.K - h * edge.frak_K2, M).H);
  double second = (ep(b) - 2.0 * e0(b) + em(b)) / (h * h);
  if (std::abs(second) < 1e-10) throw NumericError("effective_mass: flat band");
  return 1.0 / second;
}

std::vector<double> q_eff_samples(const EffectiveSchrodinger& H) {
  std::vector<double> q(H.n);
  const double h = 2.0 * H.L / (H.n + 1);
  const double kinf2 = H.wall.kappa_inf * H.wall.kappa_inf;
  for (int j = 0; j < H.n; ++j) {
    double z = -H.L + (j + 1) * h;
    double kap = H.wall.profile(z);
    double kapp = (H.wall.profile(z + 1e-5) - H.wall.profile(z - 1e-5)) / 2e-5;
    q[j] = H.a_coef * kapp + H.b_coef * (kinf2 - kap * kap);
  }
  return q;
}

std::vector<double> bound_states(const EffectiveSchrodinger& H, double margin) {
  if (H.m_eff == 0.0) throw std::invalid_argument("bound_states: m_eff must be nonzero");
  const int n = H.n;
  const double h = 2.0 * H.L / (n + 1);
  auto q = q_eff_samples(H);

  MatX A = MatX::Zero(n, n);
  const double kin = -1.0 / (2.0 * H.m_eff * h * h);
  for (int j = 0; j < n; ++j) {
    A(j, j) = -2.0 * kin + q[j];
    if (j + 1 < n) A(j, j + 1) = A(j + 1, j) = kin;
  }
  Eigen::SelfAdjointEigenSolver<MatX> es(A);

  // Gap side: above the essential edge (0) for m_eff < 0, below for > 0.
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    double E = es.eigenvalues()(i);
    bool gap_side = H.m_eff < 0 ? E > margin : E < -margin;
    if (!gap_side) continue;
    // Box artifacts are extended; keep only states carrying most of their
    // mass away from the Dirichlet ends.
    double inner = 0.0, tot = 0.0;
    for (int j = 0; j < n; ++j) {
      double z = -H.L + (j + 1) * h;
      double m = es.eigenvectors()(j, i) * es.eigenvectors()(j, i);
      tot += m;
      if (std::abs(z) < 0.4 * H.L) inner += m;
    }
    if (inner > 0.85 * tot) out.push_back(E);
  }
  return out;
}

HomotopyTrace protection_homotopy(const DomainWall& kappa, const DomainWall& kappa_flat,
                                  const std::vector<double>& theta_grid,
                                  const DiracOperator1D& dirac_template,
                                  const EffectiveSchrodinger& schrod_template) {
  HomotopyTrace tr;
  tr.theta_grid = theta_grid;
  tr.dirac_E0.resize(theta_grid.size());
  tr.schrodinger_count.resize(theta_grid.size());

  parallel_for(static_cast<int>(theta_grid.size()), [&](int i) {
    DomainWall w = blend_walls(kappa, kappa_flat, theta_grid[i]);
    DiracOperator1D D = dirac_template;
    D.wall = w;
    DiracSpectrum sp = dirac_spectrum(D, 3);
    double e0 = 1e300;
    for (int j = 0; j < sp.energies.size(); ++j) e0 = std::min(e0, std::abs(sp.energies(j)));
    tr.dirac_E0[i] = e0;

    EffectiveSchrodinger S = schrod_template;
    S.wall = w;
    tr.schrodinger_count[i] = static_cast<int>(bound_states(S).size());
  });

  for (size_t i = 0; i < theta_grid.size(); ++i)
    if (tr.schrodinger_count[i] == 0) {
      tr.theta_star = theta_grid[i];
      break;
    }
  return tr;
}

}  // namespace honeylat
