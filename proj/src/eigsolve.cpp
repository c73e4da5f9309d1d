#include "honeylat/eigsolve.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace honeylat {

std::pair<VecX, MatXc> eig_hermitian(const MatXc& H) {
  Eigen::SelfAdjointEigenSolver<MatXc> es(H);
  if (es.info() != Eigen::Success) throw NumericError("dense Hermitian eigensolve failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

VecX eigvals_hermitian(const MatXc& H) {
  Eigen::SelfAdjointEigenSolver<MatXc> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("dense Hermitian eigensolve failed");
  return es.eigenvalues();
}

namespace {

/// Lanczos with full reorthogonalization on a linear operator apply().
/// Returns Ritz pairs of the OPERATOR (values are of (H-sigma)^{-1}).
struct LanczosResult {
  VecX theta;      // Ritz values, |theta| descending
  MatXc vectors;   // Ritz vectors
};

template <class Apply>
LanczosResult lanczos(const Apply& apply, int n, int m, double tol, int want) {
  m = std::min(m, n);
  MatXc V(n, m + 1);
  VecX alpha(m), beta(m);
  VecXc v = VecXc::Random(n);
  v.normalize();
  V.col(0) = v;
  int k = 0;
  for (; k < m; ++k) {
    VecXc w = apply(V.col(k));
    Complex a = V.col(k).dot(w);
    alpha(k) = a.real();
    w -= a * V.col(k);
    if (k > 0) w -= Complex(beta(k - 1)) * V.col(k - 1);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
    beta(k) = w.norm();
    if (beta(k) < 1e-14) {
      ++k;
      break;
    }
    V.col(k + 1) = w / beta(k);

    // Convergence probe every few steps: the smallest wanted Ritz residual.
    if (k + 1 >= want + 2 && (k % 8 == 0 || k + 1 == m)) {
      MatX T = MatX::Zero(k + 1, k + 1);
      for (int i = 0; i <= k; ++i) {
        T(i, i) = alpha(i);
        if (i < k) T(i, i + 1) = T(i + 1, i) = beta(i);
      }
      Eigen::SelfAdjointEigenSolver<MatX> es(T);
      VecX th = es.eigenvalues();
      std::vector<int> order(k + 1);
      for (int i = 0; i <= k; ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](int a2, int b2) { return std::abs(th(a2)) > std::abs(th(b2)); });
      double worst = 0.0;
      for (int i = 0; i < std::min(want, k + 1); ++i) {
        int j = order[i];
        double resid = beta(k) * std::abs(es.eigenvectors()(k, j));
        worst = std::max(worst, resid / std::max(1e-300, std::abs(th(j))));
      }
      if (worst < tol) {
        ++k;
        break;
      }
    }
  }

  MatX T = MatX::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = alpha(i);
    if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta(i);
  }
  Eigen::SelfAdjointEigenSolver<MatX> es(T);
  VecX th = es.eigenvalues();
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a2, int b2) { return std::abs(th(a2)) > std::abs(th(b2)); });

  LanczosResult out;
  out.theta.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.theta(i) = th(order[i]);
    out.vectors.col(i) = V.leftCols(k) * es.eigenvectors().col(order[i]);
  }
  return out;
}

/// Lanczos + subspace-iteration polish + Rayleigh-Ritz on any factorized
/// solver of (H - sigma I). MultH applies the original matrix.
template <class Solve, class MultH>
std::vector<EigPair> shift_invert_driver(const Solve& solve, const MultH& mulH, int n,
                                         double sigma, int n_eigs, int max_iter, double tol) {
  if (max_iter <= 0) max_iter = std::min(n, std::max(120, 8 * n_eigs + 60));

  auto apply = [&](const VecXc& v) -> VecXc { return solve(v); };
  LanczosResult lr = lanczos(apply, n, max_iter, tol, n_eigs);

  int keep = std::min<int>(n_eigs, lr.theta.size());
  if (keep == 0) return {};
  MatXc V(n, keep);
  for (int i = 0; i < keep; ++i) V.col(i) = lr.vectors.col(i);

  // Subspace-iteration polish: inverted applies wash out the residual angle
  // left by the Lanczos stopping test, then a Rayleigh-Ritz projection
  // untangles near-degenerate pairs. Iterate until the Ritz residuals
  // saturate.
  MatXc HV(n, keep), S, rotated;
  Eigen::SelfAdjointEigenSolver<MatXc> rr;
  double scale_probe = 1.0;
  for (int pass = 0; pass < 30; ++pass) {
    MatXc Wm(n, keep);
    for (int i = 0; i < keep; ++i) Wm.col(i) = solve(V.col(i));
    Eigen::HouseholderQR<MatXc> qr(Wm);
    V = qr.householderQ() * MatXc::Identity(n, keep);

    for (int i = 0; i < keep; ++i) HV.col(i) = mulH(V.col(i));
    S = V.adjoint() * HV;
    S = 0.5 * (S + S.adjoint()).eval();
    rr.compute(S);
    rotated = V * rr.eigenvectors();
    scale_probe = std::max(1.0, rr.eigenvalues().cwiseAbs().maxCoeff());
    double worst = 0.0;
    for (int i = 0; i < keep; ++i)
      worst = std::max(worst,
                       (mulH(rotated.col(i)) - rr.eigenvalues()(i) * rotated.col(i)).norm());
    if (worst < 1e-11 * scale_probe) break;
  }

  // Residual filter: the inverted iteration amplifies an exactly-degenerate
  // near-kernel so strongly that leftover subspace directions lose accuracy;
  // such directions carry O(1) residuals and are dropped here.
  double scale = 1.0;
  for (int i = 0; i < keep; ++i) scale = std::max(scale, std::abs(rr.eigenvalues()(i)));
  std::vector<EigPair> out;
  out.reserve(keep);
  for (int i = 0; i < keep; ++i) {
    EigPair p;
    p.vector = rotated.col(i);
    p.vector.normalize();
    p.value = rr.eigenvalues()(i);
    double resid = (mulH(p.vector) - p.value * p.vector).norm();
    if (resid > 1e-8 * (1.0 + std::abs(p.value) + scale)) continue;
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [&](const EigPair& a, const EigPair& b) {
    return std::abs(a.value - sigma) < std::abs(b.value - sigma);
  });
  return out;
}

}  // namespace

std::vector<EigPair> eig_near_dense(const MatXc& H, double sigma, int n_eigs, int max_iter,
                                    double tol) {
  const int n = static_cast<int>(H.rows());
  if (n <= 800) {  // below the crossover a full solve is cheaper and exact
    auto [vals, vecs] = eig_hermitian(H);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(vals(a) - sigma) < std::abs(vals(b) - sigma);
    });
    std::vector<EigPair> out;
    for (int i = 0; i < std::min(n, n_eigs); ++i)
      out.push_back({vals(order[i]), vecs.col(order[i])});
    return out;
  }
  MatXc A = H;
  A.diagonal().array() -= sigma;
  Eigen::PartialPivLU<MatXc> lu(A);
  // Guard against a shift landing exactly on an eigenvalue.
  {
    VecXc probe = VecXc::Random(n);
    VecXc x = lu.solve(probe);
    if (!x.allFinite() || x.norm() > 1e14 * probe.norm()) {
      A.diagonal().array() -= 1e-8 * (1.0 + std::abs(sigma));
      lu.compute(A);
    }
  }
  return shift_invert_driver([&](const VecXc& v) { return VecXc(lu.solve(v)); },
                             [&](const VecXc& v) { return VecXc(H * v); }, n, sigma, n_eigs,
                             max_iter, tol);
}

std::vector<EigPair> eig_near(const SparseXc& H, double sigma, int n_eigs, int max_iter,
                              double tol) {
  const int n = static_cast<int>(H.rows());
  SparseXc A = H;
  SparseXc I(n, n);
  I.setIdentity();
  A -= sigma * I;
  A.makeCompressed();
  Eigen::SparseLU<SparseXc> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) {
    A -= Complex(1e-8 * (1.0 + std::abs(sigma))) * I;
    lu.factorize(A);
    if (lu.info() != Eigen::Success) throw NumericError("sparse factorization failed");
  }
  return shift_invert_driver([&](const VecXc& v) { return VecXc(lu.solve(v)); },
                             [&](const VecXc& v) { return VecXc(H * v); }, n, sigma, n_eigs,
                             max_iter, tol);
}

}  // namespace honeylat
