#pragma once

#include <Eigen/Sparse>

#include "honeylat/common.hpp"

namespace honeylat {

using SparseXc = Eigen::SparseMatrix<Complex>;

struct EigPair {
  double value = 0.0;
  VecXc vector;
};

/// All eigenpairs of a dense Hermitian matrix, ascending.
std::pair<VecX, MatXc> eig_hermitian(const MatXc& H);

/// Eigenvalues only.
VecX eigvals_hermitian(const MatXc& H);

/// The n_eigs eigenpairs of a Hermitian matrix closest to sigma, found by
/// Lanczos iteration on (H - sigma I)^{-1} with full reorthogonalization.
/// The factorization is a dense partial-pivot LU; if sigma happens to sit on
/// an eigenvalue the shift is nudged and the factorization retried.
std::vector<EigPair> eig_near_dense(const MatXc& H, double sigma, int n_eigs,
                                    int max_iter = 0, double tol = 1e-11);

/// Same contract with a sparse operator; the matrix is densified for the
/// factorization (dimensions here stay <= ~2e4).
std::vector<EigPair> eig_near(const SparseXc& H, double sigma, int n_eigs,
                              int max_iter = 0, double tol = 1e-11);

}  // namespace honeylat
