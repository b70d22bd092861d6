#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ppxfer/chain_model.hpp"

namespace ppxfer {

/// Eigenpairs of the single-particle matrix.
///
/// Eigenvalues are sorted ascending, so the sender mode with the highest
/// unperturbed energy (k = 1 in the cos(k pi / (n_s + 1)) labelling) sits at
/// the top of the list. Column k of `eigenvectors` belongs to eigenvalues[k];
/// its first component above 1e-10 in magnitude is positive.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Implicit-shift QL on a symmetric tridiagonal matrix with eigenvector
/// accumulation. A uniform diagonal is factored out before iterating, so
/// eigenvectors do not depend on a uniform on-site shift at all.
/// Throws ConvergenceError after 60 sweeps on a single eigenvalue.
SpectralDecomposition diagonalize(const Tridiagonal& t);
SpectralDecomposition diagonalize(const CouplingProfile& profile);

/// +1 if eigenvector k is mirror symmetric, -1 if antisymmetric, 0 if neither
/// (within `tol`).
int mirror_parity(const SpectralDecomposition& dec, int k, double tol = 1e-9);

/// Uncoupled wire levels h + cos(q pi / (n_w + 1)), q = 1..n_w, in q order.
std::vector<double> wire_spectrum(int n_w, double h);

/// Uncoupled sender-block levels h + cos(k pi / (n_s + 1)), k = 1..n_s.
std::vector<double> sender_spectrum(int n_s, double h);

}  // namespace ppxfer
