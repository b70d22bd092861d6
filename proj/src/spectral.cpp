#include "ppxfer/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ppxfer/errors.hpp"

namespace ppxfer {

namespace {

constexpr int kMaxSweeps = 60;
constexpr double kClusterGap = 1e-12;
constexpr double kSignThreshold = 1e-10;

// Symmetric tridiagonal QL with implicit shifts (tql2 from EISPACK).
// d: diagonal, e: off-diagonal with e[i] coupling i and i+1 (e[n-1] unused).
// v is accumulated in place and must start as the identity.
void tql2(std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXd& v) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxSweeps) {
          throw ConvergenceError("tridiagonal QL did not converge for eigenvalue " +
                                 std::to_string(l) + " after " + std::to_string(kMaxSweeps) +
                                 " sweeps");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double shift = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= shift;
        f += shift;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          double hh = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = hh + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            hh = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * hh;
            v(k, i) = c * v(k, i) - s * hh;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> col) {
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    if (std::abs(col[i]) > kSignThreshold) {
      if (col[i] < 0) col = -col;
      return;
    }
  }
}

// Modified Gram-Schmidt inside runs of eigenvalues closer than kClusterGap.
void orthogonalize_clusters(SpectralDecomposition& dec) {
  const int n = dec.size();
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && dec.eigenvalues[stop] - dec.eigenvalues[stop - 1] < kClusterGap) ++stop;
    for (int k = start + 1; k < stop; ++k) {
      for (int j = start; j < k; ++j) {
        const double proj = dec.eigenvectors.col(j).dot(dec.eigenvectors.col(k));
        dec.eigenvectors.col(k) -= proj * dec.eigenvectors.col(j);
      }
      dec.eigenvectors.col(k).normalize();
    }
    start = stop;
  }
}

bool mirror_symmetric(const Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  for (std::size_t i = 0; i < n / 2; ++i)
    if (t.diag[i] != t.diag[n - 1 - i]) return false;
  for (std::size_t i = 0; i < t.off.size() / 2; ++i)
    if (t.off[i] != t.off[t.off.size() - 1 - i]) return false;
  return true;
}

// Eigenvalues of an irreducible mirror-symmetric tridiagonal matrix are
// simple, so every eigenvector has exact parity. Near-degenerate pairs of
// opposite parity come out of QL mixed at the level eps / gap; projecting
// restores the parity to rounding.
void project_parity(SpectralDecomposition& dec) {
  const int n = dec.size();
  for (int k = 0; k < n; ++k) {
    auto col = dec.eigenvectors.col(k);
    const Eigen::VectorXd mirrored = col.reverse();
    const double overlap = col.dot(mirrored);
    if (std::abs(overlap) < 0.5) continue;
    col = 0.5 * (col + (overlap > 0 ? 1.0 : -1.0) * mirrored);
    col.normalize();
  }
}

}  // namespace

SpectralDecomposition diagonalize(const Tridiagonal& t) {
  const int n = static_cast<int>(t.diag.size());
  if (n == 0 || static_cast<int>(t.off.size()) != n - 1)
    throw ConfigError("tridiagonal matrix needs N diagonal and N-1 off-diagonal entries");

  const bool uniform =
      std::all_of(t.diag.begin(), t.diag.end(), [&](double x) { return x == t.diag.front(); });
  const double shift = uniform ? t.diag.front() : 0.0;

  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = uniform ? 0.0 : t.diag[i];
  std::vector<double> e(n, 0.0);
  std::copy(t.off.begin(), t.off.end(), e.begin());

  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  tql2(d, e, v);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  SpectralDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    dec.eigenvalues[k] = d[order[k]] + shift;
    dec.eigenvectors.col(k) = v.col(order[k]);
  }
  orthogonalize_clusters(dec);
  if (mirror_symmetric(t)) project_parity(dec);
  for (int k = 0; k < n; ++k) fix_sign(dec.eigenvectors.col(k));
  return dec;
}

SpectralDecomposition diagonalize(const CouplingProfile& profile) {
  return diagonalize(tridiagonal(profile));
}

int mirror_parity(const SpectralDecomposition& dec, int k, double tol) {
  const auto col = dec.eigenvectors.col(k);
  const int n = dec.size();
  bool sym = true, anti = true;
  for (int i = 0; i < n; ++i) {
    sym = sym && std::abs(col[i] - col[n - 1 - i]) <= tol;
    anti = anti && std::abs(col[i] + col[n - 1 - i]) <= tol;
  }
  if (sym) return 1;
  if (anti) return -1;
  return 0;
}

std::vector<double> wire_spectrum(int n_w, double h) {
  if (n_w < 1) throw ConfigError("n_w must be positive");
  std::vector<double> out;
  out.reserve(n_w);
  for (int q = 1; q <= n_w; ++q) out.push_back(h + std::cos(q * std::numbers::pi / (n_w + 1)));
  return out;
}

std::vector<double> sender_spectrum(int n_s, double h) {
  if (n_s < 1) throw ConfigError("n_s must be positive");
  std::vector<double> out;
  out.reserve(n_s);
  for (int k = 1; k <= n_s; ++k) out.push_back(h + std::cos(k * std::numbers::pi / (n_s + 1)));
  return out;
}

}  // namespace ppxfer
