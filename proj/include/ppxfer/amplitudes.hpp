#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ppxfer/chain_model.hpp"
#include "ppxfer/spectral.hpp"

namespace ppxfer {

using cplx = std::complex<double>;

/// F(t) with entries f_i^j(t) = <j| exp(-i t H) |i>, stored 0-based as
/// entries(i, j).
struct AmplitudeMatrix {
  double t = 0.0;
  Eigen::MatrixXcd entries;

  int size() const { return static_cast<int>(entries.rows()); }
};

/// Single amplitude f_i^j(t), 1-based sites, full N-term sum.
cplx amplitude(const SpectralDecomposition& dec, int i, int j, double t);

AmplitudeMatrix amplitude_matrix(const SpectralDecomposition& dec, double t);

/// n_s x n_s sender-receiver block with receivers counted from the far edge:
/// entry (a, b), 1-based, is f_a^{N+1-b}. In this labelling the block is
/// symmetric, M(a, b) = M(b, a).
Eigen::MatrixXcd sr_submatrix(const AmplitudeMatrix& F, int n_s);

cplx determinant(const Eigen::MatrixXcd& m);

/// Ryser inclusion-exclusion with Gray-code subset order, O(2^n n).
/// Throws DimensionError for n > kMaxPermanentOrder.
cplx permanent(const Eigen::MatrixXcd& m);

inline constexpr int kMaxDeterminantOrder = 64;
inline constexpr int kMaxPermanentOrder = 12;

/// Tolerance applied before clamping a probability into [0, 1].
inline constexpr double kProbabilityTolerance = 1e-9;

/// Throws NumericalConsistencyError outside [-tol, 1 + tol], else clamps.
double checked_probability(double p);

double fermion_prob(const Eigen::MatrixXcd& sub);
double boson_prob(const Eigen::MatrixXcd& sub);

/// Evaluates the sender-receiver block directly from the spectral data
/// without forming the full N x N F(t). Cost per call: N phases plus an
/// n_s x N x n_s product.
class TransferPropagator {
 public:
  TransferPropagator(const SpectralDecomposition& dec, int n_s);
  explicit TransferPropagator(const ChainSpec& spec);

  Eigen::MatrixXcd block(double t) const;
  double fermion(double t) const { return fermion_prob(block(t)); }
  double boson(double t) const { return boson_prob(block(t)); }

  int n_s() const { return n_s_; }
  const Eigen::VectorXd& eigenvalues() const { return omega_; }

 private:
  int n_s_;
  Eigen::VectorXd omega_;
  Eigen::MatrixXd senders_;    // n_s x N, row a = phi_{a, .}
  Eigen::MatrixXd receivers_;  // n_s x N, row b = phi_{N-1-b, .}
};

enum class StatsSelection { fermion, boson, both };

struct TransferCurve {
  std::vector<double> times;
  std::vector<double> p_fermion;  // empty when not requested
  std::vector<double> p_boson;    // empty when not requested
};

/// One diagonalization, then every grid time. The grid must be strictly
/// increasing. Samples may be evaluated on `threads` workers; output order
/// follows the grid.
TransferCurve scan_transfer(const ChainSpec& spec, std::span<const double> grid,
                            StatsSelection stats = StatsSelection::both, int threads = 1);

std::vector<double> uniform_grid(double t_max, int samples);

/// Upper bound on max_t |f_i^j(t)| for sender sites i, j (1-based) in the
/// weak-coupling picture: (2/(n_s+1)) sum_k |sin(k pi j/(n_s+1)) sin(k pi i/(n_s+1))|.
double single_particle_bound(int n_s, int i, int j);

struct Peak {
  double time = 0.0;
  double value = 0.0;
};

struct PeakSearch {
  double t_max = 0.0;
  double coarse_step = 1.0;  ///< tier 1 spacing, should resolve the fastest envelope
  double fine_step = 0.25;   ///< tier 2 spacing, resolves the O(J) ripple
  int threads = 1;
};

/// Two-tier maximum of the fermion probability on [0, t_max]: coarse grid,
/// dense window of +-2 coarse steps around the best coarse sample, then
/// golden-section refinement around the best dense sample.
Peak find_fermion_peak(const TransferPropagator& prop, const PeakSearch& search);

/// Maximum of the boson probability inside [center - width/2, center + width/2],
/// sampled at `step` and refined by golden section.
Peak find_windowed_boson_peak(const TransferPropagator& prop, double center, double width,
                              double step = 0.02);

/// Window width used for boson peaks: ten periods of the O(J) oscillation.
double boson_window_width(double J = 1.0);

/// Golden-section maximisation of f on [a, b].
template <typename F>
Peak golden_section_max(F&& f, double a, double b, double tol = 1e-6) {
  const double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, f(t)};
}

}  // namespace ppxfer
