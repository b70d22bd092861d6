#include "ppxfer/amplitudes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "ppxfer/errors.hpp"
#include "ppxfer/parallel.hpp"

namespace ppxfer {

namespace {

Eigen::VectorXcd phases(const Eigen::VectorXd& omega, double t) {
  Eigen::VectorXcd ph(omega.size());
  for (Eigen::Index k = 0; k < omega.size(); ++k) ph[k] = std::polar(1.0, -omega[k] * t);
  return ph;
}

void check_site(int site, int n) {
  if (site < 1 || site > n)
    throw std::out_of_range("site " + std::to_string(site) + " outside 1.." + std::to_string(n));
}

}  // namespace

cplx amplitude(const SpectralDecomposition& dec, int i, int j, double t) {
  const int n = dec.size();
  check_site(i, n);
  check_site(j, n);
  cplx sum{0.0, 0.0};
  for (int k = 0; k < n; ++k)
    sum += std::polar(1.0, -dec.eigenvalues[k] * t) * dec.eigenvectors(j - 1, k) *
           dec.eigenvectors(i - 1, k);
  return sum;
}

AmplitudeMatrix amplitude_matrix(const SpectralDecomposition& dec, double t) {
  const Eigen::VectorXcd ph = phases(dec.eigenvalues, t);
  const Eigen::MatrixXcd phi = dec.eigenvectors.cast<cplx>();
  AmplitudeMatrix F;
  F.t = t;
  // phi diag(ph) phi^T is symmetric, so (i, j) and (j, i) agree.
  F.entries = phi * ph.asDiagonal() * phi.transpose();
  return F;
}

Eigen::MatrixXcd sr_submatrix(const AmplitudeMatrix& F, int n_s) {
  const int n = F.size();
  if (n_s < 1 || 2 * n_s > n)
    throw ConfigError("sender block of " + std::to_string(n_s) + " does not fit a chain of " +
                      std::to_string(n));
  Eigen::MatrixXcd sub(n_s, n_s);
  for (int a = 0; a < n_s; ++a)
    for (int b = 0; b < n_s; ++b) sub(a, b) = F.entries(a, n - 1 - b);
  return sub;
}

cplx determinant(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw ConfigError("determinant of a non-square matrix");
  if (n > kMaxDeterminantOrder)
    throw DimensionError("determinant order " + std::to_string(n) + " exceeds " +
                         std::to_string(kMaxDeterminantOrder));
  Eigen::MatrixXcd lu = m;
  cplx det{1.0, 0.0};
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
    if (lu(pivot, col) == cplx{0.0, 0.0}) return {0.0, 0.0};
    if (pivot != col) {
      lu.row(pivot).swap(lu.row(col));
      det = -det;
    }
    det *= lu(col, col);
    for (int r = col + 1; r < n; ++r) {
      const cplx factor = lu(r, col) / lu(col, col);
      for (int c = col + 1; c < n; ++c) lu(r, c) -= factor * lu(col, c);
    }
  }
  return det;
}

cplx permanent(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw ConfigError("permanent of a non-square matrix");
  if (n > kMaxPermanentOrder)
    throw DimensionError("permanent order " + std::to_string(n) + " exceeds Ryser cap " +
                         std::to_string(kMaxPermanentOrder));
  if (n == 0) return {1.0, 0.0};

  // Row sums over the current column subset; subsets visited in Gray-code
  // order so each step adds or removes exactly one column.
  std::vector<cplx> row_sum(n, cplx{0.0, 0.0});
  cplx total{0.0, 0.0};
  std::uint32_t gray = 0;
  const std::uint32_t count = 1u << n;
  for (std::uint32_t step = 1; step < count; ++step) {
    const int col = std::countr_zero(step);
    const std::uint32_t bit = 1u << col;
    gray ^= bit;
    const double sign_update = (gray & bit) ? 1.0 : -1.0;
    cplx prod{1.0, 0.0};
    for (int r = 0; r < n; ++r) {
      row_sum[r] += sign_update * m(r, col);
      prod *= row_sum[r];
    }
    total += (std::popcount(gray) & 1) ? -prod : prod;
  }
  return (n & 1) ? -total : total;
}

double checked_probability(double p) {
  if (!std::isfinite(p) || p > 1.0 + kProbabilityTolerance || p < -kProbabilityTolerance)
    throw NumericalConsistencyError("probability " + std::to_string(p) +
                                    " outside [0, 1] beyond tolerance");
  return std::clamp(p, 0.0, 1.0);
}

double fermion_prob(const Eigen::MatrixXcd& sub) { return checked_probability(std::norm(determinant(sub))); }

double boson_prob(const Eigen::MatrixXcd& sub) { return checked_probability(std::norm(permanent(sub))); }

TransferPropagator::TransferPropagator(const SpectralDecomposition& dec, int n_s)
    : n_s_(n_s), omega_(dec.eigenvalues) {
  const int n = dec.size();
  if (n_s < 1 || 2 * n_s > n)
    throw ConfigError("sender block of " + std::to_string(n_s) + " does not fit a chain of " +
                      std::to_string(n));
  senders_ = dec.eigenvectors.topRows(n_s);
  receivers_.resize(n_s, n);
  for (int b = 0; b < n_s; ++b) receivers_.row(b) = dec.eigenvectors.row(n - 1 - b);
}

TransferPropagator::TransferPropagator(const ChainSpec& spec)
    : TransferPropagator(diagonalize(build_profile(spec)), spec.n_s) {}

Eigen::MatrixXcd TransferPropagator::block(double t) const {
  const Eigen::VectorXcd ph = phases(omega_, t);
  Eigen::MatrixXcd weighted = senders_.cast<cplx>() * ph.asDiagonal();
  return weighted * receivers_.transpose().cast<cplx>();
}

TransferCurve scan_transfer(const ChainSpec& spec, std::span<const double> grid,
                            StatsSelection stats, int threads) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("time grid must be strictly increasing");

  const TransferPropagator prop(spec);
  const bool want_f = stats != StatsSelection::boson;
  const bool want_b = stats != StatsSelection::fermion;

  TransferCurve curve;
  curve.times.assign(grid.begin(), grid.end());
  if (want_f) curve.p_fermion.resize(grid.size());
  if (want_b) curve.p_boson.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const Eigen::MatrixXcd sub = prop.block(grid[i]);
    if (want_f) curve.p_fermion[i] = fermion_prob(sub);
    if (want_b) curve.p_boson[i] = boson_prob(sub);
  });
  return curve;
}

std::vector<double> uniform_grid(double t_max, int samples) {
  if (samples < 1) throw ConfigError("grid needs at least one sample");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be finite and >= 0");
  if (samples > 1 && t_max == 0.0) throw ConfigError("t_max must be positive for multi-sample grids");
  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i)
    grid[i] = samples == 1 ? 0.0 : t_max * static_cast<double>(i) / (samples - 1);
  return grid;
}

double single_particle_bound(int n_s, int i, int j) {
  if (n_s < 1 || i < 1 || j < 1 || i > n_s || j > n_s)
    throw ConfigError("single_particle_bound needs 1 <= i, j <= n_s");
  const double a = std::numbers::pi / (n_s + 1);
  double sum = 0.0;
  for (int k = 1; k <= n_s; ++k) sum += std::abs(std::sin(k * a * j) * std::sin(k * a * i));
  return 2.0 / (n_s + 1) * sum;
}

namespace {

// Dense sampling of f on [lo, hi] at `step`, returning the best sample.
template <typename F>
Peak best_sample(F&& f, double lo, double hi, double step, int threads) {
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1;
  std::vector<double> values(count);
  parallel_for(count, threads, [&](std::size_t i) { values[i] = f(lo + step * static_cast<double>(i)); });
  const auto it = std::max_element(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(it - values.begin());
  return {lo + step * static_cast<double>(idx), *it};
}

template <typename F>
Peak refine(F&& f, Peak best, double lo, double hi, double half_width) {
  const double a = std::max(lo, best.time - half_width);
  const double b = std::min(hi, best.time + half_width);
  if (b <= a) return best;
  const Peak gs = golden_section_max(f, a, b, 1e-6);
  return gs.value > best.value ? gs : best;
}

}  // namespace

Peak find_fermion_peak(const TransferPropagator& prop, const PeakSearch& search) {
  if (!(search.t_max > 0.0) || !(search.coarse_step > 0.0) || !(search.fine_step > 0.0))
    throw ConfigError("peak search needs positive t_max and steps");
  auto f = [&](double t) { return prop.fermion(t); };

  const double coarse = std::min(search.coarse_step, search.t_max);
  const Peak c = best_sample(f, 0.0, search.t_max, coarse, search.threads);
  const double lo = std::max(0.0, c.time - 2.0 * coarse);
  const double hi = std::min(search.t_max, c.time + 2.0 * coarse);
  Peak d = best_sample(f, lo, hi, std::min(search.fine_step, coarse), search.threads);
  if (c.value > d.value) d = c;
  return refine(f, d, 0.0, search.t_max, search.fine_step);
}

Peak find_windowed_boson_peak(const TransferPropagator& prop, double center, double width,
                              double step) {
  if (!(width > 0.0) || !(step > 0.0)) throw ConfigError("boson window needs positive width and step");
  auto f = [&](double t) { return prop.boson(t); };
  const double lo = std::max(0.0, center - 0.5 * width);
  const double hi = center + 0.5 * width;
  const Peak d = best_sample(f, lo, hi, step, 1);
  return refine(f, d, lo, hi, step);
}

double boson_window_width(double J) { return 10.0 * 2.0 * std::numbers::pi / J; }

}  // namespace ppxfer
