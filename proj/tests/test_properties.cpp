// Randomized structural invariants over chains and times (fixed seed).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ppxfer/amplitudes.hpp"
#include "ppxfer/observables.hpp"

using namespace ppxfer;

namespace {

struct Sample {
  ChainSpec spec;
  double t;
};

Sample draw(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ns(1, 4), nw(1, 45), coin(0, 1);
  std::uniform_real_distribution<double> logj0(-3.0, 0.0), h(-2.0, 2.0), logt(-1.0, 4.5);
  const double onsite = coin(rng) ? 0.0 : h(rng);
  return {ChainSpec::make(ns(rng), nw(rng), std::pow(10.0, logj0(rng)), onsite), std::pow(10.0, logt(rng))};
}

}  // namespace

TEST_CASE("F(t) is unitary, symmetric, persymmetric and centrosymmetric") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 300; ++i) {
    const auto [spec, t] = draw(rng);
    const auto dec = diagonalize(build_profile(spec));
    const Eigen::MatrixXcd f = amplitude_matrix(dec, t).entries;
    const int n = dec.size();
    CHECK((f.adjoint() * f - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((f - f.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    double persym = 0.0, centro = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        persym = std::max(persym, std::abs(f(a, b) - f(n - 1 - b, n - 1 - a)));
        centro = std::max(centro, std::abs(f(a, b) - f(n - 1 - a, n - 1 - b)));
      }
    CHECK(persym < 1e-12);
    CHECK(centro < 1e-12);
  }
}

TEST_CASE("parity-reality at zero on-site energy") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    auto [spec, t] = draw(rng);
    spec.h = 0.0;
    const Eigen::MatrixXcd f = amplitude_matrix(diagonalize(build_profile(spec)), t).entries;
    for (int a = 0; a < f.rows(); ++a)
      for (int b = 0; b < f.cols(); ++b) {
        const double forbidden = (a - b) % 2 == 0 ? f(a, b).imag() : f(a, b).real();
        CHECK(std::abs(forbidden) < 1e-10);
      }
  }
}

TEST_CASE("probabilities and occupations stay in range") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto [spec, t] = draw(rng);
    const TransferPropagator prop(spec);
    const double pf = prop.fermion(t), pb = prop.boson(t);
    CHECK(pf >= 0.0);
    CHECK(pf <= 1.0);
    CHECK(pb >= 0.0);
    CHECK(pb <= 1.0);
    const double m = magnetization_receiver(prop, t) + 0.5 * spec.n_s;
    CHECK(m >= -1e-12);
    CHECK(m <= spec.n_s + 1e-12);
  }
}

TEST_CASE("shift invariance of probabilities") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    auto [spec, t] = draw(rng);
    spec.h = 0.0;
    const double p0 = TransferPropagator(spec).fermion(t);
    spec.h = 0.77;
    CHECK(std::abs(TransferPropagator(spec).fermion(t) - p0) < 1e-10);
  }
}
