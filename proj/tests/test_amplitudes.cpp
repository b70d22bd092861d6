#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ppxfer/amplitudes.hpp"
#include "ppxfer/errors.hpp"

using namespace ppxfer;
namespace oracle = testing_oracle;

TEST_CASE("two-site analytic amplitude") {
  const auto dec = diagonalize(CouplingProfile{{1.0}, {0.0, 0.0}});
  for (double t : {0.0, 0.4, 2.0, 7.5}) {
    const cplx f = amplitude(dec, 1, 2, t);
    CHECK(std::abs(f - cplx(0.0, -std::sin(t / 2))) < 1e-14);
  }
}

TEST_CASE("three-site analytic amplitude") {
  const auto dec = diagonalize(CouplingProfile{{1.0, 1.0}, {0.0, 0.0, 0.0}});
  for (double t : {0.0, 1.3, 10.0}) {
    const cplx f = amplitude(dec, 1, 3, t);
    CHECK(std::abs(f - cplx((std::cos(t / std::sqrt(2.0)) - 1) / 2, 0.0)) < 1e-14);
  }
  CHECK_THROWS_AS(amplitude(dec, 0, 1, 0.0), std::out_of_range);
  CHECK_THROWS_AS(amplitude(dec, 1, 4, 0.0), std::out_of_range);
}

TEST_CASE("amplitude matrix matches dense exponential") {
  const auto spec = ChainSpec::make(2, 7, 0.3, 0.2);
  const auto p = build_profile(spec);
  const auto dec = diagonalize(p);
  for (double t : {0.5, 17.0, 300.0}) {
    const auto f = amplitude_matrix(dec, t).entries;
    const auto ref = oracle::dense_propagator(adjacency_matrix(p), t);
    CHECK((f - ref).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("sender-receiver block") {
  const auto spec = ChainSpec::make(3, 5, 0.4);
  const auto dec = diagonalize(build_profile(spec));
  const auto F = amplitude_matrix(dec, 3.7);
  const auto sub = sr_submatrix(F, 3);
  const int n = spec.sites();
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) CHECK(std::abs(sub(a - 1, b - 1) - amplitude(dec, a, n + 1 - b, 3.7)) < 1e-14);
  CHECK((sub - sub.transpose()).cwiseAbs().maxCoeff() < 1e-14);

  const TransferPropagator prop(dec, 3);
  CHECK((prop.block(3.7) - sub).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(sr_submatrix(F, 6), ConfigError);
}

TEST_CASE("determinant and permanent against Leibniz sums") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 7; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto m = oracle::random_complex(n, rng);
      const auto [det, perm] = oracle::det_and_perm(m);
      const double scale = std::max(1.0, std::abs(perm));
      CHECK(std::abs(determinant(m) - det) < 1e-10 * std::max(1.0, std::abs(det)));
      CHECK(std::abs(permanent(m) - perm) < 1e-10 * scale);
    }
  }
}

TEST_CASE("determinant and permanent edge cases") {
  CHECK(permanent(Eigen::MatrixXcd(0, 0)) == cplx(1.0, 0.0));
  Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(4, 4);
  CHECK(std::abs(permanent(ones) - 24.0) < 1e-12);  // 4!
  CHECK(std::abs(determinant(ones)) < 1e-12);
  CHECK(determinant(Eigen::MatrixXcd::Identity(5, 5)) == cplx(1.0, 0.0));
  CHECK_THROWS_AS(permanent(Eigen::MatrixXcd::Identity(13, 13)), DimensionError);
  CHECK_THROWS_AS(determinant(Eigen::MatrixXcd::Identity(65, 65)), DimensionError);
  CHECK_THROWS_AS(determinant(Eigen::MatrixXcd(2, 3)), ConfigError);
}

TEST_CASE("probability checks") {
  CHECK(checked_probability(1.0 + 5e-10) == 1.0);
  CHECK(checked_probability(-5e-10) == 0.0);
  CHECK_THROWS_AS(checked_probability(1.0 + 1e-8), NumericalConsistencyError);
  CHECK_THROWS_AS(checked_probability(std::nan("")), NumericalConsistencyError);
}

TEST_CASE("transfer probabilities at t = 0 vanish") {
  const TransferPropagator prop(ChainSpec::make(2, 5, 0.1));
  CHECK(prop.fermion(0.0) < 1e-30);
  CHECK(prop.boson(0.0) < 1e-30);
}

TEST_CASE("single excitation: fermion and boson coincide") {
  const TransferPropagator prop(ChainSpec::make(1, 6, 0.2));
  for (double t : {1.0, 12.0, 90.0}) CHECK(prop.fermion(t) == doctest::Approx(prop.boson(t)).epsilon(1e-13));
}

TEST_CASE("scan is independent of thread count") {
  const auto spec = ChainSpec::make(3, 9, 0.1);
  const auto grid = uniform_grid(500.0, 257);
  const auto a = scan_transfer(spec, grid, StatsSelection::both, 1);
  const auto b = scan_transfer(spec, grid, StatsSelection::both, 3);
  CHECK(a.p_fermion == b.p_fermion);
  CHECK(a.p_boson == b.p_boson);
  const auto f = scan_transfer(spec, grid, StatsSelection::fermion, 2);
  CHECK(f.p_boson.empty());
  CHECK(f.p_fermion == a.p_fermion);

  std::vector<double> bad = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(scan_transfer(spec, bad), ConfigError);
}

TEST_CASE("uniform grid") {
  const auto g = uniform_grid(10.0, 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 10.0);
  CHECK(g[1] == 2.5);
  CHECK(uniform_grid(0.0, 1).size() == 1);
  CHECK_THROWS_AS(uniform_grid(-1.0, 5), ConfigError);
  CHECK_THROWS_AS(uniform_grid(1.0, 0), ConfigError);
}

TEST_CASE("single-particle bound") {
  CHECK(single_particle_bound(1, 1, 1) == doctest::Approx(1.0));
  // n_s = 2, i = 1, j = 2: (2/3)(sin(pi/3) sin(2pi/3) + |sin(2pi/3) sin(4pi/3)|) = 1
  CHECK(single_particle_bound(2, 1, 2) == doctest::Approx(1.0));
  CHECK(single_particle_bound(3, 1, 3) <= 1.0 + 1e-12);
  CHECK_THROWS_AS(single_particle_bound(2, 3, 1), ConfigError);
}

TEST_CASE("two-tier peak agrees with a dense scan") {
  const auto spec = ChainSpec::make(1, 4, 0.3);
  const TransferPropagator prop(spec);
  double best = 0.0;
  for (int i = 0; i <= 200000; ++i) best = std::max(best, prop.fermion(i * 0.01));
  const Peak p = find_fermion_peak(prop, {2000.0, 5.0, 0.25, 1});
  CHECK(p.value >= best - 1e-6);
  CHECK(p.value == doctest::Approx(prop.fermion(p.time)));

  const Peak b = find_windowed_boson_peak(prop, p.time, boson_window_width());
  CHECK(b.value >= p.value - 1e-9);  // one excitation: same curve, wider search
  CHECK(boson_window_width(1.0) == doctest::Approx(20 * std::numbers::pi));
  CHECK_THROWS_AS(find_fermion_peak(prop, {0.0, 1.0, 0.25, 1}), ConfigError);
}

TEST_CASE("golden section on a parabola") {
  const Peak p = golden_section_max([](double x) { return -(x - 1.3) * (x - 1.3); }, 0.0, 4.0, 1e-9);
  CHECK(p.time == doctest::Approx(1.3).epsilon(1e-8));
}
