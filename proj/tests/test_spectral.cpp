#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ppxfer/errors.hpp"
#include "ppxfer/spectral.hpp"

using namespace ppxfer;

namespace {

void check_against_dense(const CouplingProfile& p, double tol) {
  const auto dec = diagonalize(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(adjacency_matrix(p));
  const int n = p.sites();
  for (int k = 0; k < n; ++k) CHECK(std::abs(dec.eigenvalues[k] - es.eigenvalues()[k]) < tol);
  // residual and orthonormality instead of vector-by-vector comparison,
  // which is ill-conditioned inside near-degenerate clusters
  const Eigen::MatrixXd a = adjacency_matrix(p);
  const Eigen::MatrixXd& v = dec.eigenvectors;
  CHECK((a * v - v * dec.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
}

}  // namespace

TEST_CASE("uniform five-site chain") {
  const CouplingProfile p{{1, 1, 1, 1}, {0, 0, 0, 0, 0}};
  const auto dec = diagonalize(p);
  for (int k = 1; k <= 5; ++k)
    CHECK(dec.eigenvalues[5 - k] == doctest::Approx(std::cos(k * std::numbers::pi / 6)).epsilon(1e-13));
}

TEST_CASE("agrees with a dense eigensolver") {
  check_against_dense(build_profile(ChainSpec::make(3, 41, 0.01)), 1e-11);
  check_against_dense(build_profile(ChainSpec::make(2, 40, 0.001, 0.3)), 1e-11);
  check_against_dense(build_profile(ChainSpec::make(4, 32, 0.01, 2.0)), 1e-11);
  CouplingProfile rough{{0.3, 1.7, 0.2, 0.9, 1.1}, {0.1, -0.4, 0.0, 0.25, 1.0, -2.0}};
  check_against_dense(rough, 1e-11);
}

TEST_CASE("sign convention and ordering") {
  const auto dec = diagonalize(build_profile(ChainSpec::make(2, 9, 0.1)));
  for (int k = 1; k < dec.size(); ++k) CHECK(dec.eigenvalues[k] >= dec.eigenvalues[k - 1]);
  for (int k = 0; k < dec.size(); ++k) {
    int i = 0;
    while (std::abs(dec.eigenvectors(i, k)) <= 1e-10) ++i;
    CHECK(dec.eigenvectors(i, k) > 0);
  }
}

TEST_CASE("uniform shift leaves eigenvectors bitwise identical") {
  const auto a = diagonalize(build_profile(ChainSpec::make(3, 41, 0.01, 0.0)));
  const auto b = diagonalize(build_profile(ChainSpec::make(3, 41, 0.01, 1.75)));
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK((b.eigenvalues.array() - a.eigenvalues.array() - 1.75).abs().maxCoeff() < 1e-14);
}

TEST_CASE("mirror parity alternates") {
  const auto dec = diagonalize(build_profile(ChainSpec::make(2, 7, 0.1)));
  for (int k = 0; k < dec.size(); ++k) {
    const int parity = mirror_parity(dec, k);
    CHECK(parity != 0);
    if (k > 0) CHECK(parity == -mirror_parity(dec, k - 1));
  }
  CHECK(mirror_parity(dec, dec.size() - 1) == 1);  // top level is nodeless
}

TEST_CASE("isolated blocks") {
  const auto w = wire_spectrum(3, 0.0);
  CHECK(w[0] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(w[1]) < 1e-15);
  CHECK(w[2] == doctest::Approx(-1 / std::sqrt(2.0)));

  const auto w5 = wire_spectrum(5, 0.5);
  const auto dec = diagonalize(CouplingProfile{{1, 1, 1, 1}, {0.5, 0.5, 0.5, 0.5, 0.5}});
  for (int q = 0; q < 5; ++q) CHECK(std::abs(w5[q] - dec.eigenvalues[4 - q]) < 1e-11);

  const auto s4 = sender_spectrum(4, 0.0);
  const auto dec4 = diagonalize(CouplingProfile{{1, 1, 1}, {0, 0, 0, 0}});
  for (int k = 0; k < 4; ++k) CHECK(std::abs(s4[k] - dec4.eigenvalues[3 - k]) < 1e-11);
  CHECK(s4[0] == doctest::Approx((std::sqrt(5.0) + 1) / 4));
  CHECK(sender_spectrum(1, 0.3)[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK_THROWS_AS(wire_spectrum(0, 0.0), ConfigError);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(diagonalize(Tridiagonal{{1.0, 2.0}, {}}), ConfigError);
  const auto one = diagonalize(Tridiagonal{{2.5}, {}});
  CHECK(one.eigenvalues[0] == 2.5);
  CHECK(one.eigenvectors(0, 0) == 1.0);
}
