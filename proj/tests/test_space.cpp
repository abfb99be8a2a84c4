#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fockalg/rng.hpp"
#include "fockalg/space.hpp"

using namespace fockalg;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

// Reference values computed independently in high precision for
// k = (0.8, 0.5), xi = (0.2 + 0.1i, -0.15 + 0.05i), eta = (0.1 - 0.2i, 0.25).
constexpr double kCmXi = 0.42204857540335330458;
constexpr double kCmEta = 0.57282196186948000082;
const cd kPairingXiEta{-0.15, -0.128125};

Spectrum two_dim() { return Spectrum({0.8, 0.5}); }
HVector xi_point() { return HVector{{cd(0.2, 0.1), cd(-0.15, 0.05)}}; }
HVector eta_point() { return HVector{{cd(0.1, -0.2), cd(0.25, 0.0)}}; }

}  // namespace

TEST_CASE("spectrum validation and accessors") {
  CHECK_THROWS_AS(Spectrum({}), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({-1.0}), std::invalid_argument);

  const auto s = two_dim();
  CHECK(s.dims() == 2);
  CHECK(s.k(1) == 0.5);
  CHECK(s.k_sq(0) == Approx(0.64).epsilon(1e-15));
  CHECK(s.trace() == Approx(0.89).epsilon(1e-15));
  CHECK_THROWS_AS(s.k(2), std::out_of_range);
}

TEST_CASE("norms and pairing against frozen references") {
  const auto s = two_dim();
  const auto xi = xi_point();
  const auto eta = eta_point();

  CHECK(h_norm(xi) == Approx(std::sqrt(0.05 + 0.025)).epsilon(1e-15));
  CHECK(cm_norm(xi, s) == Approx(kCmXi).epsilon(1e-15));
  CHECK(cm_norm(eta, s) == Approx(kCmEta).epsilon(1e-15));

  const auto p = pairing(xi, eta, s);
  CHECK(std::abs(p - kPairingXiEta) <= 1e-15);
  CHECK(std::abs(pairing(eta, xi, s) - std::conj(p)) <= 1e-15);
  // Conjugate linearity in the first slot.
  HVector ixi = xi;
  for (auto& a : ixi.alpha) a *= cd(0.0, 1.0);
  CHECK(std::abs(pairing(ixi, eta, s) - cd(0.0, -1.0) * p) <= 1e-15);
}

TEST_CASE("pairing respects the Cameron-Martin Cauchy-Schwarz bound") {
  const Spectrum s({0.8, 0.5, 0.3});
  for (std::uint64_t n = 0; n < 50; ++n) {
    const auto a = random_in_ball(s, 0.1 + 0.017 * static_cast<double>(n), 100 + n);
    const auto b = random_in_ball(s, 0.95 - 0.011 * static_cast<double>(n), 200 + n);
    const double lhs = std::abs(pairing(a, b, s));
    const double rhs = cm_norm(a, s) * cm_norm(b, s);
    CHECK(lhs <= rhs * (1.0 + 1e-14));
  }
}

TEST_CASE("ball location classifies by the unit Cameron-Martin sphere") {
  const auto s = two_dim();
  const auto in = locate_in_ball(xi_point(), s);
  CHECK(in.region == BallRegion::inside);
  CHECK(in.margin == Approx(1.0 - kCmXi).epsilon(1e-14));

  const HVector on{{cd(0.8, 0.0), cd(0.0, 0.0)}};  // cm_norm exactly 1
  CHECK(locate_in_ball(on, s).region == BallRegion::boundary);

  const HVector out{{cd(1.0, 0.0), cd(0.0, 0.0)}};
  const auto loc = locate_in_ball(out, s);
  CHECK(loc.region == BallRegion::outside);
  CHECK(loc.margin < 0.0);

  CHECK(locate_in_ball(HVector::zero(2), s).margin == 1.0);
}

TEST_CASE("seeded ball points are deterministic with exact radius") {
  const Spectrum s({0.8, 0.5, 0.3});
  const auto a = random_in_ball(s, 0.7, 42);
  const auto b = random_in_ball(s, 0.7, 42);
  REQUIRE(a.dims() == 3);
  for (std::size_t j = 0; j < 3; ++j) CHECK(a.alpha[j] == b.alpha[j]);

  CHECK(cm_norm(a, s) == Approx(0.7).epsilon(1e-12));
  const auto c = random_in_ball(s, 0.7, 43);
  CHECK(std::abs(a.alpha[0] - c.alpha[0]) > 0.0);

  const auto z = random_in_ball(s, 0.0, 7);
  CHECK(cm_norm(z, s) == 0.0);
  CHECK_THROWS_AS(random_in_ball(s, -0.1, 7), std::invalid_argument);
}

TEST_CASE("random unitaries satisfy U*U = I entrywise") {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto u = random_unitary(3, seed);
    const Eigen::MatrixXcd gram = u.adjoint() * u;
    for (Eigen::Index r = 0; r < 3; ++r) {
      for (Eigen::Index c = 0; c < 3; ++c) {
        const cd want = (r == c) ? cd(1.0, 0.0) : cd(0.0, 0.0);
        CHECK(std::abs(gram(r, c) - want) <= 1e-13);
      }
    }
  }
  const auto u1 = random_unitary(2, 5);
  const auto u2 = random_unitary(2, 5);
  CHECK((u1 - u2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((random_unitary(2, 6) - u1).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("Cameron-Martin rotations preserve the metric quantities") {
  const Spectrum s({0.8, 0.5, 0.3});
  const auto u = random_unitary(3, 17);
  const auto a = random_in_ball(s, 0.6, 300);
  const auto b = random_in_ball(s, 0.85, 301);

  const auto ra = unitary_cm(a, s, u);
  const auto rb = unitary_cm(b, s, u);
  CHECK(cm_norm(ra, s) == Approx(cm_norm(a, s)).epsilon(1e-12));
  const auto before = pairing(a, b, s);
  const auto after = pairing(ra, rb, s);
  CHECK(std::abs(after - before) <= 1e-12 * (1.0 + std::abs(before)));

  Eigen::MatrixXcd not_unitary = Eigen::MatrixXcd::Identity(3, 3) * 2.0;
  CHECK_THROWS_AS(unitary_cm(a, s, not_unitary), std::invalid_argument);
  Eigen::MatrixXcd wrong_shape = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(unitary_cm(a, s, wrong_shape), std::invalid_argument);
}

TEST_CASE("counter rng streams are pure functions of seed and counter") {
  const CounterRng r1(123, 7);
  const CounterRng r2(123, 7);
  CHECK(r1.bits(0) == r2.bits(0));
  CHECK(r1.bits(41) == r2.bits(41));
  CHECK(r1.bits(0) != CounterRng(123, 8).bits(0));
  CHECK(r1.bits(0) != CounterRng(124, 7).bits(0));

  double mean = 0.0;
  for (std::uint64_t n = 0; n < 4000; ++n) {
    const double u = r1.uniform(n);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  mean /= 4000.0;
  CHECK(std::abs(mean - 0.5) < 0.02);  // ~4.4 sigma for iid uniforms

  double sq = 0.0;
  for (std::uint64_t n = 0; n < 2000; ++n) sq += std::norm(r1.standard_complex(n));
  CHECK(std::abs(sq / 2000.0 - 1.0) < 0.1);  // E|z|^2 = 1
}
