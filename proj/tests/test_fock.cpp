#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fockalg/fock.hpp"

using namespace fockalg;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

// Frozen references, computed independently in 50-digit arithmetic for
// d = 2, k = (0.8, 0.5), lambda_n = exp(-sqrt(n)), cap = 8,
// xi = (0.2 + 0.1i, -0.15 + 0.05i), eta = (0.1 - 0.2i, 0.25),
// f = 0.5 z1^2 z2 - (0.25 + 0.75i) z2^3 + 2.
const cd kKernelXiEta{0.94683921142497483593, -0.038876015429542124546};
constexpr double kMon234NormSq = 0.19292957607369701092;  // ||z^(2,1)||_alg^2
const cd kFAtXi{1.99975, -0.001375};
constexpr double kFNormSq = 4.1034299884914134336;

ContextPtr make_ctx() {
  return SpaceContext::make(Spectrum({0.8, 0.5}), ConeSeries::tau_p(1.0, 0.5, 8), 2, 8);
}

HVector xi_point() { return HVector{{cd(0.2, 0.1), cd(-0.15, 0.05)}}; }
HVector eta_point() { return HVector{{cd(0.1, -0.2), cd(0.25, 0.0)}}; }

FockElement oracle_element(const ContextPtr& ctx) {
  return FockElement::from_terms(ctx, {{MultiIndex({2, 1}), cd(0.5, 0.0)},
                                       {MultiIndex({0, 3}), cd(-0.25, -0.75)},
                                       {MultiIndex(), cd(2.0, 0.0)}});
}

}  // namespace

TEST_CASE("context tables and basis enumeration") {
  const auto ctx = make_ctx();
  CHECK(ctx->dims() == 2);
  CHECK(ctx->cap() == 8);
  CHECK(ctx->basis().size() == 45);  // C(10, 2)
  CHECK(ctx->basis_by_degree().size() == 9);
  for (std::uint32_t n = 0; n <= 8; ++n) {
    CHECK(ctx->basis_by_degree()[n].size() == n + 1);
    for (const auto& i : ctx->basis_by_degree()[n]) CHECK(i.degree() == n);
    CHECK(ctx->lambda(n) == Approx(std::exp(-std::sqrt(n))).epsilon(1e-15));
    CHECK(ctx->weight_sq(n) ==
          Approx(1.0 / (ctx->fact(n) * ctx->lambda(n))).epsilon(1e-15));
  }
  CHECK(ctx->monomial_weight_sq(MultiIndex({2, 1})) == Approx(kMon234NormSq).epsilon(1e-14));
  CHECK(ctx->monomial_l2_sq(MultiIndex({2, 1})) == Approx(2.0 * 0.4096 * 0.25).epsilon(1e-15));
  CHECK(ctx->k_pow(0, 2) == Approx(0.64).epsilon(1e-15));
  CHECK(ctx->k_sq_pow(1, 3) == Approx(std::pow(0.25, 3.0)).epsilon(1e-15));

  double w_max = 0.0;
  for (std::uint32_t n = 0; n <= 8; ++n) w_max = std::max(w_max, ctx->weight(n));
  CHECK(ctx->weight_max() == w_max);

  const auto same = make_ctx();
  CHECK(ctx->compatible(*same));
  const auto other = SpaceContext::make(Spectrum({0.8, 0.5}), ConeSeries::tau_p(1.0, 0.5, 8), 2, 6);
  CHECK(!ctx->compatible(*other));
}

TEST_CASE("context construction validates its requirements") {
  CHECK_THROWS_AS(
      SpaceContext::make(Spectrum({0.8}), ConeSeries::tau_p(1.0, 0.5, 8), 2, 8),
      std::invalid_argument);  // dims mismatch
  CHECK_THROWS_AS(
      SpaceContext::make(Spectrum({0.8}), ConeSeries::tau_p(1.0, 0.5, 4), 1, 8),
      std::invalid_argument);  // cone shorter than the cap
  CHECK_THROWS_AS(
      SpaceContext::make(Spectrum({0.8}), ConeSeries::custom({1.0, 0.0, 1.0}), 1, 2),
      std::invalid_argument);  // vanishing coefficient below the cap
}

TEST_CASE("element storage keeps the true support") {
  const auto ctx = make_ctx();
  auto f = FockElement::zero(ctx);
  CHECK(f.term_count() == 0);
  CHECK(f.degree() == 0);
  CHECK(f.norm_alg() == 0.0);

  f.set(MultiIndex({1, 1}), cd(2.0, -1.0));
  CHECK(f.coeff(MultiIndex({1, 1})) == cd(2.0, -1.0));
  CHECK(f.coeff(MultiIndex({3})) == cd(0.0, 0.0));
  CHECK(f.degree() == 2);

  f.set(MultiIndex({1, 1}), cd(0.0, 0.0));
  CHECK(f.term_count() == 0);

  CHECK_THROWS_AS(f.set(MultiIndex({9}), 1.0), std::invalid_argument);      // over cap
  CHECK_THROWS_AS(f.set(MultiIndex({1, 1, 1}), 1.0), std::invalid_argument);  // 3rd variable

  const auto g = FockElement::from_terms(ctx, {{MultiIndex({2}), 1.0}, {MultiIndex({2}), -1.0}});
  CHECK(g.term_count() == 0);  // duplicate terms accumulate, exact zeros drop
}

TEST_CASE("linear operations") {
  const auto ctx = make_ctx();
  const auto a = FockElement::monomial(ctx, MultiIndex({2}), cd(1.0, 1.0));
  const auto b = FockElement::monomial(ctx, MultiIndex({0, 1}), cd(0.0, -3.0));
  const auto sum = a + b;
  CHECK(sum.term_count() == 2);
  CHECK(sum.coeff(MultiIndex({2})) == cd(1.0, 1.0));
  CHECK(sum.coeff(MultiIndex({0, 1})) == cd(0.0, -3.0));
  CHECK((sum - a).coeff(MultiIndex({0, 1})) == cd(0.0, -3.0));
  CHECK((a - a).term_count() == 0);
  CHECK(a.scaled(0.0).term_count() == 0);
  CHECK(a.scaled(cd(0.0, 1.0)).coeff(MultiIndex({2})) == cd(-1.0, 1.0));
}

TEST_CASE("norms match the frozen references and the weight chain") {
  const auto ctx = make_ctx();
  const auto f = oracle_element(ctx);
  CHECK(f.norm_alg() * f.norm_alg() == Approx(kFNormSq).epsilon(1e-14));
  CHECK(monomial_norm_alg(*ctx, MultiIndex({2, 1})) ==
        Approx(std::sqrt(kMon234NormSq)).epsilon(1e-14));

  const double w = ctx->weight_max();
  CHECK(f.norm_alg() <= w * f.norm_l2() * (1.0 + 1e-12));
  CHECK(f.norm_l2() <= w * f.norm_test() * (1.0 + 1e-12));

  // A monomial realizes the relation with equality degree by degree.
  const auto m = FockElement::monomial(ctx, MultiIndex({0, 3}), 1.5);
  CHECK(m.norm_alg() == Approx(ctx->weight(3) * m.norm_l2()).epsilon(1e-14));
}

TEST_CASE("inner product is hermitian and conjugate-linear in the first slot") {
  const auto ctx = make_ctx();
  const auto f = oracle_element(ctx);
  const auto g = FockElement::from_terms(
      ctx, {{MultiIndex({2, 1}), cd(0.0, 1.0)}, {MultiIndex({1}), cd(1.0, -2.0)}});

  const auto ff = inner_alg(f, f);
  CHECK(ff.imag() == Approx(0.0).epsilon(1e-15));
  CHECK(ff.real() == Approx(kFNormSq).epsilon(1e-14));

  const auto fg = inner_alg(f, g);
  CHECK(std::abs(inner_alg(g, f) - std::conj(fg)) <= 1e-15 * (1.0 + std::abs(fg)));
  const auto sf = f.scaled(cd(0.0, 1.0));
  CHECK(std::abs(inner_alg(sf, g) - cd(0.0, -1.0) * fg) <= 1e-15 * (1.0 + std::abs(fg)));
}

TEST_CASE("evaluation matches the frozen value and the direct polynomial") {
  const auto ctx = make_ctx();
  const auto f = oracle_element(ctx);
  const auto xi = xi_point();
  CHECK(std::abs(evaluate(f, xi) - kFAtXi) <= 1e-15 * std::abs(kFAtXi));

  HVector far{{cd(0.9, 0.4), cd(-0.6, 0.1)}};  // cm_norm > 1
  CHECK_THROWS_AS(evaluate(f, far), std::domain_error);

  const cd a = far.alpha[0], b = far.alpha[1];
  const cd direct = 0.5 * a * a * b - cd(0.25, 0.75) * b * b * b + 2.0;
  CHECK(std::abs(evaluate_entire(f, far) - direct) <= 1e-14 * std::abs(direct));

  HVector wrong_dims{{cd(0.1, 0.0)}};
  CHECK_THROWS_AS(evaluate(f, wrong_dims), std::invalid_argument);
}

TEST_CASE("products expand correctly and respect the cap") {
  const auto ctx = make_ctx();
  const auto z1 = FockElement::monomial(ctx, MultiIndex({1}));
  const auto z2 = FockElement::monomial(ctx, MultiIndex({0, 1}));
  const auto prod = multiply(z1 + z2, z1 - z2);
  CHECK(prod.term_count() == 2);
  CHECK(prod.coeff(MultiIndex({2})) == cd(1.0, 0.0));
  CHECK(prod.coeff(MultiIndex({0, 2})) == cd(-1.0, 0.0));
  CHECK(!prod.truncated());

  const auto top = FockElement::monomial(ctx, MultiIndex({8}));
  const auto over = multiply(top, z1);
  CHECK(over.term_count() == 0);
  CHECK(over.truncated());

  const auto f = oracle_element(ctx);
  const auto two_f = multiply(f, FockElement::monomial(ctx, MultiIndex(), 2.0));
  CHECK(std::abs(two_f.coeff(MultiIndex({0, 3})) - cd(-0.5, -1.5)) == 0.0);

  // Pointwise consistency away from truncation: deg f + deg g <= cap.
  const auto g = FockElement::from_terms(
      ctx, {{MultiIndex({1, 1}), cd(0.3, -0.2)}, {MultiIndex(), cd(-1.0, 0.5)}});
  const auto fg = multiply(f, g);
  CHECK(!fg.truncated());
  const auto xi = xi_point();
  const auto want = evaluate(f, xi) * evaluate(g, xi);
  CHECK(std::abs(evaluate(fg, xi) - want) <= 1e-14 * (1.0 + std::abs(want)));
}

TEST_CASE("product norm obeys the subconvolutivity bound") {
  const auto ctx = make_ctx();
  const double c_max = ctx->cone().subconv_certificate().c_max;
  const auto f = oracle_element(ctx);
  const auto g = FockElement::from_terms(
      ctx, {{MultiIndex({1, 2}), cd(0.7, 0.1)}, {MultiIndex({3}), cd(-0.2, 0.4)}, {MultiIndex(), 1.0}});
  const auto fg = multiply(f, g);
  CHECK(fg.norm_alg() <= std::sqrt(c_max) * f.norm_alg() * g.norm_alg() * (1.0 + 1e-12));
}

TEST_CASE("kernel closed form matches the frozen reference and the basis sum") {
  const auto ctx = make_ctx();
  const auto xi = xi_point();
  const auto eta = eta_point();

  const auto closed = kernel_eval_closed(*ctx, xi, eta);
  CHECK(std::abs(closed - kKernelXiEta) <= 1e-14 * std::abs(kKernelXiEta));

  const auto series = kernel_eval_series(*ctx, xi, eta);
  CHECK(std::abs(series - closed) <= 1e-13 * std::abs(closed));

  // Shell n collapses to lambda_n pairing^n (multinomial identity).
  const auto shells = kernel_series_shells(*ctx, xi, eta);
  REQUIRE(shells.size() == 9);
  const auto p = pairing(xi, eta, ctx->spectrum());
  cd pw = 1.0;
  for (std::uint32_t n = 0; n <= 8; ++n) {
    CHECK(std::abs(shells[n] - ctx->lambda(n) * pw) <= 1e-13 * (1.0 + std::abs(pw)));
    pw *= p;
  }

  HVector far{{cd(1.0, 0.5), cd(0.0, 0.0)}};
  CHECK_THROWS_AS(kernel_eval_closed(*ctx, far, eta), std::domain_error);
}

TEST_CASE("kernel sections represent evaluation") {
  const auto ctx = make_ctx();
  const auto xi = xi_point();
  const auto eta = eta_point();
  const auto sec = kernel_section(ctx, xi);
  CHECK(sec.term_count() == 45);  // dense on the basis

  const cd xi_pow = xi.alpha[0] * xi.alpha[0] * xi.alpha[1];
  const cd want = std::conj(xi_pow) / ctx->monomial_weight_sq(MultiIndex({2, 1}));
  CHECK(std::abs(sec.coeff(MultiIndex({2, 1})) - want) <= 1e-14 * std::abs(want));

  const auto f = oracle_element(ctx);
  const auto rep = inner_alg(sec, f);
  CHECK(std::abs(rep - kFAtXi) <= 1e-13 * std::abs(kFAtXi));

  const auto sec_eta = kernel_section(ctx, eta);
  const auto cross = inner_alg(sec, sec_eta);
  CHECK(std::abs(cross - kernel_eval_closed(*ctx, eta, xi)) <= 1e-13 * std::abs(cross));
}

TEST_CASE("kernel Gram matrices are positive semidefinite") {
  const auto ctx = make_ctx();
  std::vector<HVector> pts;
  for (std::uint64_t n = 0; n < 8; ++n) {
    pts.push_back(random_in_ball(ctx->spectrum(), 0.1 + 0.1 * static_cast<double>(n), 900 + n));
  }
  const auto report = gram_psd_check(*ctx, pts);
  CHECK(report.psd);
  CHECK(report.spectral_norm > 0.0);
  CHECK(report.min_eigenvalue >= -1e-10 * report.spectral_norm);

  const auto single = gram_psd_check(*ctx, {xi_point()});
  CHECK(single.min_eigenvalue > 1.0);  // Lambda_cap(cm^2) >= lambda_0 + positive terms

  CHECK_THROWS_AS(gram_psd_check(*ctx, {}), std::invalid_argument);
  CHECK_THROWS_AS(gram_psd_check(*ctx, std::vector<HVector>(65, xi_point())),
                  std::invalid_argument);
}
