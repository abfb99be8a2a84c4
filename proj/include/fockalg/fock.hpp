#pragma once

#include <complex>
#include <map>
#include <vector>

#include "fockalg/context.hpp"

namespace fockalg {

/// Element of the truncated weighted space: a finite linear combination
/// sum_I a_I z^I with |I| <= cap, coefficients stored sparsely in grlex
/// order. The three norms differ only by a diagonal power of the weight
/// sequence w(n):
///
///   norm_alg^2  = sum |a_I|^2 w(|I|)^2 I! k^{2I}    (kernel algebra)
///   norm_l2^2   = sum |a_I|^2 I! k^{2I}             (Gaussian L2)
///   norm_test^2 = sum |a_I|^2 I! k^{2I} / w(|I|)^2  (small test space)
///
/// so norm_alg <= W norm_l2 <= W^2 norm_test with W = max_n w(n).
/// Sums run in graded order with compensated accumulation.
///
/// truncated() reports that some operation discarded terms above the cap;
/// results stay exact on the retained degrees.
class FockElement {
public:
  using TermMap = std::map<MultiIndex, std::complex<double>, GrlexLess>;

  explicit FockElement(ContextPtr ctx);

  static FockElement zero(ContextPtr ctx) { return FockElement(std::move(ctx)); }
  static FockElement monomial(ContextPtr ctx, const MultiIndex& i,
                              std::complex<double> coeff = 1.0);
  static FockElement from_terms(ContextPtr ctx,
                                const std::vector<std::pair<MultiIndex, std::complex<double>>>& terms);

  const ContextPtr& context() const { return ctx_; }
  const TermMap& terms() const { return terms_; }
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }

  std::size_t term_count() const { return terms_.size(); }
  std::uint32_t degree() const;  // highest stored degree; 0 for the zero element
  std::complex<double> coeff(const MultiIndex& i) const;

  /// Insert or overwrite one coefficient. Exact zeros are dropped so the
  /// stored support is always the true support. Enforces the degree cap and
  /// the variable budget.
  void set(const MultiIndex& i, std::complex<double> a);

  FockElement operator+(const FockElement& other) const;
  FockElement operator-(const FockElement& other) const;
  FockElement scaled(std::complex<double> s) const;

  double norm_alg() const;
  double norm_l2() const;
  double norm_test() const;

private:
  ContextPtr ctx_;
  TermMap terms_;
  bool truncated_ = false;
};

/// ||z^I|| in the algebra norm: w(|I|) sqrt(I!) k^I.
double monomial_norm_alg(const SpaceContext& ctx, const MultiIndex& i);

/// Hermitian inner product of the algebra norm, conjugate-linear in f.
std::complex<double> inner_alg(const FockElement& f, const FockElement& g);

/// f(xi) for xi in the closed unit Cameron-Martin ball (throws
/// std::domain_error outside). Kahan-summed in graded order.
std::complex<double> evaluate(const FockElement& f, const HVector& xi);

/// f(xi) anywhere: elements are polynomials, hence entire. Used when
/// integrating over the ambient Gaussian measure.
std::complex<double> evaluate_entire(const FockElement& f, const HVector& xi);

/// Pointwise product, truncated at the cap; sets the truncated flag on the
/// result when terms were discarded. Cost O(terms(f) * terms(g)).
FockElement multiply(const FockElement& f, const FockElement& g);

/// Kernel section K_xi = sum_I conj(z^I(xi)) / ||z^I||_alg^2 z^I, the
/// representer of evaluation at xi: inner_alg(K_xi, f) = f(xi) on the
/// truncation. Dense (C(cap + d, d) terms).
FockElement kernel_section(const ContextPtr& ctx, const HVector& xi);

/// Closed form of the truncated kernel: Lambda_cap(pairing(xi, eta)).
std::complex<double> kernel_eval_closed(const SpaceContext& ctx, const HVector& xi,
                                        const HVector& eta);

/// Same value as a double sum over the monomial basis, grouped by degree;
/// shell n equals lambda_n pairing^n by the multinomial theorem, so this
/// agrees with kernel_eval_closed up to roundoff.
std::complex<double> kernel_eval_series(const SpaceContext& ctx, const HVector& xi,
                                        const HVector& eta);

/// The per-degree shells of kernel_eval_series (index n = degree).
std::vector<std::complex<double>> kernel_series_shells(const SpaceContext& ctx,
                                                       const HVector& xi, const HVector& eta);

struct GramReport {
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;  // max |eigenvalue|
  bool psd = false;            // min_eigenvalue >= -1e-10 * spectral_norm
};

/// Hermitian eigencheck of the kernel Gram matrix on up to 64 points.
GramReport gram_psd_check(const SpaceContext& ctx, const std::vector<HVector>& points);

}  // namespace fockalg
