#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fockalg/multiindex.hpp"
#include "fockalg/space.hpp"
#include "fockalg/wiener.hpp"

namespace fockalg {

/// Shared numerical environment for truncated elements: spectrum, cone
/// coefficients, degree cap, and the cached tables every element operation
/// reads. Immutable after construction; share via shared_ptr.
///
/// Requirements: spectrum.dims() == dims >= 1, cone.cap() >= cap,
/// lambda_n > 0 for n <= cap (weights must exist), cap <= 170 (double
/// factorials), and C(cap + d, d) <= 10^7 (the basis is materialized).
class SpaceContext {
public:
  SpaceContext(Spectrum spectrum, ConeSeries cone, std::size_t dims, std::uint32_t cap);

  static std::shared_ptr<const SpaceContext> make(Spectrum spectrum, ConeSeries cone,
                                                  std::size_t dims, std::uint32_t cap);

  std::size_t dims() const { return dims_; }
  std::uint32_t cap() const { return cap_; }
  const Spectrum& spectrum() const { return spectrum_; }
  const ConeSeries& cone() const { return cone_; }

  double lambda(std::uint32_t n) const { return lambda_[n]; }
  double weight(std::uint32_t n) const { return w_[n]; }
  double weight_sq(std::uint32_t n) const { return w_sq_[n]; }
  double fact(std::uint32_t n) const { return fact_[n]; }
  /// max_{n <= cap} w(n)
  double weight_max() const { return w_max_; }

  double k_pow(std::size_t j, std::uint32_t p) const { return k_pow_[j * (cap_ + 1) + p]; }
  double k_sq_pow(std::size_t j, std::uint32_t p) const { return k_sq_pow_[j * (cap_ + 1) + p]; }

  /// ||z^I||^2 in the algebra norm: w(|I|)^2 I! k^{2I}.
  double monomial_weight_sq(const MultiIndex& i) const;
  /// ||z^I||^2 in the Gaussian L2 norm: I! k^{2I}.
  double monomial_l2_sq(const MultiIndex& i) const;

  /// Grlex enumeration of every admissible index (size C(cap + d, d)).
  const std::vector<MultiIndex>& basis() const { return basis_; }
  /// basis() split into degree shells, shell n at position n.
  const std::vector<std::vector<MultiIndex>>& basis_by_degree() const { return by_degree_; }

  /// Same parameters (values, not object identity).
  bool compatible(const SpaceContext& other) const;

private:
  Spectrum spectrum_;
  ConeSeries cone_;
  std::size_t dims_;
  std::uint32_t cap_;

  std::vector<double> lambda_, w_, w_sq_, fact_, k_pow_, k_sq_pow_;
  double w_max_ = 0.0;
  std::vector<MultiIndex> basis_;
  std::vector<std::vector<MultiIndex>> by_degree_;
};

using ContextPtr = std::shared_ptr<const SpaceContext>;

}  // namespace fockalg
