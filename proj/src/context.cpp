#include "fockalg/context.hpp"

#include <stdexcept>

namespace fockalg {

namespace {
constexpr std::uint64_t kMaxBasisSize = 10'000'000;
}

SpaceContext::SpaceContext(Spectrum spectrum, ConeSeries cone, std::size_t dims,
                           std::uint32_t cap)
    : spectrum_(std::move(spectrum)), cone_(std::move(cone)), dims_(dims), cap_(cap) {
  if (dims_ == 0) throw std::invalid_argument("context: dimension must be positive");
  if (spectrum_.dims() != dims_) {
    throw std::invalid_argument("context: spectrum dimension mismatch");
  }
  if (cone_.cap() < cap_) {
    throw std::invalid_argument("context: cone series does not cover the degree cap");
  }
  if (index_count(dims_, cap_) > kMaxBasisSize) {
    throw std::invalid_argument("context: basis too large to materialize");
  }

  lambda_.resize(cap_ + 1);
  w_.resize(cap_ + 1);
  w_sq_.resize(cap_ + 1);
  fact_.resize(cap_ + 1);
  for (std::uint32_t n = 0; n <= cap_; ++n) {
    lambda_[n] = cone_.coeff(n);
    if (!(lambda_[n] > 0.0)) {
      throw std::invalid_argument("context: cone coefficients must be positive up to the cap");
    }
    fact_[n] = factorial_d(n);  // throws past 170
    w_sq_[n] = 1.0 / (fact_[n] * lambda_[n]);
    w_[n] = std::sqrt(w_sq_[n]);
    w_max_ = std::max(w_max_, w_[n]);
  }

  k_pow_.resize(dims_ * (cap_ + 1));
  k_sq_pow_.resize(dims_ * (cap_ + 1));
  for (std::size_t j = 0; j < dims_; ++j) {
    const double k = spectrum_.k(j);
    const double k2 = k * k;
    double p1 = 1.0, p2 = 1.0;
    for (std::uint32_t p = 0; p <= cap_; ++p, p1 *= k, p2 *= k2) {
      k_pow_[j * (cap_ + 1) + p] = p1;
      k_sq_pow_[j * (cap_ + 1) + p] = p2;
    }
  }

  basis_ = enumerate_indices(dims_, cap_);
  by_degree_.resize(cap_ + 1);
  for (const auto& idx : basis_) by_degree_[idx.degree()].push_back(idx);
}

std::shared_ptr<const SpaceContext> SpaceContext::make(Spectrum spectrum, ConeSeries cone,
                                                       std::size_t dims, std::uint32_t cap) {
  return std::make_shared<const SpaceContext>(std::move(spectrum), std::move(cone), dims, cap);
}

double SpaceContext::monomial_weight_sq(const MultiIndex& i) const {
  return w_sq_[i.degree()] * monomial_l2_sq(i);
}

double SpaceContext::monomial_l2_sq(const MultiIndex& i) const {
  const auto& e = i.entries();
  if (e.size() > dims_ || i.degree() > cap_) {
    throw std::invalid_argument("context: index outside the truncated basis");
  }
  double r = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    r *= fact_[e[j]] * k_sq_pow_[j * (cap_ + 1) + e[j]];
  }
  return r;
}

bool SpaceContext::compatible(const SpaceContext& other) const {
  if (this == &other) return true;
  return dims_ == other.dims_ && cap_ == other.cap_ && spectrum_ == other.spectrum_ &&
         lambda_ == other.lambda_;
}

}  // namespace fockalg
