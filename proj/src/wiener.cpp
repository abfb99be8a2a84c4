#include "fockalg/wiener.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fockalg/kahan.hpp"

namespace fockalg {

namespace {

constexpr double kBoundaryTol = 1e-12;
// "Running maximum unchanged" over the plateau window, measured relatively.
// Essential families approach their constant like a tail series, so the
// change across the window drops under this once the maximum has locked in;
// non-essential families keep growing by >= 25% per window.
constexpr double kPlateauRelTol = 0.02;
constexpr std::uint32_t kMaxDoubleFactorial = 170;

}  // namespace

double factorial_d(std::uint32_t n) {
  if (n > kMaxDoubleFactorial) {
    throw std::range_error("wiener: factorial overflows double precision");
  }
  double r = 1.0;
  for (std::uint32_t m = 2; m <= n; ++m) r *= m;
  return r;
}

ConeSeries::ConeSeries(SeriesFamily fam, std::vector<double> coeffs, double tau, double p,
                       double rho)
    : family_(fam), coeffs_(std::move(coeffs)), tau_(tau), p_(p), rho_(rho) {}

ConeSeries ConeSeries::tau_p(double tau, double p, std::uint32_t cap) {
  if (!(tau >= 0.0)) throw std::invalid_argument("wiener: tau must be >= 0");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("wiener: p must lie in (0, 1]");
  std::vector<double> c(cap + 1);
  for (std::uint32_t n = 0; n <= cap; ++n) {
    c[n] = std::exp(-tau * std::pow(static_cast<double>(n), p));
  }
  return ConeSeries(SeriesFamily::tau_p, std::move(c), tau, p, 0.0);
}

ConeSeries ConeSeries::geometric(double rho, std::uint32_t cap) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("wiener: rho must lie in (0, 1]");
  std::vector<double> c(cap + 1);
  double v = 1.0;
  for (std::uint32_t n = 0; n <= cap; ++n, v *= rho) c[n] = v;
  return ConeSeries(SeriesFamily::geometric, std::move(c), 0.0, 0.0, rho);
}

ConeSeries ConeSeries::custom(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("wiener: empty coefficient list");
  for (double c : coeffs) {
    if (!(c >= 0.0)) throw std::invalid_argument("wiener: cone coefficients must be >= 0");
  }
  return ConeSeries(SeriesFamily::custom, std::move(coeffs), 0.0, 0.0, 0.0);
}

double ConeSeries::coeff(std::uint32_t n) const {
  if (n >= coeffs_.size()) throw std::out_of_range("wiener: coefficient index beyond cap");
  return coeffs_[n];
}

std::complex<double> ConeSeries::eval_unchecked(std::complex<double> t) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::complex<double> ConeSeries::eval(std::complex<double> t) const {
  if (std::abs(t) > 1.0 + kBoundaryTol) {
    throw std::domain_error("wiener: evaluation point outside the closed unit disk");
  }
  return eval_unchecked(t);
}

double ConeSeries::eval(double t) const {
  if (std::abs(t) > 1.0 + kBoundaryTol) {
    throw std::domain_error("wiener: evaluation point outside the closed unit disk");
  }
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

ConeSeries ConeSeries::convolve(const ConeSeries& other) const {
  if (coeffs_.size() != other.coeffs_.size()) {
    throw std::invalid_argument("wiener: convolution requires matching caps");
  }
  const std::uint32_t n_max = cap();
  std::vector<double> out(n_max + 1, 0.0);
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    KahanSum acc;
    for (std::uint32_t m = 0; m <= n; ++m) acc.add(coeffs_[m] * other.coeffs_[n - m]);
    out[n] = acc.value();
  }
  return ConeSeries(SeriesFamily::custom, std::move(out), 0.0, 0.0, 0.0);
}

double ConeSeries::weight_sq(std::uint32_t n) const {
  const double lam = coeff(n);
  if (!(lam > 0.0)) throw std::domain_error("wiener: weight needs a positive coefficient");
  return 1.0 / (factorial_d(n) * lam);
}

double ConeSeries::weight(std::uint32_t n) const { return std::sqrt(weight_sq(n)); }

double ConeSeries::tail_bound(double r, std::uint32_t trunc) const {
  if (!(r >= 0.0 && r <= 1.0 + kBoundaryTol)) {
    throw std::domain_error("wiener: tail bound radius must lie in [0, 1]");
  }
  if (r == 0.0) return 0.0;
  const double q = r * r;
  switch (family_) {
    case SeriesFamily::geometric: {
      const double a = rho_ * q;
      if (a >= 1.0) return std::numeric_limits<double>::infinity();  // rho = r = 1: divergent
      return std::pow(a, static_cast<double>(trunc) + 1.0) / (1.0 - a);
    }
    case SeriesFamily::tau_p: {
      if (tau_ == 0.0) {  // flat coefficients: geometric(1) tail
        if (q >= 1.0) return std::numeric_limits<double>::infinity();
        return std::pow(q, static_cast<double>(trunc) + 1.0) / (1.0 - q);
      }
      KahanSum acc;
      double partial = 0.0;
      // log-convex decay makes the first skipped term dominate what is left
      // after the 1e-18 cutoff; see the header note on the residual slack.
      for (std::uint64_t n = trunc + 1;; ++n) {
        const double term =
            std::exp(-tau_ * std::pow(static_cast<double>(n), p_)) * std::pow(q, static_cast<double>(n));
        acc.add(term);
        partial = acc.value();
        if (term < 1e-18 * partial) break;
        if (term == 0.0) break;
      }
      return partial;
    }
    case SeriesFamily::custom:
      throw std::invalid_argument("wiener: tail bound needs a family tag");
  }
  throw std::logic_error("wiener: unreachable family tag");
}

SubconvCertificate ConeSeries::subconv_certificate() const {
  const ConeSeries sq = convolve(*this);
  const std::uint32_t n_max = cap();
  SubconvCertificate cert;
  cert.ratios.resize(n_max + 1, 0.0);
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    const double conv = sq.coeffs_[n];
    const double lam = coeffs_[n];
    if (lam > 0.0) {
      cert.ratios[n] = conv / lam;
    } else if (conv == 0.0) {
      cert.ratios[n] = 0.0;  // vacuous degree: no constraint on C
    } else {
      throw std::domain_error("wiener: subconvolution ratio divides by a zero coefficient");
    }
  }

  std::vector<double> running(n_max + 1);
  double mx = cert.ratios[0];
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    mx = std::max(mx, cert.ratios[n]);
    running[n] = mx;
  }
  cert.c_max = mx;

  const std::uint32_t window = (n_max + 3) / 4;  // ceil(cap / 4)
  if (window == 0 || running[n_max] <= 0.0) {
    cert.plateau = true;
  } else {
    const double before = running[n_max - window];
    cert.plateau = (running[n_max] - before) <= kPlateauRelTol * running[n_max];
  }
  return cert;
}

}  // namespace fockalg
