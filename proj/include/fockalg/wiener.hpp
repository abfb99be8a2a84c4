#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace fockalg {

enum class SeriesFamily { geometric, tau_p, custom };

/// Result of the subconvolutivity check: ratios_n = (lambda*lambda)_n / lambda_n,
/// c_max their maximum, and plateau = true when the running maximum has
/// stabilized over the last ceil(cap/4) degrees (2% relative window).
/// A ratio entry is 0 where both numerator and denominator vanish (the
/// constraint is vacuous there).
struct SubconvCertificate {
  double c_max = 0.0;
  std::vector<double> ratios;
  bool plateau = false;
};

/// Truncated power series sum_{n<=cap} lambda_n t^n with lambda_n >= 0.
/// Carries its family tag so closed-form tail bounds stay available after
/// construction.
class ConeSeries {
public:
  /// lambda_n = exp(-tau * n^p). Requires tau >= 0 and p in (0, 1].
  static ConeSeries tau_p(double tau, double p, std::uint32_t cap);

  /// lambda_n = rho^n. Requires 0 < rho <= 1.
  static ConeSeries geometric(double rho, std::uint32_t cap);

  /// Arbitrary nonnegative coefficients; cap = coeffs.size() - 1.
  static ConeSeries custom(std::vector<double> coeffs);

  std::uint32_t cap() const { return static_cast<std::uint32_t>(coeffs_.size() - 1); }
  double coeff(std::uint32_t n) const;
  const std::vector<double>& coeffs() const { return coeffs_; }

  SeriesFamily family() const { return family_; }
  double param_tau() const { return tau_; }
  double param_p() const { return p_; }
  double param_rho() const { return rho_; }

  /// Horner evaluation of the truncation on the closed unit disk.
  /// Throws std::domain_error when |t| > 1 + 1e-12.
  std::complex<double> eval(std::complex<double> t) const;
  double eval(double t) const;

  /// Plain polynomial evaluation with no domain restriction (the truncated
  /// series is entire; used when integrating against the Gaussian measure).
  std::complex<double> eval_unchecked(std::complex<double> t) const;

  /// Cauchy product truncated at the common cap. Caps must match.
  ConeSeries convolve(const ConeSeries& other) const;

  /// Induced weight w(n) = sqrt(1 / (n! lambda_n)). Requires n <= cap and
  /// lambda_n > 0.
  double weight(std::uint32_t n) const;
  double weight_sq(std::uint32_t n) const;

  /// Upper bound on the discarded tail sum_{n > trunc} lambda_n r^{2n} for
  /// 0 <= r <= 1, from the family tag (geometric: closed form, may be +inf
  /// at rho = r = 1; tau_p: direct summation, stopping once a term drops
  /// below 1e-18 of the partial sum, which undershoots the true tail by a
  /// relative ~1e-16). Throws std::invalid_argument for custom series.
  double tail_bound(double r, std::uint32_t trunc) const;

  SubconvCertificate subconv_certificate() const;

  bool operator==(const ConeSeries&) const = default;

private:
  ConeSeries(SeriesFamily fam, std::vector<double> coeffs, double tau, double p, double rho);

  SeriesFamily family_ = SeriesFamily::custom;
  std::vector<double> coeffs_;
  double tau_ = 0.0;
  double p_ = 0.0;
  double rho_ = 0.0;
};

/// n! in double precision (exact to a few ulps); throws std::range_error
/// for n > 170 where the double would overflow.
double factorial_d(std::uint32_t n);

}  // namespace fockalg
