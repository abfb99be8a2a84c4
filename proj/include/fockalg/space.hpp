#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace fockalg {

/// Diagonal covariance spectrum: k_j > 0 is the standard deviation of the
/// j-th complex coordinate under the reference Gaussian measure, and the
/// Cameron-Martin metric rescales coordinate j by 1/k_j.
class Spectrum {
public:
  explicit Spectrum(std::vector<double> k);

  std::size_t dims() const { return k_.size(); }
  double k(std::size_t j) const;
  double k_sq(std::size_t j) const;
  double trace() const;  // sum_j k_j^2
  const std::vector<double>& k_values() const { return k_; }

  bool operator==(const Spectrum&) const = default;

private:
  std::vector<double> k_;
};

/// Point of the ambient space, stored as the coordinate values
/// alpha_j = z_j(xi).
struct HVector {
  std::vector<std::complex<double>> alpha;

  std::size_t dims() const { return alpha.size(); }
  static HVector zero(std::size_t d) { return HVector{std::vector<std::complex<double>>(d)}; }
};

/// Ambient norm sqrt(sum |alpha_j|^2).
double h_norm(const HVector& xi);

/// Cameron-Martin norm sqrt(sum |alpha_j|^2 / k_j^2).
double cm_norm(const HVector& xi, const Spectrum& s);

enum class BallRegion { inside, boundary, outside };

/// margin = 1 - cm_norm; boundary means |margin| <= 1e-12.
struct BallLocation {
  BallRegion region = BallRegion::inside;
  double margin = 1.0;
};

BallLocation locate_in_ball(const HVector& xi, const Spectrum& s);

/// Hermitian pairing sum_j conj(alpha_j(xi)) alpha_j(eta) / k_j^2,
/// conjugate-linear in the first slot. Satisfies
/// |pairing(xi, eta)| <= cm_norm(xi) cm_norm(eta).
std::complex<double> pairing(const HVector& xi, const HVector& eta, const Spectrum& s);

/// Deterministic pseudo-random point with cm_norm == r (up to one rounding):
/// direction uniform on the Cameron-Martin sphere, then scaled.
HVector random_in_ball(const Spectrum& s, double r, std::uint64_t seed);

/// Rotate Cameron-Martin coordinates by U: alpha' = k .* (U (alpha ./ k)).
/// U must be unitary to 1e-12 (checked entrywise on U* U - I).
/// Preserves cm_norm and the pairing.
HVector unitary_cm(const HVector& xi, const Spectrum& s, const Eigen::MatrixXcd& u);

/// Deterministic Haar-like unitary: QR factor of a seeded complex Gaussian
/// matrix.
Eigen::MatrixXcd random_unitary(std::size_t d, std::uint64_t seed);

}  // namespace fockalg
