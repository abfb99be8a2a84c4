#include "fockalg/space.hpp"

#include <cmath>
#include <stdexcept>

#include "fockalg/kahan.hpp"
#include "fockalg/rng.hpp"

namespace fockalg {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kUnitaryTol = 1e-12;

void require_dims(const HVector& xi, const Spectrum& s, const char* what) {
  if (xi.dims() != s.dims()) {
    throw std::invalid_argument(std::string("space: dimension mismatch in ") + what);
  }
}

}  // namespace

Spectrum::Spectrum(std::vector<double> k) : k_(std::move(k)) {
  if (k_.empty()) throw std::invalid_argument("space: spectrum needs at least one mode");
  for (double v : k_) {
    if (!(v > 0.0)) throw std::invalid_argument("space: spectrum entries must be positive");
  }
}

double Spectrum::k(std::size_t j) const {
  if (j >= k_.size()) throw std::out_of_range("space: mode index beyond spectrum");
  return k_[j];
}

double Spectrum::k_sq(std::size_t j) const {
  const double v = k(j);
  return v * v;
}

double Spectrum::trace() const {
  KahanSum acc;
  for (double v : k_) acc.add(v * v);
  return acc.value();
}

double h_norm(const HVector& xi) {
  KahanSum acc;
  for (const auto& a : xi.alpha) acc.add(std::norm(a));
  return std::sqrt(acc.value());
}

double cm_norm(const HVector& xi, const Spectrum& s) {
  require_dims(xi, s, "cm_norm");
  KahanSum acc;
  for (std::size_t j = 0; j < xi.dims(); ++j) acc.add(std::norm(xi.alpha[j]) / s.k_sq(j));
  return std::sqrt(acc.value());
}

BallLocation locate_in_ball(const HVector& xi, const Spectrum& s) {
  const double margin = 1.0 - cm_norm(xi, s);
  BallLocation loc;
  loc.margin = margin;
  if (std::abs(margin) <= kBoundaryTol) {
    loc.region = BallRegion::boundary;
  } else if (margin > 0.0) {
    loc.region = BallRegion::inside;
  } else {
    loc.region = BallRegion::outside;
  }
  return loc;
}

std::complex<double> pairing(const HVector& xi, const HVector& eta, const Spectrum& s) {
  require_dims(xi, s, "pairing");
  require_dims(eta, s, "pairing");
  KahanComplexSum acc;
  for (std::size_t j = 0; j < s.dims(); ++j) {
    acc.add(std::conj(xi.alpha[j]) * eta.alpha[j] / s.k_sq(j));
  }
  return acc.value();
}

HVector random_in_ball(const Spectrum& s, double r, std::uint64_t seed) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("space: radius must lie in [0, 1]");
  }
  const std::size_t d = s.dims();
  CounterRng rng(seed, /*stream=*/0x0B411);
  std::vector<std::complex<double>> c(d);
  double nsq = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    c[j] = rng.standard_complex(j);
    nsq += std::norm(c[j]);
  }
  const double scale = (nsq > 0.0 && r > 0.0) ? r / std::sqrt(nsq) : 0.0;
  HVector xi = HVector::zero(d);
  for (std::size_t j = 0; j < d; ++j) xi.alpha[j] = s.k(j) * (scale * c[j]);
  return xi;
}

HVector unitary_cm(const HVector& xi, const Spectrum& s, const Eigen::MatrixXcd& u) {
  require_dims(xi, s, "unitary_cm");
  const auto d = static_cast<Eigen::Index>(s.dims());
  if (u.rows() != d || u.cols() != d) {
    throw std::invalid_argument("space: unitary has the wrong shape");
  }
  const Eigen::MatrixXcd defect =
      u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d);
  if (defect.cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw std::invalid_argument("space: matrix is not unitary to 1e-12");
  }
  Eigen::VectorXcd c(d);
  for (Eigen::Index j = 0; j < d; ++j) c(j) = xi.alpha[j] / s.k(j);
  const Eigen::VectorXcd rotated = u * c;
  HVector out = HVector::zero(s.dims());
  for (Eigen::Index j = 0; j < d; ++j) out.alpha[j] = s.k(j) * rotated(j);
  return out;
}

Eigen::MatrixXcd random_unitary(std::size_t d, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("space: dimension must be positive");
  CounterRng rng(seed, /*stream=*/0x0B41U);
  Eigen::MatrixXcd g(d, d);
  std::uint64_t ctr = 0;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const auto z = rng.standard_complex(ctr++);
      g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          std::complex<double>(z.real(), z.imag());
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  // Fix column phases so the result is a deterministic function of the seed
  // alone (QR is unique only up to a diagonal phase).
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const std::complex<double> rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

}  // namespace fockalg
