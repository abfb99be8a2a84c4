#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fockalg/fock.hpp"
#include "fockalg/space.hpp"

namespace fockalg {

/// Batch of M independent draws from the reference Gaussian measure:
/// coordinate j of draw m is a complex normal with E z = 0, E|z|^2 = k_j^2
/// (real and imaginary parts independent N(0, k_j^2 / 2)).
///
/// Generation is counter-based: draw m is a pure function of (seed, j, m),
/// so batches are reproducible across runs and across chunk/thread counts.
/// Estimates report jackknife standard errors over contiguous blocks.
class SampleBatch {
public:
  SampleBatch(Spectrum s, std::size_t count, std::uint64_t seed);

  std::size_t size() const { return count_; }
  std::size_t dims() const { return spectrum_.dims(); }
  std::uint64_t seed() const { return seed_; }
  const Spectrum& spectrum() const { return spectrum_; }

  /// Coordinate j of every draw, length size().
  const std::vector<std::complex<double>>& column(std::size_t j) const;

  /// Jackknife block count (100, or size() when smaller).
  std::size_t blocks() const { return blocks_; }
  /// Half-open sample range of block b.
  std::pair<std::size_t, std::size_t> block_range(std::size_t b) const;

private:
  Spectrum spectrum_;
  std::size_t count_;
  std::uint64_t seed_;
  std::size_t blocks_;
  std::vector<std::vector<std::complex<double>>> columns_;
};

struct MomentEstimate {
  std::complex<double> estimate;
  double std_error = 0.0;  // sqrt(Var(Re) + Var(Im)), jackknife over blocks
};

/// Monte Carlo estimate of the moment E[conj(z^I) z^J]; analytic value
/// delta_{IJ} I! k^{2I}.
MomentEstimate mc_moment(const MultiIndex& i, const MultiIndex& j, const SampleBatch& batch);

/// All pairs (I_a, I_b) of the given list in a single pass over the batch;
/// entry [a][b] estimates E[conj(z^{I_a}) z^{I_b}].
std::vector<std::vector<MomentEstimate>> mc_moment_table(const std::vector<MultiIndex>& indices,
                                                         const SampleBatch& batch);

/// Monte Carlo estimate of E|f|^2 = norm_l2(f)^2.
MomentEstimate mc_l2_norm_sq(const FockElement& f, const SampleBatch& batch);

/// Monte Carlo application of the truncated kernel integral operator to the
/// monomial z^J, evaluated at eta: estimates
///   E[ Lambda_cap(pairing(xi, eta)) z^J(xi) ] = z^J(eta) / w(|J|)^2
/// for |J| <= cap. The batch must share the spectrum's dimension.
MomentEstimate mc_t_apply(const ConeSeries& cone, const MultiIndex& j, const HVector& eta,
                          const SampleBatch& batch);

/// Worker-thread cap for batch generation: FOCKALG_THREADS (>= 1), default
/// hardware concurrency. Results never depend on it.
std::size_t worker_threads();

}  // namespace fockalg
