#include "fockalg/gaussian.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "fockalg/kahan.hpp"
#include "fockalg/rng.hpp"

namespace fockalg {

namespace {

// Run fn(first, last) over a contiguous partition of [0, n). The partition
// depends only on n and the worker count never changes any result, because
// every consumer accumulates into disjoint slots.
void parallel_ranges(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_threads(), std::max<std::size_t>(n, 1));
  if (workers <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

// Per-block sums of n_quantities complex per-sample values, then the
// delete-one-block jackknife. eval(m, out) must write the sample-m value of
// each quantity into out[0..n_quantities). eval is copied into each worker,
// so mutable by-value scratch in the closure stays thread-private.
std::vector<MomentEstimate> jackknife(const SampleBatch& batch, std::size_t n_quantities,
                                      std::function<void(std::size_t, std::complex<double>*)> eval) {
  const std::size_t n_blocks = batch.blocks();
  std::vector<std::vector<std::complex<double>>> block_sums(
      n_blocks, std::vector<std::complex<double>>(n_quantities));

  parallel_ranges(n_blocks, [&, eval](std::size_t b_lo, std::size_t b_hi) {
    std::vector<std::complex<double>> buffer(n_quantities);
    std::vector<KahanComplexSum> sums(n_quantities);
    for (std::size_t b = b_lo; b < b_hi; ++b) {
      for (auto& s : sums) s = KahanComplexSum();
      const auto [lo, hi] = batch.block_range(b);
      for (std::size_t m = lo; m < hi; ++m) {
        eval(m, buffer.data());
        for (std::size_t q = 0; q < n_quantities; ++q) sums[q].add(buffer[q]);
      }
      for (std::size_t q = 0; q < n_quantities; ++q) block_sums[b][q] = sums[q].value();
    }
  });

  const double total_count = static_cast<double>(batch.size());
  std::vector<MomentEstimate> out(n_quantities);
  std::vector<std::complex<double>> leave_out(n_blocks);
  for (std::size_t q = 0; q < n_quantities; ++q) {
    KahanComplexSum total;
    for (std::size_t b = 0; b < n_blocks; ++b) total.add(block_sums[b][q]);
    out[q].estimate = total.value() / total_count;
    if (n_blocks < 2) {
      out[q].std_error = 0.0;
      continue;
    }
    KahanComplexSum mean_acc;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const auto [lo, hi] = batch.block_range(b);
      leave_out[b] = (total.value() - block_sums[b][q]) /
                     static_cast<double>(batch.size() - (hi - lo));
      mean_acc.add(leave_out[b]);
    }
    const auto mean = mean_acc.value() / static_cast<double>(n_blocks);
    KahanSum var_re, var_im;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const auto d = leave_out[b] - mean;
      var_re.add(d.real() * d.real());
      var_im.add(d.imag() * d.imag());
    }
    const double scale = static_cast<double>(n_blocks - 1) / static_cast<double>(n_blocks);
    out[q].std_error = std::sqrt(scale * (var_re.value() + var_im.value()));
  }
  return out;
}

void require_index(const SampleBatch& batch, const MultiIndex& i, const char* what) {
  if (i.width() > batch.dims()) {
    throw std::invalid_argument(std::string("gaussian: index uses more variables than the batch in ") + what);
  }
}

// z^I at draw m, reading the batch columns directly.
std::complex<double> monomial_at(const SampleBatch& batch, const MultiIndex& i, std::size_t m) {
  std::complex<double> v = 1.0;
  const auto& e = i.entries();
  for (std::size_t j = 0; j < e.size(); ++j) {
    const auto z = batch.column(j)[m];
    for (std::uint32_t p = 0; p < e[j]; ++p) v *= z;
  }
  return v;
}

}  // namespace

SampleBatch::SampleBatch(Spectrum s, std::size_t count, std::uint64_t seed)
    : spectrum_(std::move(s)), count_(count), seed_(seed) {
  if (count_ == 0) throw std::invalid_argument("gaussian: batch needs at least one draw");
  blocks_ = std::min<std::size_t>(100, count_);
  columns_.assign(spectrum_.dims(), std::vector<std::complex<double>>(count_));
  parallel_ranges(count_, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = 0; j < spectrum_.dims(); ++j) {
      const CounterRng rng(seed_, j);
      const double k = spectrum_.k(j);
      auto& col = columns_[j];
      for (std::size_t m = lo; m < hi; ++m) col[m] = k * rng.standard_complex(m);
    }
  });
}

const std::vector<std::complex<double>>& SampleBatch::column(std::size_t j) const {
  if (j >= columns_.size()) throw std::out_of_range("gaussian: column out of range");
  return columns_[j];
}

std::pair<std::size_t, std::size_t> SampleBatch::block_range(std::size_t b) const {
  if (b >= blocks_) throw std::invalid_argument("gaussian: block out of range");
  return {count_ * b / blocks_, count_ * (b + 1) / blocks_};
}

MomentEstimate mc_moment(const MultiIndex& i, const MultiIndex& j, const SampleBatch& batch) {
  const auto table = mc_moment_table({i, j}, batch);
  return table[0][1];
}

std::vector<std::vector<MomentEstimate>> mc_moment_table(const std::vector<MultiIndex>& indices,
                                                         const SampleBatch& batch) {
  if (indices.empty()) throw std::invalid_argument("gaussian: moment table needs indices");
  for (const auto& idx : indices) require_index(batch, idx, "mc_moment_table");
  const std::size_t p = indices.size();
  auto vals = std::vector<std::complex<double>>(p);
  const auto flat = jackknife(batch, p * p, [&, vals](std::size_t m, std::complex<double>* out) mutable {
    for (std::size_t a = 0; a < p; ++a) vals[a] = monomial_at(batch, indices[a], m);
    for (std::size_t a = 0; a < p; ++a) {
      const auto ca = std::conj(vals[a]);
      for (std::size_t b = 0; b < p; ++b) out[a * p + b] = ca * vals[b];
    }
  });
  std::vector<std::vector<MomentEstimate>> table(p, std::vector<MomentEstimate>(p));
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) table[a][b] = flat[a * p + b];
  }
  return table;
}

MomentEstimate mc_l2_norm_sq(const FockElement& f, const SampleBatch& batch) {
  if (!(f.context()->spectrum() == batch.spectrum())) {
    throw std::invalid_argument("gaussian: batch spectrum differs from the element's space");
  }
  // Flatten the terms once; evaluation per draw goes through a power table
  // over the variables the element actually uses.
  struct Term {
    std::vector<std::uint32_t> exponents;
    std::complex<double> coeff;
  };
  std::vector<Term> terms;
  terms.reserve(f.term_count());
  std::size_t width = 0;
  std::uint32_t max_entry = 0;
  for (const auto& [idx, a] : f.terms()) {
    terms.push_back({idx.entries(), a});
    width = std::max(width, terms.back().exponents.size());
    for (const auto e : terms.back().exponents) max_entry = std::max(max_entry, e);
  }
  auto pw = std::vector<std::complex<double>>(width * (max_entry + 1));
  return jackknife(batch, 1, [&, pw](std::size_t m, std::complex<double>* out) mutable {
    for (std::size_t j = 0; j < width; ++j) {
      std::complex<double> v = 1.0;
      for (std::uint32_t e = 0; e <= max_entry; ++e) {
        pw[j * (max_entry + 1) + e] = v;
        v *= batch.column(j)[m];
      }
    }
    KahanComplexSum val;
    for (const auto& term : terms) {
      std::complex<double> mono = term.coeff;
      for (std::size_t j = 0; j < term.exponents.size(); ++j) {
        mono *= pw[j * (max_entry + 1) + term.exponents[j]];
      }
      val.add(mono);
    }
    out[0] = std::norm(val.value());
  })[0];
}

MomentEstimate mc_t_apply(const ConeSeries& cone, const MultiIndex& j, const HVector& eta,
                          const SampleBatch& batch) {
  require_index(batch, j, "mc_t_apply");
  if (eta.dims() != batch.dims()) {
    throw std::invalid_argument("gaussian: point dimension differs from the batch");
  }
  if (j.degree() > cone.cap()) {
    throw std::invalid_argument("gaussian: index degree beyond the cone series cap");
  }
  // pairing(draw, eta) = sum_j conj(z_j) alpha_j(eta) / k_j^2, precomputed
  // as a fixed coefficient per coordinate.
  std::vector<std::complex<double>> c(batch.dims());
  for (std::size_t v = 0; v < batch.dims(); ++v) c[v] = eta.alpha[v] / batch.spectrum().k_sq(v);
  return jackknife(batch, 1, [&](std::size_t m, std::complex<double>* out) {
    std::complex<double> t = 0.0;
    for (std::size_t v = 0; v < c.size(); ++v) t += std::conj(batch.column(v)[m]) * c[v];
    out[0] = cone.eval_unchecked(t) * monomial_at(batch, j, m);
  })[0];
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("FOCKALG_THREADS")) {
    const auto parsed = std::strtoul(env, nullptr, 10);
    if (parsed >= 1) return static_cast<std::size_t>(parsed);
  }
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<std::size_t>(hw);
}

}  // namespace fockalg
