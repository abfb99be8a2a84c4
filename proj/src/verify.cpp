#include "fockalg/verify.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

#include "fockalg/kahan.hpp"
#include "fockalg/operators.hpp"
#include "fockalg/rng.hpp"
#include "fockalg/serialization.hpp"

namespace fockalg {

namespace {

// Stream tags for the deterministic generators in this file. Disjoint from
// the tags used inside random_in_ball / random_unitary; caller-supplied
// stream offsets stay well below the gaps.
constexpr std::uint64_t kElementStream = 0x0E1E000;
constexpr std::uint64_t kAlignedStream = 0x0A11000;
constexpr std::uint64_t kRadiusStream = 0x7A1;

std::string index_label(const MultiIndex& i) {
  if (i.entries().empty()) return "0";
  std::string out;
  for (std::size_t j = 0; j < i.entries().size(); ++j) {
    if (j) out += '.';
    out += std::to_string(i.entries()[j]);
  }
  return out;
}

std::string bracket(const std::string& quantity, const std::string& detail) {
  return quantity + "[" + detail + "]";
}

// |estimate - analytic| <= tol, comparing in the complex plane; the row
// stores moduli.
CheckRow det_row(std::string quantity, std::complex<double> analytic,
                 std::complex<double> estimate, double tol) {
  CheckRow row;
  row.quantity = std::move(quantity);
  row.analytic = std::abs(analytic);
  row.estimate = std::abs(estimate);
  row.std_error = tol;
  row.pass = std::abs(estimate - analytic) <= tol;
  return row;
}

// value <= bound + slack.
CheckRow upper_bound_row(std::string quantity, double bound, double value, double slack) {
  CheckRow row;
  row.quantity = std::move(quantity);
  row.analytic = bound;
  row.estimate = value;
  row.std_error = slack;
  row.pass = value <= bound + slack;
  return row;
}

// value >= bound - slack.
CheckRow lower_bound_row(std::string quantity, double bound, double value, double slack) {
  CheckRow row;
  row.quantity = std::move(quantity);
  row.analytic = bound;
  row.estimate = value;
  row.std_error = slack;
  row.pass = value >= bound - slack;
  return row;
}

CheckRow mc_row(std::string quantity, std::complex<double> analytic, const MomentEstimate& est,
                double sigma_band, const SampleBatch& batch) {
  CheckRow row;
  row.quantity = std::move(quantity);
  row.analytic = std::abs(analytic);
  row.estimate = std::abs(est.estimate);
  row.std_error = est.std_error;
  row.m_samples = batch.size();
  row.seed = batch.seed();
  row.pass = std::abs(est.estimate - analytic) <= sigma_band * est.std_error;
  return row;
}

// The cone series actually in force on a truncation: coefficients sliced at
// the context cap. Used for certificates and the kernel integral operator.
ConeSeries truncated_cone(const SpaceContext& ctx) {
  const auto& full = ctx.cone().coeffs();
  return ConeSeries::custom(std::vector<double>(full.begin(), full.begin() + ctx.cap() + 1));
}

ConeSeries cone_at_cap(const ConeSeries& cone, std::uint32_t cap) {
  switch (cone.family()) {
    case SeriesFamily::tau_p:
      return ConeSeries::tau_p(cone.param_tau(), cone.param_p(), cap);
    case SeriesFamily::geometric:
      return ConeSeries::geometric(cone.param_rho(), cap);
    case SeriesFamily::custom:
      if (cone.cap() < cap) {
        throw std::invalid_argument("verify: custom cone series does not reach the requested cap");
      }
      return cone;
  }
  throw std::logic_error("verify: unreachable cone family");
}

// E[conj(z^I) z^I] = I! k^{2I} under the reference Gaussian measure.
double analytic_moment(const Spectrum& s, const MultiIndex& i) {
  double v = 1.0;
  const auto& e = i.entries();
  for (std::size_t j = 0; j < e.size(); ++j) {
    v *= factorial_d(e[j]) * std::pow(s.k_sq(j), static_cast<double>(e[j]));
  }
  return v;
}

std::complex<double> monomial_at_point(const MultiIndex& i, const HVector& xi) {
  std::complex<double> v = 1.0;
  const auto& e = i.entries();
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (std::uint32_t p = 0; p < e[j]; ++p) v *= xi.alpha[j];
  }
  return v;
}

// Deterministic interior point for pair p of a generator, radius r < 1 drawn
// from (0, max_r).
HVector scan_point(const RunConfig& cfg, std::uint64_t tag, std::size_t p, double max_r) {
  const CounterRng rng(cfg.base_seed, kRadiusStream + tag);
  const double r = max_r * rng.uniform(2 * p);
  return random_in_ball(cfg.spectrum, r, rng.bits(2 * p + 1));
}

// Alternates a dense gaussian element with a sparse one.
FockElement pool_element(const ContextPtr& ctx, const RunConfig& cfg, std::uint32_t max_deg,
                         std::size_t c) {
  return random_element(ctx, max_deg, c % 2 ? 12 : 0, cfg.base_seed, c);
}

double max_pool_ratio(const ContextPtr& ctx, const RunConfig& cfg, std::size_t pairs,
                      std::vector<double>* out_ratios) {
  const auto cap = ctx->cap();
  const std::uint32_t dense_deg = std::min<std::uint32_t>(cap, 10);
  const std::uint32_t aligned_deg = cap / 2;
  double max_ratio = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    FockElement f = FockElement::zero(ctx);
    FockElement g = FockElement::zero(ctx);
    if (p % 2 == 0) {
      f = random_element(ctx, dense_deg, 0, cfg.base_seed, 2 * p);
      g = random_element(ctx, dense_deg, 0, cfg.base_seed, 2 * p + 1);
    } else {
      const std::size_t var = (p / 2) % ctx->dims();
      f = aligned_univariate(ctx, var, aligned_deg, cfg.base_seed, 2 * p);
      g = aligned_univariate(ctx, var, aligned_deg, cfg.base_seed, 2 * p + 1);
    }
    const double ratio = multiply(f, g).norm_alg() / (f.norm_alg() * g.norm_alg());
    if (out_ratios) out_ratios->push_back(ratio);
    max_ratio = std::max(max_ratio, ratio);
  }
  return max_ratio;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::vector<std::uint64_t> RunConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out(30);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = base_seed + i;
  return out;
}

RunConfig default_run_config() { return RunConfig{}; }

Spectrum default_spectrum(std::size_t dims) {
  if (dims == 0) throw std::invalid_argument("verify: dims must be at least 1");
  std::vector<double> k;
  k.reserve(dims);
  const double head[3] = {0.8, 0.5, 0.3};
  for (std::size_t j = 0; j < dims; ++j) {
    k.push_back(j < 3 ? head[j] : k.back() / 2.0);
  }
  return Spectrum(std::move(k));
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg = default_run_config();
  if (j.contains("dims")) {
    cfg.dims = j.at("dims").get<std::size_t>();
    cfg.spectrum = default_spectrum(cfg.dims);
  }
  if (j.contains("cap")) {
    cfg.cap = j.at("cap").get<std::uint32_t>();
    cfg.cone = ConeSeries::tau_p(1.0, 0.5, cfg.cap);
  }
  if (j.contains("spectrum")) cfg.spectrum = spectrum_from_json(j.at("spectrum"));
  if (j.contains("cone")) cfg.cone = cone_from_json(j.at("cone"));
  if (j.contains("mc_samples")) cfg.mc_samples = j.at("mc_samples").get<std::size_t>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
  }
  if (j.contains("sigma_band")) cfg.sigma_band = j.at("sigma_band").get<double>();
  if (j.contains("relative_tol")) cfg.relative_tol = j.at("relative_tol").get<double>();
  if (j.contains("subconv_expect")) cfg.subconv_expect = j.at("subconv_expect").get<std::string>();
  if (j.contains("points")) {
    cfg.points.clear();
    for (const auto& pt : j.at("points")) cfg.points.push_back(hvector_from_json(pt));
  }
  if (j.contains("element_path")) cfg.element_path = j.at("element_path").get<std::string>();
  if (j.contains("point_path")) cfg.point_path = j.at("point_path").get<std::string>();
  if (j.contains("suite")) cfg.suite = j.at("suite").get<std::string>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (cfg.subconv_expect != "essential" && cfg.subconv_expect != "non-essential") {
    throw std::invalid_argument("config: subconv_expect must be \"essential\" or \"non-essential\"");
  }
  return cfg;
}

ContextPtr make_context(const RunConfig& cfg) { return make_context(cfg, cfg.cap); }

ContextPtr make_context(const RunConfig& cfg, std::uint32_t cap) {
  if (cfg.spectrum.dims() != cfg.dims) {
    throw std::invalid_argument("config: spectrum length differs from dims");
  }
  return SpaceContext::make(cfg.spectrum, cone_at_cap(cfg.cone, cap), cfg.dims, cap);
}

FockElement random_element(const ContextPtr& ctx, std::uint32_t max_deg, std::size_t term_budget,
                           std::uint64_t seed, std::uint64_t stream) {
  const CounterRng rng(seed, kElementStream + stream);
  const auto deg = std::min(max_deg, ctx->cap());
  std::vector<const MultiIndex*> pool;
  for (const auto& idx : ctx->basis()) {
    if (idx.degree() <= deg) pool.push_back(&idx);
  }
  std::vector<std::size_t> chosen;
  if (term_budget == 0 || term_budget >= pool.size()) {
    chosen.resize(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) chosen[i] = i;
  } else {
    std::set<std::size_t> picked;
    std::uint64_t counter = std::uint64_t(1) << 40;  // clear of the coefficient counters
    while (picked.size() < term_budget) picked.insert(rng.bits(counter++) % pool.size());
    chosen.assign(picked.begin(), picked.end());
  }
  FockElement f(ctx);
  std::uint64_t n = 0;
  for (const auto pos : chosen) {
    const auto& idx = *pool[pos];
    f.set(idx, rng.standard_complex(n++) / monomial_norm_alg(*ctx, idx));
  }
  return f;
}

FockElement aligned_univariate(const ContextPtr& ctx, std::size_t var, std::uint32_t max_deg,
                               std::uint64_t seed, std::uint64_t stream) {
  if (var >= ctx->dims()) throw std::invalid_argument("verify: variable out of range");
  const CounterRng rng(seed, kAlignedStream + stream);
  const auto deg = std::min(max_deg, ctx->cap());
  FockElement f(ctx);
  MultiIndex idx;
  for (std::uint32_t m = 0; m <= deg; ++m) {
    f.set(idx, rng.uniform(m) / monomial_norm_alg(*ctx, idx));
    idx = idx.raised(var);
  }
  return f;
}

bool SuiteReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::vector<CheckRow> moments_rows(const RunConfig& cfg) {
  const auto indices = enumerate_indices(cfg.dims, 3);
  std::vector<CheckRow> rows;
  std::size_t seeds_passed = 0;
  const auto seeds = cfg.seed_list();
  for (const auto seed : seeds) {
    const SampleBatch batch(cfg.spectrum, cfg.mc_samples, seed);
    const auto table = mc_moment_table(indices, batch);
    bool seed_ok = true;
    for (std::size_t a = 0; a < indices.size(); ++a) {
      for (std::size_t b = a; b < indices.size(); ++b) {
        const double analytic =
            indices[a] == indices[b] ? analytic_moment(cfg.spectrum, indices[a]) : 0.0;
        auto row = mc_row(
            bracket("moment", index_label(indices[a]) + "|" + index_label(indices[b])),
            analytic, table[a][b], cfg.sigma_band, batch);
        seed_ok = seed_ok && row.pass;
        rows.push_back(std::move(row));
      }
    }
    if (seed_ok) ++seeds_passed;
  }
  CheckRow summary;
  summary.quantity = "moments.seed_pass_fraction";
  summary.analytic = 1.0;
  summary.estimate = static_cast<double>(seeds_passed) / static_cast<double>(seeds.size());
  summary.std_error = 0.0;
  summary.m_samples = cfg.mc_samples;
  summary.pass = seeds_passed == seeds.size();
  rows.push_back(std::move(summary));
  return rows;
}

std::vector<CheckRow> kernel_identity_rows(const RunConfig& cfg, std::size_t pairs,
                                           double max_cm) {
  const auto ctx = make_context(cfg);
  std::vector<CheckRow> rows;
  const bool family_tail = cfg.cone.family() != SeriesFamily::custom;
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto xi = scan_point(cfg, 2, 2 * p, max_cm);
    const auto eta = scan_point(cfg, 2, 2 * p + 1, max_cm);
    const auto closed = kernel_eval_closed(*ctx, xi, eta);
    const auto series = kernel_eval_series(*ctx, xi, eta);
    const double r_xi = cm_norm(xi, cfg.spectrum);
    const double r_eta = cm_norm(eta, cfg.spectrum);
    double tol = cfg.relative_tol * (1.0 + std::abs(closed));
    if (family_tail) {
      tol = std::max(tol, cfg.cone.tail_bound(std::sqrt(r_xi * r_eta), ctx->cap()));
    }
    rows.push_back(det_row(bracket("kernel.closed_vs_series", std::to_string(p)), closed,
                           series, tol));
    const double excess = std::abs(pairing(xi, eta, cfg.spectrum)) - r_xi * r_eta;
    rows.push_back(upper_bound_row(bracket("kernel.pairing_excess", std::to_string(p)), 0.0,
                                   std::max(0.0, excess), 1e-12));
  }
  return rows;
}

std::vector<CheckRow> reproducing_rows(const RunConfig& cfg, std::size_t count) {
  const auto ctx = make_context(cfg);
  std::vector<CheckRow> rows;
  for (std::size_t c = 0; c < count; ++c) {
    const auto f = pool_element(ctx, cfg, ctx->cap(), c);
    const auto xi = scan_point(cfg, 3, c, 0.9);
    const auto section = kernel_section(ctx, xi);
    const auto lhs = inner_alg(section, f);
    const auto rhs = evaluate(f, xi);
    rows.push_back(det_row(bracket("kernel.reproducing", std::to_string(c)), rhs, lhs,
                           cfg.relative_tol * (1.0 + f.norm_alg())));
  }
  return rows;
}

std::vector<CheckRow> psd_rows(const RunConfig& cfg, std::size_t points) {
  const auto ctx = make_context(cfg);
  std::vector<HVector> pts;
  pts.reserve(points);
  for (std::size_t p = 0; p < points; ++p) pts.push_back(scan_point(cfg, 4, p, 0.95));
  const auto report = gram_psd_check(*ctx, pts);
  std::vector<CheckRow> rows;
  CheckRow row;
  row.quantity = "gram.negativity";
  row.analytic = 0.0;
  row.estimate = std::max(0.0, -report.min_eigenvalue);
  row.std_error = 1e-10 * report.spectral_norm;
  row.pass = report.psd;
  rows.push_back(std::move(row));
  return rows;
}

std::vector<CheckRow> unitary_invariance_rows(const RunConfig& cfg, std::size_t count) {
  const auto ctx = make_context(cfg);
  std::vector<CheckRow> rows;
  for (std::size_t c = 0; c < count; ++c) {
    const auto u = random_unitary(cfg.dims, cfg.base_seed + c);
    const auto xi = scan_point(cfg, 5, 2 * c, 0.9);
    const auto eta = scan_point(cfg, 5, 2 * c + 1, 0.9);
    const auto base = kernel_eval_closed(*ctx, xi, eta);
    const auto rotated =
        kernel_eval_closed(*ctx, unitary_cm(xi, cfg.spectrum, u), unitary_cm(eta, cfg.spectrum, u));
    rows.push_back(det_row(bracket("kernel.unitary_invariance", std::to_string(c)), base,
                           rotated, cfg.relative_tol * (1.0 + std::abs(base))));
  }
  return rows;
}

std::vector<CheckRow> hermitian_rows(const RunConfig& cfg, std::size_t count) {
  const auto ctx = make_context(cfg);
  std::vector<CheckRow> rows;
  for (std::size_t c = 0; c < count; ++c) {
    const auto xi = scan_point(cfg, 6, 2 * c, 0.95);
    const auto eta = scan_point(cfg, 6, 2 * c + 1, 0.95);
    const auto fwd = kernel_eval_closed(*ctx, xi, eta);
    const auto rev = std::conj(kernel_eval_closed(*ctx, eta, xi));
    rows.push_back(det_row(bracket("kernel.hermitian", std::to_string(c)), fwd, rev,
                           cfg.relative_tol * (1.0 + std::abs(fwd))));
  }
  return rows;
}

std::vector<CheckRow> pinned_point_rows(const RunConfig& cfg) {
  std::vector<CheckRow> rows;
  if (cfg.points.empty()) return rows;
  const auto ctx = make_context(cfg);
  for (std::size_t a = 0; a < cfg.points.size(); ++a) {
    for (std::size_t b = 0; b < cfg.points.size(); ++b) {
      const auto closed = kernel_eval_closed(*ctx, cfg.points[a], cfg.points[b]);
      const auto series = kernel_eval_series(*ctx, cfg.points[a], cfg.points[b]);
      rows.push_back(det_row(
          bracket("kernel.pinned", std::to_string(a) + "|" + std::to_string(b)), closed,
          series, cfg.relative_tol * (1.0 + std::abs(closed))));
    }
  }
  return rows;
}

std::vector<CheckRow> algebra_bound_rows(const RunConfig& cfg, std::size_t pairs) {
  const auto ctx = make_context(cfg);
  const double bound = std::sqrt(truncated_cone(*ctx).subconv_certificate().c_max);
  const std::uint32_t dense_deg = std::min<std::uint32_t>(ctx->cap(), 10);
  const std::uint32_t aligned_deg = ctx->cap() / 2;
  std::vector<CheckRow> rows;
  for (std::size_t p = 0; p < pairs; ++p) {
    FockElement f = FockElement::zero(ctx);
    FockElement g = FockElement::zero(ctx);
    if (p % 2 == 0) {
      f = random_element(ctx, dense_deg, 0, cfg.base_seed, 2 * p);
      g = random_element(ctx, dense_deg, 0, cfg.base_seed, 2 * p + 1);
    } else {
      const std::size_t var = (p / 2) % ctx->dims();
      f = aligned_univariate(ctx, var, aligned_deg, cfg.base_seed, 2 * p);
      g = aligned_univariate(ctx, var, aligned_deg, cfg.base_seed, 2 * p + 1);
    }
    const double ratio = multiply(f, g).norm_alg() / (f.norm_alg() * g.norm_alg());
    rows.push_back(upper_bound_row(bracket("algebra.product_ratio", std::to_string(p)), bound,
                                   ratio, 1e-12 * bound));
  }
  return rows;
}

std::vector<CheckRow> algebra_growth_rows(const RunConfig& cfg) {
  std::vector<std::uint32_t> caps = {8, 16, 24};
  if (cfg.cone.family() == SeriesFamily::custom) {
    std::erase_if(caps, [&](std::uint32_t n) { return n > cfg.cone.cap(); });
  }
  std::vector<CheckRow> rows;
  std::vector<double> family_max, control_max;
  constexpr std::size_t kPairs = 48;
  for (const auto cap : caps) {
    const auto fam_ctx = make_context(cfg, cap);
    const auto ctl_ctx =
        SpaceContext::make(cfg.spectrum, ConeSeries::geometric(1.0, cap), cfg.dims, cap);
    const double fam_bound = std::sqrt(truncated_cone(*fam_ctx).subconv_certificate().c_max);
    const double ctl_bound = std::sqrt(truncated_cone(*ctl_ctx).subconv_certificate().c_max);
    const double fam_ratio = max_pool_ratio(fam_ctx, cfg, kPairs, nullptr);
    const double ctl_ratio = max_pool_ratio(ctl_ctx, cfg, kPairs, nullptr);
    family_max.push_back(fam_ratio);
    control_max.push_back(ctl_ratio);
    rows.push_back(upper_bound_row(bracket("algebra.max_ratio", std::to_string(cap)), fam_bound,
                                   fam_ratio, 1e-12 * fam_bound));
    rows.push_back(upper_bound_row(bracket("algebra.control_max_ratio", std::to_string(cap)),
                                   ctl_bound, ctl_ratio, 1e-12 * ctl_bound));
  }
  if (caps.size() >= 2) {
    rows.push_back(lower_bound_row("algebra.control_growth", 1.2,
                                   control_max.back() / control_max.front(), 0.0));
  }
  return rows;
}

std::vector<CheckRow> ccr_defect_rows(const RunConfig& cfg, std::size_t count) {
  const auto ctx = make_context(cfg);
  std::vector<CheckRow> rows;
  if (ctx->cap() < 2) return rows;
  for (std::size_t c = 0; c < count; ++c) {
    const auto f = random_element(ctx, ctx->cap() - 2, c % 2 ? 8 : 0, cfg.base_seed, c);
    const auto defect = ccr_defect(c % ctx->dims(), f);
    rows.push_back(upper_bound_row(bracket("ccr.defect", std::to_string(c)), 0.0, defect,
                                   1e-11 * (1.0 + f.norm_alg())));
  }
  return rows;
}

std::vector<CheckRow> adjointness_rows(const RunConfig& cfg) {
  const auto ctx = make_context(cfg);
  std::vector<CheckRow> rows;
  for (std::size_t j = 0; j < ctx->dims(); ++j) {
    double worst = 0.0;
    for (const auto& idx : ctx->basis()) {
      if (idx.degree() + 1 > ctx->cap()) continue;
      const auto low = FockElement::monomial(ctx, idx);
      const auto high = FockElement::monomial(ctx, idx.raised(j));
      const auto lhs = inner_alg(create(j, low), high);
      const auto rhs = inner_alg(low, annihilate(j, high));
      const double scale = monomial_norm_alg(*ctx, idx) * monomial_norm_alg(*ctx, idx.raised(j));
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    rows.push_back(
        upper_bound_row(bracket("ladder.adjoint_basis", std::to_string(j)), 0.0, worst, 1e-12));

    const auto f = random_element(ctx, ctx->cap() - 1, 0, cfg.base_seed, 900 + j);
    const auto g = random_element(ctx, ctx->cap(), 0, cfg.base_seed, 950 + j);
    const auto lhs = inner_alg(create(j, f), g);
    const auto rhs = inner_alg(f, annihilate(j, g));
    rows.push_back(det_row(bracket("ladder.adjoint_random", std::to_string(j)), lhs, rhs,
                           1e-11 * (1.0 + f.norm_alg() * g.norm_alg())));
  }
  return rows;
}

std::vector<CheckRow> gl_rows() {
  const auto ctx =
      SpaceContext::make(Spectrum({0.7}), ConeSeries::geometric(1.0, 8), 1, 8);
  const auto f = random_element(ctx, 6, 0, 7, 0);

  std::vector<double> inv_fact(9);
  for (std::uint32_t m = 0; m <= 8; ++m) inv_fact[m] = 1.0 / factorial_d(m);
  const auto phi_exp = ConeSeries::custom(inv_fact);
  FockElement d_manual(ctx);
  for (const auto& [idx, a] : f.terms()) {
    const auto m = idx.degree();
    if (m == 0) continue;
    d_manual.set(*idx.lowered(0), a * static_cast<double>(m));
  }
  const double exp_defect = (gl_derivative(phi_exp, f) - d_manual).norm_alg();

  const auto phi_geo = ConeSeries::geometric(0.5, 8);
  FockElement shift_manual(ctx);
  for (const auto& [idx, a] : f.terms()) {
    const auto m = idx.degree();
    if (m == 0) continue;
    shift_manual.set(*idx.lowered(0), a * 2.0);
  }
  const double geo_defect = (gl_derivative(phi_geo, f) - shift_manual).norm_alg();

  std::vector<CheckRow> rows;
  rows.push_back(upper_bound_row("gl.exponential_matches_derivative", 0.0, exp_defect,
                                 1e-12 * (1.0 + f.norm_alg())));
  rows.push_back(upper_bound_row("gl.geometric_scaled_shift", 0.0, geo_defect,
                                 1e-14 * (1.0 + f.norm_alg())));
  return rows;
}

std::vector<CheckRow> coherent_rows(const RunConfig& cfg) {
  std::vector<std::uint32_t> caps = {8, 12, 16, 20};
  if (cfg.cone.family() == SeriesFamily::custom) {
    std::erase_if(caps, [&](std::uint32_t n) { return n > cfg.cone.cap(); });
  }
  // Pinned direction in Cameron-Martin coordinates: 0.2 on the tracked
  // variable, the rest of the mass spread evenly (cm_norm 0.6 for dims >= 2).
  std::vector<double> c(cfg.dims, 0.0);
  c[0] = 0.2;
  if (cfg.dims > 1) {
    const double rest = std::sqrt(0.32 / static_cast<double>(cfg.dims - 1));
    for (std::size_t j = 1; j < cfg.dims; ++j) c[j] = rest;
  }
  HVector eta = HVector::zero(cfg.dims);
  for (std::size_t j = 0; j < cfg.dims; ++j) eta.alpha[j] = c[j] * cfg.spectrum.k(j);
  double q = 0.0;
  for (const auto v : c) q += v * v;

  std::vector<CheckRow> rows;
  std::vector<double> residuals;
  for (const auto cap : caps) {
    const auto ctx = make_context(cfg, cap);
    const auto check = coherent_eigencheck(0, eta, ctx);
    KahanSum mass;
    double qn = 1.0;
    for (std::uint32_t n = 0; n <= cap; ++n) {
      mass.add(ctx->lambda(n) * qn);
      if (n < cap) qn *= q;
    }
    const double top_fraction = ctx->lambda(cap) * qn / mass.value();
    const double pred_eig = c[0] * (1.0 - top_fraction);
    const double pred_res = c[0] * std::sqrt(top_fraction * (1.0 - top_fraction));
    rows.push_back(det_row(bracket("coherent.eigenvalue", std::to_string(cap)), pred_eig,
                           check.eigenvalue, 1e-9 * (1.0 + std::abs(pred_eig))));
    rows.push_back(det_row(bracket("coherent.residual", std::to_string(cap)), pred_res,
                           check.residual, 1e-6 * pred_res + 1e-15));
    residuals.push_back(check.residual);
  }
  double worst_step = 0.0;
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    worst_step = std::max(worst_step, residuals[i] / residuals[i - 1]);
  }
  if (residuals.size() >= 2) {
    rows.push_back(upper_bound_row("coherent.residual_monotone", 1.0, worst_step, 0.0));
  }
  if (!caps.empty() && caps.back() == 20) {
    rows.push_back(upper_bound_row("coherent.final_residual", 1e-6, residuals.back(), 0.0));
  }
  return rows;
}

std::vector<CheckRow> isometry_rows(const RunConfig& cfg, std::size_t count) {
  const auto ctx = make_context(cfg);
  std::vector<CheckRow> rows;
  for (std::size_t c = 0; c < count; ++c) {
    const auto f = pool_element(ctx, cfg, ctx->cap(), 400 + c);
    const double lhs = apply_t_half(f).norm_alg();
    const double rhs = f.norm_l2();
    rows.push_back(det_row(bracket("t.isometry", std::to_string(c)), rhs, lhs,
                           1e-12 * (1.0 + rhs)));
  }
  return rows;
}

std::vector<CheckRow> chain_rows(const RunConfig& cfg, std::size_t count) {
  const auto ctx = make_context(cfg);
  const double w = ctx->weight_max();
  std::vector<CheckRow> rows;
  for (std::size_t c = 0; c < count; ++c) {
    const auto f = pool_element(ctx, cfg, ctx->cap(), 700 + c);
    const double na = f.norm_alg();
    const double nl = f.norm_l2();
    const double nt = f.norm_test();
    rows.push_back(upper_bound_row(bracket("chain.alg_le_l2", std::to_string(c)), 0.0,
                                   std::max(0.0, na - w * nl), 1e-12 * (1.0 + w * nl)));
    rows.push_back(upper_bound_row(bracket("chain.l2_le_test", std::to_string(c)), 0.0,
                                   std::max(0.0, nl - w * nt), 1e-12 * (1.0 + w * nt)));
  }
  return rows;
}

std::vector<CheckRow> mc_l2_rows(const RunConfig& cfg, std::size_t count) {
  const auto ctx = make_context(cfg);
  const SampleBatch batch(cfg.spectrum, cfg.mc_samples, cfg.base_seed);
  std::vector<CheckRow> rows;
  for (std::size_t c = 0; c < count; ++c) {
    const auto f = random_element(ctx, ctx->cap(), 6, cfg.base_seed, 1200 + c);
    const double analytic = f.norm_l2() * f.norm_l2();
    rows.push_back(mc_row(bracket("l2.mc", std::to_string(c)), analytic,
                          mc_l2_norm_sq(f, batch), cfg.sigma_band, batch));
  }
  return rows;
}

std::vector<CheckRow> t_apply_rows(const RunConfig& cfg) {
  const auto ctx = make_context(cfg);
  const auto kernel_cone = truncated_cone(*ctx);
  const SampleBatch batch(cfg.spectrum, cfg.mc_samples, cfg.base_seed);
  const auto indices = enumerate_indices(cfg.dims, std::min<std::uint32_t>(3, ctx->cap()));
  const double radii[3] = {0.3, 0.5, 0.8};
  const CounterRng rng(cfg.base_seed, kRadiusStream + 9);
  std::vector<CheckRow> rows;
  for (std::size_t e = 0; e < 3; ++e) {
    const auto eta = random_in_ball(cfg.spectrum, radii[e], rng.bits(e));
    for (const auto& idx : indices) {
      const auto analytic = monomial_at_point(idx, eta) / ctx->weight_sq(idx.degree());
      rows.push_back(mc_row(bracket("t.mc", index_label(idx) + "|" + std::to_string(e)),
                            analytic, mc_t_apply(kernel_cone, idx, eta, batch), cfg.sigma_band,
                            batch));
    }
  }
  return rows;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"moments", "kernel", "algebra", "ccr", "triple"};
  return names;
}

SuiteReport run_suite(const std::string& name, const RunConfig& cfg) {
  SuiteReport report;
  report.suite = name;
  auto append = [&report](std::vector<CheckRow> rows) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  };
  if (name == "moments") {
    append(moments_rows(cfg));
  } else if (name == "kernel") {
    append(kernel_identity_rows(cfg, 100, 0.7));
    append(reproducing_rows(cfg, 100));
    append(psd_rows(cfg, 32));
    append(unitary_invariance_rows(cfg, 20));
    append(hermitian_rows(cfg, 20));
    append(pinned_point_rows(cfg));
    append(coherent_rows(cfg));
  } else if (name == "algebra") {
    append(algebra_bound_rows(cfg, 100));
    append(algebra_growth_rows(cfg));
  } else if (name == "ccr") {
    append(ccr_defect_rows(cfg, 100));
    append(adjointness_rows(cfg));
    append(gl_rows());
  } else if (name == "triple") {
    append(isometry_rows(cfg, 100));
    append(chain_rows(cfg, 100));
    append(mc_l2_rows(cfg, 20));
    append(t_apply_rows(cfg));
  } else {
    throw std::invalid_argument("verify: unknown suite \"" + name + "\"");
  }
  return report;
}

void write_csv(const SuiteReport& report, std::ostream& out) {
  out << "quantity,analytic,estimate,std_error,M,seed,pass\n";
  for (const auto& row : report.rows) {
    out << row.quantity << ',' << fmt17(row.analytic) << ',' << fmt17(row.estimate) << ','
        << fmt17(row.std_error) << ',' << row.m_samples << ',' << row.seed << ','
        << (row.pass ? 1 : 0) << '\n';
  }
}

nlohmann::json summary_json(const std::vector<SuiteReport>& reports) {
  nlohmann::json suites = nlohmann::json::array();
  bool all = true;
  for (const auto& report : reports) {
    std::size_t failures = 0;
    for (const auto& row : report.rows) {
      if (!row.pass) ++failures;
    }
    all = all && report.all_pass();
    suites.push_back(nlohmann::json{{"suite", report.suite},
                                    {"rows", report.rows.size()},
                                    {"failures", failures},
                                    {"pass", failures == 0}});
  }
  return nlohmann::json{{"suites", suites}, {"all_pass", all}};
}

}  // namespace fockalg
