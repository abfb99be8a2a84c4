#include "fockalg/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace fockalg {

namespace {

void require_var(const FockElement& f, std::size_t j, const char* what) {
  if (j >= f.context()->dims()) {
    throw std::invalid_argument(std::string("operators: variable out of range in ") + what);
  }
}

// Rescale every coefficient by a function of its total degree.
template <typename Fn>
FockElement degree_rescale(const FockElement& f, Fn&& factor) {
  FockElement out(f.context());
  for (const auto& [idx, a] : f.terms()) out.set(idx, a * factor(idx.degree()));
  if (f.truncated()) out.mark_truncated();
  return out;
}

}  // namespace

FockElement create(std::size_t j, const FockElement& f) {
  require_var(f, j, "create");
  const auto& ctx = *f.context();
  const double inv_k = 1.0 / ctx.spectrum().k(j);
  FockElement out(f.context());
  bool dropped = false;
  for (const auto& [idx, a] : f.terms()) {
    if (idx.degree() + 1 > ctx.cap()) {
      dropped = true;
      continue;
    }
    out.set(idx.raised(j), a * inv_k);
  }
  if (dropped || f.truncated()) out.mark_truncated();
  return out;
}

FockElement annihilate(std::size_t j, const FockElement& f) {
  require_var(f, j, "annihilate");
  const auto& ctx = *f.context();
  const double k = ctx.spectrum().k(j);
  FockElement out(f.context());
  for (const auto& [idx, a] : f.terms()) {
    const auto lowered = idx.lowered(j);
    if (!lowered) continue;  // i_j = 0: the term is killed
    const auto n = idx.degree();
    const double scale = static_cast<double>(idx.entry(j)) * k * ctx.weight_sq(n) /
                         ctx.weight_sq(n - 1);
    out.set(*lowered, a * scale);
  }
  if (f.truncated()) out.mark_truncated();
  return out;
}

FockElement apply_d(const FockElement& f) {
  return degree_rescale(f, [&ctx = *f.context()](std::uint32_t n) { return ctx.weight_sq(n); });
}

FockElement apply_d_inv(const FockElement& f) {
  return degree_rescale(f,
                        [&ctx = *f.context()](std::uint32_t n) { return 1.0 / ctx.weight_sq(n); });
}

double ccr_defect(std::size_t j, const FockElement& f) {
  require_var(f, j, "ccr_defect");
  const auto& ctx = *f.context();
  if (!f.terms().empty() && f.degree() + 2 > ctx.cap()) {
    throw std::invalid_argument("operators: ccr_defect needs two degrees of headroom");
  }
  const auto first = apply_d(annihilate(j, apply_d_inv(create(j, f))));
  const auto second = create(j, apply_d(annihilate(j, apply_d_inv(f))));
  return ((first - second) - f).norm_alg();
}

FockElement gl_derivative(const ConeSeries& phi, const FockElement& f) {
  if (f.context()->dims() != 1) {
    throw std::invalid_argument("operators: gl_derivative is defined for one variable");
  }
  if (!f.terms().empty() && f.degree() > phi.cap()) {
    throw std::invalid_argument("operators: cone series too short for gl_derivative");
  }
  FockElement out(f.context());
  for (const auto& [idx, a] : f.terms()) {
    const auto m = idx.degree();
    if (m == 0) continue;
    if (phi.coeff(m) <= 0.0) {
      throw std::domain_error("operators: gl_derivative needs positive coefficients");
    }
    out.set(*idx.lowered(0), a * (phi.coeff(m - 1) / phi.coeff(m)));
  }
  if (f.truncated()) out.mark_truncated();
  return out;
}

FockElement apply_t(const FockElement& f) {
  return degree_rescale(f,
                        [&ctx = *f.context()](std::uint32_t n) { return 1.0 / ctx.weight_sq(n); });
}

FockElement apply_t_half(const FockElement& f) {
  return degree_rescale(
      f, [&ctx = *f.context()](std::uint32_t n) { return 1.0 / ctx.weight(n); });
}

CoherentCheck coherent_eigencheck(std::size_t j, const HVector& eta, const ContextPtr& ctx) {
  if (!ctx) throw std::invalid_argument("operators: coherent_eigencheck needs a context");
  if (j >= ctx->dims()) {
    throw std::invalid_argument("operators: variable out of range in coherent_eigencheck");
  }
  if (locate_in_ball(eta, ctx->spectrum()).region != BallRegion::inside) {
    throw std::domain_error("operators: coherent_eigencheck needs a strictly interior point");
  }
  const auto section = kernel_section(ctx, eta);
  const auto lowered = annihilate(j, section);
  const auto norm_sq = inner_alg(section, section).real();
  const auto eigenvalue = inner_alg(section, lowered) / norm_sq;
  const auto defect = lowered - section.scaled(eigenvalue);
  CoherentCheck check;
  check.eigenvalue = eigenvalue;
  check.residual = defect.norm_alg() / std::sqrt(norm_sq);
  return check;
}

}  // namespace fockalg
