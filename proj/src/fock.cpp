#include "fockalg/fock.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "fockalg/kahan.hpp"

namespace fockalg {

namespace {

constexpr double kPsdTol = 1e-10;

void require_context(const ContextPtr& ctx) {
  if (!ctx) throw std::invalid_argument("fock: element needs a context");
}

void require_compatible(const FockElement& f, const FockElement& g) {
  if (f.context().get() == g.context().get()) return;
  if (!f.context()->compatible(*g.context())) {
    throw std::invalid_argument("fock: elements live in different contexts");
  }
}

// alpha_j^p for p <= cap, row j.
std::vector<std::complex<double>> power_table(const SpaceContext& ctx, const HVector& xi) {
  const std::size_t d = ctx.dims();
  const std::uint32_t cap = ctx.cap();
  std::vector<std::complex<double>> pw(d * (cap + 1));
  for (std::size_t j = 0; j < d; ++j) {
    std::complex<double> v = 1.0;
    for (std::uint32_t p = 0; p <= cap; ++p) {
      pw[j * (cap + 1) + p] = v;
      v *= xi.alpha[j];
    }
  }
  return pw;
}

std::complex<double> monomial_value(const std::vector<std::complex<double>>& pw,
                                    std::uint32_t cap, const MultiIndex& i) {
  std::complex<double> v = 1.0;
  const auto& e = i.entries();
  for (std::size_t j = 0; j < e.size(); ++j) v *= pw[j * (cap + 1) + e[j]];
  return v;
}

void require_point(const SpaceContext& ctx, const HVector& xi, const char* what) {
  if (xi.dims() != ctx.dims()) {
    throw std::invalid_argument(std::string("fock: point dimension mismatch in ") + what);
  }
  if (locate_in_ball(xi, ctx.spectrum()).region == BallRegion::outside) {
    throw std::domain_error(std::string("fock: point outside the closed unit ball in ") + what);
  }
}

// Truncation of the cone series at the context cap (the context may carry a
// longer series).
std::complex<double> horner_cap(const SpaceContext& ctx, std::complex<double> t) {
  std::complex<double> acc = 0.0;
  for (std::uint32_t n = ctx.cap() + 1; n-- > 0;) acc = acc * t + ctx.lambda(n);
  return acc;
}

}  // namespace

FockElement::FockElement(ContextPtr ctx) : ctx_(std::move(ctx)) { require_context(ctx_); }

FockElement FockElement::monomial(ContextPtr ctx, const MultiIndex& i,
                                  std::complex<double> coeff) {
  FockElement f(std::move(ctx));
  f.set(i, coeff);
  return f;
}

FockElement FockElement::from_terms(
    ContextPtr ctx, const std::vector<std::pair<MultiIndex, std::complex<double>>>& terms) {
  FockElement f(std::move(ctx));
  for (const auto& [idx, a] : terms) f.set(idx, f.coeff(idx) + a);
  return f;
}

std::uint32_t FockElement::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

std::complex<double> FockElement::coeff(const MultiIndex& i) const {
  const auto it = terms_.find(i);
  return it == terms_.end() ? std::complex<double>(0.0) : it->second;
}

void FockElement::set(const MultiIndex& i, std::complex<double> a) {
  if (i.width() > ctx_->dims()) {
    throw std::invalid_argument("fock: index uses more variables than the space");
  }
  if (i.degree() > ctx_->cap()) {
    throw std::invalid_argument("fock: index degree beyond the cap");
  }
  if (a == std::complex<double>(0.0)) {
    terms_.erase(i);
  } else {
    terms_[i] = a;
  }
}

FockElement FockElement::operator+(const FockElement& other) const {
  require_compatible(*this, other);
  FockElement out(ctx_);
  out.terms_ = terms_;
  for (const auto& [idx, a] : other.terms_) {
    const auto v = out.coeff(idx) + a;
    if (v == std::complex<double>(0.0)) {
      out.terms_.erase(idx);
    } else {
      out.terms_[idx] = v;
    }
  }
  out.truncated_ = truncated_ || other.truncated_;
  return out;
}

FockElement FockElement::operator-(const FockElement& other) const {
  return *this + other.scaled(-1.0);
}

FockElement FockElement::scaled(std::complex<double> s) const {
  FockElement out(ctx_);
  if (s != std::complex<double>(0.0)) {
    out.terms_ = terms_;
    for (auto& [idx, a] : out.terms_) a *= s;
  }
  out.truncated_ = truncated_;
  return out;
}

double FockElement::norm_alg() const {
  KahanSum acc;
  for (const auto& [idx, a] : terms_) acc.add(std::norm(a) * ctx_->monomial_weight_sq(idx));
  return std::sqrt(acc.value());
}

double FockElement::norm_l2() const {
  KahanSum acc;
  for (const auto& [idx, a] : terms_) acc.add(std::norm(a) * ctx_->monomial_l2_sq(idx));
  return std::sqrt(acc.value());
}

double FockElement::norm_test() const {
  KahanSum acc;
  for (const auto& [idx, a] : terms_) {
    acc.add(std::norm(a) * ctx_->monomial_l2_sq(idx) / ctx_->weight_sq(idx.degree()));
  }
  return std::sqrt(acc.value());
}

double monomial_norm_alg(const SpaceContext& ctx, const MultiIndex& i) {
  return std::sqrt(ctx.monomial_weight_sq(i));
}

std::complex<double> inner_alg(const FockElement& f, const FockElement& g) {
  require_compatible(f, g);
  const auto& ctx = *f.context();
  KahanComplexSum acc;
  auto it = f.terms().begin();
  auto jt = g.terms().begin();
  while (it != f.terms().end() && jt != g.terms().end()) {
    if (grlex_less(it->first, jt->first)) {
      ++it;
    } else if (grlex_less(jt->first, it->first)) {
      ++jt;
    } else {
      acc.add(std::conj(it->second) * jt->second * ctx.monomial_weight_sq(it->first));
      ++it;
      ++jt;
    }
  }
  return acc.value();
}

std::complex<double> evaluate_entire(const FockElement& f, const HVector& xi) {
  const auto& ctx = *f.context();
  if (xi.dims() != ctx.dims()) {
    throw std::invalid_argument("fock: point dimension mismatch in evaluate");
  }
  const auto pw = power_table(ctx, xi);
  KahanComplexSum acc;
  for (const auto& [idx, a] : f.terms()) acc.add(a * monomial_value(pw, ctx.cap(), idx));
  return acc.value();
}

std::complex<double> evaluate(const FockElement& f, const HVector& xi) {
  require_point(*f.context(), xi, "evaluate");
  return evaluate_entire(f, xi);
}

FockElement multiply(const FockElement& f, const FockElement& g) {
  require_compatible(f, g);
  const auto cap = f.context()->cap();
  FockElement::TermMap acc;
  bool dropped = false;
  for (const auto& [fi, fa] : f.terms()) {
    const auto fd = fi.degree();
    for (const auto& [gi, ga] : g.terms()) {
      if (fd + gi.degree() > cap) {
        dropped = true;
        continue;
      }
      const auto key = fi.plus(gi);
      acc[key] += fa * ga;
    }
  }
  FockElement out(f.context());
  for (const auto& [idx, a] : acc) {
    if (a != std::complex<double>(0.0)) out.set(idx, a);
  }
  if (dropped || f.truncated() || g.truncated()) out.mark_truncated();
  return out;
}

FockElement kernel_section(const ContextPtr& ctx, const HVector& xi) {
  require_context(ctx);
  require_point(*ctx, xi, "kernel_section");
  const auto pw = power_table(*ctx, xi);
  FockElement out(ctx);
  for (const auto& idx : ctx->basis()) {
    const auto b = std::conj(monomial_value(pw, ctx->cap(), idx)) / ctx->monomial_weight_sq(idx);
    if (b != std::complex<double>(0.0)) out.set(idx, b);
  }
  return out;
}

std::complex<double> kernel_eval_closed(const SpaceContext& ctx, const HVector& xi,
                                        const HVector& eta) {
  require_point(ctx, xi, "kernel_eval_closed");
  require_point(ctx, eta, "kernel_eval_closed");
  const auto t = pairing(xi, eta, ctx.spectrum());
  if (std::abs(t) > 1.0 + 1e-12) {
    throw std::domain_error("fock: pairing left the closed unit disk");
  }
  return horner_cap(ctx, t);
}

std::vector<std::complex<double>> kernel_series_shells(const SpaceContext& ctx,
                                                       const HVector& xi, const HVector& eta) {
  require_point(ctx, xi, "kernel_eval_series");
  require_point(ctx, eta, "kernel_eval_series");
  const auto pw_xi = power_table(ctx, xi);
  const auto pw_eta = power_table(ctx, eta);
  std::vector<std::complex<double>> shells(ctx.cap() + 1);
  for (std::uint32_t n = 0; n <= ctx.cap(); ++n) {
    KahanComplexSum shell;
    for (const auto& idx : ctx.basis_by_degree()[n]) {
      const auto zx = monomial_value(pw_xi, ctx.cap(), idx);
      const auto ze = monomial_value(pw_eta, ctx.cap(), idx);
      shell.add(std::conj(zx) * ze / ctx.monomial_weight_sq(idx));
    }
    shells[n] = shell.value();
  }
  return shells;
}

std::complex<double> kernel_eval_series(const SpaceContext& ctx, const HVector& xi,
                                        const HVector& eta) {
  KahanComplexSum acc;
  for (const auto& shell : kernel_series_shells(ctx, xi, eta)) acc.add(shell);
  return acc.value();
}

GramReport gram_psd_check(const SpaceContext& ctx, const std::vector<HVector>& points) {
  if (points.empty() || points.size() > 64) {
    throw std::invalid_argument("fock: gram check takes between 1 and 64 points");
  }
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      gram(a, b) = kernel_eval_closed(ctx, points[static_cast<std::size_t>(a)],
                                      points[static_cast<std::size_t>(b)]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  GramReport report;
  report.min_eigenvalue = ev.minCoeff();
  report.spectral_norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  report.psd = report.min_eigenvalue >= -kPsdTol * report.spectral_norm;
  return report;
}

}  // namespace fockalg
