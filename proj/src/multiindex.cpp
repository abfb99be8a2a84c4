#include "fockalg/multiindex.hpp"

#include <limits>
#include <stdexcept>

namespace fockalg {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::range_error("multiindex: exact factorial overflows 64 bits");
  }
  return r;
}

}  // namespace

std::uint64_t exact_factorial(std::uint32_t n) {
  std::uint64_t r = 1;
  for (std::uint32_t m = 2; m <= n; ++m) r = checked_mul(r, m);
  return r;
}

MultiIndex::MultiIndex(std::vector<std::uint32_t> entries) : entries_(std::move(entries)) {
  trim();
}

void MultiIndex::trim() {
  while (!entries_.empty() && entries_.back() == 0) entries_.pop_back();
}

MultiIndex MultiIndex::unit(std::size_t j) {
  std::vector<std::uint32_t> e(j + 1, 0);
  e[j] = 1;
  return MultiIndex(std::move(e));
}

std::uint32_t MultiIndex::entry(std::size_t j) const {
  return j < entries_.size() ? entries_[j] : 0;
}

std::uint32_t MultiIndex::degree() const {
  std::uint64_t s = 0;
  for (auto e : entries_) s += e;
  if (s > std::numeric_limits<std::uint32_t>::max()) {
    throw std::range_error("multiindex: degree overflows 32 bits");
  }
  return static_cast<std::uint32_t>(s);
}

std::uint64_t MultiIndex::factorial() const {
  std::uint64_t r = 1;
  for (auto e : entries_) r = checked_mul(r, exact_factorial(e));
  return r;
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
  std::vector<std::uint32_t> e(std::max(entries_.size(), other.entries_.size()), 0);
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = entry(j) + other.entry(j);
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::raised(std::size_t j) const {
  std::vector<std::uint32_t> e(entries_);
  if (j >= e.size()) e.resize(j + 1, 0);
  ++e[j];
  return MultiIndex(std::move(e));
}

std::optional<MultiIndex> MultiIndex::lowered(std::size_t j) const {
  if (entry(j) == 0) return std::nullopt;
  std::vector<std::uint32_t> e(entries_);
  --e[j];
  return MultiIndex(std::move(e));
}

bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da < db;
  const std::size_t w = std::max(a.width(), b.width());
  for (std::size_t j = 0; j < w; ++j) {
    if (a.entry(j) != b.entry(j)) return a.entry(j) > b.entry(j);
  }
  return false;
}

namespace {

// Compositions of n into d parts, leading part descending; appended in the
// order that keeps the overall listing grlex-sorted.
void compositions(std::uint32_t n, std::size_t d, std::vector<std::uint32_t>& prefix,
                  std::vector<MultiIndex>& out) {
  if (d == 1) {
    prefix.push_back(n);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::uint32_t lead = n; lead != static_cast<std::uint32_t>(-1); --lead) {
    prefix.push_back(lead);
    compositions(n - lead, d - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_indices(std::size_t d, std::uint32_t cap) {
  if (d == 0) throw std::invalid_argument("multiindex: dimension must be positive");
  std::vector<MultiIndex> out;
  out.reserve(index_count(d, cap));
  std::vector<std::uint32_t> prefix;
  for (std::uint32_t n = 0; n <= cap; ++n) compositions(n, d, prefix, out);
  return out;
}

std::uint64_t index_count(std::size_t d, std::uint32_t cap) {
  // C(cap + d, d) multiplicatively, dividing early to stay exact.
  std::uint64_t r = 1;
  for (std::uint64_t m = 1; m <= d; ++m) {
    r = checked_mul(r, cap + m);
    r /= m;
  }
  return r;
}

}  // namespace fockalg
