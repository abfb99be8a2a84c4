#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace fockalg {

/// Exponent vector of a monomial z^I = z_1^{i_1} ... z_d^{i_d}.
///
/// Canonical form trims trailing zeros, so (1,0) and (1) denote the same
/// index and equality does not depend on the ambient dimension the index
/// was built in. All entries are nonnegative.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint32_t> entries);

  /// e_j: the index with a single 1 at (zero-based) position j.
  static MultiIndex unit(std::size_t j);

  /// Number of stored entries; position of the last nonzero exponent.
  std::size_t width() const { return entries_.size(); }

  /// Exponent at position j; zero beyond the stored width.
  std::uint32_t entry(std::size_t j) const;

  /// Total degree |I| = sum of exponents.
  std::uint32_t degree() const;

  /// I! = prod_j i_j! as an exact integer.
  /// Throws std::range_error when the product overflows 64 bits.
  std::uint64_t factorial() const;

  MultiIndex plus(const MultiIndex& other) const;
  MultiIndex raised(std::size_t j) const;  // I + e_j
  /// I - e_j, or nullopt when i_j = 0.
  std::optional<MultiIndex> lowered(std::size_t j) const;

  const std::vector<std::uint32_t>& entries() const { return entries_; }

  bool operator==(const MultiIndex&) const = default;

private:
  void trim();
  std::vector<std::uint32_t> entries_;
};

/// Strict weak order: ascending total degree, ties broken so that within a
/// degree the index with the larger exponent at the first differing
/// position comes first (the usual graded lexicographic listing,
/// e.g. z1^2, z1 z2, z2^2).
bool grlex_less(const MultiIndex& a, const MultiIndex& b);

struct GrlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return grlex_less(a, b);
  }
};

/// Every index with at most d variables and total degree <= cap, in the
/// grlex order above. Size is C(cap + d, d).
std::vector<MultiIndex> enumerate_indices(std::size_t d, std::uint32_t cap);

/// C(cap + d, d) as an exact integer; throws std::range_error on overflow.
std::uint64_t index_count(std::size_t d, std::uint32_t cap);

/// n! exactly; throws std::range_error when it would overflow (n > 20).
std::uint64_t exact_factorial(std::uint32_t n);

}  // namespace fockalg
