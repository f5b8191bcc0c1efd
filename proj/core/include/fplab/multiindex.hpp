#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fplab {

/// Exponent vector of a partial derivative / monomial in d variables.
struct MultiIndex {
  std::vector<int> e;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exps) : e(std::move(exps)) {}
  static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(d, 0)); }

  int dim() const { return static_cast<int>(e.size()); }
  int order() const;         // |alpha| = sum of entries
  double factorial() const;  // alpha! = product of entry factorials

  bool operator==(const MultiIndex& o) const { return e == o.e; }
  bool operator!=(const MultiIndex& o) const { return e != o.e; }
  /// Graded lexicographic order: lower total degree first; within a degree,
  /// higher leading exponents first, so (1,0) precedes (0,1).
  bool operator<(const MultiIndex& o) const;

  std::string to_string() const;  // e.g. "(2,0,1)"
};

/// Number of multi-indices with |alpha| <= m in d variables: binomial(d+m, d).
std::size_t multiindex_count(int d, int m);

/// All alpha with |alpha| <= m, in graded lexicographic order.
std::vector<MultiIndex> enumerate_multiindices(int d, int m);

/// Position of alpha inside enumerate_multiindices(alpha.dim(), m); -1 if |alpha| > m.
long multiindex_position(const MultiIndex& alpha, int m);

double binomial(int n, int k);

}  // namespace fplab
