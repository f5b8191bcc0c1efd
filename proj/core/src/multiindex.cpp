#include "fplab/multiindex.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fplab {

int MultiIndex::order() const { return std::accumulate(e.begin(), e.end(), 0); }

double MultiIndex::factorial() const {
  double out = 1.0;
  for (int n : e) {
    for (int j = 2; j <= n; ++j) out *= j;
  }
  return out;
}

bool MultiIndex::operator<(const MultiIndex& o) const {
  const int oa = order();
  const int ob = o.order();
  if (oa != ob) return oa < ob;
  // Within a degree: higher leading exponent first.
  return e > o.e;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) os << ',';
    os << e[i];
  }
  os << ')';
  return os.str();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

std::size_t multiindex_count(int d, int m) {
  if (d < 1) throw std::invalid_argument("multiindex_count: d must be positive");
  if (m < 0) return 0;
  return static_cast<std::size_t>(binomial(d + m, d) + 0.5);
}

namespace {

void compositions_of(int n, int d, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  if (d == 1) {
    prefix.push_back(n);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = n; first >= 0; --first) {
    prefix.push_back(first);
    compositions_of(n - first, d - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int d, int m) {
  if (d < 1) throw std::invalid_argument("enumerate_multiindices: d must be positive");
  std::vector<MultiIndex> out;
  if (m < 0) return out;
  out.reserve(multiindex_count(d, m));
  std::vector<int> prefix;
  for (int n = 0; n <= m; ++n) compositions_of(n, d, prefix, out);
  return out;
}

long multiindex_position(const MultiIndex& alpha, int m) {
  if (alpha.order() > m) return -1;
  const auto all = enumerate_multiindices(alpha.dim(), m);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] == alpha) return static_cast<long>(i);
  }
  return -1;
}

}  // namespace fplab
