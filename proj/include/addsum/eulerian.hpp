#pragma once

#include <cstdint>
#include <vector>

#include "addsum/errors.hpp"

namespace addsum {

// Triangle of Eulerian numbers <n k> (permutations of n elements with exactly
// k descents), exact integers.  Row sums are n!, so uint64 holds every entry
// up to n = 20.
class EulerianTable {
public:
  static constexpr unsigned kMaxN = 20;

  explicit EulerianTable(unsigned max_n);

  unsigned max_n() const { return static_cast<unsigned>(rows_.size()) - 1; }

  // <0 0> = 1; zero for k < 0 or k >= n when n >= 1.
  uint64_t at(unsigned n, long long k) const;

  const std::vector<uint64_t>& row(unsigned n) const { return rows_.at(n); }

private:
  std::vector<std::vector<uint64_t>> rows_;
};

// Shared table lookup, n <= EulerianTable::kMaxN.
uint64_t eulerian(unsigned n, long long k);

// sum_{j>=0} j^ell x^j evaluated in closed form as
// x/(1-x)^{ell+1} * sum_{nu=0}^{ell-1} <ell nu> x^nu  (inner sum = 1 for
// ell = 0).  Convention for the j = 0 term: it vanishes for ell >= 1 and
// contributes 1 for ell = 0 (0^0 = 1), making ell = 0 the plain geometric
// series 1/(1-x).  Requires |x| < 1.
double power_series_closed_form(unsigned ell, double x);

// sum_{j>=0} C(ell+j-1, j) x^j = (1-x)^{-ell}; the ell = 0 sum is the single
// j = 0 term, 1.  Requires |x| < 1.
double repeated_combination_series(unsigned ell, double x);

// Upper bound for the tail sum_{n>z} n^ell / p^{nk}:
//
//   z^ell / (p^{kz} (k log p - ell/z)),
//
// valid for z >= 1 with z > ell/(k log p) (otherwise DomainError: the
// integrand comparison needs t^ell p^{-tk} decreasing past z).  The bound is
// rigorous for integer z; for fractional z the first lattice point can sit
// arbitrarily close past z and the comparison with the integral from z can
// under-count it, so callers with fractional z should pass floor(z).
double tail_bound(unsigned ell, unsigned k, uint64_t p, double z);

}  // namespace addsum
