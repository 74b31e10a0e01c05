#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "addsum/additive_function.hpp"
#include "addsum/bigint.hpp"
#include "addsum/errors.hpp"

namespace addsum {

enum class Route { Oracle, FastGcd, FastLcm, GenericMoebius };

const char* route_name(Route r);

// Result of a gcd/lcm tuple sum.  Integer-domain values are exact (int128
// accumulation with overflow detection, escalating to BigInt); real-domain
// values use compensated summation.
struct ExactSum {
  std::string function;
  unsigned k = 1;
  uint64_t x = 1;
  Route route = Route::Oracle;
  ValueDomain domain = ValueDomain::Integer;
  BigInt ivalue;
  double rvalue = 0.0;

  double as_double() const;
  bool operator==(const ExactSum&) const = default;
};

// The oracle routes enumerate all x^k tuples and refuse beyond this many.
inline constexpr uint64_t kOracleTupleGuard = 100'000'000;

// sum over (n_1..n_k) in [1,x]^k of f(gcd), by direct enumeration with an
// incremental gcd.  Verification oracle; see the guard above.
ExactSum oracle_gcd_sum(const AdditiveFunction& f, unsigned k, uint64_t x);

// Same sum through the prime-power identity
//   sum_{p^nu <= x} (f(p^nu) - f(p^{nu-1})) * floor(x/p^nu)^k,
// one pass over the prime-power table.
ExactSum fast_gcd_sum(const AdditiveFunction& f, unsigned k, uint64_t x);

// sum of f(lcm) over all tuples, enumerated with factored lcms (never
// overflows, any tuple magnitude).
ExactSum oracle_lcm_sum(const AdditiveFunction& f, unsigned k, uint64_t x);

// Exact inclusion-exclusion reduction
//   L_{f,k}(x) = sum_{j=1}^{k} (-1)^{j-1} C(k,j) floor(x)^{k-j} G_{f,j}(x),
// each G_{f,j} via fast_gcd_sum.
ExactSum fast_lcm_sum(const AdditiveFunction& f, unsigned k, uint64_t x);

// Generic summator sum_{d<=x} g(d) * floor(x/d)^k for arbitrary f, where the
// caller supplies g = (mu * f) on 1..x (g[d] at index d; g[0] ignored,
// g.size() must be >= x+1).  Works for non-additive f such as 1/n or tau.
ExactSum generic_moebius_sum(const std::string& fname,
                             std::span<const int64_t> g, unsigned k, uint64_t x);
ExactSum generic_moebius_sum(const std::string& fname,
                             std::span<const double> g, unsigned k, uint64_t x);

// Dirichlet convolution (mu * f)(d) for d = 1..x (index d), from arbitrary
// point values of f.  O(x log x).
std::vector<int64_t> moebius_convolution_int(const std::function<int64_t(uint64_t)>& f,
                                             uint64_t x);
std::vector<double> moebius_convolution_real(const std::function<double(uint64_t)>& f,
                                             uint64_t x);

// f([n_1..n_k]) == sum over nonempty index subsets S of (-1)^{|S|-1} f(gcd S),
// exact (Integer domain) or 1e-9 relative (Real).  1 <= k <= 8.
bool check_inclusion_exclusion(const AdditiveFunction& f,
                               std::span<const uint64_t> tuple);

// g([n_1..n_k]) == prod over subsets of g(gcd S)^{(-1)^{|S|-1}} for a
// nonvanishing multiplicative g; exact via cross-multiplied BigInt products.
bool check_multiplicative_corollary(const std::function<BigInt(uint64_t)>& g,
                                    std::span<const uint64_t> tuple);
bool check_multiplicative_corollary(const std::function<double(uint64_t)>& g,
                                    std::span<const uint64_t> tuple,
                                    double rel_tol = 1e-9);

}  // namespace addsum
