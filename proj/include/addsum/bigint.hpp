#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace addsum {

// Exact integer escalation type: summators accumulate in checked __int128 and
// rerun with BigInt if that overflows, so integer results are never rounded.
using BigInt = boost::multiprecision::cpp_int;
using int128 = __int128;

inline bool checked_add(int128 a, int128 b, int128& out) {
  return !__builtin_add_overflow(a, b, &out);
}

inline bool checked_mul(int128 a, int128 b, int128& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

// base^k in int128, nullopt on overflow.
inline std::optional<int128> checked_pow(int128 base, unsigned k) {
  int128 r = 1;
  for (unsigned i = 0; i < k; ++i)
    if (!checked_mul(r, base, r)) return std::nullopt;
  return r;
}

inline BigInt bigint_pow(BigInt base, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r *= base;
  return r;
}

inline BigInt to_bigint(int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
  BigInt r = static_cast<uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<uint64_t>(u);
  return neg ? BigInt(-r) : r;
}

// Neumaier-compensated accumulator for real-valued sums.  Summation order is
// fixed by the caller, so results do not depend on thread count.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace addsum
