#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "addsum/errors.hpp"

namespace addsum {

// Bit-indexed primality table on [2, limit] (odd numbers only; 2 is special-
// cased).  Built by a plain sieve for small limits and by a segmented sieve
// above kSegmentedThreshold so the sieving working set stays cache-sized;
// the finished table is identical either way.
class PrimeSieve {
public:
  static constexpr uint64_t kSegmentedThreshold = 10'000'000;
  static constexpr uint64_t kDefaultSegment = 1u << 20;

  explicit PrimeSieve(uint64_t limit) : PrimeSieve(limit, 0) {}
  // segment_size = 0 selects plain/segmented automatically by the threshold.
  PrimeSieve(uint64_t limit, uint64_t segment_size);

  uint64_t limit() const { return limit_; }

  bool is_prime(uint64_t n) const {
    if (n < 2 || n > limit_) return false;
    if (n == 2) return true;
    if ((n & 1) == 0) return false;
    const uint64_t i = (n - 3) / 2;
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  uint64_t count() const;                 // pi(limit)
  std::vector<uint64_t> primes() const;   // materialized ascending list

  template <typename Fn>
  void for_each_prime(Fn&& fn) const {
    for_each_prime_in(2, limit_, fn);
  }

  // Primes p with lo <= p <= hi (clamped to [2, limit]).
  template <typename Fn>
  void for_each_prime_in(uint64_t lo, uint64_t hi, Fn&& fn) const {
    hi = std::min(hi, limit_);
    if (lo <= 2 && hi >= 2) fn(uint64_t{2});
    if (hi < 3) return;
    const uint64_t first = lo <= 3 ? 0 : (lo - 3 + 1) / 2;  // index of first odd >= lo
    const uint64_t last = (hi - 3) / 2;                     // inclusive
    for (uint64_t w = first >> 6; w <= (last >> 6) && w < words_.size(); ++w) {
      uint64_t bits = words_[w];
      if (w == (first >> 6)) bits &= ~uint64_t{0} << (first & 63);
      if (w == (last >> 6) && (last & 63) != 63)
        bits &= (uint64_t{1} << ((last & 63) + 1)) - 1;
      while (bits) {
        const int b = __builtin_ctzll(bits);
        bits &= bits - 1;
        fn(2 * (64 * w + static_cast<uint64_t>(b)) + 3);
      }
    }
  }

private:
  uint64_t limit_;
  std::vector<uint64_t> words_;  // bit i <=> 2i+3 is prime

  void mark_composite(uint64_t n) {
    const uint64_t i = (n - 3) / 2;
    words_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }
};

struct PrimeFactor {
  uint64_t p = 0;
  uint32_t nu = 0;
  bool operator==(const PrimeFactor&) const = default;
};

// Canonical factorization n = prod p^nu, primes strictly increasing.
// n = 1 has an empty factor list.
struct Factorization {
  uint64_t n = 1;
  std::vector<PrimeFactor> factors;
  uint64_t reconstruct() const;
};

// Factorization backend: smallest-prime-factor table for n <= spf_limit
// (O(log n) per query), trial division beyond.
class Factorizer {
public:
  explicit Factorizer(uint32_t spf_limit = 1u << 20);

  Factorization factorize(uint64_t n) const;  // n >= 1; n = 0 is a DomainError
  int moebius(uint64_t n) const;              // in {-1, 0, 1}
  uint32_t spf_limit() const { return static_cast<uint32_t>(spf_.size() - 1); }

private:
  std::vector<uint32_t> spf_;
};

// Shared immutable instance for callers that do not manage their own.
const Factorizer& default_factorizer();

inline int moebius(uint64_t n) { return default_factorizer().moebius(n); }

struct PrimePower {
  uint64_t p = 0;
  uint32_t nu = 0;
  uint64_t value = 0;  // p^nu
};

// All (p, nu, p^nu) with p^nu <= x, nu >= 1, ordered by p then nu.  Exponent
// ranges come from repeated integer multiplication, never floating logs, so
// exact powers never land on the wrong side of the cut.
struct PrimePowerTable {
  uint64_t x = 1;
  std::vector<PrimePower> entries;
};

PrimePowerTable prime_powers_up_to(uint64_t x);

}  // namespace addsum
