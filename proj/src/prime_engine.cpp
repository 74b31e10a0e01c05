#include "addsum/prime_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace addsum {

namespace {

uint64_t isqrt(uint64_t n) {
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

PrimeSieve::PrimeSieve(uint64_t limit, uint64_t segment_size) : limit_(limit) {
  if (limit < 2) throw DomainError("PrimeSieve: limit must be >= 2");
  const uint64_t odd_count = limit_ >= 3 ? (limit_ - 3) / 2 + 1 : 0;
  words_.assign((odd_count + 63) / 64, ~uint64_t{0});
  if (odd_count % 64) words_.back() = (uint64_t{1} << (odd_count % 64)) - 1;
  if (words_.empty()) return;

  const bool segmented =
      segment_size > 0 || limit_ > kSegmentedThreshold;
  const uint64_t seg = segment_size > 0 ? segment_size : kDefaultSegment;

  if (!segmented) {
    for (uint64_t p = 3; p * p <= limit_; p += 2)
      if (is_prime(p))
        for (uint64_t m = p * p; m <= limit_; m += 2 * p) mark_composite(m);
    return;
  }

  // Base primes up to sqrt(limit), then cross off odd multiples segment by
  // segment over [3, limit].
  const uint64_t root = isqrt(limit_);
  std::vector<char> base(root + 1, 1);
  std::vector<uint64_t> base_primes;
  for (uint64_t p = 3; p <= root; p += 2) {
    if (!base[p]) continue;
    base_primes.push_back(p);
    for (uint64_t m = p * p; m <= root; m += 2 * p) base[m] = 0;
  }
  for (uint64_t low = 3; low <= limit_; low += seg) {
    const uint64_t high = std::min(limit_, low + seg - 1);
    for (uint64_t p : base_primes) {
      if (p * p > high) break;
      uint64_t start = std::max(p * p, ((low + p - 1) / p) * p);
      if ((start & 1) == 0) start += p;
      for (uint64_t m = start; m <= high; m += 2 * p) mark_composite(m);
    }
  }
  // The in-range base primes themselves were never marked composite above
  // (crossing off starts at p*p), so the table is already correct for them.
}

uint64_t PrimeSieve::count() const {
  uint64_t c = limit_ >= 2 ? 1 : 0;
  for (uint64_t w : words_) c += static_cast<uint64_t>(std::popcount(w));
  return c;
}

std::vector<uint64_t> PrimeSieve::primes() const {
  std::vector<uint64_t> out;
  out.reserve(count());
  for_each_prime([&](uint64_t p) { out.push_back(p); });
  return out;
}

uint64_t Factorization::reconstruct() const {
  uint64_t r = 1;
  for (const auto& f : factors)
    for (uint32_t i = 0; i < f.nu; ++i) r *= f.p;
  return r;
}

Factorizer::Factorizer(uint32_t spf_limit) {
  if (spf_limit < 2) spf_limit = 2;
  spf_.assign(static_cast<size_t>(spf_limit) + 1, 0);
  for (uint64_t i = 2; i <= spf_limit; ++i) {
    if (spf_[i] != 0) continue;
    for (uint64_t m = i; m <= spf_limit; m += i)
      if (spf_[m] == 0) spf_[m] = static_cast<uint32_t>(i);
  }
}

Factorization Factorizer::factorize(uint64_t n) const {
  if (n == 0) throw DomainError("factorize: n must be >= 1");
  Factorization out;
  out.n = n;
  if (n <= spf_limit()) {
    while (n > 1) {
      const uint64_t p = spf_[n];
      uint32_t nu = 0;
      while (n % p == 0) n /= p, ++nu;
      out.factors.push_back({p, nu});
    }
    return out;
  }
  for (uint64_t d = 2; d * d <= n; d = (d == 2 ? 3 : d + 2)) {
    if (n % d) continue;
    uint32_t nu = 0;
    while (n % d == 0) n /= d, ++nu;
    out.factors.push_back({d, nu});
  }
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

int Factorizer::moebius(uint64_t n) const {
  const Factorization f = factorize(n);
  for (const auto& pf : f.factors)
    if (pf.nu >= 2) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

const Factorizer& default_factorizer() {
  static const Factorizer instance;
  return instance;
}

PrimePowerTable prime_powers_up_to(uint64_t x) {
  if (x == 0) throw DomainError("prime_powers_up_to: x must be >= 1");
  PrimePowerTable table;
  table.x = x;
  if (x < 2) return table;
  const PrimeSieve sieve(x);
  sieve.for_each_prime([&](uint64_t p) {
    uint64_t q = p;
    uint32_t nu = 1;
    while (true) {
      table.entries.push_back({p, nu, q});
      if (q > x / p) break;  // q*p would exceed x
      q *= p;
      ++nu;
    }
  });
  return table;
}

}  // namespace addsum
