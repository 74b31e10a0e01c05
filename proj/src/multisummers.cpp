#include "addsum/multisummers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "addsum/prime_engine.hpp"

namespace addsum {

namespace {

uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) { const uint64_t t = a % b; a = b; b = t; }
  return a;
}

// x^k with the oracle guard; throws GuardRefusal past kOracleTupleGuard.
void check_oracle_guard(unsigned k, uint64_t x) {
  unsigned __int128 t = 1;
  for (unsigned i = 0; i < k; ++i) {
    t *= x;
    if (t > kOracleTupleGuard)
      throw GuardRefusal("oracle refuses " + std::to_string(x) + "^" +
                         std::to_string(k) + " tuples (guard: 1e8)");
  }
}

void check_args(unsigned k, uint64_t x) {
  if (k < 1) throw DomainError("tuple arity k must be >= 1");
  if (x < 1) throw DomainError("bound x must be >= 1");
}

BigInt binomial(unsigned n, unsigned j) {
  BigInt r = 1;
  for (unsigned i = 1; i <= j; ++i) {
    r *= n - j + i;
    r /= i;
  }
  return r;
}

// Merge-max of factorizations: the factored lcm.
void merge_lcm(std::vector<PrimeFactor>& acc, const std::vector<PrimeFactor>& f) {
  std::vector<PrimeFactor> out;
  out.reserve(acc.size() + f.size());
  size_t i = 0, j = 0;
  while (i < acc.size() || j < f.size()) {
    if (j == f.size() || (i < acc.size() && acc[i].p < f[j].p))
      out.push_back(acc[i++]);
    else if (i == acc.size() || f[j].p < acc[i].p)
      out.push_back(f[j++]);
    else {
      out.push_back({acc[i].p, std::max(acc[i].nu, f[j].nu)});
      ++i, ++j;
    }
  }
  acc = std::move(out);
}

}  // namespace

const char* route_name(Route r) {
  switch (r) {
    case Route::Oracle: return "oracle";
    case Route::FastGcd: return "fast_gcd";
    case Route::FastLcm: return "fast_lcm";
    case Route::GenericMoebius: return "generic_moebius";
  }
  return "?";
}

double ExactSum::as_double() const {
  return domain == ValueDomain::Integer ? static_cast<double>(ivalue) : rvalue;
}

ExactSum oracle_gcd_sum(const AdditiveFunction& f, unsigned k, uint64_t x) {
  check_args(k, x);
  check_oracle_guard(k, x);
  ExactSum out{f.name(), k, x, Route::Oracle, f.domain(), 0, 0.0};

  const Factorizer& fz = default_factorizer();
  if (f.domain() == ValueDomain::Integer) {
    std::vector<int64_t> fv(x + 1, 0);
    for (uint64_t n = 2; n <= x; ++n) fv[n] = f.eval_i(fz.factorize(n));
    int128 acc = 0;
    bool overflow = false;
    // depth-first over tuples, carrying the prefix gcd
    auto rec = [&](auto&& self, unsigned depth, uint64_t g) -> void {
      if (depth == k) {
        if (!checked_add(acc, fv[g], acc)) overflow = true;
        return;
      }
      for (uint64_t n = 1; n <= x && !overflow; ++n)
        self(self, depth + 1, depth == 0 ? n : gcd_u64(g, n));
    };
    rec(rec, 0, 0);
    if (overflow) throw InvariantFailure("oracle_gcd_sum: int128 overflow");
    out.ivalue = to_bigint(acc);
    out.rvalue = static_cast<double>(out.ivalue);
    return out;
  }

  std::vector<double> fv(x + 1, 0.0);
  for (uint64_t n = 2; n <= x; ++n) fv[n] = f.eval_r(fz.factorize(n));
  Kahan acc;
  auto rec = [&](auto&& self, unsigned depth, uint64_t g) -> void {
    if (depth == k) { acc.add(fv[g]); return; }
    for (uint64_t n = 1; n <= x; ++n)
      self(self, depth + 1, depth == 0 ? n : gcd_u64(g, n));
  };
  rec(rec, 0, 0);
  out.rvalue = acc.value();
  return out;
}

ExactSum fast_gcd_sum(const AdditiveFunction& f, unsigned k, uint64_t x) {
  check_args(k, x);
  ExactSum out{f.name(), k, x, Route::FastGcd, f.domain(), 0, 0.0};
  const PrimePowerTable table = prime_powers_up_to(x);

  if (f.domain() == ValueDomain::Integer) {
    int128 acc = 0;
    bool overflow = false;
    for (const auto& e : table.entries) {
      const int64_t delta = f.moebius_delta_i(e.p, e.nu);
      if (delta == 0) continue;
      const auto pw = checked_pow(static_cast<int128>(x / e.value), k);
      int128 term;
      if (!pw || !checked_mul(*pw, delta, term) || !checked_add(acc, term, acc)) {
        overflow = true;
        break;
      }
    }
    if (!overflow) {
      out.ivalue = to_bigint(acc);
    } else {
      // Rerun exactly in arbitrary precision.
      BigInt big = 0;
      for (const auto& e : table.entries) {
        const BigInt delta = f.bvalue(e.p, e.nu) - f.bvalue(e.p, e.nu - 1);
        if (delta == 0) continue;
        big += delta * bigint_pow(BigInt(x / e.value), k);
      }
      out.ivalue = big;
    }
    out.rvalue = static_cast<double>(out.ivalue);
    return out;
  }

  Kahan acc;
  for (const auto& e : table.entries) {
    const double delta = f.moebius_delta_r(e.p, e.nu);
    if (delta == 0.0) continue;
    acc.add(delta * std::pow(static_cast<double>(x / e.value), static_cast<double>(k)));
  }
  out.rvalue = acc.value();
  return out;
}

ExactSum oracle_lcm_sum(const AdditiveFunction& f, unsigned k, uint64_t x) {
  check_args(k, x);
  check_oracle_guard(k, x);
  ExactSum out{f.name(), k, x, Route::Oracle, f.domain(), 0, 0.0};

  const Factorizer& fz = default_factorizer();
  std::vector<Factorization> facts(x + 1);
  for (uint64_t n = 1; n <= x; ++n) facts[n] = fz.factorize(n);

  const bool integer = f.domain() == ValueDomain::Integer;
  int128 iacc = 0;
  bool overflow = false;
  Kahan racc;

  // Factored incremental lcm: exponent merge instead of multiplication, so no
  // overflow for any tuple; f(lcm) is read off the merged factorization.
  auto rec = [&](auto&& self, unsigned depth, const std::vector<PrimeFactor>& l) -> void {
    if (depth == k) {
      if (integer) {
        int64_t v = 0;
        for (const auto& pf : l)
          if (__builtin_add_overflow(v, f.ivalue(pf.p, pf.nu), &v)) { overflow = true; return; }
        if (!checked_add(iacc, v, iacc)) overflow = true;
      } else {
        double v = 0;
        for (const auto& pf : l) v += f.rvalue(pf.p, pf.nu);
        racc.add(v);
      }
      return;
    }
    for (uint64_t n = 1; n <= x && !overflow; ++n) {
      std::vector<PrimeFactor> merged = l;
      merge_lcm(merged, facts[n].factors);
      self(self, depth + 1, merged);
    }
  };
  rec(rec, 0, {});

  if (integer) {
    if (overflow) {
      // Arbitrary-precision rerun (never silently wrong).
      BigInt big = 0;
      auto rec2 = [&](auto&& self, unsigned depth, const std::vector<PrimeFactor>& l) -> void {
        if (depth == k) {
          for (const auto& pf : l) big += f.bvalue(pf.p, pf.nu);
          return;
        }
        for (uint64_t n = 1; n <= x; ++n) {
          std::vector<PrimeFactor> merged = l;
          merge_lcm(merged, facts[n].factors);
          self(self, depth + 1, merged);
        }
      };
      rec2(rec2, 0, {});
      out.ivalue = big;
    } else {
      out.ivalue = to_bigint(iacc);
    }
    out.rvalue = static_cast<double>(out.ivalue);
  } else {
    out.rvalue = racc.value();
  }
  return out;
}

ExactSum fast_lcm_sum(const AdditiveFunction& f, unsigned k, uint64_t x) {
  check_args(k, x);
  ExactSum out{f.name(), k, x, Route::FastLcm, f.domain(), 0, 0.0};

  if (f.domain() == ValueDomain::Integer) {
    BigInt acc = 0;
    for (unsigned j = 1; j <= k; ++j) {
      const BigInt gj = fast_gcd_sum(f, j, x).ivalue;
      const BigInt term = binomial(k, j) * bigint_pow(BigInt(x), k - j) * gj;
      acc += (j % 2 == 1) ? term : -term;
    }
    out.ivalue = acc;
    out.rvalue = static_cast<double>(acc);
    return out;
  }

  Kahan acc;
  for (unsigned j = 1; j <= k; ++j) {
    const double gj = fast_gcd_sum(f, j, x).rvalue;
    const double term = static_cast<double>(binomial(k, j)) *
                        std::pow(static_cast<double>(x), static_cast<double>(k - j)) * gj;
    acc.add(j % 2 == 1 ? term : -term);
  }
  out.rvalue = acc.value();
  return out;
}

namespace {

template <typename V>
ExactSum generic_impl(const std::string& fname, std::span<const V> g, unsigned k,
                      uint64_t x) {
  check_args(k, x);
  if (g.size() < x + 1)
    throw DomainError("generic_moebius_sum: need (mu*f)(d) for every d <= x");
  ExactSum out{fname, k, x, Route::GenericMoebius,
               std::is_integral_v<V> ? ValueDomain::Integer : ValueDomain::Real, 0, 0.0};
  if constexpr (std::is_integral_v<V>) {
    int128 acc = 0;
    bool overflow = false;
    for (uint64_t d = 1; d <= x && !overflow; ++d) {
      if (g[d] == 0) continue;
      const auto pw = checked_pow(static_cast<int128>(x / d), k);
      int128 term;
      if (!pw || !checked_mul(*pw, static_cast<int128>(g[d]), term) ||
          !checked_add(acc, term, acc))
        overflow = true;
    }
    if (overflow) {
      BigInt big = 0;
      for (uint64_t d = 1; d <= x; ++d)
        if (g[d] != 0) big += BigInt(g[d]) * bigint_pow(BigInt(x / d), k);
      out.ivalue = big;
    } else {
      out.ivalue = to_bigint(acc);
    }
    out.rvalue = static_cast<double>(out.ivalue);
  } else {
    Kahan acc;
    for (uint64_t d = 1; d <= x; ++d)
      if (g[d] != 0.0)
        acc.add(g[d] * std::pow(static_cast<double>(x / d), static_cast<double>(k)));
    out.rvalue = acc.value();
  }
  return out;
}

}  // namespace

ExactSum generic_moebius_sum(const std::string& fname, std::span<const int64_t> g,
                             unsigned k, uint64_t x) {
  return generic_impl(fname, g, k, x);
}

ExactSum generic_moebius_sum(const std::string& fname, std::span<const double> g,
                             unsigned k, uint64_t x) {
  return generic_impl(fname, g, k, x);
}

namespace {

template <typename V>
std::vector<V> convolve_impl(const std::function<V(uint64_t)>& f, uint64_t x) {
  if (x < 1) throw DomainError("moebius_convolution: x >= 1");
  std::vector<V> fv(x + 1);
  for (uint64_t n = 1; n <= x; ++n) fv[n] = f(n);
  std::vector<V> out(x + 1, V{});
  const Factorizer& fz = default_factorizer();
  for (uint64_t a = 1; a <= x; ++a) {
    const int mu = fz.moebius(a);
    if (mu == 0) continue;
    for (uint64_t b = 1; b <= x / a; ++b) out[a * b] += static_cast<V>(mu) * fv[b];
  }
  return out;
}

}  // namespace

std::vector<int64_t> moebius_convolution_int(const std::function<int64_t(uint64_t)>& f,
                                             uint64_t x) {
  return convolve_impl<int64_t>(f, x);
}

std::vector<double> moebius_convolution_real(const std::function<double(uint64_t)>& f,
                                             uint64_t x) {
  return convolve_impl<double>(f, x);
}

bool check_inclusion_exclusion(const AdditiveFunction& f,
                               std::span<const uint64_t> tuple) {
  const unsigned k = static_cast<unsigned>(tuple.size());
  if (k < 1 || k > 8) throw DomainError("check_inclusion_exclusion: 1 <= k <= 8");
  for (uint64_t n : tuple)
    if (n == 0) throw DomainError("check_inclusion_exclusion: entries >= 1");

  const Factorizer& fz = default_factorizer();
  std::vector<PrimeFactor> l;
  for (uint64_t n : tuple) merge_lcm(l, fz.factorize(n).factors);

  if (f.domain() == ValueDomain::Integer) {
    int64_t lhs = 0;
    for (const auto& pf : l) lhs += f.ivalue(pf.p, pf.nu);
    int64_t rhs = 0;
    for (uint32_t mask = 1; mask < (1u << k); ++mask) {
      uint64_t g = 0;
      for (unsigned i = 0; i < k; ++i)
        if (mask & (1u << i)) g = g == 0 ? tuple[i] : gcd_u64(g, tuple[i]);
      const int sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
      rhs += sign * f.eval_i(fz.factorize(g));
    }
    return lhs == rhs;
  }

  double lhs = 0;
  for (const auto& pf : l) lhs += f.rvalue(pf.p, pf.nu);
  Kahan rhs;
  for (uint32_t mask = 1; mask < (1u << k); ++mask) {
    uint64_t g = 0;
    for (unsigned i = 0; i < k; ++i)
      if (mask & (1u << i)) g = g == 0 ? tuple[i] : gcd_u64(g, tuple[i]);
    const int sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
    rhs.add(sign * f.eval_r(fz.factorize(g)));
  }
  return std::abs(lhs - rhs.value()) <= 1e-9 * std::max(1.0, std::abs(lhs));
}

bool check_multiplicative_corollary(const std::function<BigInt(uint64_t)>& g,
                                    std::span<const uint64_t> tuple) {
  const unsigned k = static_cast<unsigned>(tuple.size());
  if (k < 1 || k > 8) throw DomainError("check_multiplicative_corollary: 1 <= k <= 8");

  const Factorizer& fz = default_factorizer();
  std::vector<PrimeFactor> lf;
  for (uint64_t n : tuple) merge_lcm(lf, fz.factorize(n).factors);
  BigInt lcm = 1;
  for (const auto& pf : lf) lcm *= bigint_pow(BigInt(pf.p), pf.nu);
  if (lcm > BigInt(std::numeric_limits<uint64_t>::max()))
    throw DomainError("check_multiplicative_corollary: lcm exceeds uint64");

  // lhs * prod(even-subset gcd values) == prod(odd-subset gcd values)
  BigInt num = 1, den = 1;
  for (uint32_t mask = 1; mask < (1u << k); ++mask) {
    uint64_t gc = 0;
    for (unsigned i = 0; i < k; ++i)
      if (mask & (1u << i)) gc = gc == 0 ? tuple[i] : gcd_u64(gc, tuple[i]);
    const BigInt v = g(gc);
    if (v == 0) throw DomainError("check_multiplicative_corollary: g vanishes");
    if (std::popcount(mask) % 2 == 1) num *= v; else den *= v;
  }
  return g(static_cast<uint64_t>(lcm)) * den == num;
}

bool check_multiplicative_corollary(const std::function<double(uint64_t)>& g,
                                    std::span<const uint64_t> tuple, double rel_tol) {
  const unsigned k = static_cast<unsigned>(tuple.size());
  if (k < 1 || k > 8) throw DomainError("check_multiplicative_corollary: 1 <= k <= 8");

  const Factorizer& fz = default_factorizer();
  std::vector<PrimeFactor> lf;
  for (uint64_t n : tuple) merge_lcm(lf, fz.factorize(n).factors);
  uint64_t lcm = 1;
  for (const auto& pf : lf)
    for (uint32_t i = 0; i < pf.nu; ++i) lcm *= pf.p;

  double log_rhs = 0;
  for (uint32_t mask = 1; mask < (1u << k); ++mask) {
    uint64_t gc = 0;
    for (unsigned i = 0; i < k; ++i)
      if (mask & (1u << i)) gc = gc == 0 ? tuple[i] : gcd_u64(gc, tuple[i]);
    const double v = g(gc);
    if (v == 0.0) throw DomainError("check_multiplicative_corollary: g vanishes");
    log_rhs += (std::popcount(mask) % 2 == 1 ? 1.0 : -1.0) * std::log(std::abs(v));
  }
  const double log_lhs = std::log(std::abs(g(lcm)));
  return std::abs(log_lhs - log_rhs) <= rel_tol * std::max(1.0, std::abs(log_lhs));
}

}  // namespace addsum
