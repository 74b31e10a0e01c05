#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "addsum/multisummers.hpp"
#include "addsum/prime_engine.hpp"

using namespace addsum;

namespace {

const std::vector<std::string>& route_builtins() {
  static const std::vector<std::string> names = {
      "omega", "Omega", "Omega_ell:2", "T_ell:2", "A", "A_star", "A_tilde_ell:1", "B"};
  return names;
}

int64_t tau_of(uint64_t n) {
  int64_t t = 1;
  for (const auto& pf : default_factorizer().factorize(n).factors) t *= pf.nu + 1;
  return t;
}

}  // namespace

TEST_SUITE("multisummers") {

TEST_CASE("oracle gcd examples") {
  const AdditiveFunction om = AdditiveFunction::builtin("omega");
  CHECK(oracle_gcd_sum(om, 2, 4).ivalue == 5);
  CHECK(oracle_gcd_sum(om, 2, 3).ivalue == 2);
  // k = 1 degenerates to a plain sum of f
  int64_t direct = 0;
  for (uint64_t n = 1; n <= 30; ++n) direct += om.eval_i(n);
  CHECK(oracle_gcd_sum(om, 1, 30).ivalue == direct);
}

TEST_CASE("fast gcd examples") {
  const AdditiveFunction om = AdditiveFunction::builtin("omega");
  CHECK(fast_gcd_sum(om, 2, 4).ivalue == 5);
  CHECK(fast_gcd_sum(om, 1, 1).ivalue == 0);
  // B: only nu >= 2 prime powers contribute p * floor(x/p^nu)^k
  const AdditiveFunction B = AdditiveFunction::builtin("B");
  for (uint64_t x : {10ull, 50ull, 200ull}) {
    BigInt expect = 0;
    for (const auto& e : prime_powers_up_to(x).entries)
      if (e.nu >= 2) expect += BigInt(e.p) * bigint_pow(BigInt(x / e.value), 2);
    CHECK(fast_gcd_sum(B, 2, x).ivalue == expect);
  }
}

TEST_CASE("oracle lcm examples") {
  const AdditiveFunction om = AdditiveFunction::builtin("omega");
  CHECK(oracle_lcm_sum(om, 2, 3).ivalue == 10);
  CHECK(oracle_lcm_sum(om, 2, 2).ivalue == 3);
  int64_t direct = 0;
  for (uint64_t n = 1; n <= 25; ++n) direct += om.eval_i(n);
  CHECK(oracle_lcm_sum(om, 1, 25).ivalue == direct);
}

TEST_CASE("fast lcm inclusion-exclusion reduction") {
  const AdditiveFunction om = AdditiveFunction::builtin("omega");
  // k=2: L = 2 floor(x) G_1 - G_2 at x=3: 2*3*2 - 2 = 10
  CHECK(fast_lcm_sum(om, 2, 3).ivalue == 10);
  CHECK(fast_lcm_sum(om, 1, 17).ivalue == fast_gcd_sum(om, 1, 17).ivalue);
  CHECK(fast_lcm_sum(om, 3, 10).ivalue == oracle_lcm_sum(om, 3, 10).ivalue);
}

TEST_CASE("route equivalence for every builtin, k in {1,2,3}, x <= 30") {
  for (const auto& name : route_builtins()) {
    const AdditiveFunction f = AdditiveFunction::builtin(name);
    for (unsigned k = 1; k <= 3; ++k) {
      for (uint64_t x : {1ull, 2ull, 7ull, 16ull, 30ull}) {
        CHECK(oracle_gcd_sum(f, k, x).ivalue == fast_gcd_sum(f, k, x).ivalue);
        CHECK(oracle_lcm_sum(f, k, x).ivalue == fast_lcm_sum(f, k, x).ivalue);
      }
    }
  }
  // real-valued route equivalence at 1e-9 relative
  const AdditiveFunction lt = AdditiveFunction::builtin("log_tau");
  for (unsigned k = 1; k <= 3; ++k)
    for (uint64_t x : {2ull, 9ull, 21ull}) {
      const double og = oracle_gcd_sum(lt, k, x).rvalue;
      const double fg = fast_gcd_sum(lt, k, x).rvalue;
      CHECK(std::abs(og - fg) <= 1e-9 * std::max(1.0, std::abs(og)));
      const double ol = oracle_lcm_sum(lt, k, x).rvalue;
      const double fl = fast_lcm_sum(lt, k, x).rvalue;
      CHECK(std::abs(ol - fl) <= 1e-9 * std::max(1.0, std::abs(ol)));
    }
}

TEST_CASE("oracle guard refusal") {
  const AdditiveFunction om = AdditiveFunction::builtin("omega");
  CHECK_THROWS_AS(oracle_gcd_sum(om, 3, 10000), GuardRefusal);
  CHECK_THROWS_AS(oracle_lcm_sum(om, 8, 100), GuardRefusal);
  CHECK_THROWS_AS(fast_gcd_sum(om, 0, 10), DomainError);
  CHECK_THROWS_AS(fast_gcd_sum(om, 2, 0), DomainError);
}

TEST_CASE("generic moebius summator") {
  // f = tau: (mu * tau)(d) = 1, so the sum is sum floor(x/d)^k
  const auto g_tau = moebius_convolution_int(
      [](uint64_t n) { return tau_of(n); }, 400);
  for (uint64_t d = 1; d <= 400; ++d) CHECK(g_tau[d] == 1);
  const ExactSum tau_sum = generic_moebius_sum("tau", std::span<const int64_t>(g_tau), 1, 4);
  CHECK(tau_sum.ivalue == 8);  // 4 + 2 + 1 + 1 = sum_{n<=4} tau(n)

  // f = 1 constant: (mu * 1)(d) = [d = 1], sum = floor(x)^k
  const auto g_one = moebius_convolution_int([](uint64_t) { return int64_t{1}; }, 100);
  CHECK(g_one[1] == 1);
  for (uint64_t d = 2; d <= 100; ++d) CHECK(g_one[d] == 0);
  CHECK(generic_moebius_sum("one", std::span<const int64_t>(g_one), 3, 100).ivalue ==
        BigInt(1000000));

  // additive f: generic route agrees with the prime-power route
  for (const char* name : {"omega", "Omega"}) {
    const AdditiveFunction f = AdditiveFunction::builtin(name);
    const auto g = moebius_convolution_int(
        [&](uint64_t n) { return f.eval_i(n); }, 1000);
    for (unsigned k = 1; k <= 3; ++k)
      CHECK(generic_moebius_sum(name, std::span<const int64_t>(g), k, 1000).ivalue ==
            fast_gcd_sum(f, k, 1000).ivalue);
  }

  // (mu*f) values must cover 1..x
  std::vector<int64_t> short_g(5, 1);
  CHECK_THROWS_AS(generic_moebius_sum("f", std::span<const int64_t>(short_g), 1, 10),
                  DomainError);
}

TEST_CASE("generic moebius sum matches a brute non-additive oracle (f = 1/n)") {
  const uint64_t x = 40;
  const auto g = moebius_convolution_real([](uint64_t n) { return 1.0 / n; }, x);
  const double fast = generic_moebius_sum("recip", std::span<const double>(g), 2, x).rvalue;
  double brute = 0;
  for (uint64_t a = 1; a <= x; ++a)
    for (uint64_t b = 1; b <= x; ++b) brute += 1.0 / std::gcd(a, b);
  CHECK(std::abs(fast - brute) <= 1e-9 * brute);
}

TEST_CASE("inclusion-exclusion identity") {
  const AdditiveFunction om = AdditiveFunction::builtin("omega");
  CHECK(check_inclusion_exclusion(om, std::vector<uint64_t>{6, 10, 15}));
  CHECK(check_inclusion_exclusion(om, std::vector<uint64_t>{7}));
  CHECK(check_inclusion_exclusion(AdditiveFunction::builtin("A"),
                                  std::vector<uint64_t>{4, 6, 9}));
  std::vector<uint64_t> too_long(9, 1);
  CHECK_THROWS_AS(check_inclusion_exclusion(om, too_long), DomainError);

  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<uint64_t> dist(1, 10000);
  for (const char* name : {"Omega_ell:2", "A_tilde_ell:1", "B", "log_tau"}) {
    const AdditiveFunction f = AdditiveFunction::builtin(name);
    for (unsigned k = 1; k <= 6; ++k) {
      for (int rep = 0; rep < 50; ++rep) {
        std::vector<uint64_t> tuple(k);
        for (auto& t : tuple) t = dist(rng);
        CHECK(check_inclusion_exclusion(f, tuple));
      }
    }
  }
}

TEST_CASE("multiplicative corollary") {
  const auto g_id = [](uint64_t n) { return BigInt(n); };
  CHECK(check_multiplicative_corollary(g_id, std::vector<uint64_t>{12, 18}));
  CHECK(check_multiplicative_corollary(g_id, std::vector<uint64_t>{4, 6, 10}));
  const auto g_tau = [](uint64_t n) { return BigInt(tau_of(n)); };
  CHECK(check_multiplicative_corollary(g_tau, std::vector<uint64_t>{6, 10}));
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<uint64_t> dist(1, 500);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<uint64_t> tuple(2 + rep % 3);
    for (auto& t : tuple) t = dist(rng);
    CHECK(check_multiplicative_corollary(g_id, tuple));
    CHECK(check_multiplicative_corollary(g_tau, tuple));
  }
  // real-valued variant
  CHECK(check_multiplicative_corollary(
      [](uint64_t n) { return static_cast<double>(n * n); },
      std::vector<uint64_t>{4, 6, 10}));
  // vanishing g is a domain error
  CHECK_THROWS_AS(check_multiplicative_corollary(
                      [](uint64_t n) { return BigInt(n - 6); },
                      std::vector<uint64_t>{6, 10}),
                  DomainError);
}

TEST_CASE("monotonicity in x for nonnegative f") {
  const AdditiveFunction om = AdditiveFunction::builtin("omega");
  BigInt prev_g = 0, prev_l = 0;
  for (uint64_t x = 1; x <= 40; ++x) {
    const BigInt g = fast_gcd_sum(om, 2, x).ivalue;
    const BigInt l = fast_lcm_sum(om, 2, x).ivalue;
    CHECK(g >= prev_g);
    CHECK(l >= prev_l);
    prev_g = g;
    prev_l = l;
  }
}

TEST_CASE("int128 overflow escalates to exact big integers") {
  // floor(x/p^nu)^k at k = 12 overflows int128 quickly; the result must match
  // an independently accumulated BigInt sum.
  const AdditiveFunction Om = AdditiveFunction::builtin("Omega");
  const unsigned k = 16;
  const uint64_t x = 2000;
  const ExactSum fast = fast_gcd_sum(Om, k, x);
  BigInt expect = 0;
  for (const auto& e : prime_powers_up_to(x).entries)
    expect += bigint_pow(BigInt(x / e.value), k);  // delta = 1 for Omega
  CHECK(fast.ivalue == expect);
  CHECK(fast.ivalue > BigInt("170141183460469231731687303715884105727"));  // > int128 max
}

TEST_CASE("fast lcm equals oracle on a 1000-tuple enumeration") {
  const AdditiveFunction om = AdditiveFunction::builtin("omega");
  CHECK(fast_lcm_sum(om, 3, 10).ivalue == oracle_lcm_sum(om, 3, 10).ivalue);
}

}  // TEST_SUITE
