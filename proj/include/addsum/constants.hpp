#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "addsum/additive_function.hpp"
#include "addsum/errors.hpp"

namespace addsum {

enum class Method { DirectPrimeSum, PrimeZetaSeries, Quadrature, Combination };

const char* method_name(Method m);

// A real constant plus an explicit truncation-error bound: the absolute error
// of `value` against the exact constant is at most `tail_bound` (series or
// quadrature truncation plus the bounded evaluation error of the prime-zeta
// backend; floating rounding is managed, not certified).
struct ConstantValue {
  std::string name;
  double value = 0.0;
  double tail_bound = 0.0;
  uint64_t prime_limit = 0;  // P for direct prime sums, 0 otherwise
  Method method = Method::PrimeZetaSeries;
};

class ConstantsEngine {
public:
  static constexpr double kDefaultEps = 1e-8;
  static constexpr double kMinEps = 1e-10;
  // Euler's constant, stored literal (30 digits).
  static constexpr double kGamma = 0.577215664901532860606512090082;
  static constexpr uint64_t kMaxDirectPrimeLimit = 200'000'000;

  // zeta(s) - 1 for integer s >= 2, Euler-Maclaurin with explicit remainder.
  double zeta_minus_one(unsigned s) const;
  ConstantValue zeta_value(unsigned s) const;

  // Prime zeta P(s) = sum_p p^{-s} = sum_j mu(j)/j log zeta(s j).
  ConstantValue prime_zeta(unsigned s) const;

  // M = gamma + sum_p (log(1-1/p) + 1/p): accelerated series gamma - sum_{m>=2} P(m)/m.
  ConstantValue mertens_M(double eps = kDefaultEps) const;
  // Direct route for cross-checks; tail bound 1/(2P).
  ConstantValue mertens_M_direct(uint64_t prime_limit) const;

  // F = gamma + sum_p (log(1-1/p) + 1/(p-1)) = gamma + sum_{m>=2} (1-1/m) P(m).
  ConstantValue F_const(double eps = kDefaultEps) const;

  // C_f = gamma + sum_p (log(1-1/p) + (1-1/p) sum_nu f(p^nu)/p^nu), class F0.
  ConstantValue C_f(const AdditiveFunction& f, double eps = kDefaultEps) const;
  // Direct per-prime route (any F0 spec, including custom tables).
  ConstantValue C_f_direct(const AdditiveFunction& f, double eps) const;

  // D_{f,k} = sum_p (1 - p^{-k}) sum_nu f(p^nu)/p^{nu k}.  Valid for
  // (F0, k >= 2), (F1, k >= 3), (BType, k >= 2); (F1, k = 2) must go through
  // D_bar_f2, which has a different formula.
  ConstantValue D_fk(const AdditiveFunction& f, unsigned k, double eps = kDefaultEps) const;

  // Dbar_{f,2} = gamma + sum_p (log(1-1/p) + (1-p^{-2}) sum_nu f(p^nu)/p^{2 nu}),
  // class F1 only.
  ConstantValue D_bar_f2(const AdditiveFunction& f, double eps = kDefaultEps) const;

  // E_{f,k} = k C_f - sum_{j=2}^k (-1)^j C(k,j) D_{f,j} (k = 1 gives C_f);
  // error bound propagates k eps_C + sum C(k,j) eps_D.
  ConstantValue E_fk(const AdditiveFunction& f, unsigned k, double eps = kDefaultEps) const;
  // Closed forms for omega / Omega used as independent cross-checks.
  ConstantValue E_omega_closed(unsigned k, double eps = kDefaultEps) const;
  ConstantValue E_Omega_closed(unsigned k, double eps = kDefaultEps) const;

  // Constants of the log tau corollary (natural-log scale):
  //   A_k = k C - sum_{j=2}^k (-1)^j C(k,j) D_j, A_1 = C,
  //   C   = (log 2) gamma + sum_p ((log 2) log(1-1/p) + (1-1/p) sum log(nu+1)/p^nu),
  //   D_j = sum_p (1-p^{-j}) sum_nu log(nu+1)/p^{nu j}.
  ConstantValue A_k_logtau(unsigned k, double eps = kDefaultEps) const;
  ConstantValue logtau_C(double eps = kDefaultEps) const;
  ConstantValue logtau_D(unsigned j, double eps = kDefaultEps) const;
  // nu-truncated direct route (refinement-stability checks).
  double logtau_D_direct(unsigned j, unsigned nu_max, uint64_t prime_limit) const;

  // a_j = -int_1^inf (t - floor t)/t^2 (log t)^{j-1} dt, 1 <= j <= 10.
  // Quadrature on integer-aligned panels plus an Euler-Maclaurin-corrected
  // tail with an explicit remainder bound.
  ConstantValue saffari_a(unsigned j, double tolerance = kDefaultEps) const;

  // H_k = k F + sum_{j=2}^k (-1)^{j-1} C(k,j) beta_j, beta_j = sum_p
  // 1/(p^{j-1}(p^j - 1)); 2 <= k <= 16.  The two routes differ in where
  // beta_j comes from (dedicated series vs the generic D engine on B).
  ConstantValue H_k(unsigned k, double eps = kDefaultEps) const;
  ConstantValue H_k_combination(unsigned k, double eps = kDefaultEps) const;
  ConstantValue beta_j(unsigned j) const;

  // Registry addressing: "M", "F", "H:4", "a:1", "zeta:3", "P:2",
  // "C:Omega_ell:2", "D:omega:3", "D:Omega_ell:2:3", "Dbar:A:2", "E:Omega:3",
  // "Ak:4".  Unknown keys raise DomainError.
  ConstantValue lookup(const std::string& key, double eps = kDefaultEps) const;

  // ---- bundled reference digits -------------------------------------------
  // Printed reference values shipped with the suite, for comparison output.
  // Returns the printed string, e.g. "0.2614" for "M".
  static std::optional<std::string> reference_digits(const std::string& key);
  // Acceptance range [v - u/2, v + u/2] where u is one unit in the last
  // printed digit.
  static std::optional<std::pair<double, double>> reference_range(const std::string& key);
  // Diagnostic: evaluate a reference constant with every prime sum truncated
  // at primes <= prime_limit (the reference H row and Dbar:A:2 digits are
  // reproduced exactly by prime_limit = 7; see selftest output).
  double truncated_reference_eval(const std::string& key, uint64_t prime_limit) const;

private:
  mutable std::mutex cache_mutex_;
  mutable std::map<unsigned, std::pair<double, double>> pzeta_cache_;  // value, bound

  std::pair<double, double> pzeta(unsigned s) const;  // cached value + error bound
};

}  // namespace addsum
